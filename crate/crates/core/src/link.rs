//! Area data of a premonotone link and the weight simplex of gluing areas.

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::GroupSignature;
use crate::rational::{canonical, frac, int, Rational, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("need at least two contractible circles, got k = {0}")]
    TooFewDiscs(u32),
    #[error("need at least one boundary component, got p = {0}")]
    NoBoundary(u32),
    #[error("ambient area must be positive, got {0}")]
    NonPositiveArea(String),
    #[error("disc area {lambda} outside {interval}")]
    LambdaOutOfRange { lambda: String, interval: String },
    #[error("extra area {extra} exceeds the monotone range [0, {s_max}]")]
    ExtraAreaOutOfRange { extra: String, s_max: String },
    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("weight entries must be non-negative")]
    NegativeWeight,
    #[error("weights sum to {total}, above the maximum {s_max}")]
    WeightTooLarge { total: String, s_max: String },
}

/// Which interval the disc area must lie in relative to `A/(k+1)` and `A/k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaInterval {
    /// `[A/(k+1), A/k)`: the lower end is the monotone case with zero
    /// gluing room.
    #[default]
    HalfOpen,
    /// `(A/(k+1), A/k)`.
    Open,
}

/// `k` discs of area `lambda` bounded by the contractible circles, `g`
/// non-contractible circles, `p` boundary components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkParams {
    pub k: u32,
    pub g: u32,
    pub p: u32,
    pub lambda: Q,
    pub ambient_area: Q,
}

impl LinkParams {
    /// Validated constructor with unit ambient area.
    pub fn new(k: u32, g: u32, p: u32, lambda: Q) -> Result<Self, LinkError> {
        Self::with_area(k, g, p, lambda, int(1))
    }

    pub fn with_area(k: u32, g: u32, p: u32, lambda: Q, ambient_area: Q) -> Result<Self, LinkError> {
        let params = LinkParams {
            k,
            g,
            p,
            lambda,
            ambient_area,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), LinkError> {
        self.validate_with(LambdaInterval::HalfOpen)
    }

    pub fn validate_with(&self, interval: LambdaInterval) -> Result<(), LinkError> {
        if self.k < 2 {
            return Err(LinkError::TooFewDiscs(self.k));
        }
        if self.p < 1 {
            return Err(LinkError::NoBoundary(self.p));
        }
        if !self.ambient_area.is_positive() {
            return Err(LinkError::NonPositiveArea(canonical(&self.ambient_area)));
        }
        let (lo, hi) = self.lambda_bounds();
        let above_lo = match interval {
            LambdaInterval::HalfOpen => self.lambda >= lo,
            LambdaInterval::Open => self.lambda > lo,
        };
        if !above_lo || self.lambda >= hi {
            let open = if interval == LambdaInterval::Open { "(" } else { "[" };
            return Err(LinkError::LambdaOutOfRange {
                lambda: canonical(&self.lambda),
                interval: format!("{open}{}, {})", canonical(&lo), canonical(&hi)),
            });
        }
        Ok(())
    }

    fn lambda_bounds(&self) -> (Q, Q) {
        let k = int(self.k as i64);
        (
            &self.ambient_area / (&k + int(1)),
            &self.ambient_area / &k,
        )
    }

    pub fn signature(&self) -> GroupSignature {
        GroupSignature::for_link(self.k, self.g, self.p)
            .expect("validated parameters give a valid signature")
    }

    /// `k + g`, the number of strands.
    pub fn strands(&self) -> Q {
        int((self.k + self.g) as i64)
    }

    /// `k + 2g - 1`, at least 1 for valid parameters.
    pub fn euler_term(&self) -> Q {
        int((self.k + 2 * self.g) as i64 - 1)
    }

    /// Largest total gluing area keeping the link monotone: `(k+1)lambda - A`.
    pub fn s_max(&self) -> Q {
        int(self.k as i64 + 1) * &self.lambda - &self.ambient_area
    }

    /// Monotonicity constant after gluing discs of total area `extra`.
    pub fn eta(&self, extra: &Q) -> Result<Q, LinkError> {
        let s_max = self.s_max();
        if extra.is_negative() || *extra > s_max {
            return Err(LinkError::ExtraAreaOutOfRange {
                extra: canonical(extra),
                s_max: canonical(&s_max),
            });
        }
        Ok((s_max - extra) / (int(2) * self.euler_term()))
    }

    /// `eta(s_2) - eta(s_1)` for the totals of the pair.
    pub fn eta_diff(&self, pair: &WeightPair) -> Q {
        (pair.v1.total() - pair.v2.total()) / (int(2) * self.euler_term())
    }

    /// Vertices of the weight simplex: the origin, then `s_max e_j` for each j.
    pub fn weight_vertices(&self) -> Vec<WeightVector> {
        let p = self.p as usize;
        let s_max = self.s_max();
        let mut out = Vec::with_capacity(p + 1);
        out.push(WeightVector(vec![Q::zero(); p]));
        for j in 0..p {
            let mut s = vec![Q::zero(); p];
            s[j] = s_max.clone();
            out.push(WeightVector(s));
        }
        out
    }

    pub fn weight(&self, entries: Vec<Q>) -> Result<WeightVector, LinkError> {
        WeightVector::new(self, entries)
    }

    /// A random point of the weight simplex with small exact denominators.
    pub fn random_weight<R: Rng + ?Sized>(&self, rng: &mut R) -> WeightVector {
        let p = self.p as usize;
        // Barycentric coordinates over the p + 1 vertices; slot 0 is the origin.
        let bary: Vec<i64> = (0..=p).map(|_| rng.gen_range(0..=12)).collect();
        let total: i64 = bary.iter().sum();
        if total == 0 {
            return WeightVector(vec![Q::zero(); p]);
        }
        let s_max = self.s_max();
        WeightVector(
            bary[1..]
                .iter()
                .map(|&b| &s_max * frac(b, total))
                .collect(),
        )
    }

    pub fn random_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> WeightPair {
        WeightPair {
            v1: self.random_weight(rng),
            v2: self.random_weight(rng),
        }
    }
}

/// Gluing areas `(s_1, ..., s_p)`, one per boundary component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Q>);

impl WeightVector {
    pub fn new(params: &LinkParams, entries: Vec<Q>) -> Result<Self, LinkError> {
        if entries.len() != params.p as usize {
            return Err(LinkError::WeightLength {
                got: entries.len(),
                expected: params.p as usize,
            });
        }
        if entries.iter().any(|s| s.is_negative()) {
            return Err(LinkError::NegativeWeight);
        }
        let w = WeightVector(entries);
        let total = w.total();
        let s_max = params.s_max();
        if total > s_max {
            return Err(LinkError::WeightTooLarge {
                total: canonical(&total),
                s_max: canonical(&s_max),
            });
        }
        Ok(w)
    }

    /// Wraps entries without checking them against any parameters.
    pub fn from_raw(entries: Vec<Q>) -> Self {
        WeightVector(entries)
    }

    pub fn zero(p: usize) -> Self {
        WeightVector(vec![Q::zero(); p])
    }

    /// `mass` on slot `j`, zero elsewhere. Not validated.
    pub(crate) fn concentrated(p: usize, j: usize, mass: Q) -> Self {
        let mut s = vec![Q::zero(); p];
        s[j] = mass;
        WeightVector(s)
    }

    pub fn entries(&self) -> &[Q] {
        &self.0
    }

    pub fn total(&self) -> Q {
        self.0.iter().fold(Q::zero(), |acc, s| acc + s)
    }

    pub fn scaled(&self, factor: &Q) -> Self {
        WeightVector(self.0.iter().map(|s| s * factor).collect())
    }

    pub fn to_strings(&self) -> Vec<Rational> {
        self.0.iter().cloned().map(Rational).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightPair {
    pub v1: WeightVector,
    pub v2: WeightVector,
}

impl WeightPair {
    pub fn new(v1: WeightVector, v2: WeightVector) -> Self {
        WeightPair { v1, v2 }
    }

    pub fn swapped(&self) -> Self {
        WeightPair {
            v1: self.v2.clone(),
            v2: self.v1.clone(),
        }
    }

    pub fn scaled(&self, factor: &Q) -> Self {
        WeightPair {
            v1: self.v1.scaled(factor),
            v2: self.v2.scaled(factor),
        }
    }
}

/// One closure component of the link complement: boundary count, genus, area.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentData {
    pub boundary: u32,
    pub genus: u32,
    pub area: Q,
}

/// True iff `A_i + 2 eta (k_i + 2 g_i - 1) = lambda` holds exactly for every component.
pub fn general_monotonicity_check(components: &[ComponentData], lambda: &Q, eta: &Q) -> bool {
    components.iter().all(|c| {
        let chi = int(c.boundary as i64 + 2 * c.genus as i64 - 1);
        &c.area + int(2) * eta * chi == *lambda
    })
}

/// JSON form: `{"k":2,"g":1,"p":2,"lambda":"2/5","area":"1/1"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkConfig {
    pub k: u32,
    pub g: u32,
    pub p: u32,
    pub lambda: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<Rational>,
}

impl LinkConfig {
    pub fn into_params(self) -> Result<LinkParams, LinkError> {
        LinkParams::with_area(
            self.k,
            self.g,
            self.p,
            self.lambda.0,
            self.area.map_or_else(|| int(1), |a| a.0),
        )
    }
}

impl From<&LinkParams> for LinkConfig {
    fn from(params: &LinkParams) -> Self {
        LinkConfig {
            k: params.k,
            g: params.g,
            p: params.p,
            lambda: Rational(params.lambda.clone()),
            area: Some(Rational(params.ambient_area.clone())),
        }
    }
}
