//! The homomorphisms `f_{v1,v2}` on braid words, their maximum over pairs of
//! weight vectors, and the Hofer-norm lower bounds built from that maximum.
//!
//! Every homomorphism is determined by three exponent sums of a word. With
//! `D = (2 k_gen - k_sigma) / (2(k+2g-1))` and `k_p = 0`,
//!
//! ```text
//! (k+g) f_{v1,v2}(w) = sum_j (s_{2,j} - s_{1,j}) (k_j - D)
//! ```
//!
//! which is linear in the pair, so the maximum of `|f|` sits on a pair of
//! simplex vertices. [`f_max_closed`] reads it off in closed form;
//! [`f_max_lp`] enumerates vertex pairs and serves as the cross-check.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{
    exponent_summary, linking_number, BraidError, BraidWord, ExponentSummary, Letter, LetterKind,
};
use crate::link::{LinkParams, WeightPair, WeightVector};
use crate::rational::{canonical, int, Rational, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("b_{0} is not in the image of the braid-type map; f is undefined on it")]
    UndefinedOnB(u32),
    #[error("summary has {got} puncture slots, parameters have p = {expected}")]
    SummaryShape { got: usize, expected: usize },
    #[error("closed-form maximum {closed} disagrees with vertex enumeration {lp}")]
    OracleMismatch { closed: String, lp: String },
}

/// The scalars of the closed-form maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Terms {
    pub r: Q,
    pub s: Q,
    pub t: Q,
    pub d: Q,
}

/// `D = (2 k_gen - k_sigma) / (2(k+2g-1))`.
pub fn d_term(params: &LinkParams, summary: &ExponentSummary) -> Q {
    int(2 * summary.k_gen - summary.k_sigma) / (int(2) * params.euler_term())
}

/// `R = k_max - k_min`, `S = k_max - D`, `T = D - k_min`, where the extrema
/// run over all `p` slots, the last of which is zero.
pub fn terms(params: &LinkParams, summary: &ExponentSummary) -> Terms {
    let d = d_term(params, summary);
    let (k_max, k_min) = k_extrema(summary);
    Terms {
        r: int(k_max.1 - k_min.1),
        s: int(k_max.1) - &d,
        t: &d - int(k_min.1),
        d,
    }
}

/// ((index, value) of the max, (index, value) of the min), smallest index on ties.
fn k_extrema(summary: &ExponentSummary) -> ((usize, i64), (usize, i64)) {
    let mut max = (0, summary.k[0]);
    let mut min = (0, summary.k[0]);
    for (j, &kj) in summary.k.iter().enumerate().skip(1) {
        if kj > max.1 {
            max = (j, kj);
        }
        if kj < min.1 {
            min = (j, kj);
        }
    }
    (max, min)
}

fn check_shape(params: &LinkParams, summary: &ExponentSummary) -> Result<(), BoundError> {
    if summary.punctures() != params.p as usize {
        return Err(BoundError::SummaryShape {
            got: summary.punctures(),
            expected: params.p as usize,
        });
    }
    Ok(())
}

/// `f_{v1,v2}` of any word with the given exponent sums.
pub fn f_value(params: &LinkParams, pair: &WeightPair, summary: &ExponentSummary) -> Q {
    let d = d_term(params, summary);
    let (s1, s2) = (pair.v1.entries(), pair.v2.entries());
    let mut acc = (pair.v1.total() - pair.v2.total()) * &d;
    // The k_p slot is zero, so only the first p - 1 weights appear.
    for (j, &kj) in summary.k.iter().enumerate() {
        if kj != 0 {
            acc += int(kj) * (&s2[j] - &s1[j]);
        }
    }
    acc / params.strands()
}

/// Value of `f_{v1,v2}` on one letter of the restricted alphabet.
pub fn f_generator(params: &LinkParams, pair: &WeightPair, letter: Letter) -> Result<Q, BoundError> {
    let d_eta = params.eta_diff(pair);
    let unit = match letter.kind {
        LetterKind::A => int(2) * d_eta,
        LetterKind::C => int(-2) * d_eta,
        LetterKind::Sigma => -d_eta,
        LetterKind::Z => {
            let j = letter.index as usize - 1;
            &pair.v2.entries()[j] - &pair.v1.entries()[j]
        }
        LetterKind::B => return Err(BoundError::UndefinedOnB(letter.index)),
    };
    Ok(unit * int(letter.exponent) / params.strands())
}

/// Maximum of `|f_{v1,v2}|` over the square of the weight simplex, with a
/// witness pair that attains it (positive sign).
///
/// The witness concentrates mass on a single slot: for `R` it moves all of
/// `s_max` from the `k_min` slot to the `k_max` slot, for `S` it puts
/// `s_max` on the `k_max` slot of `v2`, for `T` on the `k_min` slot of `v1`.
/// Ties prefer `R`, then `S`, then `T`, and the smallest slot index.
pub fn f_max_closed(params: &LinkParams, summary: &ExponentSummary) -> (Q, WeightPair) {
    let p = params.p as usize;
    let s_max = params.s_max();
    let Terms { r, s, t, .. } = terms(params, summary);
    let ((j_max, _), (j_min, _)) = k_extrema(summary);

    let best = r.clone().max(s.clone()).max(t.clone());
    let on = |j| WeightVector::concentrated(p, j, s_max.clone());
    let witness = if best == r {
        WeightPair::new(on(j_min), on(j_max))
    } else if best == s {
        WeightPair::new(WeightVector::zero(p), on(j_max))
    } else {
        WeightPair::new(on(j_min), WeightVector::zero(p))
    };
    (s_max * best / params.strands(), witness)
}

/// Vertex-enumeration maximum of `|f_{v1,v2}|`: all `(p+1)^2` vertex pairs,
/// first strict maximum kept.
pub fn f_max_lp(params: &LinkParams, summary: &ExponentSummary) -> (Q, WeightPair) {
    let vertices = params.weight_vertices();
    let mut best: Option<(Q, WeightPair)> = None;
    for v1 in &vertices {
        for v2 in &vertices {
            let pair = WeightPair::new(v1.clone(), v2.clone());
            let value = f_value(params, &pair, summary).abs();
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, pair));
            }
        }
    }
    best.expect("the simplex has at least one vertex")
}

/// Lower bound on the Hofer norm of any map with the given braid type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub f_max: Q,
    pub argmax: WeightPair,
    pub half_bound: Q,
    pub asymptotic_bound: Q,
    pub summary: ExponentSummary,
    pub terms: Terms,
}

pub fn hofer_lower_bound(params: &LinkParams, word: &BraidWord) -> Result<BoundReport, BoundError> {
    let summary = exponent_summary(word)?;
    bound_from_summary(params, summary)
}

pub fn bound_from_summary(
    params: &LinkParams,
    summary: ExponentSummary,
) -> Result<BoundReport, BoundError> {
    check_shape(params, &summary)?;
    let (closed, witness) = f_max_closed(params, &summary);
    let (lp, _) = f_max_lp(params, &summary);
    let attained = f_value(params, &witness, &summary);
    if closed != lp || attained != closed {
        return Err(BoundError::OracleMismatch {
            closed: canonical(&closed),
            lp: canonical(&lp),
        });
    }
    let half = &closed / int(2);
    Ok(BoundReport {
        terms: terms(params, &summary),
        f_max: closed,
        argmax: witness,
        asymptotic_bound: half.clone(),
        half_bound: half,
        summary,
    })
}

/// Bound for braids supported in a disc, in terms of the linking number:
/// `|lk| ((k+1) lambda - A) / (4 (k+g) (k+2g-1))`.
pub fn disc_lk_bound(params: &LinkParams, word: &BraidWord) -> Result<Q, BoundError> {
    let lk = linking_number(word)?;
    Ok(params.s_max() * int(lk.abs()) / (int(4) * params.strands() * params.euler_term()))
}

#[derive(Serialize, Deserialize)]
struct SummaryDoc {
    k_gen: i64,
    k_sigma: i64,
    k: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct ArgmaxDoc {
    v1: Vec<Rational>,
    v2: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[allow(non_snake_case)]
struct TermsDoc {
    R: Rational,
    S: Rational,
    T: Rational,
    D: Rational,
}

#[derive(Serialize, Deserialize)]
struct BoundReportDoc {
    f_max: Rational,
    half_bound: Rational,
    asymptotic_bound: Rational,
    argmax: ArgmaxDoc,
    summary: SummaryDoc,
    terms: TermsDoc,
}

impl Serialize for BoundReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let r = |q: &Q| Rational(q.clone());
        BoundReportDoc {
            f_max: r(&self.f_max),
            half_bound: r(&self.half_bound),
            asymptotic_bound: r(&self.asymptotic_bound),
            argmax: ArgmaxDoc {
                v1: self.argmax.v1.to_strings(),
                v2: self.argmax.v2.to_strings(),
            },
            summary: SummaryDoc {
                k_gen: self.summary.k_gen,
                k_sigma: self.summary.k_sigma,
                k: self.summary.k.clone(),
            },
            terms: TermsDoc {
                R: r(&self.terms.r),
                S: r(&self.terms.s),
                T: r(&self.terms.t),
                D: r(&self.terms.d),
            },
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BoundReport {
    fn deserialize<De: serde::Deserializer<'de>>(deserializer: De) -> Result<Self, De::Error> {
        let doc = BoundReportDoc::deserialize(deserializer)?;
        let weights = |v: Vec<Rational>| {
            WeightVector::from_raw(v.into_iter().map(|r| r.0).collect())
        };
        Ok(BoundReport {
            f_max: doc.f_max.0,
            half_bound: doc.half_bound.0,
            asymptotic_bound: doc.asymptotic_bound.0,
            argmax: WeightPair::new(weights(doc.argmax.v1), weights(doc.argmax.v2)),
            summary: ExponentSummary {
                k_gen: doc.summary.k_gen,
                k_sigma: doc.summary.k_sigma,
                k: doc.summary.k,
            },
            terms: Terms {
                r: doc.terms.R.0,
                s: doc.terms.S.0,
                t: doc.terms.T.0,
                d: doc.terms.D.0,
            },
        })
    }
}

impl BoundReport {
    pub fn is_trivial(&self) -> bool {
        self.f_max.is_zero()
    }
}
