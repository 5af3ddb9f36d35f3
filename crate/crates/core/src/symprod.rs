//! Two strands in the plane as a point of `Sym^2(C)`, charted by the sum and
//! product of the pair, and signed counting of where a homotopy of such
//! pairs meets the diagonal.
//!
//! In the chart `(a, b) = (x + y, x y)` the diagonal is the zero set of the
//! discriminant `a^2 - 4b`. A homotopy `[0,1]^2 -> Sym^2(C)` meets it where
//! the discriminant field vanishes, and the intersection sign is the sign of
//! the Jacobian of that field: the discriminant is holomorphic and its
//! kernel at a diagonal point is the diagonal's tangent line, so the 4x4
//! orientation determinant against the tangent frame has the same sign.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::link::{LinkError, LinkParams, WeightPair};
use crate::rational::{int, Q};

/// Unordered pair of points, stored as the coefficients of `X^2 - aX + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub a: Complex64,
    pub b: Complex64,
}

impl ChartPoint {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        ChartPoint { a, b }
    }

    /// The two strand positions, in no particular order.
    pub fn roots(&self) -> (Complex64, Complex64) {
        let r = discriminant(*self).sqrt();
        ((self.a - r) / 2.0, (self.a + r) / 2.0)
    }
}

pub fn to_chart(x_minus: Complex64, x_plus: Complex64) -> ChartPoint {
    ChartPoint {
        a: x_minus + x_plus,
        b: x_minus * x_plus,
    }
}

/// `a^2 - 4b`; zero exactly when the two strands collide.
pub fn discriminant(pt: ChartPoint) -> Complex64 {
    pt.a * pt.a - 4.0 * pt.b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransverseSign {
    Positive,
    Negative,
    Degenerate,
}

impl TransverseSign {
    pub fn value(self) -> Option<i32> {
        match self {
            TransverseSign::Positive => Some(1),
            TransverseSign::Negative => Some(-1),
            TransverseSign::Degenerate => None,
        }
    }
}

const DEGENERATE_REL: f64 = 1e-12;

/// Orientation of `(du_s, du_t, (1, a/2), (i, i a/2))` as a real basis of `C^2`.
///
/// `du_s` and `du_t` are the partial derivatives of a homotopy in the chart
/// at a point `(a, a^2/4)` of the diagonal.
pub fn transversality_sign(du_s: [Complex64; 2], du_t: [Complex64; 2], a: Complex64) -> TransverseSign {
    let i = Complex64::i();
    let columns = [du_s, du_t, [Complex64::new(1.0, 0.0), a / 2.0], [i, i * a / 2.0]];
    let mut m = [[0.0; 4]; 4];
    let mut norms = 1.0;
    for (c, col) in columns.iter().enumerate() {
        m[0][c] = col[0].re;
        m[1][c] = col[0].im;
        m[2][c] = col[1].re;
        m[3][c] = col[1].im;
        norms *= (col[0].norm_sqr() + col[1].norm_sqr()).sqrt();
    }
    let det = det4(m);
    if !(det.abs() > DEGENERATE_REL * norms) {
        TransverseSign::Degenerate
    } else if det > 0.0 {
        TransverseSign::Positive
    } else {
        TransverseSign::Negative
    }
}

fn det4(mut m: [[f64; 4]; 4]) -> f64 {
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..4 {
            let factor = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    det
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomotopyError {
    #[error("grid must have at least {min} intervals in each direction, got {m}x{n}")]
    GridTooSmall { m: usize, n: usize, min: usize },
    #[error("expected {expected} samples for {field}, got {got}")]
    SampleCount {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite sample in the grid")]
    NonFinite,
    #[error("invalid homotopy file: {0}")]
    Format(String),
}

type ChartFn = dyn Fn(f64, f64) -> ChartPoint + Send + Sync;

/// Samples of a map `[0,1]^2 -> Sym^2(C)` on an `(M+1) x (N+1)` grid.
///
/// Sample `(i, j)` sits at `(s, t) = (i/M, j/N)`. Between samples the map is
/// bilinear in the chart, unless the homotopy was built from a closed form,
/// in which case refinement evaluates that closed form.
#[derive(Clone)]
pub struct Homotopy {
    m: usize,
    n: usize,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    exact: Option<Arc<ChartFn>>,
}

impl fmt::Debug for Homotopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homotopy")
            .field("m", &self.m)
            .field("n", &self.n)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl Homotopy {
    pub fn from_grid(
        m: usize,
        n: usize,
        a: Vec<Complex64>,
        b: Vec<Complex64>,
    ) -> Result<Self, HomotopyError> {
        if m < 1 || n < 1 {
            return Err(HomotopyError::GridTooSmall { m, n, min: 1 });
        }
        let expected = (m + 1) * (n + 1);
        for (field, v) in [("a", &a), ("b", &b)] {
            if v.len() != expected {
                return Err(HomotopyError::SampleCount {
                    field,
                    expected,
                    got: v.len(),
                });
            }
        }
        if a.iter().chain(&b).any(|z| !z.is_finite()) {
            return Err(HomotopyError::NonFinite);
        }
        Ok(Homotopy {
            m,
            n,
            a,
            b,
            exact: None,
        })
    }

    /// Samples `f` on the grid and keeps it for refinement.
    pub fn from_fn<F>(m: usize, n: usize, f: F) -> Result<Self, HomotopyError>
    where
        F: Fn(f64, f64) -> ChartPoint + Send + Sync + 'static,
    {
        if m < 1 || n < 1 {
            return Err(HomotopyError::GridTooSmall { m, n, min: 1 });
        }
        let mut a = Vec::with_capacity((m + 1) * (n + 1));
        let mut b = Vec::with_capacity((m + 1) * (n + 1));
        for i in 0..=m {
            for j in 0..=n {
                let pt = f(i as f64 / m as f64, j as f64 / n as f64);
                a.push(pt.a);
                b.push(pt.b);
            }
        }
        let mut h = Self::from_grid(m, n, a, b)?;
        h.exact = Some(Arc::new(f));
        Ok(h)
    }

    /// Homotopy with `a = 0` whose discriminant is the given field.
    pub fn from_discriminant<F>(m: usize, n: usize, field: F) -> Result<Self, HomotopyError>
    where
        F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        Self::from_fn(m, n, move |s, t| {
            ChartPoint::new(Complex64::new(0.0, 0.0), -field(s, t) / 4.0)
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample(&self, i: usize, j: usize) -> ChartPoint {
        let k = i * (self.n + 1) + j;
        ChartPoint::new(self.a[k], self.b[k])
    }

    /// The map at an arbitrary point of the square.
    pub fn eval(&self, s: f64, t: f64) -> ChartPoint {
        if let Some(f) = &self.exact {
            return f(s, t);
        }
        let x = (s.clamp(0.0, 1.0) * self.m as f64).min(self.m as f64);
        let y = (t.clamp(0.0, 1.0) * self.n as f64).min(self.n as f64);
        let i = (x.floor() as usize).min(self.m - 1);
        let j = (y.floor() as usize).min(self.n - 1);
        let (u, v) = (x - i as f64, y - j as f64);
        let corners = [
            (self.sample(i, j), (1.0 - u) * (1.0 - v)),
            (self.sample(i + 1, j), u * (1.0 - v)),
            (self.sample(i, j + 1), (1.0 - u) * v),
            (self.sample(i + 1, j + 1), u * v),
        ];
        let zero = Complex64::new(0.0, 0.0);
        let (a, b) = corners.iter().fold((zero, zero), |(a, b), (p, w)| {
            (a + p.a * *w, b + p.b * *w)
        });
        ChartPoint::new(a, b)
    }

    pub fn discriminant_at(&self, s: f64, t: f64) -> Complex64 {
        discriminant(self.eval(s, t))
    }

    fn sample_discriminant(&self, i: usize, j: usize) -> Complex64 {
        discriminant(self.sample(i, j))
    }

    /// Central-difference partials `(du_s, du_t)` of the chart map and `a`.
    pub fn chart_derivatives(&self, s: f64, t: f64) -> ([Complex64; 2], [Complex64; 2], Complex64) {
        let (s_lo, s_hi, t_lo, t_hi) = fd_stencil(s, t);
        let ps = (self.eval(s_hi, t), self.eval(s_lo, t));
        let pt = (self.eval(s, t_hi), self.eval(s, t_lo));
        let du_s = [(ps.0.a - ps.1.a) / (s_hi - s_lo), (ps.0.b - ps.1.b) / (s_hi - s_lo)];
        let du_t = [(pt.0.a - pt.1.a) / (t_hi - t_lo), (pt.0.b - pt.1.b) / (t_hi - t_lo)];
        (du_s, du_t, self.eval(s, t).a)
    }

    /// Sign of the Jacobian of `(s, t) -> discriminant` at a point.
    pub fn jacobian_sign(&self, s: f64, t: f64) -> TransverseSign {
        let (s_lo, s_hi, t_lo, t_hi) = fd_stencil(s, t);
        let ds = (self.discriminant_at(s_hi, t) - self.discriminant_at(s_lo, t)) / (s_hi - s_lo);
        let dt = (self.discriminant_at(s, t_hi) - self.discriminant_at(s, t_lo)) / (t_hi - t_lo);
        let det = ds.re * dt.im - dt.re * ds.im;
        if !(det.abs() > DEGENERATE_REL * ds.norm() * dt.norm()) {
            TransverseSign::Degenerate
        } else if det > 0.0 {
            TransverseSign::Positive
        } else {
            TransverseSign::Negative
        }
    }

    pub fn to_file(&self) -> HomotopyFile {
        let pairs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect();
        HomotopyFile {
            m: self.m,
            n: self.n,
            a: pairs(&self.a),
            b: pairs(&self.b),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HomotopyError> {
        let file: HomotopyFile =
            serde_json::from_str(text).map_err(|e| HomotopyError::Format(e.to_string()))?;
        file.into_homotopy()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("grid serializes")
    }
}

const FD_STEP: f64 = 1e-6;

fn fd_stencil(s: f64, t: f64) -> (f64, f64, f64, f64) {
    (
        (s - FD_STEP).max(0.0),
        (s + FD_STEP).min(1.0),
        (t - FD_STEP).max(0.0),
        (t + FD_STEP).min(1.0),
    )
}

/// On-disk grid: samples row-major with `s` as the row index,
/// `index = i * (N+1) + j`, each complex number as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyFile {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
}

impl HomotopyFile {
    pub fn into_homotopy(self) -> Result<Homotopy, HomotopyError> {
        let c = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        Homotopy::from_grid(self.m, self.n, c(self.a), c(self.b))
    }
}

/// The pair of square roots of `x + iy`, with `(x, y)` running over
/// `[-1, 1]^2` as `(s, t)` runs over the unit square.
pub fn elementary_model(m: usize, n: usize) -> Result<Homotopy, HomotopyError> {
    if m < 2 || n < 2 {
        return Err(HomotopyError::GridTooSmall { m, n, min: 2 });
    }
    Homotopy::from_fn(m, n, |s, t| {
        let w = Complex64::new(2.0 * s - 1.0, 2.0 * t - 1.0);
        ChartPoint::new(Complex64::new(0.0, 0.0), -w)
    })
}

/// Strand pair `+-sqrt(c)` with `c(s,t) = (1-s) e^{2 pi i t} + s - 1/2`:
/// a full turn of one strand around the other at `s = 0` contracted to a
/// constant pair at `s = 1`. Collides once, at `(3/4, 1/2)`.
pub fn sigma_contraction_model(m: usize, n: usize) -> Result<Homotopy, HomotopyError> {
    if m < 2 || n < 2 {
        return Err(HomotopyError::GridTooSmall { m, n, min: 2 });
    }
    Homotopy::from_fn(m, n, |s, t| {
        let c = (1.0 - s) * Complex64::from_polar(1.0, TAU * t) + (s - 0.5);
        ChartPoint::new(Complex64::new(0.0, 0.0), -c)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionRecord {
    /// Lattice cell `(i, j)` the zero was found in.
    pub cell: (usize, usize),
    /// Estimated `(s, t)` of the zero.
    pub location: (f64, f64),
    pub sign: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intersections {
    pub records: Vec<IntersectionRecord>,
    pub total: i64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntersectError {
    #[error("discriminant vanishes identically on the grid")]
    IdenticallyZero,
    #[error("strands collide on or too near the boundary of the square near (s, t) = ({s}, {t})")]
    NearBoundary { s: f64, t: f64 },
    #[error("cell {cell:?} still has winding {winding} at the resolution limit (non-transverse or clustered intersection)")]
    NonUnitWinding { cell: (usize, usize), winding: i64 },
    #[error("intersection near ({s}, {t}) is degenerate")]
    Degenerate { s: f64, t: f64 },
    #[error("intersection near ({s}, {t}): winding sign {winding} but Jacobian sign {jacobian:?} and chart sign {chart:?}")]
    SignMismatch {
        s: f64,
        t: f64,
        winding: i64,
        jacobian: TransverseSign,
        chart: TransverseSign,
    },
    #[error("could not place the lattice away from the zero set")]
    Unresolvable,
    #[error("boundary undersampled: argument jumps by {jump:.3} rad between consecutive samples")]
    Undersampled { jump: f64 },
    #[error("tolerance must be positive and finite")]
    BadTolerance,
}

/// Relative size below which a discriminant value counts as zero.
const ZERO_REL: f64 = 1e-10;
const EDGE_DEPTH: u32 = 40;
const EDGE_STEP: f64 = PI / 4.0;
/// Interior lattice shifts tried in turn, as fractions of a grid step.
const LATTICE_SHIFTS: [f64; 6] = [0.0, 0.381_966_011_3, 0.236_067_977_5, 0.145_898_033_8, 0.618_033_988_7, 0.090_169_943_7];
const SPLITS: [f64; 4] = [0.561_803_398_9, 0.414_589_803_4, 0.527_864_045, 0.472_135_955];

struct Field<'h> {
    h: &'h Homotopy,
    eps: f64,
}

impl Field<'_> {
    fn at(&self, s: f64, t: f64) -> Complex64 {
        self.h.discriminant_at(s, t)
    }

    /// Argument change of the field from `p0` to `p1` along the segment,
    /// or `None` if the segment passes (numerically) through a zero.
    ///
    /// A piece is accepted once its endpoint values differ by less than
    /// `EDGE_STEP` in argument and the field cannot reach zero along it to
    /// first order (`length * slope <= |d| / 2`). The second test catches
    /// pieces that turn by a whole multiple of `2 pi` between samples.
    fn increment(&self, p0: (f64, f64), p1: (f64, f64), d0: Complex64, d1: Complex64, depth: u32) -> Option<f64> {
        if d0.norm() < self.eps || d1.norm() < self.eps {
            return None;
        }
        let inc = (d1 / d0).arg();
        let (ds, dt) = (p1.0 - p0.0, p1.1 - p0.1);
        let h = 1.0 / 1024.0;
        let near0 = self.at(p0.0 + h * ds, p0.1 + h * dt);
        let near1 = self.at(p1.0 - h * ds, p1.1 - h * dt);
        let swing = ((near0 - d0).norm()).max((d1 - near1).norm()) / h;
        if inc.abs() <= EDGE_STEP && swing <= 0.5 * d0.norm().min(d1.norm()) {
            return Some(inc);
        }
        if depth == 0 {
            return None;
        }
        let mid = ((p0.0 + p1.0) / 2.0, (p0.1 + p1.1) / 2.0);
        let dm = self.at(mid.0, mid.1);
        Some(self.increment(p0, mid, d0, dm, depth - 1)? + self.increment(mid, p1, dm, d1, depth - 1)?)
    }

    fn rect_winding(&self, r: Rect) -> Option<i64> {
        let corners = [(r.s0, r.t0), (r.s1, r.t0), (r.s1, r.t1), (r.s0, r.t1)];
        let values: Vec<Complex64> = corners.iter().map(|&(s, t)| self.at(s, t)).collect();
        let mut total = 0.0;
        for k in 0..4 {
            let next = (k + 1) % 4;
            total += self.increment(corners[k], corners[next], values[k], values[next], EDGE_DEPTH)?;
        }
        winding_of(total)
    }
}

fn winding_of(total_arg: f64) -> Option<i64> {
    let w = total_arg / TAU;
    let rounded = w.round();
    ((w - rounded).abs() < 0.25).then_some(rounded as i64)
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    s0: f64,
    s1: f64,
    t0: f64,
    t1: f64,
}

impl Rect {
    fn diameter(&self) -> f64 {
        (self.s1 - self.s0).hypot(self.t1 - self.t0)
    }

    fn center(&self) -> (f64, f64) {
        ((self.s0 + self.s1) / 2.0, (self.t0 + self.t1) / 2.0)
    }

    fn split(&self, theta: f64) -> [Rect; 4] {
        let sm = self.s0 + theta * (self.s1 - self.s0);
        let tm = self.t0 + theta * (self.t1 - self.t0);
        [
            Rect { s1: sm, t1: tm, ..*self },
            Rect { s0: sm, t1: tm, ..*self },
            Rect { s1: sm, t0: tm, ..*self },
            Rect { s0: sm, t0: tm, ..*self },
        ]
    }
}

fn lattice_lines(count: usize, shift: f64) -> Vec<f64> {
    let mut lines: Vec<f64> = (0..=count).map(|i| (i as f64 + shift) / count as f64).collect();
    lines[0] = 0.0;
    lines[count] = 1.0;
    lines
}

/// Finds every point where the homotopy meets the diagonal, each with its
/// intersection sign.
///
/// Zeros of the discriminant are located by the winding of the field around
/// each grid cell, then refined by subdivision until the enclosing box has
/// diameter below `tol` (in `(s, t)` units). If a zero lies on a grid line,
/// the interior lattice lines are shifted by a fraction of a step and the
/// scan is repeated. Each zero's sign is the Jacobian sign of the
/// discriminant field, which must match both the local winding and
/// [`transversality_sign`].
pub fn signed_intersections(h: &Homotopy, tol: f64) -> Result<Intersections, IntersectError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(IntersectError::BadTolerance);
    }
    let (m, n) = (h.m, h.n);
    let scale = (0..=m)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .map(|(i, j)| h.sample_discriminant(i, j).norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(IntersectError::IdenticallyZero);
    }
    let field = Field {
        h,
        eps: ZERO_REL * scale,
    };
    check_boundary_samples(h, field.eps)?;

    'shift: for &shift in &LATTICE_SHIFTS {
        let s_lines = lattice_lines(m, shift);
        let t_lines = lattice_lines(n, shift);
        let node = |i: usize, j: usize| {
            if shift == 0.0 {
                h.sample_discriminant(i, j)
            } else {
                field.at(s_lines[i], t_lines[j])
            }
        };
        let nodes: Vec<Complex64> = (0..=m).flat_map(|i| (0..=n).map(move |j| (i, j))).map(|(i, j)| node(i, j)).collect();
        let d = |i: usize, j: usize| nodes[i * (n + 1) + j];
        if nodes.iter().any(|z| z.norm() < field.eps) {
            continue;
        }

        // Increment along s at fixed t line j, and along t at fixed s line i.
        let mut along_s = vec![0.0; m * (n + 1)];
        for i in 0..m {
            for j in 0..=n {
                let p0 = (s_lines[i], t_lines[j]);
                let p1 = (s_lines[i + 1], t_lines[j]);
                match field.increment(p0, p1, d(i, j), d(i + 1, j), EDGE_DEPTH) {
                    Some(inc) => along_s[i * (n + 1) + j] = inc,
                    None if j == 0 || j == n => return Err(IntersectError::NearBoundary { s: p0.0, t: p0.1 }),
                    None => continue 'shift,
                }
            }
        }
        let mut along_t = vec![0.0; (m + 1) * n];
        for i in 0..=m {
            for j in 0..n {
                let p0 = (s_lines[i], t_lines[j]);
                let p1 = (s_lines[i], t_lines[j + 1]);
                match field.increment(p0, p1, d(i, j), d(i, j + 1), EDGE_DEPTH) {
                    Some(inc) => along_t[i * n + j] = inc,
                    None if i == 0 || i == m => return Err(IntersectError::NearBoundary { s: p0.0, t: p0.1 }),
                    None => continue 'shift,
                }
            }
        }

        let mut records = Vec::new();
        for i in 0..m {
            for j in 0..n {
                let total = along_s[i * (n + 1) + j] + along_t[(i + 1) * n + j]
                    - along_s[i * (n + 1) + j + 1]
                    - along_t[i * n + j];
                let Some(w) = winding_of(total) else { continue 'shift };
                if w == 0 {
                    continue;
                }
                let rect = Rect {
                    s0: s_lines[i],
                    s1: s_lines[i + 1],
                    t0: t_lines[j],
                    t1: t_lines[j + 1],
                };
                let mut zeros = Vec::new();
                refine(&field, rect, w, tol, (i, j), 0, &mut zeros)?;
                for ((s, t), w) in zeros {
                    records.push(certify(h, (i, j), s, t, w)?);
                }
            }
        }
        records.sort_by(|x, y| {
            x.cell
                .cmp(&y.cell)
                .then(x.location.0.total_cmp(&y.location.0))
                .then(x.location.1.total_cmp(&y.location.1))
        });
        let total = records.iter().map(|r| r.sign as i64).sum();
        return Ok(Intersections { records, total });
    }
    Err(IntersectError::Unresolvable)
}

const MAX_REFINE_DEPTH: u32 = 96;
const FALLBACK_SLACK: f64 = 1e3;

fn refine(
    field: &Field<'_>,
    rect: Rect,
    winding: i64,
    tol: f64,
    cell: (usize, usize),
    depth: u32,
    out: &mut Vec<((f64, f64), i64)>,
) -> Result<(), IntersectError> {
    if rect.diameter() < tol || depth >= MAX_REFINE_DEPTH {
        if winding.abs() != 1 {
            return Err(IntersectError::NonUnitWinding { cell, winding });
        }
        out.push((rect.center(), winding));
        return Ok(());
    }
    for &theta in &SPLITS {
        let parts = rect.split(theta);
        let windings: Option<Vec<i64>> = parts.iter().map(|&r| field.rect_winding(r)).collect();
        let Some(windings) = windings else { continue };
        if windings.iter().sum::<i64>() != winding {
            continue;
        }
        for (part, w) in parts.iter().zip(windings) {
            if w != 0 {
                refine(field, *part, w, tol, cell, depth + 1, out)?;
            }
        }
        return Ok(());
    }
    // Every split line runs through the zero set. A unit winding still pins
    // a single zero inside the box; accept it if the box is close to `tol`.
    if winding.abs() != 1 {
        return Err(IntersectError::NonUnitWinding { cell, winding });
    }
    if rect.diameter() > FALLBACK_SLACK * tol {
        return Err(IntersectError::Unresolvable);
    }
    out.push((rect.center(), winding));
    Ok(())
}

fn certify(h: &Homotopy, cell: (usize, usize), s: f64, t: f64, winding: i64) -> Result<IntersectionRecord, IntersectError> {
    let jacobian = h.jacobian_sign(s, t);
    let (du_s, du_t, a) = h.chart_derivatives(s, t);
    let chart = transversality_sign(du_s, du_t, a);
    let Some(sign) = jacobian.value() else {
        return Err(IntersectError::Degenerate { s, t });
    };
    if sign as i64 != winding || chart != jacobian {
        return Err(IntersectError::SignMismatch {
            s,
            t,
            winding,
            jacobian,
            chart,
        });
    }
    Ok(IntersectionRecord {
        cell,
        location: (s, t),
        sign,
    })
}

/// Grid indices of the boundary, counterclockwise from `(0, 0)` and closed.
fn boundary_path(m: usize, n: usize) -> Vec<(usize, usize)> {
    let mut path = Vec::with_capacity(2 * (m + n) + 1);
    path.extend((0..=m).map(|i| (i, 0)));
    path.extend((1..=n).map(|j| (m, j)));
    path.extend((0..m).rev().map(|i| (i, n)));
    path.extend((0..n).rev().map(|j| (0, j)));
    path
}

fn check_boundary_samples(h: &Homotopy, eps: f64) -> Result<(), IntersectError> {
    for (i, j) in boundary_path(h.m, h.n) {
        if h.sample_discriminant(i, j).norm() < eps {
            return Err(IntersectError::NearBoundary {
                s: i as f64 / h.m as f64,
                t: j as f64 / h.n as f64,
            });
        }
    }
    Ok(())
}

/// Winding number of the discriminant field around the boundary of the
/// square, from the boundary samples alone.
pub fn boundary_winding(h: &Homotopy) -> Result<i64, IntersectError> {
    let path = boundary_path(h.m, h.n);
    let values: Vec<Complex64> = path.iter().map(|&(i, j)| h.sample_discriminant(i, j)).collect();
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(IntersectError::IdenticallyZero);
    }
    check_boundary_samples(h, ZERO_REL * scale)?;
    let mut total = 0.0;
    for pair in values.windows(2) {
        let inc = (pair[1] / pair[0]).arg();
        if inc.abs() > PI / 2.0 {
            return Err(IntersectError::Undersampled { jump: inc.abs() });
        }
        total += inc;
    }
    Ok((total / TAU).round() as i64)
}

/// Action difference of a capping with `n_delta` signed diagonal crossings
/// and signed winding `m[j]` across the disc glued at boundary `j`:
/// `((eta_2 - eta_1) n_delta + sum_j m_j (s_{2,j} - s_{1,j})) / (k+g)`.
pub fn action_difference(params: &LinkParams, pair: &WeightPair, n_delta: i64, m: &[i64]) -> Result<Q, LinkError> {
    let p = params.p as usize;
    if m.len() != p {
        return Err(LinkError::WeightLength {
            got: m.len(),
            expected: p,
        });
    }
    let (s1, s2) = (pair.v1.entries(), pair.v2.entries());
    let mut acc = params.eta_diff(pair) * int(n_delta);
    for j in 0..p {
        acc += int(m[j]) * (&s2[j] - &s1[j]);
    }
    Ok(acc / params.strands())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn chart_examples() {
        assert_eq!(to_chart(c(1.0, 0.0), c(-1.0, 0.0)), ChartPoint::new(c(0.0, 0.0), c(-1.0, 0.0)));
        let w = c(0.3, -1.2);
        let diag = to_chart(w, w);
        assert_eq!(diag, ChartPoint::new(2.0 * w, w * w));
        assert!(discriminant(diag).norm() < 1e-15);
        assert_eq!(to_chart(c(0.0, 0.0), w), ChartPoint::new(w, c(0.0, 0.0)));
        let (x, y) = to_chart(c(2.0, 1.0), c(-0.5, 3.0)).roots();
        let mut got = [x, y];
        got.sort_by(|p, q| p.re.total_cmp(&q.re));
        assert!((got[0] - c(-0.5, 3.0)).norm() < 1e-12);
        assert!((got[1] - c(2.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn discriminant_examples() {
        let (s, t) = (0.3, -0.7);
        let d = discriminant(ChartPoint::new(c(0.0, 0.0), -c(s, t)));
        assert_eq!(d, 4.0 * c(s, t));
        assert_eq!(discriminant(ChartPoint::new(c(2.0, 0.0), c(0.0, 0.0))), c(4.0, 0.0));
    }

    #[test]
    fn transversality_examples() {
        let zero = c(0.0, 0.0);
        // b = -(s + it)
        assert_eq!(
            transversality_sign([zero, c(-1.0, 0.0)], [zero, c(0.0, -1.0)], zero),
            TransverseSign::Positive
        );
        assert_eq!(
            transversality_sign([zero, c(-1.0, 0.0)], [zero, c(-1.0, 0.0)], zero),
            TransverseSign::Degenerate
        );
        // b = +(s + it) is still complex-linear in s + it: orientation kept.
        assert_eq!(
            transversality_sign([zero, c(1.0, 0.0)], [zero, c(0.0, 1.0)], zero),
            TransverseSign::Positive
        );
        // b = -(s - it) reverses it.
        assert_eq!(
            transversality_sign([zero, c(-1.0, 0.0)], [zero, c(0.0, 1.0)], zero),
            TransverseSign::Negative
        );
        // Away from the origin: moving a along the diagonal direction adds nothing.
        let a = c(0.4, 0.2);
        let tangent = [c(1.0, 0.0), a / 2.0];
        assert_eq!(transversality_sign(tangent, [zero, c(-1.0, 0.0)], a), TransverseSign::Degenerate);
    }

    #[test]
    fn det4_matches_permutation_sign() {
        let mut m = [[0.0; 4]; 4];
        m[0][1] = 1.0;
        m[1][0] = 1.0;
        m[2][2] = 2.0;
        m[3][3] = 3.0;
        assert_eq!(det4(m), -6.0);
    }

    #[test]
    fn elementary_model_has_one_positive_zero() {
        for (m, n) in [(8, 8), (9, 8), (8, 11), (33, 17), (64, 64)] {
            let h = elementary_model(m, n).unwrap();
            let found = signed_intersections(&h, 1e-9).unwrap();
            assert_eq!(found.records.len(), 1, "{m}x{n}");
            assert_eq!(found.records[0].sign, 1);
            assert_eq!(found.total, 1);
            let (s, t) = found.records[0].location;
            assert!((s - 0.5).abs() < 1e-8 && (t - 0.5).abs() < 1e-8);
            assert_eq!(boundary_winding(&h).unwrap(), 1);
        }
        assert!(elementary_model(1, 8).is_err());
    }

    #[test]
    fn sigma_contraction_zero() {
        let h = sigma_contraction_model(64, 64).unwrap();
        let found = signed_intersections(&h, 1e-9).unwrap();
        assert_eq!(found.records.len(), 1);
        assert_eq!(found.total.abs(), 1);
        let (s, t) = found.records[0].location;
        assert!((s - 0.75).abs() < 1e-6 && (t - 0.5).abs() < 1e-6);
        assert_eq!(boundary_winding(&h).unwrap(), found.total);
    }

    #[test]
    fn diagonal_free_homotopy() {
        let h = Homotopy::from_discriminant(16, 16, |_, _| c(1.0, 0.5)).unwrap();
        let found = signed_intersections(&h, 1e-9).unwrap();
        assert!(found.records.is_empty());
        assert_eq!(found.total, 0);
        assert_eq!(boundary_winding(&h).unwrap(), 0);
    }

    #[test]
    fn bilinear_grid_without_closed_form() {
        let h = elementary_model(10, 10).unwrap();
        let grid = Homotopy::from_json(&h.to_json()).unwrap();
        let found = signed_intersections(&grid, 1e-9).unwrap();
        assert_eq!(found.total, 1);
        let (s, t) = found.records[0].location;
        assert!((s - 0.5).abs() < 1e-8 && (t - 0.5).abs() < 1e-8);
    }

    #[test]
    fn errors_are_reported() {
        // Zero on the boundary.
        let edge = Homotopy::from_discriminant(8, 8, |s, t| c(s, t - 0.5)).unwrap();
        assert!(matches!(signed_intersections(&edge, 1e-9), Err(IntersectError::NearBoundary { .. })));
        assert!(matches!(boundary_winding(&edge), Err(IntersectError::NearBoundary { .. })));
        // Double zero.
        let double = Homotopy::from_discriminant(8, 8, |s, t| {
            let z = c(s - 0.43, t - 0.57);
            z * z
        })
        .unwrap();
        assert!(matches!(
            signed_intersections(&double, 1e-9),
            Err(IntersectError::NonUnitWinding { winding: 2, .. })
        ));
        // Boundary too coarse to follow a fast-turning field.
        let fast = Homotopy::from_discriminant(2, 2, |s, t| {
            let z = c(s - 0.5, t - 0.5);
            z.powu(5)
        })
        .unwrap();
        assert!(matches!(boundary_winding(&fast), Err(IntersectError::Undersampled { .. })));
        let flat = Homotopy::from_discriminant(4, 4, |_, _| c(0.0, 0.0)).unwrap();
        assert_eq!(signed_intersections(&flat, 1e-9), Err(IntersectError::IdenticallyZero));
        assert_eq!(
            signed_intersections(&elementary_model(4, 4).unwrap(), 0.0),
            Err(IntersectError::BadTolerance)
        );
    }

    #[test]
    fn file_format() {
        let json = r#"{"M":1,"N":1,"a":[[0,0],[0,0],[0,0],[0,0]],"b":[[1,0],[1,0],[1,0],[1,1]]}"#;
        let h = Homotopy::from_json(json).unwrap();
        assert_eq!(h.sample(1, 1).b, c(1.0, 1.0));
        assert!(matches!(
            Homotopy::from_json(r#"{"M":1,"N":1,"a":[],"b":[]}"#),
            Err(HomotopyError::SampleCount { .. })
        ));
        assert!(matches!(Homotopy::from_json("{}"), Err(HomotopyError::Format(_))));
    }

    #[test]
    fn action_difference_examples() {
        let params = LinkParams::new(2, 1, 2, frac(2, 5)).unwrap();
        let pair = WeightPair::new(
            params.weight(vec![frac(1, 20), Q::from_integer(0.into())]).unwrap(),
            params.weight(vec![frac(1, 10), frac(1, 10)]).unwrap(),
        );
        let d_eta = params.eta_diff(&pair);
        assert_eq!(
            action_difference(&params, &pair, -1, &[0, 0]).unwrap(),
            -d_eta.clone() / params.strands()
        );
        assert_eq!(
            action_difference(&params, &pair, 0, &[1, 0]).unwrap(),
            frac(1, 20) / params.strands()
        );
        assert_eq!(action_difference(&params, &pair, 0, &[0, 0]).unwrap(), Q::from_integer(0.into()));
        assert!(action_difference(&params, &pair, 0, &[0]).is_err());
    }
}
