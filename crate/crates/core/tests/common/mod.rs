#![allow(dead_code)]

use braidbound::rational::{frac, Q};
use braidbound::{AlphabetMode, BraidWord, GroupSignature, Letter, LetterKind, LinkParams};
use num_complex::Complex64;
use rand::Rng;

/// Random valid parameters with `lambda` strictly inside `[1/(k+1), 1/k)`
/// (or on the lower end now and then).
pub fn random_params<R: Rng>(rng: &mut R, k: (u32, u32), g: (u32, u32), p: (u32, u32)) -> LinkParams {
    let k = rng.gen_range(k.0..=k.1);
    let g = rng.gen_range(g.0..=g.1);
    let p = rng.gen_range(p.0..=p.1);
    let lo = frac(1, k as i64 + 1);
    let hi = frac(1, k as i64);
    let den = rng.gen_range(1..=40);
    let num = rng.gen_range(0..den);
    let lambda: Q = &lo + (&hi - &lo) * frac(num, den);
    LinkParams::new(k, g, p, lambda).expect("sampled inside the valid range")
}

pub fn random_letter<R: Rng>(rng: &mut R, sig: GroupSignature) -> Option<Letter> {
    let mut kinds = Vec::new();
    if sig.contractible() >= 2 {
        kinds.push(LetterKind::Sigma);
    }
    if sig.genus() >= 1 {
        kinds.push(LetterKind::A);
        kinds.push(LetterKind::C);
    }
    if sig.punctures() >= 2 {
        kinds.push(LetterKind::Z);
    }
    if kinds.is_empty() {
        return None;
    }
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let max = match kind {
        LetterKind::Sigma => sig.contractible() - 1,
        LetterKind::Z => sig.punctures() - 1,
        _ => sig.genus(),
    };
    let mut exponent = rng.gen_range(-3..=3);
    if exponent == 0 {
        exponent = 1;
    }
    Some(Letter::new(kind, rng.gen_range(1..=max), exponent))
}

pub fn random_word<R: Rng>(rng: &mut R, sig: GroupSignature, max_len: usize) -> BraidWord {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len).filter_map(|_| random_letter(rng, sig)).collect();
    BraidWord::from_letters(sig, AlphabetMode::Restricted, letters).unwrap()
}

/// Word whose z-exponents all share one sign (or are zero).
pub fn one_signed_z_word<R: Rng>(rng: &mut R, sig: GroupSignature, max_len: usize, positive: bool) -> BraidWord {
    let base = random_word(rng, sig, max_len);
    let letters = base
        .letters()
        .iter()
        .map(|l| {
            if l.kind == LetterKind::Z {
                let e = if positive { l.exponent.abs() } else { -l.exponent.abs() };
                Letter::new(LetterKind::Z, l.index, e)
            } else {
                *l
            }
        })
        .collect();
    BraidWord::from_letters(sig, AlphabetMode::Restricted, letters).unwrap()
}

pub fn sigma_word<R: Rng>(rng: &mut R, sig: GroupSignature, max_len: usize) -> BraidWord {
    let k = sig.contractible();
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| Letter::sigma(rng.gen_range(1..k), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    BraidWord::from_letters(sig, AlphabetMode::Restricted, letters).unwrap()
}

/// A discriminant field with prescribed simple zeros inside the square:
/// each factor is `z - r` (sign +1) or `conj(z) - conj(r)` (sign -1).
#[derive(Debug, Clone)]
pub struct PolyField {
    pub roots: Vec<(Complex64, i32)>,
}

impl PolyField {
    pub fn random<R: Rng>(rng: &mut R, max_roots: usize) -> Self {
        let count = rng.gen_range(0..=max_roots);
        let mut roots: Vec<(Complex64, i32)> = Vec::new();
        while roots.len() < count {
            let r = Complex64::new(rng.gen_range(0.1..0.9), rng.gen_range(0.1..0.9));
            if roots.iter().all(|(q, _)| (q - r).norm() > 0.05) {
                roots.push((r, if rng.gen_bool(0.5) { 1 } else { -1 }));
            }
        }
        PolyField { roots }
    }

    pub fn expected_total(&self) -> i64 {
        self.roots.iter().map(|(_, s)| *s as i64).sum()
    }

    pub fn eval(roots: &[(Complex64, i32)], s: f64, t: f64) -> Complex64 {
        let z = Complex64::new(s, t);
        roots.iter().fold(Complex64::new(1.0, 0.0), |acc, (r, sign)| {
            acc * if *sign > 0 { z - r } else { z.conj() - r.conj() }
        })
    }
}
