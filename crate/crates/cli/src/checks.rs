//! Randomised consistency checks behind `check-relations`.

use braidbound::rational::{int, Q};
use braidbound::{
    exponent_summary, f_max_closed, f_max_lp, f_value, z_last_word, AlphabetMode, BraidWord,
    LetterKind, Letter, LinkParams, WeightPair,
};
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::{action_value, generator_value, random_word_for};

pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
        }
    }

    fn record(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn done(self) -> CheckResult {
        CheckResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
        }
    }
}

/// One positive letter of every restricted generator.
fn generators(params: &LinkParams) -> Vec<Letter> {
    let sig = params.signature();
    let mut out = Vec::new();
    for i in 1..sig.contractible() {
        out.push(Letter::sigma(i, 1));
    }
    for i in 1..=sig.genus() {
        out.push(Letter::a(i, 1));
        out.push(Letter::c(i, 1));
    }
    for j in 1..sig.punctures() {
        out.push(Letter::z(j, 1));
    }
    out
}

fn single(params: &LinkParams, letter: Letter) -> BraidWord {
    BraidWord::from_letters(params.signature(), AlphabetMode::Restricted, vec![letter])
        .expect("generator in range")
}

/// Crossings and boundary windings of the capping that realises `letter`.
fn capping(params: &LinkParams, letter: Letter) -> (i64, Vec<i64>) {
    let mut m = vec![0; params.p as usize];
    let n_delta = match letter.kind {
        LetterKind::Sigma => -1,
        LetterKind::A => 2,
        LetterKind::C => -2,
        LetterKind::Z => {
            m[letter.index as usize - 1] = 1;
            0
        }
        LetterKind::B => unreachable!("b is not in the restricted alphabet"),
    };
    (n_delta * letter.exponent, m.iter().map(|x| x * letter.exponent).collect())
}

pub fn run_all<R: Rng>(params: &LinkParams, rng: &mut R, samples: usize) -> Vec<CheckResult> {
    let pairs: Vec<WeightPair> = (0..samples).map(|_| params.random_pair(rng)).collect();
    let gens = generators(params);
    let mut results = Vec::new();

    let mut t = Tally::new("last boundary loop agrees with the relation");
    let zp = exponent_summary(&z_last_word(params.signature())).expect("restricted");
    let p = params.p as usize - 1;
    for pair in &pairs {
        let expected = (&pair.v2.entries()[p] - &pair.v1.entries()[p]) / params.strands();
        t.record(f_value(params, pair, &zp) == expected);
    }
    results.push(t.done());

    let mut t = Tally::new("generator values agree with exponent sums");
    for pair in &pairs {
        for &l in &gens {
            let summary = exponent_summary(&single(params, l)).expect("restricted");
            t.record(generator_value(params, pair, l) == f_value(params, pair, &summary));
        }
    }
    results.push(t.done());

    let mut t = Tally::new("c and a take opposite values");
    for pair in &pairs {
        for i in 1..=params.g {
            t.record(
                generator_value(params, pair, Letter::c(i, 1))
                    == -generator_value(params, pair, Letter::a(i, 1)),
            );
        }
    }
    results.push(t.done());

    let mut t = Tally::new("capping action differences reproduce generator values");
    for pair in &pairs {
        for &l in &gens {
            let (n_delta, m) = capping(params, l);
            t.record(action_value(params, pair, n_delta, &m) == generator_value(params, pair, l));
        }
    }
    results.push(t.done());

    let mut t = Tally::new("f is additive on random words");
    for pair in &pairs {
        let u = random_word_for(params, rng, 12);
        let v = random_word_for(params, rng, 12);
        let uv = u.concat(&v).expect("same group");
        let f = |w: &BraidWord| f_value(params, pair, &exponent_summary(w).expect("restricted"));
        let by_letters = uv
            .letters()
            .iter()
            .fold(Q::zero(), |acc, &l| acc + generator_value(params, pair, l));
        t.record(f(&uv) == f(&u) + f(&v) && f(&uv) == by_letters);
    }
    results.push(t.done());

    let mut t = Tally::new("closed-form maximum equals vertex enumeration");
    for pair in &pairs {
        let w = random_word_for(params, rng, 20);
        let s = exponent_summary(&w).expect("restricted");
        let (closed, witness) = f_max_closed(params, &s);
        let (lp, _) = f_max_lp(params, &s);
        let ok = closed == lp
            && f_value(params, &witness, &s) == closed
            && f_value(params, pair, &s).abs() <= closed;
        t.record(ok);
    }
    results.push(t.done());

    let mut t = Tally::new("single-generator maxima");
    let base = params.s_max() / (int(2) * params.strands() * params.euler_term());
    for &l in &gens {
        let s = exponent_summary(&single(params, l)).expect("restricted");
        let expected = match l.kind {
            LetterKind::Sigma => base.clone(),
            LetterKind::A | LetterKind::C => int(2) * &base,
            LetterKind::Z => params.s_max() / params.strands(),
            LetterKind::B => unreachable!(),
        };
        t.record(f_max_closed(params, &s).0 == expected);
    }
    results.push(t.done());

    results
}
