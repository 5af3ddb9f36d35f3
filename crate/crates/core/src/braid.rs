//! Braid words over the surface braid group alphabet.
//!
//! Letters are `s_i` (half-twists), `a_i`, `b_i` (loops around the handles),
//! `c_i` (shorthand for `b_i^-1 a_i b_i`) and `z_l` (loops around boundary
//! components). Words are kept exactly as written; reduction is explicit.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("{kind} index {index} out of range: must be between 1 and {max}")]
    IndexOutOfRange {
        kind: LetterKind,
        index: u32,
        max: u32,
    },
    #[error("letter {letter} is not allowed in the restricted alphabet")]
    ForbiddenLetter { letter: Letter },
    #[error("operation requires a word in the restricted alphabet")]
    NotRestricted,
    #[error("operation requires a word made of half-twists only, found {letter}")]
    NotSigmaOnly { letter: Letter },
    #[error("words have different signatures or alphabets")]
    Mismatch,
    #[error("invalid signature: {0}")]
    Signature(&'static str),
}

/// Strand count `n`, genus `g` and number of boundary components `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSignature {
    n_strands: u32,
    genus: u32,
    punctures: u32,
}

impl GroupSignature {
    pub fn new(n_strands: u32, genus: u32, punctures: u32) -> Result<Self, BraidError> {
        if n_strands < 1 {
            return Err(BraidError::Signature("need at least one strand"));
        }
        if punctures < 1 {
            return Err(BraidError::Signature("need at least one boundary component"));
        }
        Ok(GroupSignature {
            n_strands,
            genus,
            punctures,
        })
    }

    /// Signature of the group carrying a link with `k` contractible and `g`
    /// non-contractible circles: one strand per circle.
    pub fn for_link(k: u32, g: u32, p: u32) -> Result<Self, BraidError> {
        Self::new(k + g, g, p)
    }

    pub fn n_strands(&self) -> u32 {
        self.n_strands
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn punctures(&self) -> u32 {
        self.punctures
    }

    /// Number of contractible strands, `n - g`.
    pub fn contractible(&self) -> u32 {
        self.n_strands.saturating_sub(self.genus)
    }

    fn max_index(&self, kind: LetterKind, mode: AlphabetMode) -> u32 {
        match kind {
            LetterKind::Sigma => match mode {
                AlphabetMode::Restricted => self.contractible().saturating_sub(1),
                AlphabetMode::Full => self.n_strands - 1,
            },
            LetterKind::A | LetterKind::B | LetterKind::C => self.genus,
            LetterKind::Z => self.punctures - 1,
        }
    }

    fn check(&self, letter: Letter, mode: AlphabetMode) -> Result<(), BraidError> {
        if mode == AlphabetMode::Restricted && letter.kind == LetterKind::B {
            return Err(BraidError::ForbiddenLetter { letter });
        }
        let max = self.max_index(letter.kind, mode);
        if letter.index < 1 || letter.index > max {
            return Err(BraidError::IndexOutOfRange {
                kind: letter.kind,
                index: letter.index,
                max,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LetterKind {
    Sigma,
    A,
    B,
    C,
    Z,
}

impl LetterKind {
    fn symbol(self) -> char {
        match self {
            LetterKind::Sigma => 's',
            LetterKind::A => 'a',
            LetterKind::B => 'b',
            LetterKind::C => 'c',
            LetterKind::Z => 'z',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        Some(match c {
            's' => LetterKind::Sigma,
            'a' => LetterKind::A,
            'b' => LetterKind::B,
            'c' => LetterKind::C,
            'z' => LetterKind::Z,
            _ => return None,
        })
    }
}

impl fmt::Display for LetterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LetterKind::Sigma => "sigma",
            LetterKind::A => "a",
            LetterKind::B => "b",
            LetterKind::C => "c",
            LetterKind::Z => "z",
        };
        f.write_str(name)
    }
}

/// A generator raised to a nonzero power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub kind: LetterKind,
    pub index: u32,
    pub exponent: i64,
}

impl Letter {
    pub fn new(kind: LetterKind, index: u32, exponent: i64) -> Self {
        debug_assert!(exponent != 0, "letters carry a nonzero exponent");
        Letter {
            kind,
            index,
            exponent,
        }
    }

    pub fn sigma(index: u32, exponent: i64) -> Self {
        Self::new(LetterKind::Sigma, index, exponent)
    }

    pub fn a(index: u32, exponent: i64) -> Self {
        Self::new(LetterKind::A, index, exponent)
    }

    pub fn b(index: u32, exponent: i64) -> Self {
        Self::new(LetterKind::B, index, exponent)
    }

    pub fn c(index: u32, exponent: i64) -> Self {
        Self::new(LetterKind::C, index, exponent)
    }

    pub fn z(index: u32, exponent: i64) -> Self {
        Self::new(LetterKind::Z, index, exponent)
    }

    pub fn inverse(self) -> Self {
        Letter {
            exponent: -self.exponent,
            ..self
        }
    }

    fn same_generator(&self, other: &Letter) -> bool {
        self.kind == other.kind && self.index == other.index
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.index)?;
        if self.exponent != 1 {
            write!(f, "^{}", self.exponent)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlphabetMode {
    /// Generators of the image of the braid-type map: `s_i` with `i < k`,
    /// `a_i`, `c_i`, `z_l`. No bare `b_i`.
    Restricted,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    signature: GroupSignature,
    mode: AlphabetMode,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn empty(signature: GroupSignature, mode: AlphabetMode) -> Self {
        BraidWord {
            signature,
            mode,
            letters: Vec::new(),
        }
    }

    /// Builds a word from letters, validating each against the signature.
    pub fn from_letters(
        signature: GroupSignature,
        mode: AlphabetMode,
        letters: Vec<Letter>,
    ) -> Result<Self, BraidError> {
        for letter in &letters {
            if letter.exponent == 0 {
                return Err(BraidError::Syntax {
                    position: 0,
                    message: format!("zero exponent on {}{}", letter.kind.symbol(), letter.index),
                });
            }
            signature.check(*letter, mode)?;
        }
        Ok(BraidWord {
            signature,
            mode,
            letters,
        })
    }

    pub fn parse(
        text: &str,
        signature: GroupSignature,
        mode: AlphabetMode,
    ) -> Result<Self, BraidError> {
        parse_word(text, signature, mode)
    }

    pub fn signature(&self) -> GroupSignature {
        self.signature
    }

    pub fn mode(&self) -> AlphabetMode {
        self.mode
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            ..self.clone()
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self, BraidError> {
        if self.signature != other.signature || self.mode != other.mode {
            return Err(BraidError::Mismatch);
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { letters, ..*self })
    }

    /// `self` repeated `n` times.
    pub fn pow(&self, n: usize) -> Self {
        BraidWord {
            letters: self.letters.repeat(n),
            ..self.clone()
        }
    }

    pub fn is_sigma_only(&self) -> bool {
        self.letters.iter().all(|l| l.kind == LetterKind::Sigma)
    }

    fn require_sigma_only(&self) -> Result<(), BraidError> {
        match self.letters.iter().find(|l| l.kind != LetterKind::Sigma) {
            Some(&letter) => Err(BraidError::NotSigmaOnly { letter }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// Parses `s1 s2^-1 c1 z1^3`-style text. Letters may be separated by
/// whitespace or written back to back.
pub fn parse_word(
    text: &str,
    signature: GroupSignature,
    mode: AlphabetMode,
) -> Result<BraidWord, BraidError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut letters = Vec::new();
    let syntax = |position: usize, message: &str| BraidError::Syntax {
        position,
        message: message.to_string(),
    };

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let digits = |pos: &mut usize| -> &str {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        &text[start..*pos]
    };

    skip_ws(&mut pos);
    while pos < bytes.len() {
        let start = pos;
        let kind = LetterKind::from_symbol(bytes[pos] as char)
            .ok_or_else(|| syntax(pos, "expected one of s, a, b, c, z"))?;
        pos += 1;
        let index_text = digits(&mut pos);
        if index_text.is_empty() {
            return Err(syntax(pos, "expected a generator index"));
        }
        let index: u32 = index_text
            .parse()
            .map_err(|_| syntax(start + 1, "generator index too large"))?;
        if index == 0 {
            return Err(syntax(start + 1, "generator indices start at 1"));
        }

        let mut exponent = 1i64;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let sign_pos = pos;
            let negative = match bytes.get(pos) {
                Some(b'-') => {
                    pos += 1;
                    true
                }
                Some(b'+') => {
                    pos += 1;
                    false
                }
                _ => false,
            };
            let exp_text = digits(&mut pos);
            if exp_text.is_empty() {
                return Err(syntax(pos, "expected an integer exponent after '^'"));
            }
            let magnitude: i64 = exp_text
                .parse()
                .map_err(|_| syntax(sign_pos, "exponent too large"))?;
            exponent = if negative { -magnitude } else { magnitude };
            if exponent == 0 {
                return Err(syntax(sign_pos, "exponent must be nonzero"));
            }
        }

        let letter = Letter::new(kind, index, exponent);
        signature.check(letter, mode)?;
        letters.push(letter);
        skip_ws(&mut pos);
    }

    Ok(BraidWord {
        signature,
        mode,
        letters,
    })
}

/// Cancels and merges adjacent powers of the same generator until none remain.
pub fn free_reduce(word: &BraidWord) -> BraidWord {
    let mut stack: Vec<Letter> = Vec::with_capacity(word.letters.len());
    for &letter in &word.letters {
        match stack.last_mut() {
            Some(top) if top.same_generator(&letter) => {
                top.exponent += letter.exponent;
                if top.exponent == 0 {
                    stack.pop();
                }
            }
            _ => stack.push(letter),
        }
    }
    BraidWord {
        letters: stack,
        ..word.clone()
    }
}

/// Spells every `c_i^e` as `(b_i^-1 a_i b_i)^e`, producing a full-alphabet word.
pub fn expand_restricted(word: &BraidWord) -> BraidWord {
    let mut letters = Vec::with_capacity(word.letters.len());
    for &letter in &word.letters {
        if letter.kind != LetterKind::C {
            letters.push(letter);
            continue;
        }
        // The conjugate of a power is the power of the conjugate.
        let i = letter.index;
        letters.push(Letter::b(i, -1));
        letters.push(Letter::a(i, letter.exponent));
        letters.push(Letter::b(i, 1));
    }
    BraidWord {
        signature: word.signature,
        mode: AlphabetMode::Full,
        letters,
    }
}

/// Exponent sums that determine every functional value on a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentSummary {
    /// Sum of `a_i` exponents minus sum of `c_i` exponents.
    pub k_gen: i64,
    pub k_sigma: i64,
    /// One slot per boundary component; the last slot is always zero.
    pub k: Vec<i64>,
}

impl ExponentSummary {
    pub fn zero(punctures: usize) -> Self {
        ExponentSummary {
            k_gen: 0,
            k_sigma: 0,
            k: vec![0; punctures],
        }
    }

    pub fn punctures(&self) -> usize {
        self.k.len()
    }

    pub fn scale(&self, n: i64) -> Self {
        ExponentSummary {
            k_gen: self.k_gen * n,
            k_sigma: self.k_sigma * n,
            k: self.k.iter().map(|x| x * n).collect(),
        }
    }
}

impl Add for &ExponentSummary {
    type Output = ExponentSummary;

    fn add(self, rhs: &ExponentSummary) -> ExponentSummary {
        assert_eq!(self.k.len(), rhs.k.len(), "summaries over different punctures");
        ExponentSummary {
            k_gen: self.k_gen + rhs.k_gen,
            k_sigma: self.k_sigma + rhs.k_sigma,
            k: self.k.iter().zip(&rhs.k).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &ExponentSummary {
    type Output = ExponentSummary;

    fn sub(self, rhs: &ExponentSummary) -> ExponentSummary {
        self + &(-rhs)
    }
}

impl Neg for &ExponentSummary {
    type Output = ExponentSummary;

    fn neg(self) -> ExponentSummary {
        self.scale(-1)
    }
}

pub fn exponent_summary(word: &BraidWord) -> Result<ExponentSummary, BraidError> {
    if word.mode != AlphabetMode::Restricted {
        return Err(BraidError::NotRestricted);
    }
    let mut summary = ExponentSummary::zero(word.signature.punctures as usize);
    for letter in &word.letters {
        match letter.kind {
            LetterKind::Sigma => summary.k_sigma += letter.exponent,
            LetterKind::A => summary.k_gen += letter.exponent,
            LetterKind::C => summary.k_gen -= letter.exponent,
            LetterKind::Z => summary.k[letter.index as usize - 1] += letter.exponent,
            LetterKind::B => return Err(BraidError::NotRestricted),
        }
    }
    Ok(summary)
}

/// Image under the homomorphism sending every half-twist to 1.
pub fn linking_number(word: &BraidWord) -> Result<i64, BraidError> {
    word.require_sigma_only()?;
    Ok(word.letters.iter().map(|l| l.exponent).sum())
}

/// Word for the loop around the last boundary component, solved from
///
/// ```text
/// [a_1, b_1^-1] ... [a_g, b_g^-1] = s_1 ... s_{k-1}^2 ... s_1 z_1^-1 ... z_p^-1
/// ```
///
/// with `[x, y] = x y x^-1 y^-1`, so `[a_i, b_i^-1] = a_i c_i^-1`. Writing
/// `C` for the commutator product and `D` for the full twist word, this gives
/// `z_p = C^-1 D z_1^-1 ... z_{p-1}^-1`, emitted in exactly that order:
/// `c_g a_g^-1 ... c_1 a_1^-1`, then `s_1 ... s_{k-1}^2 ... s_1`, then the
/// inverse `z` letters.
pub fn z_last_word(signature: GroupSignature) -> BraidWord {
    let g = signature.genus;
    let k = signature.contractible();
    let p = signature.punctures;
    let mut letters = Vec::new();

    for i in (1..=g).rev() {
        letters.push(Letter::c(i, 1));
        letters.push(Letter::a(i, -1));
    }
    if k >= 2 {
        for i in 1..k - 1 {
            letters.push(Letter::sigma(i, 1));
        }
        letters.push(Letter::sigma(k - 1, 2));
        for i in (1..k - 1).rev() {
            letters.push(Letter::sigma(i, 1));
        }
    }
    for l in 1..p {
        letters.push(Letter::z(l, -1));
    }

    BraidWord {
        signature,
        mode: AlphabetMode::Restricted,
        letters,
    }
}

/// All words reachable by one far-commutation or one braid relation move.
///
/// Far commutation swaps adjacent powers `s_i^e s_j^f` with `|i - j| > 1`.
/// The braid relation rewrites `s_i^e s_j^e s_i^e` to `s_j^e s_i^e s_j^e` for
/// `|i - j| = 1` and `e = +-1`.
pub fn braid_relation_moves(word: &BraidWord) -> Result<Vec<BraidWord>, BraidError> {
    word.require_sigma_only()?;
    let letters = &word.letters;
    let mut out: Vec<BraidWord> = Vec::new();
    let mut push = |candidate: Vec<Letter>| {
        let w = BraidWord {
            letters: candidate,
            ..word.clone()
        };
        if !out.contains(&w) {
            out.push(w);
        }
    };

    for pos in 0..letters.len().saturating_sub(1) {
        let (x, y) = (letters[pos], letters[pos + 1]);
        if x.index.abs_diff(y.index) > 1 {
            let mut next = letters.clone();
            next.swap(pos, pos + 1);
            push(next);
        }
    }
    for pos in 0..letters.len().saturating_sub(2) {
        let (x, y, z) = (letters[pos], letters[pos + 1], letters[pos + 2]);
        let e = x.exponent;
        if x.index == z.index
            && x.index.abs_diff(y.index) == 1
            && e.abs() == 1
            && y.exponent == e
            && z.exponent == e
        {
            let mut next = letters.clone();
            next[pos] = y;
            next[pos + 1] = x;
            next[pos + 2] = y;
            push(next);
        }
    }
    Ok(out)
}
