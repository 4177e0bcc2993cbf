//! Exact combinatorics of the free group `F2 = <a, b>`.
//!
//! Elements are kept in freely reduced normal form at all times, so `Eq` on
//! [`ReducedWord`] is equality in the group and `len` is the word metric
//! distance from the identity in the Cayley graph.

mod enumerate;
mod families;
mod scan;

pub use enumerate::{ball, random_words, sphere, subgroup_ball, subgroup_random, WordSampler};
pub use families::{
    buffered, default_buffer_len, default_subgroup_exp, family_word, is_two_block, substitute,
    word_wk, word_wm, BufferedWord,
};
pub use scan::{occurrences, Occurrence, Sign};

use crate::{Error, Result};

/// Hard cap on word length; guards runaway constructions and lets letter
/// positions live comfortably in `usize`/`i64` arithmetic.
pub const MAX_WORD_LEN: usize = 1 << 20;

/// One generator or inverse generator of `F2`.
///
/// The discriminant order `a < a^-1 < b < b^-1` is the lexicographic letter
/// order used for deterministic enumeration and tie-breaking everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    AInv = 1,
    B = 2,
    BInv = 3,
}

pub const LETTERS: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    /// True if both letters are powers of the same generator.
    pub fn same_generator(self, other: Letter) -> bool {
        (self as u8) / 2 == (other as u8) / 2
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

/// A freely reduced word in `F2`; the empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord { letters: Vec::new() }
    }

    /// Builds the free reduction of an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(seq: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for x in seq {
            if out.last().is_some_and(|&y| y == x.inverse()) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        ReducedWord { letters: out }
    }

    /// Single generator raised to a power.
    pub fn generator_pow(letter: Letter, exp: u64) -> Self {
        ReducedWord { letters: vec![letter; exp as usize] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn prefix(&self, n: usize) -> ReducedWord {
        ReducedWord { letters: self.letters[..n].to_vec() }
    }

    /// A contiguous slice of the word; always reduced since the whole is.
    pub fn segment(&self, start: usize, end: usize) -> ReducedWord {
        ReducedWord { letters: self.letters[start..end].to_vec() }
    }

    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        let mut out = self.letters.clone();
        for &x in &other.letters {
            if out.last().is_some_and(|&y| y == x.inverse()) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        ReducedWord { letters: out }
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, exp: i64) -> ReducedWord {
        if exp < 0 {
            return self.inverse().pow(-exp);
        }
        if exp == 0 {
            return ReducedWord::identity();
        }
        let (core, conj) = self.cyclic_reduce();
        // u = c q c^-1 with q cyclically reduced, so u^n = c q^n c^-1 and the
        // concatenation is already reduced.
        let mut letters = conj.letters.clone();
        for _ in 0..exp {
            letters.extend_from_slice(&core.letters);
        }
        letters.extend(conj.letters.iter().rev().map(|l| l.inverse()));
        ReducedWord { letters }
    }

    /// First and last letters are not mutually inverse.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => f != l.inverse(),
            _ => true,
        }
    }

    /// Writes `self = conjugator . core . conjugator^-1` with `core`
    /// cyclically reduced and the conjugator as short as possible.
    pub fn cyclic_reduce(&self) -> (ReducedWord, ReducedWord) {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo] == self.letters[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        (self.segment(lo, hi), self.prefix(lo))
    }

    /// Longest common prefix; the central point of the tripod `{1, u, v}`.
    pub fn common_prefix(&self, other: &ReducedWord) -> ReducedWord {
        let n = self
            .letters
            .iter()
            .zip(other.letters.iter())
            .take_while(|(x, y)| x == y)
            .count();
        self.prefix(n)
    }

    /// Maximal runs of a single generator, as `(letter, run length)` pairs.
    /// Runs alternate between the two generators because the word is reduced.
    pub fn blocks(&self) -> Vec<(Letter, usize)> {
        let mut out: Vec<(Letter, usize)> = Vec::new();
        for &l in &self.letters {
            match out.last_mut() {
                Some((prev, count)) if *prev == l => *count += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// Net exponent of a generator (image under abelianization).
    pub fn exponent_sum(&self, generator: Letter) -> i64 {
        let positive = generator;
        let negative = generator.inverse();
        self.letters
            .iter()
            .map(|&l| {
                if l == positive {
                    1
                } else if l == negative {
                    -1
                } else {
                    0
                }
            })
            .sum()
    }

    /// Parses the canonical word syntax: tokens `a|b|A|B`, each optionally
    /// followed by `^` and a nonzero integer; whitespace ignored; `A`, `B`
    /// denote inverses; negative exponents invert. The empty string is the
    /// identity.
    pub fn parse(text: &str) -> Result<ReducedWord> {
        let mut letters: Vec<Letter> = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
                continue;
            }
            let letter = Letter::from_char(c)
                .ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in word {text:?}")))?;
            chars.next();
            let mut exp: i64 = 1;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                if chars.peek() == Some(&'-') {
                    digits.push('-');
                    chars.next();
                }
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                exp = digits
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent {digits:?} in word {text:?}")))?;
                if exp == 0 {
                    return Err(Error::Parse(format!("zero exponent in word {text:?}")));
                }
            }
            let (l, count) = if exp < 0 {
                (letter.inverse(), (-exp) as usize)
            } else {
                (letter, exp as usize)
            };
            if letters.len() + count > MAX_WORD_LEN {
                return Err(Error::Parse(format!("word longer than {MAX_WORD_LEN} letters")));
            }
            for _ in 0..count {
                if letters.last().is_some_and(|&y| y == l.inverse()) {
                    letters.pop();
                } else {
                    letters.push(l);
                }
            }
        }
        Ok(ReducedWord { letters })
    }

    /// Canonical rendering; `parse(render(w)) == w`. The identity renders as
    /// the empty string.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (letter, count) in self.blocks() {
            out.push(letter.to_char());
            if count > 1 {
                out.push_str(&format!("^{count}"));
            }
        }
        out
    }
}

impl std::fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for ReducedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReducedWord::parse(s)
    }
}

impl std::ops::Mul for &ReducedWord {
    type Output = ReducedWord;

    fn mul(self, rhs: &ReducedWord) -> ReducedWord {
        ReducedWord::mul(self, rhs)
    }
}

impl serde::Serialize for ReducedWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> serde::Deserialize<'de> for ReducedWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        ReducedWord::parse(&text).map_err(serde::de::Error::custom)
    }
}
