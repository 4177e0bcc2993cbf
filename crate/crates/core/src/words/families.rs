//! The special word families driving the growth experiments: buffered
//! patterns, the block families `w' a^{5m} b^{5m} a^{7m} b^{7m}` and
//! `w' alpha^k beta^k alpha^k beta^k`, and products `y_1 w' ... y_n w'`.

use super::{occurrences, Letter, ReducedWord, Sign, MAX_WORD_LEN};
use crate::{Error, Result};

/// Applies the endomorphism of `F2` sending `a -> image_a`, `b -> image_b`.
///
/// Abstract words over two symbols double as words in any two-generator
/// subgroup; substitution makes them concrete.
pub fn substitute(word: &ReducedWord, image_a: &ReducedWord, image_b: &ReducedWord) -> ReducedWord {
    let inv_a = image_a.inverse();
    let inv_b = image_b.inverse();
    let mut acc = ReducedWord::identity();
    for &l in word.letters() {
        let step = match l {
            Letter::A => image_a,
            Letter::AInv => &inv_a,
            Letter::B => image_b,
            Letter::BInv => &inv_b,
        };
        acc = acc.mul(step);
    }
    acc
}

/// `w_m = w' a^{5m} b^{5m} a^{7m} b^{7m}` for `gcd(m, 6) = 1`.
///
/// `w'` must not start with `b^-1` nor end with `a^-1`, which makes the
/// concatenation reduced and cyclically reduced.
pub fn word_wm(w_prime: &ReducedWord, m: u64) -> Result<ReducedWord> {
    if m == 0 || num_integer::gcd(m, 6) != 1 {
        return Err(Error::Precondition(format!("m = {m} must be positive with gcd(m, 6) = 1")));
    }
    if w_prime.letters().first() == Some(&Letter::BInv) {
        return Err(Error::Precondition("w' must not start with b^-1".into()));
    }
    if w_prime.letters().last() == Some(&Letter::AInv) {
        return Err(Error::Precondition("w' must not end with a^-1".into()));
    }
    let tail_len = 24 * m as usize;
    if w_prime.len() + tail_len > MAX_WORD_LEN {
        return Err(Error::Precondition(format!("w_m longer than {MAX_WORD_LEN} letters")));
    }
    let mut letters = w_prime.letters().to_vec();
    for (letter, count) in [
        (Letter::A, 5 * m),
        (Letter::B, 5 * m),
        (Letter::A, 7 * m),
        (Letter::B, 7 * m),
    ] {
        letters.extend(std::iter::repeat_n(letter, count as usize));
    }
    // No cancellation is possible: w' ends in a, b or b^-1 and the tail is
    // positive; the result starts with w' (or a) and ends with b.
    Ok(ReducedWord::from_letters(letters))
}

/// `w_k = w' alpha^k beta^k alpha^k beta^k`; the concatenation must come out
/// freely and cyclically reduced, otherwise the choice of `alpha`, `beta` is
/// rejected.
pub fn word_wk(
    w_prime: &ReducedWord,
    alpha: &ReducedWord,
    beta: &ReducedWord,
    k: u64,
) -> Result<ReducedWord> {
    if alpha.is_identity() || beta.is_identity() {
        return Err(Error::Precondition("alpha and beta must be nontrivial".into()));
    }
    let pieces: [&ReducedWord; 4] = [alpha, beta, alpha, beta];
    let mut letters = w_prime.letters().to_vec();
    let mut expected = letters.len();
    for piece in pieces {
        for _ in 0..k {
            letters.extend_from_slice(piece.letters());
            expected += piece.len();
        }
    }
    if expected > MAX_WORD_LEN {
        return Err(Error::Precondition(format!("w_k longer than {MAX_WORD_LEN} letters")));
    }
    let word = ReducedWord::from_letters(letters);
    if word.len() != expected || !word.is_cyclically_reduced() {
        return Err(Error::Precondition(
            "w' alpha^k beta^k alpha^k beta^k is not cyclically reduced as spelled".into(),
        ));
    }
    Ok(word)
}

/// A pattern wrapped in buffers: `w' = B w B'` with `B, B'` drawn from
/// `{a^l b^l, b^l a^l}`, plus the subgroup data `F = <a^m, b^m>` whose
/// elements may be interleaved with `w'` without disturbing the copies of
/// `w`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BufferedWord {
    pub w: ReducedWord,
    pub buffer_len: usize,
    pub subgroup_exp: usize,
    pub w_prime: ReducedWord,
    pub f_gens: (ReducedWord, ReducedWord),
}

/// True when `w` has at most two maximal generator blocks, i.e. is of the
/// form `a^p b^q` or `b^p a^q` (powers of a single generator included).
pub fn is_two_block(w: &ReducedWord) -> bool {
    w.blocks().len() <= 2
}

/// Default buffer length for a pattern: one more than its length, so no
/// block of `w` can swallow a buffer block.
pub fn default_buffer_len(w: &ReducedWord) -> usize {
    w.len() + 1
}

/// Default subgroup exponent.
pub fn default_subgroup_exp(w: &ReducedWord) -> usize {
    6 * (w.len() + default_buffer_len(w))
}

/// Builds the buffered word for a cyclically reduced pattern with at least
/// three blocks. Requires `m > l` and `m > |w|`; verifies by scanning that
/// `w'` contains exactly one copy of `w` and none of `w^-1`.
pub fn buffered(w: &ReducedWord, buffer_len: usize, subgroup_exp: usize) -> Result<BufferedWord> {
    if w.is_identity() || !w.is_cyclically_reduced() {
        return Err(Error::Precondition("pattern must be nonempty and cyclically reduced".into()));
    }
    if is_two_block(w) {
        return Err(Error::Precondition(format!(
            "pattern {w} is of the excluded form a^p b^q / b^p a^q"
        )));
    }
    if buffer_len == 0 {
        return Err(Error::Precondition("buffer length must be positive".into()));
    }
    if subgroup_exp <= buffer_len || subgroup_exp <= w.len() {
        return Err(Error::Precondition(format!(
            "subgroup exponent {subgroup_exp} must exceed both the buffer length {buffer_len} and |w| = {}",
            w.len()
        )));
    }
    let ab = |l: usize| {
        let mut v = vec![Letter::A; l];
        v.extend(vec![Letter::B; l]);
        ReducedWord::from_letters(v)
    };
    let ba = |l: usize| {
        let mut v = vec![Letter::B; l];
        v.extend(vec![Letter::A; l]);
        ReducedWord::from_letters(v)
    };
    // Pick buffer shapes that cannot cancel against the ends of w.
    let first = w.letters()[0];
    let last = *w.letters().last().unwrap();
    let left = if first == Letter::BInv { ba(buffer_len) } else { ab(buffer_len) };
    let right = if last == Letter::AInv { ba(buffer_len) } else { ab(buffer_len) };
    let w_prime = left.mul(w).mul(&right);
    if w_prime.len() != w.len() + 4 * buffer_len {
        return Err(Error::Invariant(format!("buffers cancelled against pattern {w}")));
    }
    let occ = occurrences(w, &w_prime)?;
    let positives = occ.iter().filter(|o| o.sign == Sign::Pos).count();
    let negatives = occ.len() - positives;
    if positives != 1 || negatives != 0 {
        return Err(Error::Precondition(format!(
            "buffered word for {w} has {positives} positive / {negatives} negative copies; increase margins"
        )));
    }
    Ok(BufferedWord {
        w: w.clone(),
        buffer_len,
        subgroup_exp,
        w_prime,
        f_gens: (
            ReducedWord::generator_pow(Letter::A, subgroup_exp as u64),
            ReducedWord::generator_pow(Letter::B, subgroup_exp as u64),
        ),
    })
}

impl BufferedWord {
    pub fn with_default_margins(w: &ReducedWord) -> Result<BufferedWord> {
        buffered(w, default_buffer_len(w), default_subgroup_exp(w))
    }

    /// Maps an abstract word over `{a, b}` to the subgroup `<a^m, b^m>`.
    pub fn subgroup_element(&self, abstract_word: &ReducedWord) -> ReducedWord {
        substitute(abstract_word, &self.f_gens.0, &self.f_gens.1)
    }
}

/// The reduction of `y_1 w' y_2 w' ... y_n w'`, where the `ys` are given as
/// abstract words over `{a, b}` standing for the subgroup generators
/// `a^m, b^m`. Verifies by scanning that the result carries exactly `n`
/// positive copies of `w` and none of `w^-1`.
pub fn family_word(bw: &BufferedWord, ys_abstract: &[ReducedWord]) -> Result<ReducedWord> {
    let mut acc = ReducedWord::identity();
    for y in ys_abstract {
        acc = acc.mul(&bw.subgroup_element(y));
        acc = acc.mul(&bw.w_prime);
    }
    if acc.len() > MAX_WORD_LEN {
        return Err(Error::Precondition(format!("family word longer than {MAX_WORD_LEN} letters")));
    }
    let occ = occurrences(&bw.w, &acc)?;
    let positives = occ.iter().filter(|o| o.sign == Sign::Pos).count();
    let negatives = occ.len() - positives;
    if positives != ys_abstract.len() || negatives != 0 {
        return Err(Error::Invariant(format!(
            "family word for {} carries {positives} positive / {negatives} negative copies, expected {}",
            bw.w,
            ys_abstract.len()
        )));
    }
    Ok(acc)
}
