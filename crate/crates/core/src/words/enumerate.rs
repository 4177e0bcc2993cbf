//! Deterministic and seeded enumeration of reduced words.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use super::{Letter, ReducedWord, LETTERS};
use crate::{Error, Result};

/// All reduced words of length exactly `n`, in lexicographic order for the
/// letter order `a < a^-1 < b < b^-1`.
pub fn sphere(n: usize) -> SphereIter {
    SphereIter { state: SphereState::Fresh(n) }
}

/// All reduced words of length at most `r`: the spheres `0..=r` in order.
pub fn ball(r: usize) -> impl Iterator<Item = ReducedWord> {
    (0..=r).flat_map(sphere)
}

enum SphereState {
    Fresh(usize),
    Running(Vec<Letter>),
    Done,
}

pub struct SphereIter {
    state: SphereState,
}

fn min_letter_after(prev: Option<Letter>) -> Letter {
    match prev {
        Some(p) if p.inverse() == Letter::A => Letter::AInv,
        _ => Letter::A,
    }
}

fn next_letter_after(current: Letter, prev: Option<Letter>) -> Option<Letter> {
    let forbidden = prev.map(Letter::inverse);
    LETTERS
        .iter()
        .copied()
        .find(|&l| l > current && Some(l) != forbidden)
}

impl Iterator for SphereIter {
    type Item = ReducedWord;

    fn next(&mut self) -> Option<ReducedWord> {
        match std::mem::replace(&mut self.state, SphereState::Done) {
            SphereState::Fresh(n) => {
                // Smallest reduced word of length n is a^n.
                let letters = vec![Letter::A; n];
                let word = ReducedWord::from_letters(letters.clone());
                self.state = SphereState::Running(letters);
                Some(word)
            }
            SphereState::Running(mut letters) => {
                // Odometer increment under the "no cancelling pair" constraint.
                let mut i = letters.len();
                loop {
                    if i == 0 {
                        return None;
                    }
                    i -= 1;
                    let prev = if i > 0 { Some(letters[i - 1]) } else { None };
                    if let Some(next) = next_letter_after(letters[i], prev) {
                        letters[i] = next;
                        for j in i + 1..letters.len() {
                            letters[j] = min_letter_after(Some(letters[j - 1]));
                        }
                        let word = ReducedWord::from_letters(letters.clone());
                        self.state = SphereState::Running(letters);
                        return Some(word);
                    }
                }
            }
            SphereState::Done => None,
        }
    }
}

/// Seeded sampler for reduced words; reproducible and splittable into
/// independent substreams via `(seed, stream)`.
pub struct WordSampler {
    rng: ChaCha8Rng,
}

impl WordSampler {
    pub fn new(seed: u64) -> Self {
        WordSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent substream for trial `index` of run `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index.wrapping_add(1));
        WordSampler { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniformly random reduced word of exactly `len` letters.
    pub fn word(&mut self, len: usize) -> ReducedWord {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        for i in 0..len {
            let l = if i == 0 {
                LETTERS[self.rng.random_range(0..4)]
            } else {
                let forbidden = letters[i - 1].inverse();
                let choices: Vec<Letter> =
                    LETTERS.iter().copied().filter(|&l| l != forbidden).collect();
                choices[self.rng.random_range(0..3)]
            };
            letters.push(l);
        }
        ReducedWord::from_letters(letters)
    }

    /// Uniformly random nonempty cyclically reduced word with length in
    /// `min_len..=max_len` (resamples until cyclically reduced).
    pub fn cyclically_reduced_word(&mut self, min_len: usize, max_len: usize) -> ReducedWord {
        assert!(min_len >= 1 && min_len <= max_len);
        loop {
            let len = self.rng.random_range(min_len..=max_len);
            let w = self.word(len);
            if !w.is_identity() && w.is_cyclically_reduced() {
                return w;
            }
        }
    }

    /// Freely reduced abstract word of `len` letters over `gens.len()`
    /// symbols, returned as `(index, inverted)` pairs.
    fn abstract_word(&mut self, k: usize, len: usize) -> Vec<(usize, bool)> {
        let mut out: Vec<(usize, bool)> = Vec::with_capacity(len);
        for i in 0..len {
            let choice = if i == 0 {
                self.rng.random_range(0..2 * k)
            } else {
                let (pi, pinv) = out[i - 1];
                let forbidden = pi * 2 + usize::from(!pinv);
                let mut c = self.rng.random_range(0..2 * k - 1);
                if c >= forbidden {
                    c += 1;
                }
                c
            };
            out.push((choice / 2, choice % 2 == 1));
        }
        out
    }

    /// Random element of the subgroup generated by `gens`: the reduction of
    /// a freely reduced word of `len` generator letters.
    pub fn subgroup_word(&mut self, gens: &[ReducedWord], len: usize) -> Result<ReducedWord> {
        check_gens(gens)?;
        let abs = self.abstract_word(gens.len(), len);
        let mut acc = ReducedWord::identity();
        for (i, inv) in abs {
            let g = if inv { gens[i].inverse() } else { gens[i].clone() };
            acc = acc.mul(&g);
        }
        Ok(acc)
    }
}

fn check_gens(gens: &[ReducedWord]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::Precondition("generator list must be nonempty".into()));
    }
    if gens.iter().any(ReducedWord::is_identity) {
        return Err(Error::Precondition("subgroup generators must not be the identity".into()));
    }
    Ok(())
}

/// `count` uniformly random reduced words of length `len`, reproducible
/// from `seed`.
pub fn random_words(len: usize, count: usize, seed: u64) -> Vec<ReducedWord> {
    let mut sampler = WordSampler::new(seed);
    (0..count).map(|_| sampler.word(len)).collect()
}

/// `count` random subgroup elements, each the reduction of `len` generator
/// letters.
pub fn subgroup_random(
    gens: &[ReducedWord],
    len: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<ReducedWord>> {
    check_gens(gens)?;
    let mut sampler = WordSampler::new(seed);
    (0..count).map(|_| sampler.subgroup_word(gens, len)).collect()
}

/// Exhaustive subgroup elements of `F2`-length at most `max_len`, obtained
/// from all freely reduced products of at most `max_len` generator letters.
///
/// This is complete whenever products of `t` generator letters always have
/// `F2`-length at least `t` (true for the block generating sets used here,
/// e.g. `{a^2, b}`), and a deterministic lower approximation otherwise.
pub fn subgroup_ball(gens: &[ReducedWord], max_len: usize) -> Result<Vec<ReducedWord>> {
    check_gens(gens)?;
    let mut seen: BTreeSet<ReducedWord> = BTreeSet::new();
    seen.insert(ReducedWord::identity());
    // frontier of (element, last abstract letter) to keep products freely reduced
    let mut frontier: Vec<(ReducedWord, usize)> = vec![(ReducedWord::identity(), usize::MAX)];
    let signed: Vec<ReducedWord> = gens
        .iter()
        .flat_map(|g| [g.clone(), g.inverse()])
        .collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (elem, last) in &frontier {
            for (idx, step) in signed.iter().enumerate() {
                if *last != usize::MAX && idx == last ^ 1 {
                    continue; // would cancel the previous abstract letter
                }
                let product = elem.mul(step);
                if product.len() <= max_len && seen.insert(product.clone()) {
                    next.push((product.clone(), idx));
                } else if product.len() <= max_len {
                    next.push((product, idx));
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::tests::w;

    #[test]
    fn sphere_sizes() {
        assert_eq!(sphere(0).count(), 1);
        assert_eq!(sphere(1).count(), 4);
        assert_eq!(sphere(2).count(), 12);
        assert_eq!(ball(2).count(), 17);
        // closed form 4 * 3^(n-1)
        for n in 1..7 {
            assert_eq!(sphere(n).count(), 4 * 3usize.pow(n as u32 - 1));
        }
    }

    #[test]
    fn sphere_is_sorted_reduced_and_distinct() {
        let words: Vec<ReducedWord> = sphere(4).collect();
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        assert!(words.iter().all(|u| u.len() == 4));
        assert_eq!(words[0], w("a^4"));
        assert_eq!(words.last().unwrap(), &w("B^4"));
    }

    #[test]
    fn random_words_reproducible() {
        let xs = random_words(10, 20, 7);
        let ys = random_words(10, 20, 7);
        assert_eq!(xs, ys);
        assert!(xs.iter().all(|u| u.len() == 10));
        assert_ne!(xs, random_words(10, 20, 8));
    }

    #[test]
    fn subgroup_random_block_parity() {
        let gens = [w("a^2"), w("b")];
        for word in subgroup_random(&gens, 30, 50, 3).unwrap() {
            for (letter, run) in word.blocks() {
                if letter == Letter::A || letter == Letter::AInv {
                    assert_eq!(run % 2, 0, "odd a-block in {word}");
                }
            }
        }
    }

    #[test]
    fn subgroup_random_rejects_identity_generator() {
        assert!(subgroup_random(&[w("a"), w("")], 5, 1, 0).is_err());
        assert!(subgroup_random(&[], 5, 1, 0).is_err());
    }

    #[test]
    fn subgroup_ball_small() {
        // <a>: elements of length <= 3 are a^-3 .. a^3
        let ball3 = subgroup_ball(&[w("a")], 3).unwrap();
        assert_eq!(ball3.len(), 7);
        // <a^2, b>, length <= 4
        let elems = subgroup_ball(&[w("a^2"), w("b")], 4).unwrap();
        assert!(elems.contains(&w("a^2b")));
        assert!(elems.contains(&w("bA^2b")));
        assert!(!elems.iter().any(|u| u.len() > 4));
        // every element has even a-blocks
        for word in &elems {
            for (letter, run) in word.blocks() {
                if letter.same_generator(Letter::A) {
                    assert_eq!(run % 2, 0);
                }
            }
        }
    }

    #[test]
    fn substreams_are_independent_and_reproducible() {
        let a1 = WordSampler::substream(9, 0).word(12);
        let a2 = WordSampler::substream(9, 0).word(12);
        let b = WordSampler::substream(9, 1).word(12);
        assert_eq!(a1, a2);
        assert_ne!(a1, b);
    }
}
