//! Oriented occurrence scanning along geodesics.
//!
//! A positive occurrence of the pattern `w` in `g` is a position where the
//! oriented segment `[h, hw]` lies on the geodesic `[1, g]`; a negative one
//! is a copy of `w` traversed backwards, i.e. a copy of `w^-1` in the
//! spelling of `g`. The recorded `prefix` is the group element `h`.

use super::ReducedWord;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

/// One signed occurrence of a pattern along `[1, g]`.
///
/// For `Pos`, the letters of `g` at `[start, start + |w|)` spell `w` and
/// `prefix` is the first `start` letters of `g`. For `Neg`, the letters at
/// `[start - |w|, start)` spell `w^-1` and `prefix` is again the first
/// `start` letters of `g` (the far end of the traversed copy).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Occurrence {
    pub sign: Sign,
    pub start: usize,
    pub prefix: ReducedWord,
}

/// All signed occurrences of `w` along `[1, g]`, sorted by `start`;
/// overlapping copies are all reported.
///
/// Rejects an empty or non-cyclically-reduced pattern: translates of such a
/// word do not tile geodesics coherently.
pub fn occurrences(w: &ReducedWord, g: &ReducedWord) -> Result<Vec<Occurrence>> {
    if w.is_identity() {
        return Err(Error::Precondition("occurrence pattern must be nonempty".into()));
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::Precondition(format!(
            "occurrence pattern {w} must be cyclically reduced"
        )));
    }
    let k = w.len();
    let n = g.len();
    let gl = g.letters();
    let wl = w.letters();
    let winv = w.inverse();
    let wil = winv.letters();

    let mut out: Vec<Occurrence> = Vec::new();
    // Positive copies starting at s and negative copies ending at s share the
    // same prefix length s; emitting both per s keeps the list start-sorted.
    for s in 0..=n {
        if s + k <= n && gl[s..s + k] == *wl {
            out.push(Occurrence { sign: Sign::Pos, start: s, prefix: g.prefix(s) });
        }
        if s >= k && gl[s - k..s] == *wil {
            out.push(Occurrence { sign: Sign::Neg, start: s, prefix: g.prefix(s) });
        }
    }
    Ok(out)
}
