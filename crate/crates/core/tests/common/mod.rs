//! Shared helpers for the integration suites: independent oracles that
//! avoid the library's scanning and summation paths.

use qclab_core::words::{Occurrence, ReducedWord, Sign};

pub fn w(text: &str) -> ReducedWord {
    ReducedWord::parse(text).unwrap()
}

/// Geodesic-containment oracle for occurrence scanning: for every prefix
/// `h` of `g` and each orientation, tests directly whether the segment
/// `[h, hw]` lies on `[1, g]`, using only the group law and prefix
/// comparison.
#[allow(dead_code)] // each integration suite pulls what it needs
pub fn oracle_occurrences(pattern: &ReducedWord, g: &ReducedWord) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for s in 0..=g.len() {
        let h = g.prefix(s);
        let hw = h.mul(pattern);
        if hw.len() == s + pattern.len() && hw.len() <= g.len() && g.prefix(hw.len()) == hw {
            out.push(Occurrence { sign: Sign::Pos, start: s, prefix: h.clone() });
        }
        if pattern.len() <= s && hw.len() == s - pattern.len() && g.prefix(hw.len()) == hw {
            out.push(Occurrence { sign: Sign::Neg, start: s, prefix: h });
        }
    }
    out
}
