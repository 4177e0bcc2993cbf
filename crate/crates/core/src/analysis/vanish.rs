//! Exact vanishing checks of `H` on finitely generated subgroups.

use rayon::prelude::*;

use crate::brooks::QuasiCocycleSpec;
use crate::exact::NormValue;
use crate::words::{subgroup_ball, ReducedWord, WordSampler};
use crate::{Error, Result};

/// All subgroup elements up to this `F2`-length are checked exhaustively.
pub const EXHAUSTIVE_LEN: usize = 12;

#[derive(Clone, Debug, serde::Serialize)]
pub struct VanishReport {
    pub subgroup: Vec<ReducedWord>,
    pub samples: usize,
    pub maxlen: usize,
    pub seed: u64,
    pub exhaustive_len: usize,
    pub checked: usize,
    pub max_norm: NormValue,
    pub max_norm_decimal: f64,
    /// Lexicographically smallest element attaining a nonzero value, if any.
    pub witness: Option<ReducedWord>,
    /// True when every value was exactly zero on an exact backend.
    pub exact_zero: bool,
}

/// Evaluates `H` on seeded random subgroup elements of `F2`-length at most
/// `maxlen` and on every subgroup element of length at most
/// [`EXHAUSTIVE_LEN`], and reports the largest norm seen.
pub fn vanishing_check(
    spec: &QuasiCocycleSpec,
    gens: &[ReducedWord],
    samples: usize,
    maxlen: usize,
    seed: u64,
) -> Result<VanishReport> {
    if gens.is_empty() || gens.iter().any(ReducedWord::is_identity) {
        return Err(Error::Precondition("subgroup generators must be nonempty words".into()));
    }
    let max_gen_len = gens.iter().map(ReducedWord::len).max().expect("nonempty");
    if maxlen < max_gen_len {
        return Err(Error::Precondition(format!(
            "maxlen {maxlen} is below the longest generator ({max_gen_len})"
        )));
    }
    // `abstract_len` generator letters never exceed maxlen F2-letters.
    let abstract_len = (maxlen / max_gen_len).max(1);

    let mut elements: Vec<ReducedWord> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut sampler = WordSampler::substream(seed, k as u64);
            sampler.subgroup_word(gens, abstract_len).expect("generators validated")
        })
        .collect::<Vec<_>>();
    elements.extend(subgroup_ball(gens, EXHAUSTIVE_LEN)?);

    let checked = elements.len();
    let best = elements
        .into_par_iter()
        .map(|g| {
            let norm = spec.rep.norm(&spec.evaluate(&g)).expect("validated");
            Some((norm, g))
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some((na, ga)), Some((nb, gb))) => match na.cmp_value(&nb) {
                    std::cmp::Ordering::Greater => Some((na, ga)),
                    std::cmp::Ordering::Less => Some((nb, gb)),
                    std::cmp::Ordering::Equal => {
                        if ga <= gb {
                            Some((na, ga))
                        } else {
                            Some((nb, gb))
                        }
                    }
                },
            },
        );
    let (max_norm, witness_word) = best.expect("at least the identity is checked");
    let zero = max_norm.is_zero();
    Ok(VanishReport {
        subgroup: gens.to_vec(),
        samples,
        maxlen,
        seed,
        exhaustive_len: EXHAUSTIVE_LEN,
        checked,
        max_norm_decimal: max_norm.to_f64(),
        exact_zero: zero && spec.rep.is_exact(),
        max_norm,
        witness: if zero { None } else { Some(witness_word) },
    })
}
