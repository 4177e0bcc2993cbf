//! Defect suprema over finite pair sets.
//!
//! The reported value is a supremum over an explicit finite set (a ball or a
//! seeded sample), so all assertions against the a-priori bound are
//! one-sided: `observed <= bound` is meaningful, equality with the true
//! defect is not claimed.

use rand::Rng;
use rayon::prelude::*;

use super::QuasiCocycle;
use crate::exact::NormValue;
use crate::spaces::Vector;
use crate::words::{ball, ReducedWord, WordSampler};
use crate::{Error, Result};

/// Exact enumeration above this radius is refused without `force`.
pub const EXACT_RADIUS_GUARD: usize = 6;

#[derive(Clone, Copy, Debug, serde::Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DefectMode {
    Exact { radius: usize },
    Sampled { maxlen: usize, count: usize, seed: u64 },
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct DefectReport {
    #[serde(flatten)]
    pub mode: DefectMode,
    pub observed: NormValue,
    pub observed_decimal: f64,
    pub witness: (ReducedWord, ReducedWord),
    /// `6 |w| |e|` when the quasi-cocycle carries one.
    pub bound: Option<NormValue>,
}

impl DefectReport {
    /// `observed <= bound`; `None` when no bound is attached.
    pub fn within_bound(&self) -> Option<bool> {
        self.bound
            .as_ref()
            .map(|b| self.observed.cmp_value(b) != std::cmp::Ordering::Greater)
    }
}

/// The cocycle-identity error `H(g g') - H(g) - g H(g')`.
pub fn defect_term<Q: QuasiCocycle>(qc: &Q, g: &ReducedWord, g2: &ReducedWord) -> Vector {
    let joint = qc.eval(&g.mul(g2));
    let moved = qc.rep().act(g, &qc.eval(g2)).expect("validated");
    joint
        .sub(&qc.eval(g))
        .and_then(|v| v.sub(&moved))
        .expect("uniform vector kind")
}

type Best = Option<(NormValue, (ReducedWord, ReducedWord))>;

/// Associative max with deterministic tie-break on the lexicographically
/// smaller witness pair, so parallel reduction order cannot change the
/// report.
fn better(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((na, wa)), Some((nb, wb))) => match na.cmp_value(&nb) {
            std::cmp::Ordering::Greater => Some((na, wa)),
            std::cmp::Ordering::Less => Some((nb, wb)),
            std::cmp::Ordering::Equal => {
                if wa <= wb {
                    Some((na, wa))
                } else {
                    Some((nb, wb))
                }
            }
        },
    }
}

/// Defect supremum of `qc` over the requested pair set, with the witness
/// pair attaining it. `bound` is attached by the caller when one exists.
pub fn defect<Q: QuasiCocycle>(
    qc: &Q,
    mode: DefectMode,
    bound: Option<NormValue>,
    force: bool,
) -> Result<DefectReport> {
    let best: Best = match mode {
        DefectMode::Exact { radius } => {
            if radius > EXACT_RADIUS_GUARD && !force {
                return Err(Error::Precondition(format!(
                    "exact defect over ball({radius})^2 exceeds the radius guard {EXACT_RADIUS_GUARD}; pass force to override"
                )));
            }
            let words: Vec<ReducedWord> = ball(radius).collect();
            let values: Vec<Vector> = words.par_iter().map(|g| qc.eval(g)).collect();
            let n = words.len();
            (0..n * n)
                .into_par_iter()
                .with_min_len(256)
                .map(|k| {
                    let (i, j) = (k / n, k % n);
                    let joint = qc.eval(&words[i].mul(&words[j]));
                    let moved = qc.rep().act(&words[i], &values[j]).expect("validated");
                    let term = joint
                        .sub(&values[i])
                        .and_then(|v| v.sub(&moved))
                        .expect("uniform vector kind");
                    let norm = qc.rep().norm(&term).expect("validated");
                    Some((norm, (words[i].clone(), words[j].clone())))
                })
                .reduce(|| None, better)
        }
        DefectMode::Sampled { maxlen, count, seed } => (0..count)
            .into_par_iter()
            .map(|k| {
                let mut sampler = WordSampler::substream(seed, k as u64);
                let len_g = sampler.rng().random_range(0..=maxlen);
                let g = sampler.word(len_g);
                let len_h = sampler.rng().random_range(0..=maxlen);
                let h = sampler.word(len_h);
                let term = defect_term(qc, &g, &h);
                let norm = qc.rep().norm(&term).expect("validated");
                Some((norm, (g, h)))
            })
            .reduce(|| None, better),
    };
    let (observed, witness) = best.ok_or_else(|| Error::Precondition("empty pair set".into()))?;
    Ok(DefectReport {
        mode,
        observed_decimal: observed.to_f64(),
        observed,
        witness,
        bound,
    })
}
