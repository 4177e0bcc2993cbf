//! Independence evidence for the family `H_m = H_{w_m, e}` with
//! `w_m = w' a^{5m} b^{5m} a^{7m} b^{7m}`: the patterns with smaller `m`
//! vanish exactly on family words built for the largest `m`, on which the
//! largest pattern grows linearly.

use num_integer::gcd;

use super::growth::{series_slope, GrowthFamily, GrowthSeries};
use crate::brooks::QuasiCocycleSpec;
use crate::exact::{rational_str, NormValue, Rational};
use crate::spaces::{Representation, Vector};
use crate::words::{family_word, word_wm, BufferedWord, ReducedWord, WordSampler};
use crate::{Error, Result};

const FAMILY_RETRY_LIMIT: u32 = 8;

#[derive(Clone, Debug, serde::Serialize)]
pub struct IndependenceReport {
    pub m_list: Vec<u64>,
    pub patterns: Vec<ReducedWord>,
    pub witnesses: Vec<ReducedWord>,
    /// `matrix[i][j] = |H_{m_i}(witness_j)|`.
    pub matrix: Vec<Vec<NormValue>>,
    /// For each pattern except the largest: exactly zero on every witness.
    pub zero_flags: Vec<bool>,
    /// Least-squares slope of `|H_max(x_n)|` against `n`.
    pub slope: f64,
    /// Exact backends: per-step differences of `|H_max(x_n)|^p`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pow_steps: Option<Vec<String>>,
    pub retries: u32,
    /// Exact zero pattern plus positive growth of the largest pattern.
    pub verdict: bool,
}

/// Growth gate: exact backends need every step of `|H(x_n)|^p` to gain at
/// least `|e|^p / 2`; floating backends use the least-squares slope against
/// `0.5 |e|`.
fn growth_passes(
    rep: &Representation,
    e: &Vector,
    series: &GrowthSeries,
    pow_steps: &Option<Vec<Rational>>,
) -> bool {
    match pow_steps {
        Some(steps) => {
            let e_pow = match rep.norm(e).expect("validated") {
                NormValue::Exact { pow, .. } => pow,
                NormValue::Approx(_) => unreachable!("exact steps imply exact backend"),
            };
            let half = e_pow / crate::exact::rat_int(2);
            !steps.is_empty() && steps.iter().all(|d| d >= &half)
        }
        None => {
            let e_norm = rep.norm(e).expect("validated").to_f64();
            series_slope(series) >= 0.5 * e_norm
        }
    }
}

pub fn independence_matrix(
    m_list: &[u64],
    w_prime: &ReducedWord,
    e: &Vector,
    rep: &Representation,
    n_witnesses: u64,
    seed: u64,
) -> Result<IndependenceReport> {
    if m_list.is_empty() {
        return Err(Error::Precondition("m list must be nonempty".into()));
    }
    if !m_list.windows(2).all(|p| p[0] < p[1]) {
        return Err(Error::Precondition("m list must be strictly increasing".into()));
    }
    for &m in m_list {
        if m == 0 || gcd(m, 6) != 1 {
            return Err(Error::Precondition(format!("m = {m} must satisfy gcd(m, 6) = 1")));
        }
    }
    if n_witnesses == 0 {
        return Err(Error::Precondition("need at least one witness".into()));
    }

    let patterns: Vec<ReducedWord> =
        m_list.iter().map(|&m| word_wm(w_prime, m)).collect::<Result<_>>()?;
    let specs: Vec<QuasiCocycleSpec> = patterns
        .iter()
        .map(|w| QuasiCocycleSpec::new(w.clone(), e.clone(), rep.clone()))
        .collect::<Result<_>>()?;
    let w_max = patterns.last().expect("nonempty");

    // witness family for the largest pattern, with doubled-m retries
    let mut m_exp = crate::words::default_subgroup_exp(w_max);
    let ell = crate::words::default_buffer_len(w_max);
    let mut retries = 0u32;
    let (witnesses, _bw): (Vec<ReducedWord>, BufferedWord) = loop {
        let attempt = (|| -> Result<(Vec<ReducedWord>, BufferedWord)> {
            let bw = crate::words::buffered(w_max, ell, m_exp)?;
            let mut sampler = WordSampler::new(seed);
            let ys: Vec<ReducedWord> = (0..n_witnesses).map(|_| sampler.word(1)).collect();
            let witnesses = (1..=n_witnesses as usize)
                .map(|n| family_word(&bw, &ys[..n]))
                .collect::<Result<Vec<_>>>()?;
            Ok((witnesses, bw))
        })();
        match attempt {
            Ok(out) => break out,
            Err(Error::Invariant(_)) if retries < FAMILY_RETRY_LIMIT => {
                retries += 1;
                m_exp *= 2;
            }
            Err(e) => return Err(e),
        }
    };

    let matrix: Vec<Vec<NormValue>> = specs
        .iter()
        .map(|spec| {
            witnesses
                .iter()
                .map(|x| spec.rep.norm(&spec.evaluate(x)).expect("validated"))
                .collect()
        })
        .collect();

    let zero_flags: Vec<bool> = matrix[..matrix.len() - 1]
        .iter()
        .map(|row| row.iter().all(NormValue::is_zero))
        .collect();

    // growth data for the largest pattern, directly from the witness row
    let last_row = matrix.last().expect("nonempty");
    let series = GrowthSeries {
        family: format!("independence({})", w_max),
        points: last_row
            .iter()
            .enumerate()
            .map(|(i, norm)| super::growth::GrowthPoint {
                n: i as u64 + 1,
                norm_decimal: norm.to_f64(),
                norm: norm.clone(),
                coordinate: None,
                orbit_sum_norms: None,
            })
            .collect(),
        certified_bound: None,
        orbit_classes: None,
        gap: None,
        exceeded: Vec::new(),
        retries,
    };
    let pow_steps = super::growth::series_pow_steps(&series);
    let growth_ok = growth_passes(rep, e, &series, &pow_steps);
    let zeros_ok = rep.is_exact() && zero_flags.iter().all(|&z| z);

    Ok(IndependenceReport {
        m_list: m_list.to_vec(),
        patterns,
        witnesses,
        matrix,
        zero_flags,
        slope: series_slope(&series),
        pow_steps: pow_steps.map(|v| v.iter().map(rational_str).collect()),
        retries,
        verdict: zeros_ok && growth_ok,
    })
}

/// Degenerate single-pattern form: a plain growth probe over family words.
pub fn single_pattern_growth(
    m: u64,
    w_prime: &ReducedWord,
    e: &Vector,
    rep: &Representation,
    n_max: u64,
    seed: u64,
) -> Result<GrowthSeries> {
    let pattern = word_wm(w_prime, m)?;
    let spec = QuasiCocycleSpec::new(pattern, e.clone(), rep.clone())?;
    super::growth::growth_probe(
        &spec,
        &GrowthFamily::FamilyWords { buffer_len: None, subgroup_exp: None, seed },
        n_max,
    )
}
