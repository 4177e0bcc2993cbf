//! Growth of `|H(x_n)|` along structured word families: powers of a fixed
//! element (with certified cyclic bounds on matrix backends), buffered
//! family words, and the harmonic `l^inf` example.

use nalgebra::DVector;
use num_complex::Complex64;
use num_traits::Zero;

use crate::brooks::QuasiCocycleSpec;
use crate::exact::{rat_int, rational_str, NormValue, Rational};
use crate::spaces::{spectral_gap, GroupVector, LpNorm, Representation, Vector};
use crate::words::{
    buffered, family_word, occurrences, ReducedWord, Sign, WordSampler,
    MAX_WORD_LEN,
};
use crate::{Error, Result};

/// Gaps below this are treated as "no certified bound available".
pub const GAP_FLOOR: f64 = 1e-6;
/// Tolerance on the certified cyclic bound for floating backends.
pub const BOUND_TOL: f64 = 1e-6;
const FAMILY_RETRY_LIMIT: u32 = 8;

#[derive(Clone, Debug)]
pub enum GrowthFamily {
    /// `x_n = g^n`.
    Powers { g: ReducedWord, orbit_sums: bool },
    /// `x_n = y_1 w' ... y_n w'` with seeded random `y_i` from the radius-1
    /// ball of `<a^m, b^m>` minus the identity.
    FamilyWords { buffer_len: Option<usize>, subgroup_exp: Option<usize>, seed: u64 },
    /// `x_n = w^n` against the harmonic tail vector
    /// `f(w^-i) = 1/i` (truncated at `2 n_max + 2`), on the `l^inf` backend.
    Harmonic,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GrowthPoint {
    pub n: u64,
    pub norm: NormValue,
    pub norm_decimal: f64,
    /// Harmonic mode: the coordinate of `H(w^n)` at the identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinate: Option<String>,
    /// Norms of the per-class partial orbit sums, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_sum_norms: Option<Vec<f64>>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GrowthSeries {
    pub family: String,
    pub points: Vec<GrowthPoint>,
    /// `2 |e| (orbit classes) / gap` when the matrix backend gap allows it.
    pub certified_bound: Option<f64>,
    pub orbit_classes: Option<usize>,
    pub gap: Option<f64>,
    /// Values exceeding the certified bound (plus tolerance); must stay empty.
    pub exceeded: Vec<u64>,
    /// Family-words mode: how many times the subgroup exponent was doubled.
    pub retries: u32,
}

pub fn growth_probe(
    spec: &QuasiCocycleSpec,
    family: &GrowthFamily,
    n_max: u64,
) -> Result<GrowthSeries> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    match family {
        GrowthFamily::Powers { g, orbit_sums } => powers_probe(spec, g, *orbit_sums, n_max),
        GrowthFamily::FamilyWords { buffer_len, subgroup_exp, seed } => {
            family_probe(spec, *buffer_len, *subgroup_exp, *seed, n_max)
        }
        GrowthFamily::Harmonic => harmonic_probe(spec, n_max),
    }
}

fn point(n: u64, norm: NormValue) -> GrowthPoint {
    GrowthPoint { n, norm_decimal: norm.to_f64(), norm, coordinate: None, orbit_sum_norms: None }
}

fn powers_probe(
    spec: &QuasiCocycleSpec,
    g: &ReducedWord,
    orbit_sums: bool,
    n_max: u64,
) -> Result<GrowthSeries> {
    if g.is_identity() {
        return Err(Error::Precondition("powers probe needs a nontrivial element".into()));
    }
    let family = format!("powers({g})");
    if let Representation::Matrix(rep) = &spec.rep {
        if g.is_cyclically_reduced() {
            return powers_probe_periodic(spec, rep.clone(), g, orbit_sums, n_max, family);
        }
    }
    // Direct evaluation; fine for the exact backends at modest n.
    if g.len() as u64 * n_max > MAX_WORD_LEN as u64 {
        return Err(Error::Precondition(format!(
            "g^{n_max} exceeds the {MAX_WORD_LEN}-letter cap"
        )));
    }
    let points = (1..=n_max)
        .map(|n| {
            let value = spec.evaluate(&g.pow(n as i64));
            point(n, spec.rep.norm(&value).expect("validated"))
        })
        .collect();
    Ok(GrowthSeries {
        family,
        points,
        certified_bound: None,
        orbit_classes: None,
        gap: None,
        exceeded: Vec::new(),
        retries: 0,
    })
}

/// One arithmetic progression of occurrences along the periodic spelling of
/// `g^n`: positions `q, q + |g|, q + 2|g|, ...` of copies of `w` (forward or
/// backward), each contributing `rho(prefix(q)) e` with a sign.
struct OrbitClass {
    next_q: usize,
    needs: usize, // occupied letters beyond q: |w| for forward copies, 0 backward
    sum: DVector<Complex64>,
    next_vec: DVector<Complex64>,
}

fn powers_probe_periodic(
    spec: &QuasiCocycleSpec,
    rep: crate::spaces::MatrixRep,
    g: &ReducedWord,
    orbit_sums: bool,
    n_max: u64,
    family: String,
) -> Result<GrowthSeries> {
    let Vector::Complex(e) = &spec.e else { unreachable!("matrix backend") };
    let glen = g.len();
    let wlen = spec.w.len();
    let m_g = rep.matrix_of(g);

    // Window large enough that every periodic residue shows up.
    let k0 = 1 + wlen.div_ceil(glen);
    let occ_at = |k: usize| occurrences(&spec.w, &g.pow(k as i64)).expect("validated");
    let base = occ_at(k0 + 1);
    let per_period = base.len() as i64 - occ_at(k0).len() as i64;
    let stabilized = occ_at(k0 + 2).len() as i64 - base.len() as i64;
    if per_period != stabilized {
        return Err(Error::Invariant(format!(
            "occurrence counts along powers of {g} did not stabilize"
        )));
    }

    let mut residues_pos: Vec<usize> = Vec::new();
    let mut residues_neg: Vec<usize> = Vec::new();
    for o in &base {
        let r = o.start % glen;
        let bucket = if o.sign == Sign::Pos { &mut residues_pos } else { &mut residues_neg };
        if !bucket.contains(&r) {
            bucket.push(r);
        }
    }
    residues_pos.sort_unstable();
    residues_neg.sort_unstable();
    let classes_total = residues_pos.len() + residues_neg.len();
    if per_period != classes_total as i64 {
        return Err(Error::Invariant(format!(
            "per-period occurrence gain {per_period} does not match {classes_total} residue classes"
        )));
    }

    let window = g.pow((k0 + 1) as i64);
    let mut classes: Vec<OrbitClass> = Vec::new();
    for (&r, sign, needs) in residues_pos
        .iter()
        .map(|r| (r, 1.0f64, wlen))
        .chain(residues_neg.iter().map(|r| (r, -1.0f64, 0usize)))
    {
        // first valid position congruent to r: starts are free, end
        // positions must leave room for the backward copy
        let jumps = if needs == 0 && wlen > r { (wlen - r).div_ceil(glen) } else { 0 };
        let q0 = r + jumps * glen;
        let seed = rep.apply(&window.prefix(q0), e) * Complex64::new(sign, 0.0);
        classes.push(OrbitClass {
            next_q: q0,
            needs,
            sum: DVector::from_element(rep.dim(), Complex64::zero()),
            next_vec: seed,
        });
    }

    let gap = spectral_gap(&rep, g);
    let e_norm = e.norm();
    let (certified_bound, exceed_check) = if gap > GAP_FLOOR {
        (Some(2.0 * e_norm * classes_total as f64 / gap), true)
    } else {
        (None, false)
    };

    let mut points = Vec::with_capacity(n_max as usize);
    let mut exceeded = Vec::new();
    for n in 1..=n_max {
        let total_len = n as usize * glen;
        for class in &mut classes {
            while class.next_q + class.needs <= total_len {
                class.sum += &class.next_vec;
                class.next_vec = &m_g * &class.next_vec;
                class.next_q += glen;
            }
        }
        let mut total = DVector::from_element(rep.dim(), Complex64::zero());
        for class in &classes {
            total += &class.sum;
        }
        let norm = total.norm();
        let mut p = point(n, NormValue::Approx(norm));
        if orbit_sums {
            p.orbit_sum_norms = Some(classes.iter().map(|c| c.sum.norm()).collect());
        }
        if exceed_check && norm > certified_bound.unwrap() + BOUND_TOL {
            exceeded.push(n);
        }
        points.push(p);
    }

    // Guard the incremental bookkeeping against the direct evaluation once.
    let n_check = n_max.min((k0 + 2) as u64);
    let direct = spec.evaluate(&g.pow(n_check as i64));
    let direct_norm = spec.rep.norm(&direct).expect("validated").to_f64();
    let incremental = points[n_check as usize - 1].norm_decimal;
    if (direct_norm - incremental).abs() > 1e-8 * (1.0 + direct_norm) {
        return Err(Error::Invariant(format!(
            "periodic power sum disagrees with direct evaluation at n = {n_check}: {incremental} vs {direct_norm}"
        )));
    }

    Ok(GrowthSeries {
        family,
        points,
        certified_bound,
        orbit_classes: Some(classes_total),
        gap: Some(gap),
        exceeded,
        retries: 0,
    })
}

fn family_probe(
    spec: &QuasiCocycleSpec,
    buffer_len: Option<usize>,
    subgroup_exp: Option<usize>,
    seed: u64,
    n_max: u64,
) -> Result<GrowthSeries> {
    let ell = buffer_len.unwrap_or_else(|| crate::words::default_buffer_len(&spec.w));
    let mut m = subgroup_exp.unwrap_or_else(|| crate::words::default_subgroup_exp(&spec.w));
    let mut retries = 0u32;
    loop {
        match family_probe_once(spec, ell, m, seed, n_max) {
            Ok(mut series) => {
                series.retries = retries;
                return Ok(series);
            }
            Err(Error::Invariant(_)) if retries < FAMILY_RETRY_LIMIT => {
                retries += 1;
                m *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Draws the `y_i` as single abstract letters (the radius-1 ball of the
/// subgroup minus the identity).
fn random_ys(sampler: &mut WordSampler, count: u64) -> Vec<ReducedWord> {
    (0..count).map(|_| sampler.word(1)).collect()
}

fn family_probe_once(
    spec: &QuasiCocycleSpec,
    ell: usize,
    m: usize,
    seed: u64,
    n_max: u64,
) -> Result<GrowthSeries> {
    let bw = buffered(&spec.w, ell, m)?;
    let mut sampler = WordSampler::new(seed);
    let ys = random_ys(&mut sampler, n_max);
    let mut points = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let x = family_word(&bw, &ys[..n as usize])?;
        let value = spec.evaluate(&x);
        points.push(point(n, spec.rep.norm(&value).expect("validated")));
    }
    Ok(GrowthSeries {
        family: format!("family({}, l={ell}, m={m}, seed={seed})", bw.w),
        points,
        certified_bound: None,
        orbit_classes: None,
        gap: None,
        exceeded: Vec::new(),
        retries: 0,
    })
}

/// Builds the truncated harmonic tail `f = sum_{i=1}^{M} (1/i) delta_{w^-i}`
/// with `M = 2 n_max + 2`; the reported value is the largest coordinate of
/// `H_{w,f}(w^n)` in absolute value (its `l^inf` norm), with the coordinate
/// at the identity alongside.
fn harmonic_probe(spec: &QuasiCocycleSpec, n_max: u64) -> Result<GrowthSeries> {
    if !matches!(spec.rep, Representation::Regular(LpNorm::Inf)) {
        return Err(Error::Precondition("the harmonic probe runs on the l^inf backend".into()));
    }
    let w = &spec.w;
    let truncation = 2 * n_max + 2;
    if w.len() as u64 * truncation > MAX_WORD_LEN as u64 {
        return Err(Error::Precondition("harmonic truncation exceeds the word-length cap".into()));
    }
    let tail = GroupVector::from_entries((1..=truncation).map(|i| {
        (w.pow(-(i as i64)), Rational::new(1.into(), i.into()))
    }));
    let harmonic_spec =
        QuasiCocycleSpec::new(w.clone(), Vector::Group(tail), spec.rep.clone())?;
    let mut points = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let Vector::Group(value) = harmonic_spec.evaluate(&w.pow(n as i64)) else {
            unreachable!("regular backend")
        };
        let norm = NormValue::rational(value.sup_abs());
        let mut p = point(n, norm);
        p.coordinate = Some(rational_str(&value.coeff(&ReducedWord::identity())));
        points.push(p);
    }
    Ok(GrowthSeries {
        family: format!("harmonic({w})"),
        points,
        certified_bound: None,
        orbit_classes: None,
        gap: None,
        exceeded: Vec::new(),
        retries: 0,
    })
}

/// Least-squares slope of the decimal norms against `n`.
pub fn series_slope(series: &GrowthSeries) -> f64 {
    let pts = &series.points;
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.n as f64).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.norm_decimal).sum::<f64>() / n;
    let cov: f64 = pts.iter().map(|p| (p.n as f64 - mean_x) * (p.norm_decimal - mean_y)).sum();
    let var: f64 = pts.iter().map(|p| (p.n as f64 - mean_x).powi(2)).sum();
    cov / var
}

/// Exact per-step differences of `|H(x_n)|^p`, when the backend is exact.
pub fn series_pow_steps(series: &GrowthSeries) -> Option<Vec<Rational>> {
    let mut prev = rat_int(0);
    let mut out = Vec::new();
    for p in &series.points {
        match &p.norm {
            NormValue::Exact { pow, .. } => {
                out.push(pow - &prev);
                prev = pow.clone();
            }
            NormValue::Approx(_) => return None,
        }
    }
    Some(out)
}
