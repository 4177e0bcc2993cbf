//! Greedy norm growth along buffered family words.
//!
//! Starting from `x = w'`, each step picks `y` in a ball of the subgroup
//! `F = <a^m, b^m>` maximizing `psi(y H(w'))` for the norming functional
//! `psi = f circ x` of `H(x)`, then extends `x <- x y w'`. Whenever the
//! chosen `y` has `psi(y H(w')) >= -mu`, the convexity constants certify
//! `|H(x y w')| >= |H(x)| + eps`; the step identity
//! `H(x y w') = H(x) + x y H(w')` is checked exactly at every step.

use crate::brooks::QuasiCocycleSpec;
use crate::exact::{
    norm_gain_at_least, nth_root_bounds, rat, rational_str, rational_to_f64, NormValue, Rational,
};
use crate::spaces::{
    norming_functional, uc_constants, LpNorm, ModulusSpec, Representation, UCConstants, UcSpace,
    Vector,
};
use crate::words::{ball, BufferedWord, ReducedWord};
use crate::{Error, Result};

const FLOAT_IDENTITY_TOL: f64 = 1e-9;
/// Seed for the sampled-modulus fallback on non-Hilbert backends.
const MODULUS_SEED: u64 = 0x71c1ab;

#[derive(Clone, Debug, serde::Serialize)]
pub struct GreedyStep {
    pub n: u32,
    /// The chosen `y`, as an abstract word in the subgroup generators.
    pub y: ReducedWord,
    /// `psi(y H(w')) >= -mu`, decided exactly on exact backends.
    pub admissible: bool,
    /// Set when the admissible step was proven to gain at least `eps`.
    pub certified: bool,
    pub pre_norm: f64,
    pub post_norm: f64,
    pub eps: String,
    pub mu: String,
    pub r: String,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GreedyReport {
    pub buffered: BufferedWord,
    pub y_ball_radius: usize,
    pub steps: Vec<GreedyStep>,
    pub initial_norm: f64,
    pub final_norm: f64,
    /// `eps` derived for the initial radius; the total certified gain is at
    /// least `certified_steps` times this (the per-step eps only shrinks as
    /// R grows, never the gain below it).
    pub eps_initial: String,
    pub certified_steps: u32,
    pub final_norm_value: NormValue,
}

fn uc_space_for(rep: &Representation) -> Result<(UcSpace, ModulusSpec)> {
    match rep {
        Representation::Trivial => Ok((UcSpace::Euclidean(1), ModulusSpec::Analytic)),
        Representation::Regular(LpNorm::Exact(2)) => {
            Ok((UcSpace::RegularLp(LpNorm::Exact(2)), ModulusSpec::Analytic))
        }
        Representation::Regular(LpNorm::Exact(p)) if *p >= 2 => Ok((
            UcSpace::RegularLp(LpNorm::Exact(*p)),
            ModulusSpec::Sampled { trials: 4000, seed: MODULUS_SEED },
        )),
        Representation::Regular(LpNorm::Float(p)) if *p > 1.0 => Ok((
            UcSpace::RegularLp(LpNorm::Float(*p)),
            ModulusSpec::Sampled { trials: 4000, seed: MODULUS_SEED },
        )),
        Representation::Matrix(m) => Ok((UcSpace::Euclidean(2 * m.dim()), ModulusSpec::Analytic)),
        _ => Err(Error::Precondition(
            "the greedy search needs a uniformly convex backend (l^p with 1 < p < inf, or matrices)"
                .into(),
        )),
    }
}

/// Smallest eighth-integer grid point at or above the norm; exact on exact
/// backends, so the derived constants provably cover the current radius.
fn radius_upper_bound(norm: &NormValue) -> Result<Rational> {
    match norm {
        NormValue::Exact { pow, p } => {
            let hi = nth_root_bounds(pow, *p, 40).1;
            let eighths = (hi * rat(8, 1)).ceil();
            Ok(eighths / rat(8, 1))
        }
        NormValue::Approx(x) => {
            let eighths = (x * 8.0).ceil() + 1.0;
            Ok(rat(eighths as i64, 8))
        }
    }
}

pub fn greedy_search(
    bw: &BufferedWord,
    e: &Vector,
    rep: &Representation,
    steps: u32,
    y_ball_radius: usize,
) -> Result<GreedyReport> {
    let (space, modulus) = uc_space_for(rep)?;
    let spec = QuasiCocycleSpec::new(bw.w.clone(), e.clone(), rep.clone())?;

    // normalized seed vector: |e| = 1
    let e_norm = rep.norm(e)?;
    let normalized = match &e_norm {
        NormValue::Exact { pow, .. } => pow == &rat(1, 1),
        NormValue::Approx(x) => (x - 1.0).abs() <= 1e-12,
    };
    if !normalized {
        return Err(Error::Precondition("the greedy search expects |e| = 1".into()));
    }

    let h_wprime = spec.evaluate(&bw.w_prime);
    let h_wprime_norm = rep.norm(&h_wprime)?;
    if h_wprime_norm.cmp_value(&e_norm) != std::cmp::Ordering::Equal {
        return Err(Error::Invariant(
            "|H(w')| != |e|: the buffered word does not carry exactly one copy".into(),
        ));
    }

    // y candidates in lexicographic order, as abstract subgroup words
    let candidates: Vec<ReducedWord> = ball(y_ball_radius).collect();

    let mut x = bw.w_prime.clone();
    let mut h_x = h_wprime.clone();
    let initial_norm_value = rep.norm(&h_x)?;
    let initial_norm = initial_norm_value.to_f64();
    let r0 = radius_upper_bound(&initial_norm_value)?;
    let eps_initial = uc_constants(space, &r0, modulus)?.eps.clone();

    let mut report_steps: Vec<GreedyStep> = Vec::with_capacity(steps as usize);
    let mut certified_steps = 0u32;

    for n in 1..=steps {
        let pre_norm_value = rep.norm(&h_x)?;
        let r = radius_upper_bound(&pre_norm_value)?;
        let constants: UCConstants = uc_constants(space, &r, modulus)?;
        let functional = norming_functional(rep, &h_x)?;

        // pick y maximizing psi(y H(w')) = f(x y H(w')); exact backends use
        // the raw dual pairing (same maximizer, no radicals), ties broken by
        // lexicographic order of the candidates
        let mut best: Option<(ReducedWord, Vector)> = None;
        let mut best_exact: Option<Rational> = None;
        let mut best_float = f64::NEG_INFINITY;
        let exact_scores = rep.is_exact();
        for y in &candidates {
            let xy = x.mul(&bw.subgroup_element(y));
            let moved = rep.act(&xy, &h_wprime)?;
            if exact_scores {
                let score = functional.eval_raw(&moved)?;
                if best_exact.as_ref().is_none_or(|b| &score > b) {
                    best_exact = Some(score);
                    best = Some((y.clone(), moved));
                }
            } else {
                let score = functional.eval(&moved)?;
                if score > best_float {
                    best_float = score;
                    best = Some((y.clone(), moved));
                }
            }
        }
        let (y, moved) = best.expect("candidate ball is nonempty");

        let admissible = functional.ge_neg_mu(&moved, &constants.mu)?;

        // extend and check the combinatorial identity exactly
        let x_new = x.mul(&bw.subgroup_element(&y)).mul(&bw.w_prime);
        let h_new = spec.evaluate(&x_new);
        let identity_rhs = h_x.add(&moved)?;
        if rep.is_exact() {
            if h_new != identity_rhs {
                return Err(Error::Invariant(format!(
                    "step {n}: H(x y w') != H(x) + x y H(w')"
                )));
            }
        } else if h_new.max_abs_diff(&identity_rhs)? > FLOAT_IDENTITY_TOL {
            return Err(Error::Invariant(format!(
                "step {n}: H(x y w') deviates from H(x) + x y H(w') beyond {FLOAT_IDENTITY_TOL}"
            )));
        }

        let post_norm_value = rep.norm(&h_new)?;
        let mut certified = false;
        if admissible {
            let gained = match (&post_norm_value, &pre_norm_value) {
                (NormValue::Exact { pow: post, p }, NormValue::Exact { pow: pre, .. }) => {
                    norm_gain_at_least(post, pre, *p, &constants.eps)?
                }
                _ => {
                    post_norm_value.to_f64()
                        >= pre_norm_value.to_f64() + rational_to_f64(&constants.eps) - 1e-12
                }
            };
            if !gained {
                return Err(Error::Invariant(format!(
                    "step {n}: admissible step gained less than eps = {}",
                    rational_str(&constants.eps)
                )));
            }
            certified = true;
            certified_steps += 1;
        }

        report_steps.push(GreedyStep {
            n,
            y,
            admissible,
            certified,
            pre_norm: pre_norm_value.to_f64(),
            post_norm: post_norm_value.to_f64(),
            eps: rational_str(&constants.eps),
            mu: rational_str(&constants.mu),
            r: rational_str(&r),
        });
        x = x_new;
        h_x = h_new;
    }

    let final_norm_value = rep.norm(&h_x)?;
    Ok(GreedyReport {
        buffered: bw.clone(),
        y_ball_radius,
        steps: report_steps,
        initial_norm,
        final_norm: final_norm_value.to_f64(),
        eps_initial: rational_str(&eps_initial),
        certified_steps,
        final_norm_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;
    use crate::words::BufferedWord;

    fn w(text: &str) -> ReducedWord {
        ReducedWord::parse(text).unwrap()
    }

    #[test]
    fn trivial_backend_gains_one_per_step() {
        let bw = BufferedWord::with_default_margins(&w("aba")).unwrap();
        let report = greedy_search(
            &bw,
            &Vector::Scalar(rat_int(1)),
            &Representation::Trivial,
            12,
            1,
        )
        .unwrap();
        assert_eq!(report.certified_steps, 12);
        for (i, step) in report.steps.iter().enumerate() {
            assert!(step.admissible && step.certified);
            assert!((step.post_norm - step.pre_norm - 1.0).abs() <= 1e-12);
            assert!((step.pre_norm - (i as f64 + 1.0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn l2_norms_strictly_increase_with_certificates() {
        let bw = BufferedWord::with_default_margins(&w("aba")).unwrap();
        let report = greedy_search(
            &bw,
            &Vector::delta_identity(),
            &Representation::Regular(LpNorm::Exact(2)),
            20,
            1,
        )
        .unwrap();
        assert_eq!(report.certified_steps, 20);
        // supports are disjoint, so |H(x_n)|^2 = n + 1 exactly
        assert_eq!(report.final_norm_value, NormValue::exact(rat_int(21), 2));
        for pair in report.steps.windows(2) {
            assert!(pair[1].post_norm > pair[0].post_norm);
        }
    }

    #[test]
    fn l3_certificates_through_root_enclosures() {
        // p = 3 exercises the sampled modulus and the bisection-based
        // exact gain comparison
        let bw = BufferedWord::with_default_margins(&w("aba")).unwrap();
        let report = greedy_search(
            &bw,
            &Vector::delta_identity(),
            &Representation::Regular(LpNorm::Exact(3)),
            4,
            1,
        )
        .unwrap();
        assert_eq!(report.certified_steps, 4);
        assert_eq!(report.final_norm_value, NormValue::exact(rat_int(5), 3));
    }

    #[test]
    fn rejects_unnormalized_seed_vectors() {
        let bw = BufferedWord::with_default_margins(&w("aba")).unwrap();
        let err = greedy_search(
            &bw,
            &Vector::Scalar(rat_int(2)),
            &Representation::Trivial,
            3,
            1,
        );
        assert!(err.is_err());
    }

    #[test]
    fn rejects_non_uc_backends() {
        let bw = BufferedWord::with_default_margins(&w("aba")).unwrap();
        let err = greedy_search(
            &bw,
            &Vector::delta_identity(),
            &Representation::Regular(LpNorm::Inf),
            3,
            1,
        );
        assert!(err.is_err());
    }
}
