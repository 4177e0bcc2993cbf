//! Property test of the convexity step inequality: sampled `(v, e)` with
//! `|v| <= R`, `|e| >= 1/2` and `f(e) >= -mu` must satisfy
//! `|v + e| >= |v| + eps`.
//!
//! The run also re-validates the constants' defining constraint and injects
//! deterministic worst-case pairs (`f(e) = -mu`, `|e| = 1/2`) alongside the
//! random trials, so a broken set of constants is caught either by the
//! constraint check or by a sampled counterexample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::rational_to_f64;
use crate::spaces::{LpNorm, UCConstants, UcSpace};
use crate::{Error, Result};

const ADVERSARIAL_INJECTIONS: u64 = 128;

#[derive(Clone, Debug, serde::Serialize)]
pub struct UcCheckReport {
    pub space: UcSpace,
    pub trials: u64,
    /// Trials that passed the `|e| >= 1/2`, `f(e) >= -mu` filter.
    pub counted: u64,
    pub filtered_out: u64,
    pub adversarial_injected: u64,
    /// Counterexamples to `|v + e| >= |v| + eps` among counted trials.
    pub conclusion_violations: u64,
    /// 1 when the constants fail their defining constraint.
    pub constraint_violations: u64,
    pub violations_total: u64,
    /// Smallest observed `|v + e| - |v| - eps` among counted trials.
    pub worst_margin: f64,
}

fn lp_norm(x: &[f64], p: Option<f64>) -> f64 {
    match p {
        Some(p) => x.iter().map(|c| c.abs().powf(p)).sum::<f64>().powf(1.0 / p),
        None => x.iter().fold(0.0f64, |m, c| m.max(c.abs())),
    }
}

/// Norming-functional value `f(e)` for `f` dual to `v` in `l^p`.
fn dual_pairing(v: &[f64], e: &[f64], p: Option<f64>) -> f64 {
    let p = p.expect("uniformly convex spaces have finite p");
    let nv = lp_norm(v, Some(p));
    let raw: f64 = v
        .iter()
        .zip(e)
        .map(|(a, b)| a.signum() * a.abs().powf(p - 1.0) * b)
        .sum();
    raw / nv.powf(p - 1.0)
}

struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    fn normal(&mut self) -> f64 {
        let u1: f64 = self.rng.random::<f64>().max(1e-12);
        let u2: f64 = self.rng.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    fn direction(&mut self, dim: usize, p: Option<f64>) -> Vec<f64> {
        loop {
            let x: Vec<f64> = (0..dim).map(|_| self.normal()).collect();
            let n = lp_norm(&x, p);
            if n > 1e-9 {
                return x.iter().map(|c| c / n).collect();
            }
        }
    }
}

pub fn uc_inequality_test(
    space: UcSpace,
    constants: &UCConstants,
    trials: u64,
    seed: u64,
) -> Result<UcCheckReport> {
    let p = match space {
        UcSpace::Euclidean(_) => Some(2.0),
        UcSpace::RegularLp(LpNorm::Exact(p)) if p >= 2 => Some(f64::from(p)),
        UcSpace::RegularLp(LpNorm::Float(p)) if p > 1.0 => Some(p),
        _ => {
            return Err(Error::Precondition(
                "the inequality test needs a uniformly convex l^p space".into(),
            ))
        }
    };
    let dim = match space {
        UcSpace::Euclidean(d) => d.max(2),
        UcSpace::RegularLp(_) => 16,
    };
    let r = rational_to_f64(&constants.r);
    let eps = rational_to_f64(&constants.eps);
    let mu = rational_to_f64(&constants.mu);

    let constraint_violations = u64::from(!constants.constraint_holds());

    let mut sampler = Sampler { rng: ChaCha8Rng::seed_from_u64(seed) };
    let mut counted = 0u64;
    let mut filtered_out = 0u64;
    let mut conclusion_violations = 0u64;
    let mut worst_margin = f64::INFINITY;

    let mut run_trial = |v: Vec<f64>, e: Vec<f64>| {
        let ne = lp_norm(&e, p);
        if ne < 0.5 {
            filtered_out += 1;
            return;
        }
        if dual_pairing(&v, &e, p) < -mu {
            filtered_out += 1;
            return;
        }
        counted += 1;
        let sum: Vec<f64> = v.iter().zip(&e).map(|(a, b)| a + b).collect();
        let margin = lp_norm(&sum, p) - lp_norm(&v, p) - eps;
        if margin < worst_margin {
            worst_margin = margin;
        }
        if margin < 0.0 {
            conclusion_violations += 1;
        }
    };

    let random_trials = trials.saturating_sub(ADVERSARIAL_INJECTIONS);
    for _ in 0..random_trials {
        let scale: f64 = sampler.rng.random::<f64>() * r;
        let v: Vec<f64> = sampler.direction(dim, p).iter().map(|c| c * scale).collect();
        let e_scale = 0.5 + 2.0 * sampler.rng.random::<f64>();
        let e: Vec<f64> = sampler.direction(dim, p).iter().map(|c| c * e_scale).collect();
        run_trial(v, e);
    }

    // worst-case geometry: |v| = R, |e| = 1/2, f(e) as negative as the
    // filter admits
    let mut injected = 0u64;
    for k in 0..trials.min(ADVERSARIAL_INJECTIONS) {
        let v_dir = sampler.direction(dim, p);
        let v: Vec<f64> = v_dir.iter().map(|c| c * r).collect();
        let mut orth = sampler.direction(dim, p);
        // remove the v-component (Euclidean projection; adequate as a probe)
        let dot: f64 = v_dir.iter().zip(&orth).map(|(a, b)| a * b).sum();
        for (o, a) in orth.iter_mut().zip(&v_dir) {
            *o -= dot * a;
        }
        let on = lp_norm(&orth, p);
        if on < 1e-9 {
            continue;
        }
        // e = -t v_dir + s orth with f(e) ~ -t near -mu, |e| ~ 1/2
        let t = mu * (k as f64) / (ADVERSARIAL_INJECTIONS as f64);
        // keep |e| a hair above 1/2 so rounding cannot drop it under the filter
        let s = (0.2500001 - t * t).max(0.0).sqrt();
        let e: Vec<f64> = v_dir
            .iter()
            .zip(&orth)
            .map(|(a, o)| -t * a + s * o / on)
            .collect();
        run_trial(v, e);
        injected += 1;
    }

    Ok(UcCheckReport {
        space,
        trials,
        counted,
        filtered_out,
        adversarial_injected: injected,
        conclusion_violations,
        constraint_violations,
        violations_total: conclusion_violations + constraint_violations,
        worst_margin: if worst_margin.is_finite() { worst_margin } else { f64::NAN },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;
    use crate::spaces::{uc_constants, ModulusSpec};

    fn constants_l2_8() -> UCConstants {
        uc_constants(UcSpace::Euclidean(8), &rat_int(1), ModulusSpec::Analytic).unwrap()
    }

    #[test]
    fn derived_constants_have_no_violations() {
        let c = constants_l2_8();
        let report = uc_inequality_test(UcSpace::Euclidean(8), &c, 20_000, 7).unwrap();
        assert_eq!(report.violations_total, 0);
        assert!(report.worst_margin >= 0.0);
        assert!(report.counted > 5_000);
    }

    #[test]
    fn hilbert_margin_oracle() {
        // |v+e|^2 = |v|^2 + 2 |v| f(e) + |e|^2 >= |v|^2 - 2 R mu + 1/4 in
        // the counted region, so the worst margin stays above the closed
        // form sqrt(R^2 - 2 R mu + 1/4) - R - eps.
        let c = constants_l2_8();
        let report = uc_inequality_test(UcSpace::Euclidean(8), &c, 20_000, 11).unwrap();
        let r = rational_to_f64(&c.r);
        let mu = rational_to_f64(&c.mu);
        let eps = rational_to_f64(&c.eps);
        let floor = (r * r - 2.0 * r * mu + 0.25).sqrt() - r - eps;
        assert!(report.worst_margin >= floor - 1e-9);
    }

    #[test]
    fn inflated_mu_is_flagged_by_the_constraint() {
        let c = constants_l2_8().with_mu_scaled(100);
        let report = uc_inequality_test(UcSpace::Euclidean(8), &c, 20_000, 13).unwrap();
        assert!(report.violations_total >= 1);
        assert_eq!(report.constraint_violations, 1);
    }

    #[test]
    fn grossly_inflated_mu_admits_real_counterexamples() {
        // mu beyond the closed-form threshold 1/8 - eps: the adversarial
        // pairs now land below |v| + eps.
        let c = constants_l2_8().with_mu_scaled(1000);
        let report = uc_inequality_test(UcSpace::Euclidean(8), &c, 50_000, 17).unwrap();
        assert!(report.conclusion_violations >= 1, "worst margin {}", report.worst_margin);
    }

    #[test]
    fn unsupported_spaces_are_rejected() {
        let c = constants_l2_8();
        assert!(uc_inequality_test(UcSpace::RegularLp(LpNorm::Inf), &c, 10, 0).is_err());
    }

    #[test]
    fn reproducible() {
        let c = constants_l2_8();
        let a = uc_inequality_test(UcSpace::Euclidean(8), &c, 5_000, 3).unwrap();
        let b = uc_inequality_test(UcSpace::Euclidean(8), &c, 5_000, 3).unwrap();
        assert_eq!(a.worst_margin, b.worst_margin);
        assert_eq!(a.counted, b.counted);
    }
}
