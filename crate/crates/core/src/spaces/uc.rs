//! Uniform convexity machinery: the modulus of convexity and the constants
//! `(R, epsilon, mu)` that drive the greedy norm-growth certificates.
//!
//! The contract: if `|v| <= R`, `f` is a norm-1 functional with `f(v) = |v|`,
//! and `e` has `|e| >= 1/2` with `f(e) >= -mu`, then `|v + e| >= |v| + eps`.
//! Constants are derived from a certified rational lower bound `delta` on
//! the modulus at `1/(2(R+1))`: a lower bound keeps the guarantee sound.

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LpNorm;
use crate::exact::{rat, rat_int, rational_from_f64, sqrt_upper_bound, Rational};
use crate::{Error, Result};

/// Space descriptor for convexity estimation. Sampling happens in a finite
/// dimensional section, which embeds isometrically in the full space.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum UcSpace {
    /// `l^p(F2)` with the given norm.
    RegularLp(LpNorm),
    /// Real Euclidean `R^d`.
    Euclidean(usize),
}

impl UcSpace {
    fn lp_exponent(&self) -> Option<f64> {
        match self {
            UcSpace::RegularLp(LpNorm::Exact(p)) => Some(f64::from(*p)),
            UcSpace::RegularLp(LpNorm::Float(p)) => Some(*p),
            UcSpace::RegularLp(LpNorm::Inf) => None,
            UcSpace::Euclidean(_) => Some(2.0),
        }
    }

    fn is_hilbert(&self) -> bool {
        matches!(
            self,
            UcSpace::Euclidean(_) | UcSpace::RegularLp(LpNorm::Exact(2))
        ) || matches!(self, UcSpace::RegularLp(LpNorm::Float(p)) if *p == 2.0)
    }

    fn sampling_dim(&self) -> usize {
        match self {
            UcSpace::Euclidean(d) => *d,
            UcSpace::RegularLp(_) => 16,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum ModulusSpec {
    /// Closed-form modulus; available for Hilbert-type spaces.
    Analytic,
    /// Empirical lower bound from constrained random pairs, with a 10%
    /// safety margin.
    Sampled { trials: u32, seed: u64 },
}

/// The derived constants. `delta` is the certified modulus lower bound at
/// scale `1/(2(R+1))`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct UCConstants {
    #[serde(serialize_with = "ser_rat")]
    pub r: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub eps: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub mu: Rational,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exact::rational_str(r))
}

impl UCConstants {
    /// The defining constraint, re-evaluated exactly:
    /// `0 < eps < 1/8`, `mu > 0`, `delta` in `(0, 1)`, and
    /// `(1/8 - mu/2) / (1/8 + eps) > 1 - delta`.
    pub fn constraint_holds(&self) -> bool {
        let eighth = rat(1, 8);
        self.eps.is_positive()
            && self.mu.is_positive()
            && self.eps < eighth
            && self.delta.is_positive()
            && self.delta < Rational::one()
            && (&eighth - &self.mu / rat_int(2)) / (&eighth + &self.eps)
                > Rational::one() - &self.delta
    }

    pub fn with_mu_scaled(&self, factor: i64) -> UCConstants {
        UCConstants {
            r: self.r.clone(),
            delta: self.delta.clone(),
            eps: self.eps.clone(),
            mu: &self.mu * rat_int(factor),
        }
    }
}

/// Certified rational lower bound on the Hilbert modulus
/// `delta(eps) = 1 - sqrt(1 - eps^2/4)`, via a rational upper bound on the
/// square root.
pub fn hilbert_modulus_lb(eps: &Rational) -> Result<Rational> {
    if !eps.is_positive() || eps > &rat_int(2) {
        return Err(Error::Precondition("modulus scale must lie in (0, 2]".into()));
    }
    let inside = Rational::one() - eps * eps / rat_int(4);
    let upper = sqrt_upper_bound(&inside, 48);
    let delta = Rational::one() - upper;
    if !delta.is_positive() {
        return Err(Error::Invariant("Hilbert modulus bound degenerated to zero".into()));
    }
    Ok(delta)
}

fn lp_norm(x: &[f64], p: Option<f64>) -> f64 {
    match p {
        Some(p) => x.iter().map(|c| c.abs().powf(p)).sum::<f64>().powf(1.0 / p),
        None => x.iter().fold(0.0f64, |m, c| m.max(c.abs())),
    }
}

/// Empirical lower bound on the modulus of convexity at scale `eps`:
/// `0.9 * min(1 - |mid|)` over sampled unit pairs at distance `>= eps`,
/// including deterministic adversarial disjoint-support pairs.
///
/// Returns an error when the estimate vanishes: the space is not certified
/// uniformly convex at this scale (e.g. `l^1`, `l^inf`).
pub fn sampled_modulus_lb(space: UcSpace, eps: f64, trials: u32, seed: u64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::Precondition("modulus scale must lie in (0, 2]".into()));
    }
    let p = space.lp_exponent();
    let dim = space.sampling_dim().max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 1.0;
    // Normalizes both vectors onto the unit sphere, then records the
    // midpoint deficit when they are at least eps apart.
    let mut consider = |x: &[f64], y: &[f64]| {
        let nx = lp_norm(x, p);
        let ny = lp_norm(y, p);
        if nx == 0.0 || ny == 0.0 {
            return;
        }
        let dist: Vec<f64> = x.iter().zip(y).map(|(a, b)| a / nx - b / ny).collect();
        if lp_norm(&dist, p) < eps {
            return;
        }
        let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| 0.5 * (a / nx + b / ny)).collect();
        worst = worst.min(1.0 - lp_norm(&mid, p));
    };

    // Adversarial battery: disjoint supports and sign flips, where l^1 and
    // l^inf midpoints lose nothing.
    for i in 1..dim.min(6) {
        let mut x = vec![0.0; dim];
        let mut y = vec![0.0; dim];
        x[0] = 1.0;
        y[i] = 1.0;
        consider(&x, &y);
        y[i] = 0.0;
        y[0] = -1.0;
        consider(&x, &y);
        // l^inf worst case: differ in one coordinate, agree on another
        x[i] = 1.0;
        y[0] = 1.0;
        y[i] = -1.0;
        consider(&x, &y);
    }

    let normal = |rng: &mut ChaCha8Rng| {
        let u1: f64 = rng.random::<f64>().max(1e-12);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    for _ in 0..trials {
        let x: Vec<f64> = (0..dim).map(|_| normal(&mut rng)).collect();
        let y: Vec<f64> = (0..dim).map(|_| normal(&mut rng)).collect();
        consider(&x, &y);
    }

    let bound = 0.9 * worst;
    if bound <= 1e-9 {
        return Err(Error::Precondition(format!(
            "modulus estimate {bound:.3e} <= 0: space not certified uniformly convex at scale {eps}"
        )));
    }
    Ok(bound)
}

/// Derives `(eps, mu)` for radius `R`: computes the modulus lower bound at
/// `1/(2(R+1))` and returns the largest `eps = mu = delta / 2^j` with
/// `j >= 5` satisfying the constraint.
pub fn uc_constants(space: UcSpace, r: &Rational, modulus: ModulusSpec) -> Result<UCConstants> {
    if r.is_negative() {
        return Err(Error::Precondition("R must be nonnegative".into()));
    }
    let scale = Rational::one() / (rat_int(2) * (r + Rational::one()));
    let delta: Rational = match modulus {
        ModulusSpec::Analytic => {
            if !space.is_hilbert() {
                return Err(Error::Unsupported(
                    "analytic modulus is implemented for Hilbert-type spaces; use sampled".into(),
                ));
            }
            hilbert_modulus_lb(&scale)?
        }
        ModulusSpec::Sampled { trials, seed } => {
            let est = sampled_modulus_lb(space, crate::exact::rational_to_f64(&scale), trials, seed)?;
            rational_from_f64(est)?
        }
    };
    if !delta.is_positive() || delta >= Rational::one() {
        return Err(Error::Invariant(format!(
            "modulus bound {} outside (0, 1)",
            crate::exact::rational_str(&delta)
        )));
    }
    for j in 5..64u32 {
        let t = &delta / Rational::from_integer(num_bigint::BigInt::from(2).pow(j));
        let candidate = UCConstants { r: r.clone(), delta: delta.clone(), eps: t.clone(), mu: t };
        if candidate.constraint_holds() {
            return Ok(candidate);
        }
    }
    Err(Error::Invariant("no admissible eps = mu = delta/2^j found".into()))
}
