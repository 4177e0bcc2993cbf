//! Seeded construction of generic unitary representations and the spectral
//! quantities the cyclic boundedness arguments need.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MatrixRep;
use crate::words::ReducedWord;
use crate::{Error, Result};

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; plenty for sampling Hermitian generators.
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// `exp(i H)` for a random 2x2 Hermitian `H`, via its spectral decomposition;
/// unitary to machine precision.
fn random_u2_matrix(rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let x = standard_normal(rng);
    let y = standard_normal(rng);
    let z = Complex64::new(standard_normal(rng), standard_normal(rng));

    let mean = 0.5 * (x + y);
    let radius = (0.25 * (x - y).powi(2) + z.norm_sqr()).sqrt();
    let lambda = [mean + radius, mean - radius];

    if z.norm() < 1e-12 {
        return DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::from_polar(1.0, x),
            Complex64::from_polar(1.0, y),
        ]));
    }

    let mut u = DMatrix::zeros(2, 2);
    for l in lambda {
        // eigenvector (z, l - x) of H = [[x, z], [conj z, y]]
        let v = DVector::from_vec(vec![z, Complex64::new(l - x, 0.0)]);
        let nsq = v.norm_squared();
        let phase = Complex64::from_polar(1.0, l);
        for i in 0..2 {
            for j in 0..2 {
                u[(i, j)] += phase * v[i] * v[j].conj() / nsq;
            }
        }
    }
    u
}

/// Eigenvalue angles of a unitary, as fractions of a full turn in `[0, 1)`.
/// Supports dimensions 1 and 2 (closed-form eigenvalues).
pub fn unit_eigen_angles(u: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let frac = |c: Complex64| -> f64 {
        let t = c.arg() / std::f64::consts::TAU;
        t.rem_euclid(1.0)
    };
    match u.nrows() {
        1 => Ok(vec![frac(u[(0, 0)])]),
        2 => {
            let tr = u[(0, 0)] + u[(1, 1)];
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            let disc = (tr * tr - det * 4.0).sqrt();
            let l1 = (tr + disc) * 0.5;
            let l2 = (tr - disc) * 0.5;
            Ok(vec![frac(l1), frac(l2)])
        }
        d => Err(Error::Unsupported(format!("eigen angles only for d <= 2, got {d}"))),
    }
}

/// Finite genericity proxy: `value` stays at distance `> 1e-3 / q^2` from
/// every rational `p/q` with `q <= denominator_bound`.
pub fn diophantine_generic(value: f64, denominator_bound: u32) -> bool {
    if !value.is_finite() {
        return false;
    }
    for q in 1..=denominator_bound {
        let scaled = value * f64::from(q);
        if (scaled - scaled.round()).abs() <= 1e-3 / f64::from(q) {
            return false;
        }
    }
    true
}

/// Smallest singular value of `rho(g) - I`: how far `rho(g)` moves the worst
/// unit vector.
pub fn spectral_gap(rep: &MatrixRep, g: &ReducedWord) -> f64 {
    let d = rep.dim();
    let m = rep.matrix_of(g) - DMatrix::<Complex64>::identity(d, d);
    let svd = m.svd(false, false);
    svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min)
}

const U2_RESAMPLE_BUDGET: u32 = 10_000;

/// Samples `U_a, U_b` in `U(2)` until, for each of `a`, `b`, `ab`, `ab^-1`,
/// the eigen-angle pair `(t, s)` has `t`, `s` and `t/s` all Diophantine
/// generic up to the given denominator bound. Deterministic per seed.
pub fn random_generic_u2(seed: u64, denominator_bound: u32) -> Result<MatrixRep> {
    if denominator_bound < 2 {
        return Err(Error::Precondition("denominator bound must be >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes: Vec<ReducedWord> = ["a", "b", "ab", "aB"]
        .iter()
        .map(|t| ReducedWord::parse(t).expect("fixed probe words"))
        .collect();
    for _ in 0..U2_RESAMPLE_BUDGET {
        let rep = MatrixRep::new(random_u2_matrix(&mut rng), random_u2_matrix(&mut rng))?;
        let generic = probes.iter().all(|g| {
            let angles = unit_eigen_angles(&rep.matrix_of(g)).expect("2x2");
            let (t, s) = (angles[0], angles[1]);
            diophantine_generic(t, denominator_bound)
                && diophantine_generic(s, denominator_bound)
                && diophantine_generic(t / s, denominator_bound)
        });
        if generic {
            return Ok(rep);
        }
    }
    Err(Error::Budget(format!(
        "no generic U(2) pair found in {U2_RESAMPLE_BUDGET} samples (seed {seed}, bound {denominator_bound})"
    )))
}

/// Planar rotation representation with `spectral_gap(rho(ab)) >= min_gap`;
/// angles drawn uniformly, resampled deterministically from the seed.
pub fn random_rotation_rep(seed: u64, min_gap: f64) -> Result<MatrixRep> {
    if !(0.0..2.0).contains(&min_gap) {
        return Err(Error::Precondition("rotation gap must lie in [0, 2)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..U2_RESAMPLE_BUDGET {
        let theta_a = rng.random::<f64>() * std::f64::consts::TAU;
        let theta_b = rng.random::<f64>() * std::f64::consts::TAU;
        let rep = MatrixRep::rotation(theta_a, theta_b);
        if spectral_gap(&rep, &ReducedWord::parse("ab").expect("ab")) >= min_gap {
            return Ok(rep);
        }
    }
    Err(Error::Budget(format!("no rotation pair with gap >= {min_gap} (seed {seed})")))
}

pub fn matrix_max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::unitarity_residual;

    fn w(text: &str) -> ReducedWord {
        ReducedWord::parse(text).unwrap()
    }

    #[test]
    fn sampled_u2_is_unitary_and_reproducible() {
        let rep1 = random_generic_u2(1, 50).unwrap();
        let rep2 = random_generic_u2(1, 50).unwrap();
        assert_eq!(matrix_max_abs_diff(rep1.generator(crate::words::Letter::A), rep2.generator(crate::words::Letter::A)), 0.0);
        for l in crate::words::LETTERS {
            assert!(unitarity_residual(rep1.generator(l)) <= 1e-12);
        }
    }

    #[test]
    fn genericity_rejects_identity_angles() {
        // t = s = 0 sits exactly on the rational 0/1
        assert!(!diophantine_generic(0.0, 2));
        assert!(!diophantine_generic(0.5, 2));
        assert!(diophantine_generic(std::f64::consts::FRAC_1_PI, 50));
    }

    #[test]
    fn rotation_gap_closed_form() {
        for (ta, tb) in [(0.3, 0.4), (1.0, 1.5), (2.0, 2.5)] {
            let rep = MatrixRep::rotation(ta, tb);
            let gap = spectral_gap(&rep, &w("ab"));
            let expected = 2.0 * ((ta + tb) / 2.0).sin().abs();
            assert!((gap - expected).abs() <= 1e-10, "{gap} vs {expected}");
        }
        // rotation by pi moves unit vectors by exactly 2
        let rep = MatrixRep::rotation(std::f64::consts::PI, 0.0);
        assert!((spectral_gap(&rep, &w("a")) - 2.0).abs() <= 1e-10);
        // identity has gap 0
        assert!(spectral_gap(&rep, &ReducedWord::identity()) <= 1e-12);
    }

    #[test]
    fn u2_gap_matches_eigen_angles() {
        let rep = random_generic_u2(7, 20).unwrap();
        let g = w("ab");
        let angles = unit_eigen_angles(&rep.matrix_of(&g)).unwrap();
        // gap of a unitary with eigenvalues e^{2 pi i t}: min |e^{2 pi i t} - 1|
        let expected = angles
            .iter()
            .map(|t| 2.0 * (std::f64::consts::PI * t).sin().abs())
            .fold(f64::INFINITY, f64::min);
        assert!((spectral_gap(&rep, &g) - expected).abs() <= 1e-9);
    }

    #[test]
    fn rotation_rep_respects_min_gap() {
        for seed in 0..10 {
            let rep = random_rotation_rep(seed, 0.1).unwrap();
            assert!(spectral_gap(&rep, &w("ab")) >= 0.1);
        }
    }
}
