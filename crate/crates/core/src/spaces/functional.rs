//! Norming functionals: norm-1 duals `f` with `f(v) = |v|`.
//!
//! For the exact regular backend the functional is kept unnormalized: the
//! raw Hoelder dual pairing divided by `|v|^{p-1}` only when a floating
//! value is requested: so that the predicates the greedy search needs
//! (`f(u) >= -mu`) can be decided by exact p-th power comparisons.

use nalgebra::DVector;
use num_complex::Complex64;
use num_traits::Signed;

use super::{GroupVector, LpNorm, Representation, Vector};
use crate::exact::{pow_rat, rational_to_f64, Rational};
use crate::words::ReducedWord;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum NormingFunctional {
    /// `f(u) = sign . u` on the trivial backend.
    Trivial { sign: Rational },
    /// Hoelder equality dual of `v` in exact `l^p`, `1 < p < inf`:
    /// raw dual `d(x) = sign(v(x)) |v(x)|^{p-1}`, with `f = d / |v|^{p-1}`
    /// and `|v|^{p-1} = norm_pow^{(p-1)/p}`.
    Regular { dual: GroupVector, norm_pow: Rational, p: u32 },
    /// Same shape for a floating exponent.
    RegularFloat { dual: Vec<(ReducedWord, f64)>, scale: f64, p: f64 },
    /// `f(u) = Re <unit, u>` on `C^d`.
    Matrix { unit: DVector<Complex64> },
}

/// Builds the norming functional of `v != 0`.
///
/// Unsupported: `p = 1` and `p = inf` on the regular backend (no canonical
/// smooth dual).
pub fn norming_functional(rep: &Representation, v: &Vector) -> Result<NormingFunctional> {
    rep.check_vector(v)?;
    if v.is_zero() {
        return Err(Error::Precondition("cannot norm the zero vector".into()));
    }
    match (rep, v) {
        (Representation::Trivial, Vector::Scalar(c)) => {
            Ok(NormingFunctional::Trivial { sign: c.signum() })
        }
        (Representation::Regular(LpNorm::Exact(p)), Vector::Group(x)) => {
            if *p < 2 {
                return Err(Error::Unsupported(
                    "norming functionals need 1 < p < inf on the regular backend".into(),
                ));
            }
            let dual = GroupVector::from_entries(x.iter().map(|(g, c)| {
                let mag = pow_rat(&c.abs(), p - 1);
                let signed = if c.is_negative() { -mag } else { mag };
                (g.clone(), signed)
            }));
            Ok(NormingFunctional::Regular { dual, norm_pow: x.norm_pow(*p), p: *p })
        }
        (Representation::Regular(LpNorm::Float(p)), Vector::Group(x)) => {
            let dual: Vec<(ReducedWord, f64)> = x
                .iter()
                .map(|(g, c)| {
                    let cf = rational_to_f64(c);
                    (g.clone(), cf.signum() * cf.abs().powf(p - 1.0))
                })
                .collect();
            let scale = x.norm_float(*p).powf(p - 1.0);
            Ok(NormingFunctional::RegularFloat { dual, scale, p: *p })
        }
        (Representation::Regular(LpNorm::Inf), _) => Err(Error::Unsupported(
            "norming functionals need 1 < p < inf on the regular backend".into(),
        )),
        (Representation::Matrix(_), Vector::Complex(x)) => {
            Ok(NormingFunctional::Matrix { unit: x / Complex64::new(x.norm(), 0.0) })
        }
        _ => unreachable!("check_vector guards kinds"),
    }
}

impl NormingFunctional {
    /// The raw dual pairing, exact; equals `f(u) . |v|^{p-1}` on the regular
    /// backend and `f(u)` itself on the trivial one.
    pub fn eval_raw(&self, u: &Vector) -> Result<Rational> {
        match (self, u) {
            (NormingFunctional::Trivial { sign }, Vector::Scalar(c)) => Ok(sign * c),
            (NormingFunctional::Regular { dual, .. }, Vector::Group(x)) => Ok(dual.dot(x)),
            _ => Err(Error::Unsupported("exact dual pairing needs an exact backend".into())),
        }
    }

    /// The functional value `f(u)` as a float.
    pub fn eval(&self, u: &Vector) -> Result<f64> {
        match (self, u) {
            (NormingFunctional::Trivial { sign }, Vector::Scalar(c)) => {
                Ok(rational_to_f64(&(sign * c)))
            }
            (NormingFunctional::Regular { dual, norm_pow, p }, Vector::Group(x)) => {
                let raw = rational_to_f64(&dual.dot(x));
                let scale = rational_to_f64(norm_pow).powf((f64::from(*p) - 1.0) / f64::from(*p));
                Ok(raw / scale)
            }
            (NormingFunctional::RegularFloat { dual, scale, .. }, Vector::Group(x)) => {
                let raw: f64 = dual
                    .iter()
                    .map(|(g, d)| d * rational_to_f64(&x.coeff(g)))
                    .sum();
                Ok(raw / scale)
            }
            (NormingFunctional::Matrix { unit }, Vector::Complex(x)) => Ok(unit.dotc(x).re),
            _ => Err(Error::Precondition("vector kind mismatch in functional".into())),
        }
    }

    /// Decides `f(u) >= -mu` (for `mu >= 0`), exactly on exact backends:
    /// with `q` the raw pairing, `f(u) >= -mu` iff `q >= 0` or
    /// `(-q)^p <= mu^p . norm_pow^(p-1)`.
    pub fn ge_neg_mu(&self, u: &Vector, mu: &Rational) -> Result<bool> {
        if mu.is_negative() {
            return Err(Error::Precondition("mu must be nonnegative".into()));
        }
        match self {
            NormingFunctional::Trivial { .. } => {
                let q = self.eval_raw(u)?;
                Ok(q >= -mu)
            }
            NormingFunctional::Regular { norm_pow, p, .. } => {
                let q = self.eval_raw(u)?;
                if !q.is_negative() {
                    return Ok(true);
                }
                Ok(pow_rat(&-q, *p) <= pow_rat(mu, *p) * pow_rat(norm_pow, p - 1))
            }
            _ => Ok(self.eval(u)? >= -rational_to_f64(mu)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int, NormValue};
    use crate::spaces::LpNorm;
    use crate::words::{random_words, ReducedWord, WordSampler};
    use rand::Rng;

    fn w(text: &str) -> ReducedWord {
        ReducedWord::parse(text).unwrap()
    }

    #[test]
    fn l2_functional_norms_its_vector() {
        let rep = Representation::Regular(LpNorm::Exact(2));
        let v = Vector::Group(GroupVector::from_entries([
            (w("a"), rat_int(3)),
            (w("b"), rat_int(-4)),
        ]));
        let f = norming_functional(&rep, &v).unwrap();
        // raw pairing equals norm_pow exactly: f(v) = |v|
        assert_eq!(f.eval_raw(&v).unwrap(), rat_int(25));
        assert!((f.eval(&v).unwrap() - 5.0).abs() <= 1e-12);
    }

    #[test]
    fn l3_hoelder_equality_case() {
        let rep = Representation::Regular(LpNorm::Exact(3));
        let v = Vector::Group(GroupVector::from_entries([
            (ReducedWord::identity(), rat_int(1)),
            (w("ab"), rat_int(1)),
        ]));
        let f = norming_functional(&rep, &v).unwrap();
        assert_eq!(f.eval_raw(&v).unwrap(), rat_int(2)); // = norm_pow
        let norm3 = rep.norm(&v).unwrap();
        assert_eq!(norm3, NormValue::exact(rat_int(2), 3));
        assert!((f.eval(&v).unwrap() - 2f64.powf(1.0 / 3.0)).abs() <= 1e-12);
    }

    #[test]
    fn functional_is_norm_one_on_random_vectors() {
        let rep = Representation::Regular(LpNorm::Exact(2));
        let mut sampler = WordSampler::new(17);
        let base = Vector::Group(GroupVector::from_entries([
            (w("a"), rat(5, 3)),
            (w("Ba"), rat_int(-1)),
            (w("b^2"), rat(1, 7)),
        ]));
        let f = norming_functional(&rep, &base).unwrap();
        for _ in 0..10_000 {
            let len = sampler.rng().random_range(0..6usize);
            let support = sampler.word(len);
            let c = rat(i64::from(sampler.rng().random_range(-20..=20i32)), 7);
            let u = Vector::Group(GroupVector::from_entries([
                (support, c),
                (w("a"), rat(1, 11)),
            ]));
            let fu = f.eval(&u).unwrap().abs();
            let nu = rep.norm(&u).unwrap().to_f64();
            assert!(fu <= nu * (1.0 + 1e-9), "{fu} > {nu}");
        }
    }

    #[test]
    fn exact_mu_predicate_matches_floats() {
        let rep = Representation::Regular(LpNorm::Exact(2));
        let v = Vector::Group(GroupVector::from_entries([(w("a"), rat_int(2))]));
        let f = norming_functional(&rep, &v).unwrap();
        let mu = rat(1, 10);
        // u with f(u) = -1/5: dual = 2 delta_a, raw = 2 * coeff(a)
        let u = Vector::Group(GroupVector::from_entries([(w("a"), rat(-1, 10))]));
        // f(u) = raw / |v| = -1/5 / ... : raw = -1/5, |v| = 2, f(u) = -1/10 = -mu
        assert!(f.ge_neg_mu(&u, &mu).unwrap());
        let worse = Vector::Group(GroupVector::from_entries([(w("a"), rat(-11, 100))]));
        assert!(!f.ge_neg_mu(&worse, &mu).unwrap());
    }

    #[test]
    fn unsupported_duals() {
        let v = Vector::Group(GroupVector::delta(ReducedWord::identity()));
        for p in [LpNorm::Exact(1), LpNorm::Inf] {
            assert!(norming_functional(&Representation::Regular(p), &v).is_err());
        }
        let rep = Representation::Regular(LpNorm::Exact(2));
        assert!(norming_functional(&rep, &Vector::Group(GroupVector::zero())).is_err());
    }

    #[test]
    fn matrix_functional_is_cauchy_schwarz_equality() {
        let rep = Representation::Matrix(crate::spaces::random_generic_u2(3, 10).unwrap());
        let v = Vector::Complex(nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.25),
        ]));
        let f = norming_functional(&rep, &v).unwrap();
        let nv = rep.norm(&v).unwrap().to_f64();
        assert!((f.eval(&v).unwrap() - nv).abs() <= 1e-12);
        for g in random_words(4, 5, 9) {
            let u = rep.act(&g, &v).unwrap();
            assert!(f.eval(&u).unwrap().abs() <= nv * (1.0 + 1e-12));
        }
    }
}
