//! The Brooks quasi-cocycle `H_{w,e}` and the cocycle-level toolbox around
//! it: exact cocycles extended from generator values, antisymmetrization,
//! defect estimation, finite averaging, the diagonal `l^inf` coboundary and
//! a numerical coboundary fit.

mod average;
mod defect;
mod fit;
mod h0;

pub use average::{k_average, KSet};
pub use defect::{defect, defect_term, DefectMode, DefectReport};
pub use fit::{distance_to_coboundary_fit, CoboundaryFit};
pub use h0::{diagonal_coboundary, diagonal_value};

use crate::exact::NormValue;
use crate::spaces::{Representation, Vector};
use crate::words::{occurrences, ReducedWord, Sign};
use crate::{Error, Result};

/// Anything that evaluates like a quasi-cocycle `F2 -> E`.
pub trait QuasiCocycle: Sync {
    fn rep(&self) -> &Representation;
    fn eval(&self, g: &ReducedWord) -> Vector;
}

/// The data `(w, e, rho)` defining `H_{w,e}`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct QuasiCocycleSpec {
    pub w: ReducedWord,
    pub e: Vector,
    pub rep: Representation,
}

impl QuasiCocycleSpec {
    pub fn new(w: ReducedWord, e: Vector, rep: Representation) -> Result<Self> {
        rep.validate()?;
        rep.check_vector(&e)?;
        if w.is_identity() || !w.is_cyclically_reduced() {
            return Err(Error::Precondition(
                "pattern must be nonempty and cyclically reduced".into(),
            ));
        }
        if e.is_zero() {
            return Err(Error::Precondition("e must be nonzero".into()));
        }
        Ok(QuasiCocycleSpec { w, e, rep })
    }

    /// `H(g) = sum over positive occurrences of h(e) minus sum over negative
    /// occurrences of h(e)`.
    pub fn evaluate(&self, g: &ReducedWord) -> Vector {
        let occ = occurrences(&self.w, g).expect("spec pattern validated");
        let terms: Vec<Vector> = occ
            .iter()
            .map(|o| {
                let acted = self.rep.act(&o.prefix, &self.e).expect("spec vector validated");
                match o.sign {
                    Sign::Pos => acted,
                    Sign::Neg => acted.negate(),
                }
            })
            .collect();
        tree_sum(&self.rep, terms)
    }

    /// The a-priori defect bound `6 |w| |e|`.
    pub fn defect_bound(&self) -> NormValue {
        let six_len = crate::exact::rat_int(6 * self.w.len() as i64);
        match self.rep.norm(&self.e).expect("spec vector validated") {
            NormValue::Exact { pow, p } => {
                NormValue::exact(crate::exact::pow_rat(&six_len, p) * pow, p)
            }
            NormValue::Approx(x) => NormValue::Approx(6.0 * self.w.len() as f64 * x),
        }
    }
}

impl QuasiCocycle for QuasiCocycleSpec {
    fn rep(&self) -> &Representation {
        &self.rep
    }

    fn eval(&self, g: &ReducedWord) -> Vector {
        self.evaluate(g)
    }
}

/// Sums in increasing occurrence order via pairwise tree reduction, so
/// floating backends are deterministic regardless of support layout.
fn tree_sum(rep: &Representation, mut terms: Vec<Vector>) -> Vector {
    if terms.is_empty() {
        return rep.zero_vector();
    }
    while terms.len() > 1 {
        terms = terms
            .chunks(2)
            .map(|pair| {
                if pair.len() == 2 {
                    pair[0].add(&pair[1]).expect("uniform vector kind")
                } else {
                    pair[0].clone()
                }
            })
            .collect();
    }
    terms.pop().expect("nonempty")
}

/// A genuine cocycle, freely extended from its values on the generators:
/// `F(a) = f_a`, `F(b) = f_b`, `F(g g') = F(g) + g F(g')`.
#[derive(Clone, Debug)]
pub struct CocycleSpec {
    pub f_a: Vector,
    pub f_b: Vector,
    pub rep: Representation,
}

impl CocycleSpec {
    pub fn new(f_a: Vector, f_b: Vector, rep: Representation) -> Result<Self> {
        rep.validate()?;
        rep.check_vector(&f_a)?;
        rep.check_vector(&f_b)?;
        Ok(CocycleSpec { f_a, f_b, rep })
    }

    /// The coboundary `g -> v - rho(g) v`.
    pub fn coboundary(v: &Vector, rep: Representation) -> Result<Self> {
        rep.check_vector(v)?;
        let a = ReducedWord::parse("a").expect("generator");
        let b = ReducedWord::parse("b").expect("generator");
        let f_a = v.sub(&rep.act(&a, v)?)?;
        let f_b = v.sub(&rep.act(&b, v)?)?;
        CocycleSpec::new(f_a, f_b, rep)
    }

    /// Letter-by-letter evaluation; inverse letters use
    /// `F(g^-1) = -rho(g^-1) F(g)`.
    pub fn extend(&self, g: &ReducedWord) -> Vector {
        let mut acc = self.rep.zero_vector();
        let mut prefix = ReducedWord::identity();
        for &l in g.letters() {
            let letter_word = ReducedWord::from_letters([l]);
            let value = match l {
                crate::words::Letter::A => self.f_a.clone(),
                crate::words::Letter::B => self.f_b.clone(),
                crate::words::Letter::AInv => self
                    .rep
                    .act(&letter_word, &self.f_a)
                    .expect("validated")
                    .negate(),
                crate::words::Letter::BInv => self
                    .rep
                    .act(&letter_word, &self.f_b)
                    .expect("validated")
                    .negate(),
            };
            let moved = self.rep.act(&prefix, &value).expect("validated");
            acc = acc.add(&moved).expect("uniform vector kind");
            prefix = prefix.mul(&letter_word);
        }
        acc
    }
}

impl QuasiCocycle for CocycleSpec {
    fn rep(&self) -> &Representation {
        &self.rep
    }

    fn eval(&self, g: &ReducedWord) -> Vector {
        self.extend(g)
    }
}

/// `H'(g) = (H(g) - rho(g) H(g^-1)) / 2`; exactly antisymmetric, and within
/// the defect of the original on every element.
pub struct Antisymmetrized<Q: QuasiCocycle> {
    pub inner: Q,
}

pub fn antisymmetrize<Q: QuasiCocycle>(inner: Q) -> Antisymmetrized<Q> {
    Antisymmetrized { inner }
}

impl<Q: QuasiCocycle> QuasiCocycle for Antisymmetrized<Q> {
    fn rep(&self) -> &Representation {
        self.inner.rep()
    }

    fn eval(&self, g: &ReducedWord) -> Vector {
        let forward = self.inner.eval(g);
        let backward = self
            .rep()
            .act(g, &self.inner.eval(&g.inverse()))
            .expect("validated");
        forward.sub(&backward).expect("uniform vector kind").halve()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use crate::spaces::{GroupVector, LpNorm};
    use crate::words::{ball, random_words, Letter};

    fn w(text: &str) -> ReducedWord {
        ReducedWord::parse(text).unwrap()
    }

    fn l2_spec(pattern: &str) -> QuasiCocycleSpec {
        QuasiCocycleSpec::new(
            w(pattern),
            Vector::delta_identity(),
            Representation::Regular(LpNorm::Exact(2)),
        )
        .unwrap()
    }

    #[test]
    fn example_ab_orbit_sum() {
        let spec = l2_spec("ab");
        let h = spec.evaluate(&w("ababab"));
        let expected = Vector::Group(GroupVector::from_entries([
            (ReducedWord::identity(), rat_int(1)),
            (w("ab"), rat_int(1)),
            (w("abab"), rat_int(1)),
        ]));
        assert_eq!(h, expected);
        assert!(spec.evaluate(&w("a^9")).is_zero());
        assert!(spec.evaluate(&ReducedWord::identity()).is_zero());
    }

    #[test]
    fn trivial_counting() {
        let spec = QuasiCocycleSpec::new(
            w("aba"),
            Vector::Scalar(rat_int(1)),
            Representation::Trivial,
        )
        .unwrap();
        assert_eq!(spec.evaluate(&w("ababa")), Vector::Scalar(rat_int(2)));
    }

    #[test]
    fn spec_validation() {
        let rep = Representation::Trivial;
        let e = Vector::Scalar(rat_int(1));
        assert!(QuasiCocycleSpec::new(w(""), e.clone(), rep.clone()).is_err());
        assert!(QuasiCocycleSpec::new(w("abA"), e.clone(), rep.clone()).is_err());
        assert!(QuasiCocycleSpec::new(w("ab"), Vector::Scalar(rat_int(0)), rep.clone()).is_err());
        assert!(QuasiCocycleSpec::new(w("ab"), Vector::delta_identity(), rep).is_err());
    }

    #[test]
    fn antisymmetry_exact_on_ball() {
        let spec = l2_spec("ab");
        for g in ball(6) {
            let lhs = spec.evaluate(&g.inverse());
            let rhs = spec.rep.act(&g.inverse(), &spec.evaluate(&g)).unwrap().negate();
            assert_eq!(lhs, rhs, "antisymmetry failed at {g}");
        }
    }

    #[test]
    fn antisymmetry_exact_on_long_random_words() {
        let spec = l2_spec("aba");
        for g in random_words(300, 30, 21) {
            let lhs = spec.evaluate(&g.inverse());
            let rhs = spec.rep.act(&g.inverse(), &spec.evaluate(&g)).unwrap().negate();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cocycle_identity_of_extension_is_exact() {
        let rep = Representation::Regular(LpNorm::Exact(2));
        let c = CocycleSpec::new(
            Vector::Group(GroupVector::from_entries([(w("b"), rat(1, 2))])),
            Vector::delta_identity(),
            rep.clone(),
        )
        .unwrap();
        for g in ball(4) {
            for h in ball(3) {
                let joint = c.extend(&g.mul(&h));
                let split = c.extend(&g).add(&rep.act(&g, &c.extend(&h)).unwrap()).unwrap();
                assert_eq!(joint, split);
            }
        }
        assert!(c.extend(&ReducedWord::identity()).is_zero());
    }

    #[test]
    fn coboundary_extension_telescopes() {
        let rep = Representation::Regular(LpNorm::Exact(2));
        let v = Vector::Group(GroupVector::from_entries([
            (w("a"), rat_int(2)),
            (w("bA"), rat(-1, 3)),
        ]));
        let c = CocycleSpec::coboundary(&v, rep.clone()).unwrap();
        for g in ball(5) {
            let expected = v.sub(&rep.act(&g, &v).unwrap()).unwrap();
            assert_eq!(c.extend(&g), expected);
        }
    }

    #[test]
    fn abelianization_cocycle_counts_exponents() {
        let e = Vector::Scalar(rat_int(1));
        let c = CocycleSpec::new(e, Vector::Scalar(rat_int(0)), Representation::Trivial).unwrap();
        for g in ball(5) {
            assert_eq!(
                c.extend(&g),
                Vector::Scalar(rat_int(g.exponent_sum(Letter::A))),
                "wrong a-exponent cocycle at {g}"
            );
        }
    }

    #[test]
    fn brooks_is_fixed_by_antisymmetrization() {
        let spec = l2_spec("ab");
        let anti = antisymmetrize(spec.clone());
        for g in ball(6) {
            assert_eq!(anti.eval(&g), spec.evaluate(&g));
        }
    }

    #[test]
    fn cocycles_are_fixed_by_antisymmetrization() {
        let rep = Representation::Regular(LpNorm::Exact(2));
        let c = CocycleSpec::new(
            Vector::Group(GroupVector::from_entries([(w("ab"), rat_int(1))])),
            Vector::Group(GroupVector::from_entries([(w("B"), rat(2, 5))])),
            rep,
        )
        .unwrap();
        let anti = antisymmetrize(c.clone());
        for g in ball(4) {
            assert_eq!(anti.eval(&g), c.extend(&g));
        }
    }

    /// A quasi-cocycle plus a bounded, deliberately asymmetric perturbation.
    struct Perturbed {
        base: QuasiCocycleSpec,
        bump: Vector,
    }

    impl QuasiCocycle for Perturbed {
        fn rep(&self) -> &Representation {
            &self.base.rep
        }

        fn eval(&self, g: &ReducedWord) -> Vector {
            // beta(g) depends only on |g| mod 3: bounded, not antisymmetric.
            let scale = rat_int((g.len() % 3) as i64);
            let bump = match &self.bump {
                Vector::Group(v) => Vector::Group(v.scale(&scale)),
                other => other.clone(),
            };
            self.base.evaluate(g).add(&bump).unwrap()
        }
    }

    #[test]
    fn antisymmetrization_restores_antisymmetry_exactly() {
        let base = l2_spec("ab");
        let rep = base.rep.clone();
        let perturbed = Perturbed { base, bump: Vector::delta_identity() };
        let anti = antisymmetrize(perturbed);
        for g in random_words(20, 40, 13) {
            let lhs = anti.eval(&g.inverse());
            let rhs = rep.act(&g.inverse(), &anti.eval(&g)).unwrap().negate();
            assert_eq!(lhs, rhs);
        }
        // the repaired map stays within the perturbation scale of the input
        for g in ball(4) {
            let diff = anti.eval(&g).sub(&anti.inner.eval(&g)).unwrap();
            assert!(rep.norm(&diff).unwrap().le_rational(&rat_int(2)));
        }
    }
}
