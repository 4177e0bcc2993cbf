//! Coefficient backends: the spaces `E`, their norms, and the unitary
//! action of `F2` on them.
//!
//! Three backends cover the experiments:
//!
//! * `Trivial`: the one-dimensional real space with every group element
//!   acting as the identity; coefficients are exact rationals.
//! * `Regular(p)`: finitely supported vectors in `l^p(F2)` under the left
//!   regular action `(g . v)(x) = v(g^-1 x)`; exact rationals when `p` is a
//!   positive integer or `inf`, floating otherwise.
//! * `Matrix`: `C^d` with unitary generator images, floating point.
//!
//! Exactness never silently mixes with floating point: each backend owns its
//! vector kind and mismatches are errors.

mod functional;
mod group_vector;
mod literal;
mod uc;
mod unitary;

pub use functional::{norming_functional, NormingFunctional};
pub use group_vector::GroupVector;
pub use literal::{parse_complex_vector, parse_rational, parse_regular_vector};
pub use uc::{
    hilbert_modulus_lb, sampled_modulus_lb, uc_constants, ModulusSpec, UCConstants, UcSpace,
};
pub use unitary::{
    matrix_max_abs_diff, random_generic_u2, random_rotation_rep, spectral_gap, unit_eigen_angles,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::exact::{NormValue, Rational};
use crate::words::{Letter, ReducedWord};
use crate::{Error, Result};

/// Which `l^p` norm the regular backend carries.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum LpNorm {
    /// Integer `p >= 1`, exact arithmetic via p-th powers.
    Exact(u32),
    /// Non-integer `p > 1`, floating point.
    Float(f64),
    /// `p = inf`: sup norm, exact.
    Inf,
}

impl LpNorm {
    pub fn validate(&self) -> Result<()> {
        match self {
            LpNorm::Exact(p) if *p >= 1 => Ok(()),
            LpNorm::Float(p) if *p >= 1.0 && p.is_finite() => Ok(()),
            LpNorm::Inf => Ok(()),
            _ => Err(Error::Precondition("l^p norm requires p >= 1".into())),
        }
    }
}

/// Unitary generator images on `C^d`.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    u_a: DMatrix<Complex64>,
    u_b: DMatrix<Complex64>,
    u_a_inv: DMatrix<Complex64>,
    u_b_inv: DMatrix<Complex64>,
}

/// Largest `|U^* U - I|` entry; must be tiny for a unitary.
pub fn unitarity_residual(u: &DMatrix<Complex64>) -> f64 {
    let d = u.nrows();
    let gram = u.adjoint() * u;
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let expected = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() };
            worst = worst.max((gram[(i, j)] - expected).norm());
        }
    }
    worst
}

impl MatrixRep {
    pub const UNITARITY_TOL: f64 = 1e-10;

    pub fn new(u_a: DMatrix<Complex64>, u_b: DMatrix<Complex64>) -> Result<Self> {
        if u_a.nrows() == 0 || !u_a.is_square() || u_a.shape() != u_b.shape() {
            return Err(Error::Precondition(
                "generator matrices must be square, equal size, d >= 1".into(),
            ));
        }
        for u in [&u_a, &u_b] {
            let res = unitarity_residual(u);
            if res > Self::UNITARITY_TOL {
                return Err(Error::Precondition(format!(
                    "generator matrix is not unitary (residual {res:.3e})"
                )));
            }
        }
        let u_a_inv = u_a.adjoint();
        let u_b_inv = u_b.adjoint();
        Ok(MatrixRep { u_a, u_b, u_a_inv, u_b_inv })
    }

    /// Planar rotations: `a`, `b` act on `R^2 = C` as `e^{i theta}`.
    pub fn rotation(theta_a: f64, theta_b: f64) -> Self {
        let m = |t: f64| DMatrix::from_element(1, 1, Complex64::from_polar(1.0, t));
        MatrixRep::new(m(theta_a), m(theta_b)).expect("unit scalars are unitary")
    }

    pub fn dim(&self) -> usize {
        self.u_a.nrows()
    }

    pub fn generator(&self, l: Letter) -> &DMatrix<Complex64> {
        match l {
            Letter::A => &self.u_a,
            Letter::AInv => &self.u_a_inv,
            Letter::B => &self.u_b,
            Letter::BInv => &self.u_b_inv,
        }
    }

    pub fn matrix_of(&self, g: &ReducedWord) -> DMatrix<Complex64> {
        let mut m = DMatrix::identity(self.dim(), self.dim());
        for &l in g.letters() {
            m *= self.generator(l);
        }
        m
    }

    /// `rho(g) v` without forming the matrix of `g`.
    pub fn apply(&self, g: &ReducedWord, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = v.clone();
        for &l in g.letters().iter().rev() {
            out = self.generator(l) * out;
        }
        out
    }
}

impl serde::Serialize for MatrixRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let as_pairs = |m: &DMatrix<Complex64>| -> Vec<[f64; 2]> {
            let mut out = Vec::with_capacity(m.len());
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    out.push([m[(i, j)].re, m[(i, j)].im]);
                }
            }
            out
        };
        let mut st = s.serialize_struct("MatrixRep", 3)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("u_a", &as_pairs(&self.u_a))?;
        st.serialize_field("u_b", &as_pairs(&self.u_b))?;
        st.end()
    }
}

/// Tagged union of coefficient backends.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(tag = "kind", content = "data")]
pub enum Representation {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "regular")]
    Regular(LpNorm),
    #[serde(rename = "matrix")]
    Matrix(MatrixRep),
}

/// A vector in whichever space the representation acts on.
#[derive(Clone, Debug, PartialEq)]
pub enum Vector {
    /// Trivial backend: a single exact real coordinate.
    Scalar(Rational),
    /// Regular backend: finitely supported exact function on `F2`.
    Group(GroupVector),
    /// Matrix backend: a point of `C^d`.
    Complex(DVector<Complex64>),
}

impl Vector {
    pub fn delta_identity() -> Vector {
        Vector::Group(GroupVector::delta(ReducedWord::identity()))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Vector::Scalar(c) => c.is_zero(),
            Vector::Group(v) => v.is_zero(),
            Vector::Complex(v) => v.iter().all(|c| c.norm() == 0.0),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Vector::Scalar(_) => "scalar",
            Vector::Group(_) => "group",
            Vector::Complex(_) => "complex",
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        match (self, other) {
            (Vector::Scalar(a), Vector::Scalar(b)) => Ok(Vector::Scalar(a + b)),
            (Vector::Group(a), Vector::Group(b)) => {
                let mut out = a.clone();
                out.add_assign(b);
                Ok(Vector::Group(out))
            }
            (Vector::Complex(a), Vector::Complex(b)) if a.len() == b.len() => {
                Ok(Vector::Complex(a + b))
            }
            _ => Err(Error::Precondition("vector kind/dimension mismatch in add".into())),
        }
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> Vector {
        match self {
            Vector::Scalar(c) => Vector::Scalar(-c.clone()),
            Vector::Group(v) => Vector::Group(v.negate()),
            Vector::Complex(v) => Vector::Complex(-v),
        }
    }

    pub fn halve(&self) -> Vector {
        match self {
            Vector::Scalar(c) => Vector::Scalar(c / crate::exact::rat_int(2)),
            Vector::Group(v) => Vector::Group(v.scale(&crate::exact::rat(1, 2))),
            Vector::Complex(v) => Vector::Complex(v * Complex64::new(0.5, 0.0)),
        }
    }

    /// Componentwise distance, for float identity checks.
    pub fn max_abs_diff(&self, other: &Vector) -> Result<f64> {
        match (self, other) {
            (Vector::Scalar(a), Vector::Scalar(b)) => {
                Ok(crate::exact::rational_to_f64(&(a - b).abs()))
            }
            (Vector::Group(a), Vector::Group(b)) => {
                let mut diff = a.clone();
                diff.sub_assign(b);
                Ok(crate::exact::rational_to_f64(&diff.sup_abs()))
            }
            (Vector::Complex(a), Vector::Complex(b)) if a.len() == b.len() => {
                Ok((a - b).iter().map(|c| c.norm()).fold(0.0, f64::max))
            }
            _ => Err(Error::Precondition("vector kind/dimension mismatch in diff".into())),
        }
    }
}

impl serde::Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Vector::Scalar(c) => s.serialize_str(&crate::exact::rational_str(c)),
            Vector::Group(v) => v.serialize(s),
            Vector::Complex(v) => {
                let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
                pairs.serialize(s)
            }
        }
    }
}

impl Representation {
    pub fn validate(&self) -> Result<()> {
        match self {
            Representation::Trivial => Ok(()),
            Representation::Regular(p) => p.validate(),
            Representation::Matrix(_) => Ok(()), // validated at construction
        }
    }

    /// True when norms and coefficients are exact rationals.
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            Representation::Trivial
                | Representation::Regular(LpNorm::Exact(_))
                | Representation::Regular(LpNorm::Inf)
        )
    }

    pub fn zero_vector(&self) -> Vector {
        match self {
            Representation::Trivial => Vector::Scalar(Rational::zero()),
            Representation::Regular(_) => Vector::Group(GroupVector::zero()),
            Representation::Matrix(m) => {
                Vector::Complex(DVector::from_element(m.dim(), Complex64::zero()))
            }
        }
    }

    /// Checks that `v` lives in this representation's space.
    pub fn check_vector(&self, v: &Vector) -> Result<()> {
        match (self, v) {
            (Representation::Trivial, Vector::Scalar(_)) => Ok(()),
            (Representation::Regular(_), Vector::Group(_)) => Ok(()),
            (Representation::Matrix(m), Vector::Complex(x)) if x.len() == m.dim() => Ok(()),
            (Representation::Matrix(m), Vector::Complex(x)) => Err(Error::Precondition(format!(
                "dimension mismatch: representation on C^{}, vector in C^{}",
                m.dim(),
                x.len()
            ))),
            _ => Err(Error::Precondition(format!(
                "vector kind {:?} does not match representation",
                v.kind()
            ))),
        }
    }

    /// The isometric action `rho(g) v`.
    pub fn act(&self, g: &ReducedWord, v: &Vector) -> Result<Vector> {
        self.check_vector(v)?;
        Ok(match (self, v) {
            (Representation::Trivial, Vector::Scalar(c)) => Vector::Scalar(c.clone()),
            (Representation::Regular(_), Vector::Group(x)) => Vector::Group(x.translate(g)),
            (Representation::Matrix(m), Vector::Complex(x)) => Vector::Complex(m.apply(g, x)),
            _ => unreachable!("check_vector guards kinds"),
        })
    }

    /// The norm of `v` in this backend, exact where the backend is.
    pub fn norm(&self, v: &Vector) -> Result<NormValue> {
        self.check_vector(v)?;
        Ok(match (self, v) {
            (Representation::Trivial, Vector::Scalar(c)) => NormValue::rational(c.abs()),
            (Representation::Regular(LpNorm::Exact(p)), Vector::Group(x)) => {
                NormValue::exact(x.norm_pow(*p), *p)
            }
            (Representation::Regular(LpNorm::Inf), Vector::Group(x)) => {
                NormValue::rational(x.sup_abs())
            }
            (Representation::Regular(LpNorm::Float(p)), Vector::Group(x)) => {
                NormValue::Approx(x.norm_float(*p))
            }
            (Representation::Matrix(_), Vector::Complex(x)) => NormValue::Approx(x.norm()),
            _ => unreachable!("check_vector guards kinds"),
        })
    }

    /// Exact `p`-th power of the norm; only for exact backends.
    pub fn norm_pow(&self, v: &Vector, p: u32) -> Result<Rational> {
        self.check_vector(v)?;
        match (self, v) {
            (Representation::Trivial, Vector::Scalar(c)) => Ok(crate::exact::pow_rat(&c.abs(), p)),
            (Representation::Regular(LpNorm::Exact(q)), Vector::Group(x)) if *q == p => {
                Ok(x.norm_pow(p))
            }
            (Representation::Regular(LpNorm::Exact(q)), Vector::Group(_)) => {
                Err(Error::Precondition(format!("norm_pow({p}) on an l^{q} backend")))
            }
            _ => Err(Error::Unsupported("exact norm powers need an exact backend".into())),
        }
    }
}
