//! Averaging over a finite set of isometries: the projection
//! `pi(x) = (1/|K|) sum rho(k) x` onto the `K`-invariant subspace.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeSet;

use crate::exact::{rat, Rational};
use crate::spaces::{matrix_max_abs_diff, Representation, Vector};
use crate::words::ReducedWord;
use crate::{Error, Result};

const MATRIX_CLOSURE_TOL: f64 = 1e-9;

/// The averaging set: either group elements acting through the
/// representation, or explicit unitary matrices.
#[derive(Clone, Debug)]
pub enum KSet {
    Words(Vec<ReducedWord>),
    Matrices(Vec<DMatrix<Complex64>>),
}

impl KSet {
    pub fn len(&self) -> usize {
        match self {
            KSet::Words(v) => v.len(),
            KSet::Matrices(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Closure under the operation, by multiplication table.
    fn check_closed(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::Precondition("K must be nonempty".into()));
        }
        match self {
            KSet::Words(words) => {
                let set: BTreeSet<&ReducedWord> = words.iter().collect();
                for x in words {
                    for y in words {
                        if !set.contains(&x.mul(y)) {
                            return Err(Error::Precondition(format!(
                                "K not closed: {x} . {y} missing"
                            )));
                        }
                    }
                }
                Ok(())
            }
            KSet::Matrices(mats) => {
                let d = mats[0].nrows();
                if mats.iter().any(|m| m.nrows() != d || m.ncols() != d) {
                    return Err(Error::Precondition("K matrices must share one square size".into()));
                }
                for x in mats {
                    for y in mats {
                        let product = x * y;
                        let closed = mats
                            .iter()
                            .any(|m| matrix_max_abs_diff(&product, m) <= MATRIX_CLOSURE_TOL);
                        if !closed {
                            return Err(Error::Precondition("K not closed under products".into()));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// `pi(v) = (1/|K|) sum_{k in K} k(v)`. Idempotent and `K`-invariant.
///
/// Word sets act through `rep`; matrix sets act directly on complex vectors
/// of their own dimension.
pub fn k_average(rep: &Representation, k: &KSet, v: &Vector) -> Result<Vector> {
    k.check_closed()?;
    match k {
        KSet::Words(words) => {
            rep.check_vector(v)?;
            let mut acc = rep.zero_vector();
            for g in words {
                acc = acc.add(&rep.act(g, v)?)?;
            }
            scale_vector(&acc, words.len())
        }
        KSet::Matrices(mats) => {
            let Vector::Complex(x) = v else {
                return Err(Error::Precondition("matrix K sets act on complex vectors".into()));
            };
            if mats[0].nrows() != x.len() {
                return Err(Error::Precondition("K matrix size does not match vector".into()));
            }
            let mut acc = nalgebra::DVector::from_element(x.len(), Complex64::new(0.0, 0.0));
            for m in mats {
                acc += m * x;
            }
            Ok(Vector::Complex(acc / Complex64::new(mats.len() as f64, 0.0)))
        }
    }
}

fn scale_vector(v: &Vector, count: usize) -> Result<Vector> {
    let inv: Rational = rat(1, count as i64);
    Ok(match v {
        Vector::Scalar(c) => Vector::Scalar(c * &inv),
        Vector::Group(g) => Vector::Group(g.scale(&inv)),
        Vector::Complex(x) => Vector::Complex(x / Complex64::new(count as f64, 0.0)),
    })
}
