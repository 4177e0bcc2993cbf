//! The diagonal coboundary on `l^inf(F2)`.
//!
//! For a quasi-cocycle `H` into the regular `l^inf` backend, the 0-cochain
//! `x -> H(x)(x)` has coboundary `H_0(g)(x) = H(x)(x) - H(g^-1 x)(g^-1 x)`,
//! an exact cocycle within `Delta(H)` of `H` in the sup norm. Its full
//! support is infinite, so values are materialized on finite balls only.

use super::QuasiCocycleSpec;
use crate::exact::Rational;
use crate::spaces::{GroupVector, LpNorm, Representation, Vector};
use crate::words::{ball, ReducedWord};
use crate::{Error, Result};

pub const H0_RADIUS_GUARD: usize = 10;

/// The diagonal value `H(x)(x)`.
pub fn diagonal_value(spec: &QuasiCocycleSpec, x: &ReducedWord) -> Result<Rational> {
    match spec.evaluate(x) {
        Vector::Group(v) => Ok(v.coeff(x)),
        _ => Err(Error::Precondition("diagonal values need the regular backend".into())),
    }
}

/// `H_0(g)` restricted to `ball(radius)`: the map
/// `x -> H(x)(x) - H(g^-1 x)(g^-1 x)` with zero entries dropped.
///
/// The evaluation reaches out to `ball(radius + |g|)`, where all needed
/// diagonal values exist; the radius guard keeps that cheap.
pub fn diagonal_coboundary(
    spec: &QuasiCocycleSpec,
    g: &ReducedWord,
    radius: usize,
) -> Result<GroupVector> {
    if !matches!(spec.rep, Representation::Regular(LpNorm::Inf)) {
        return Err(Error::Precondition(
            "the diagonal coboundary lives on the regular l^inf backend".into(),
        ));
    }
    if radius > H0_RADIUS_GUARD {
        return Err(Error::Precondition(format!(
            "ball radius {radius} exceeds the guard {H0_RADIUS_GUARD}"
        )));
    }
    let g_inv = g.inverse();
    let mut out = GroupVector::zero();
    for x in ball(radius) {
        let here = diagonal_value(spec, &x)?;
        let there = diagonal_value(spec, &g_inv.mul(&x))?;
        out.add_term(&x, here - there);
    }
    Ok(out)
}
