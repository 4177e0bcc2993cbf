//! Parsing of representation descriptors and backend-typed vectors from
//! command-line text.
//!
//! Descriptors: `trivial`, `regular:P` (`P` an integer, a decimal, or
//! `inf`), `matrix:FILE.json`, `u2:SEED[:DENOM_BOUND]`,
//! `rot:SEED[:MIN_GAP]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use qclab_core::spaces::{
    parse_complex_vector, parse_rational, parse_regular_vector, random_generic_u2,
    random_rotation_rep, LpNorm, MatrixRep, Representation, Vector,
};
use qclab_core::{Error, Result};

pub fn parse_rep(text: &str) -> Result<Representation> {
    let (head, rest) = match text.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (text, None),
    };
    match head {
        "trivial" => Ok(Representation::Trivial),
        "regular" => {
            let p = rest.ok_or_else(|| Error::Parse("regular:P needs an exponent".into()))?;
            let norm = if p == "inf" {
                LpNorm::Inf
            } else if let Ok(k) = p.parse::<u32>() {
                LpNorm::Exact(k)
            } else if let Ok(f) = p.parse::<f64>() {
                LpNorm::Float(f)
            } else {
                return Err(Error::Parse(format!("bad l^p exponent {p:?}")));
            };
            norm.validate()?;
            Ok(Representation::Regular(norm))
        }
        "matrix" => {
            let path = rest.ok_or_else(|| Error::Parse("matrix:FILE needs a path".into()))?;
            load_matrix_rep(path)
        }
        "u2" => {
            let rest = rest.ok_or_else(|| Error::Parse("u2:SEED needs a seed".into()))?;
            let (seed_text, bound_text) = match rest.split_once(':') {
                Some((s, b)) => (s, Some(b)),
                None => (rest, None),
            };
            let seed: u64 = seed_text
                .parse()
                .map_err(|_| Error::Parse(format!("bad u2 seed {seed_text:?}")))?;
            let bound: u32 = match bound_text {
                Some(b) => b.parse().map_err(|_| Error::Parse(format!("bad bound {b:?}")))?,
                None => 50,
            };
            Ok(Representation::Matrix(random_generic_u2(seed, bound)?))
        }
        "rot" => {
            let rest = rest.ok_or_else(|| Error::Parse("rot:SEED needs a seed".into()))?;
            let (seed_text, gap_text) = match rest.split_once(':') {
                Some((s, g)) => (s, Some(g)),
                None => (rest, None),
            };
            let seed: u64 = seed_text
                .parse()
                .map_err(|_| Error::Parse(format!("bad rot seed {seed_text:?}")))?;
            let min_gap: f64 = match gap_text {
                Some(g) => g.parse().map_err(|_| Error::Parse(format!("bad gap {g:?}")))?,
                None => 0.1,
            };
            Ok(Representation::Matrix(random_rotation_rep(seed, min_gap)?))
        }
        other => Err(Error::Parse(format!(
            "unknown representation {other:?} (trivial | regular:P | matrix:FILE | u2:SEED | rot:SEED)"
        ))),
    }
}

#[derive(serde::Deserialize)]
struct MatrixFile {
    dim: usize,
    u_a: Vec<[f64; 2]>,
    u_b: Vec<[f64; 2]>,
}

/// Reads generator matrices from JSON: row-major `[re, im]` pair lists, the
/// same shape the `u2` subcommand emits.
pub fn load_matrix_rep(path: &str) -> Result<Representation> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("bad matrix file {path}: {e}")))?;
    let build = |pairs: &[[f64; 2]]| -> Result<DMatrix<Complex64>> {
        if pairs.len() != file.dim * file.dim {
            return Err(Error::Parse(format!(
                "matrix needs {} entries, found {}",
                file.dim * file.dim,
                pairs.len()
            )));
        }
        Ok(DMatrix::from_fn(file.dim, file.dim, |i, j| {
            let p = pairs[i * file.dim + j];
            Complex64::new(p[0], p[1])
        }))
    };
    Ok(Representation::Matrix(MatrixRep::new(build(&file.u_a)?, build(&file.u_b)?)?))
}

/// Parses the seed vector in whichever literal form the backend takes.
pub fn parse_vector(rep: &Representation, text: &str) -> Result<Vector> {
    let v = match rep {
        Representation::Trivial => Vector::Scalar(parse_rational(text)?),
        Representation::Regular(_) => Vector::Group(parse_regular_vector(text)?),
        Representation::Matrix(_) => Vector::Complex(parse_complex_vector(text)?),
    };
    rep.check_vector(&v)?;
    Ok(v)
}
