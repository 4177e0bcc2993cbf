//! Text forms for vectors, shared by the CLI and JSON configs.
//!
//! Regular backend: semicolon list of `word:rational` pairs, with `1` for
//! the identity (`1:1` is the delta at the identity, `ab:-2/3` a signed
//! rational weight). Matrix backend: comma list of complex components like
//! `1`, `-0.5i`, `0.25+0.75i`.

use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;

use super::GroupVector;
use crate::exact::Rational;
use crate::words::ReducedWord;
use crate::{Error, Result};

/// Parses `p`, `-p`, or `p/q`. Decimal points are rejected: exact contexts
/// take exact input.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let numer: BigInt = num_text
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {text:?} (use p or p/q)")))?;
    let denom: BigInt = match den_text {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {text:?} (use p or p/q)")))?,
        None => BigInt::from(1),
    };
    if denom == BigInt::from(0) {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(numer, denom))
}

/// Parses the regular-backend vector literal `word:rational;word:rational`.
pub fn parse_regular_vector(text: &str) -> Result<GroupVector> {
    let mut v = GroupVector::zero();
    for piece in text.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (word_text, coeff_text) = piece
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected word:rational, got {piece:?}")))?;
        let word_text = word_text.trim();
        let word = if word_text == "1" {
            ReducedWord::identity()
        } else {
            ReducedWord::parse(word_text)?
        };
        v.add_term(&word, parse_rational(coeff_text)?);
    }
    Ok(v)
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty complex component".into()));
    }
    let bad = || Error::Parse(format!("bad complex component {text:?}"));
    // Split at the last sign that is not leading; both halves are plain
    // decimal literals, the imaginary one ending in `i`.
    let split_at = t
        .char_indices()
        .skip(1)
        .filter(|(i, c)| (*c == '+' || *c == '-') && !matches!(t.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    let (re_text, im_text) = match split_at {
        Some(i) => (&t[..i], &t[i..]),
        None => {
            return if let Some(stripped) = t.strip_suffix('i') {
                let value = if stripped.is_empty() || stripped == "+" {
                    1.0
                } else if stripped == "-" {
                    -1.0
                } else {
                    stripped.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(0.0, value))
            } else {
                Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
            };
        }
    };
    let im_core = im_text.strip_suffix('i').ok_or_else(bad)?;
    let im = if im_core == "+" {
        1.0
    } else if im_core == "-" {
        -1.0
    } else {
        im_core.parse().map_err(|_| bad())?
    };
    Ok(Complex64::new(re_text.parse().map_err(|_| bad())?, im))
}

/// Parses a comma-separated complex component list.
pub fn parse_complex_vector(text: &str) -> Result<DVector<Complex64>> {
    let comps: Vec<Complex64> = text
        .split(',')
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    if comps.is_empty() {
        return Err(Error::Parse("empty complex vector".into()));
    }
    Ok(DVector::from_vec(comps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3").unwrap(), rat_int(3));
        assert_eq!(parse_rational("-2/3").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational(" 4/6 ").unwrap(), rat(2, 3));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn regular_vectors() {
        let v = parse_regular_vector("1:1").unwrap();
        assert_eq!(v, GroupVector::delta(ReducedWord::identity()));
        let v = parse_regular_vector("1:1; ab:-2/3").unwrap();
        assert_eq!(v.coeff(&ReducedWord::parse("ab").unwrap()), rat(-2, 3));
        assert_eq!(v.support_size(), 2);
        assert!(parse_regular_vector("ab").is_err());
        // duplicate keys accumulate
        let v = parse_regular_vector("a:1;a:-1").unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn complex_vectors() {
        let v = parse_complex_vector("1, -0.5i, 0.25+0.75i, 2-3i").unwrap();
        assert_eq!(v[0], Complex64::new(1.0, 0.0));
        assert_eq!(v[1], Complex64::new(0.0, -0.5));
        assert_eq!(v[2], Complex64::new(0.25, 0.75));
        assert_eq!(v[3], Complex64::new(2.0, -3.0));
        assert_eq!(parse_complex_vector("i").unwrap()[0], Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex_vector("1e-3").unwrap()[0], Complex64::new(1e-3, 0.0));
        assert!(parse_complex_vector("").is_err());
        assert!(parse_complex_vector("1+2j").is_err());
    }
}
