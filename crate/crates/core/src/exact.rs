//! Exact rational arithmetic helpers shared by the coefficient backends.
//!
//! Norms of exact vectors are carried around as p-th powers to avoid
//! radicals; the helpers here compare such quantities without ever rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Renders a rational as `p` or `p/q`, the canonical exact text form.
pub fn rational_str(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back on a quotient of lossy conversions for huge terms.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact conversion of a finite float (used to freeze sampled estimates).
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Precondition(format!("non-finite value {x}")))
}

/// A norm magnitude `pow^(1/p)`, exact whenever `pow` is rational.
///
/// `p = 1` is the plain rational case and is what the trivial backend and
/// the `l^inf` norm produce. Floating backends use [`NormValue::Approx`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub enum NormValue {
    Exact {
        #[serde(serialize_with = "ser_rational")]
        pow: Rational,
        p: u32,
    },
    Approx(f64),
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_str(r))
}

impl NormValue {
    pub fn exact(pow: Rational, p: u32) -> Self {
        NormValue::Exact { pow, p }
    }

    pub fn rational(value: Rational) -> Self {
        NormValue::Exact { pow: value, p: 1 }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact { pow, p } => rational_to_f64(pow).powf(1.0 / f64::from(*p)),
            NormValue::Approx(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NormValue::Exact { pow, .. } => pow.is_zero(),
            NormValue::Approx(x) => *x == 0.0,
        }
    }

    /// Total order on magnitudes; exact values compare exactly
    /// (`a^(1/p) <= b^(1/q)` iff `a^q <= b^p` for nonnegative values).
    pub fn cmp_value(&self, other: &NormValue) -> std::cmp::Ordering {
        use NormValue::*;
        match (self, other) {
            (Exact { pow: a, p }, Exact { pow: b, p: q }) => {
                if p == q {
                    a.cmp(b)
                } else {
                    pow_rat(a, *q).cmp(&pow_rat(b, *p))
                }
            }
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(std::cmp::Ordering::Equal),
        }
    }

    /// Exact comparison against a nonnegative rational bound:
    /// `pow^(1/p) <= bound` iff `pow <= bound^p`.
    pub fn le_rational(&self, bound: &Rational) -> bool {
        match self {
            NormValue::Exact { pow, p } => {
                if bound.is_negative() {
                    false
                } else {
                    *pow <= pow_rat(bound, *p)
                }
            }
            NormValue::Approx(x) => *x <= rational_to_f64(bound),
        }
    }
}

pub fn pow_rat(r: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}

/// Exact p-th root when it exists: requires numerator and denominator to be
/// perfect p-th powers.
pub fn rational_nth_root(x: &Rational, p: u32) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().nth_root(p);
    let d = x.denom().nth_root(p);
    let candidate = Rational::new(n, d);
    if pow_rat(&candidate, p) == *x {
        Some(candidate)
    } else {
        None
    }
}

/// Rational upper bound on `sqrt(x)` with error below `2^-bits`, by
/// bisection. `x` must be nonnegative.
pub fn sqrt_upper_bound(x: &Rational, bits: u32) -> Rational {
    if let Some(r) = rational_nth_root(x, 2) {
        return r;
    }
    let (_, hi) = nth_root_bounds(x, 2, bits);
    hi
}

/// Rational enclosure `lo <= x^(1/p) <= hi` with `hi - lo <= 2^-bits`.
pub fn nth_root_bounds(x: &Rational, p: u32, bits: u32) -> (Rational, Rational) {
    assert!(!x.is_negative(), "nth_root_bounds needs x >= 0");
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let one = Rational::one();
    let mut lo = Rational::zero();
    let mut hi = if *x >= one { x.clone() } else { one };
    let two = rat_int(2);
    let width_target = Rational::new(BigInt::one(), BigInt::from(2).pow(bits));
    while &hi - &lo > width_target {
        let mid = (&lo + &hi) / &two;
        if pow_rat(&mid, p) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Decides `post_pow^(1/p) >= pre_pow^(1/p) + eps` exactly.
///
/// For `p = 1` and `p = 2` the decision is pure rational algebra. For other
/// exponents the roots are enclosed by bisection and refined until the
/// intervals separate; an equality that survives 512 fractional bits is
/// reported as an error rather than guessed.
pub fn norm_gain_at_least(post_pow: &Rational, pre_pow: &Rational, p: u32, eps: &Rational) -> Result<bool> {
    if post_pow.is_negative() || pre_pow.is_negative() {
        return Err(Error::Precondition("norm powers must be nonnegative".into()));
    }
    match p {
        0 => Err(Error::Precondition("p must be >= 1".into())),
        1 => Ok(post_pow >= &(pre_pow + eps)),
        2 => {
            // post >= pre + eps  <=>  post_pow >= pre_pow + 2 eps sqrt(pre_pow) + eps^2
            let lhs = post_pow - pre_pow - eps * eps;
            if lhs.is_negative() {
                return Ok(false);
            }
            // lhs >= 2 eps sqrt(pre_pow) <=> lhs^2 >= 4 eps^2 pre_pow
            Ok(&lhs * &lhs >= rat_int(4) * eps * eps * pre_pow)
        }
        _ => {
            if let (Some(pre), Some(post)) = (rational_nth_root(pre_pow, p), rational_nth_root(post_pow, p)) {
                return Ok(post >= pre + eps);
            }
            for bits in [64u32, 128, 256, 512] {
                let (post_lo, post_hi) = nth_root_bounds(post_pow, p, bits);
                let (pre_lo, pre_hi) = nth_root_bounds(pre_pow, p, bits);
                if post_lo >= &pre_hi + eps {
                    return Ok(true);
                }
                if post_hi < &pre_lo + eps {
                    return Ok(false);
                }
            }
            Err(Error::Unsupported(format!(
                "norm gain comparison undecided at 512 bits for p = {p}"
            )))
        }
    }
}

/// Harmonic number `H_n = 1 + 1/2 + ... + 1/n` as an exact rational.
pub fn harmonic(n: u64) -> Rational {
    let mut acc = Rational::zero();
    for i in 1..=n {
        acc += Rational::new(BigInt::one(), BigInt::from(i));
    }
    acc
}
