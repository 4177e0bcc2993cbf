//! Finitely supported exact vectors on `F2`, the model for `l^p(F2)`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::exact::{pow_rat, Rational};
use crate::words::ReducedWord;

/// A finite map `ReducedWord -> Rational` with no explicit zero entries.
/// The `BTreeMap` keeps iteration (and serialization) deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupVector {
    entries: BTreeMap<ReducedWord, Rational>,
}

impl GroupVector {
    pub fn zero() -> Self {
        GroupVector::default()
    }

    /// The basis vector `delta_g`.
    pub fn delta(g: ReducedWord) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(g, Rational::from_integer(1.into()));
        GroupVector { entries }
    }

    pub fn from_entries<I: IntoIterator<Item = (ReducedWord, Rational)>>(iter: I) -> Self {
        let mut v = GroupVector::zero();
        for (g, c) in iter {
            v.add_term(&g, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ReducedWord, &Rational)> {
        self.entries.iter()
    }

    pub fn coeff(&self, g: &ReducedWord) -> Rational {
        self.entries.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, g: &ReducedWord, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(g) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.entries.remove(g);
                }
            }
            None => {
                self.entries.insert(g.clone(), c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &GroupVector) {
        for (g, c) in &other.entries {
            self.add_term(g, c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &GroupVector) {
        for (g, c) in &other.entries {
            self.add_term(g, -c.clone());
        }
    }

    pub fn negate(&self) -> GroupVector {
        GroupVector {
            entries: self.entries.iter().map(|(g, c)| (g.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> GroupVector {
        if s.is_zero() {
            return GroupVector::zero();
        }
        GroupVector {
            entries: self.entries.iter().map(|(g, c)| (g.clone(), c * s)).collect(),
        }
    }

    /// Left regular action: `(g . v)(x) = v(g^-1 x)`, i.e. `g . delta_h =
    /// delta_{gh}`.
    pub fn translate(&self, g: &ReducedWord) -> GroupVector {
        GroupVector {
            entries: self.entries.iter().map(|(h, c)| (g.mul(h), c.clone())).collect(),
        }
    }

    /// `sum |c|^p`, the exact p-th power of the `l^p` norm.
    pub fn norm_pow(&self, p: u32) -> Rational {
        let mut acc = Rational::zero();
        for c in self.entries.values() {
            acc += pow_rat(&c.abs(), p);
        }
        acc
    }

    /// `max |c|`, the exact `l^inf` norm.
    pub fn sup_abs(&self) -> Rational {
        self.entries
            .values()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Floating `l^p` norm for non-integer exponents.
    pub fn norm_float(&self, p: f64) -> f64 {
        let sum: f64 = self
            .entries
            .values()
            .map(|c| crate::exact::rational_to_f64(&c.abs()).powf(p))
            .sum();
        sum.powf(1.0 / p)
    }

    /// Exact dot product `sum self(x) other(x)`.
    pub fn dot(&self, other: &GroupVector) -> Rational {
        let (small, large) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Rational::zero();
        for (g, c) in &small.entries {
            if let Some(d) = large.entries.get(g) {
                acc += c * d;
            }
        }
        acc
    }
}

impl serde::Serialize for GroupVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (g, c) in &self.entries {
            let key = if g.is_identity() { "1".to_string() } else { g.render() };
            map.serialize_entry(&key, &crate::exact::rational_str(c))?;
        }
        map.end()
    }
}
