use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::FieldElement;

/// Finite linear combination of basis keys with exact coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Element<K: Ord> {
    terms: BTreeMap<K, FieldElement>,
}

impl<K: Ord + Copy> Element<K> {
    pub fn zero() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, FieldElement::one())
    }

    pub fn term(k: K, c: FieldElement) -> Self {
        let mut e = Self::zero();
        e.add_term(k, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, FieldElement)>) -> Self {
        let mut e = Self::zero();
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    pub fn add_term(&mut self, k: K, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &FieldElement) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(*k, c * s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> FieldElement {
        self.terms
            .get(k)
            .cloned()
            .unwrap_or_else(FieldElement::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &FieldElement)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        let mut e = Self::zero();
        e.add_scaled(self, s);
        e
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut e = self.clone();
        e.add_scaled(o, &FieldElement::one());
        e
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut e = self.clone();
        e.add_scaled(o, &FieldElement::from_int(-1));
        e
    }

    /// Bilinear extension of a bracket given on basis keys.
    pub fn bilinear(&self, o: &Self, f: impl Fn(&K, &K) -> Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let v = f(a, b);
                if !v.is_zero() {
                    out.add_scaled(&v, &(ca * cb));
                }
            }
        }
        out
    }

    /// Linear extension of a map given on basis keys.
    pub fn map_linear<T: Ord + Copy, E>(
        &self,
        mut f: impl FnMut(&K) -> Result<Element<T>, E>,
    ) -> Result<Element<T>, E> {
        let mut out = Element::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }
}

impl<K: Ord + Copy> Default for Element<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Ord + Copy + fmt::Display> fmt::Display for Element<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let (neg, body) = match c.as_rational() {
                Some(r) if r < num_rational::BigRational::from_integer(0.into()) => {
                    (true, format!("{}", -r))
                }
                Some(r) => (false, format!("{}", r)),
                None => (false, format!("({})", c)),
            };
            match (n, neg) {
                (0, true) => write!(f, "-{}*{}", body, k)?,
                (0, false) => write!(f, "{}*{}", body, k)?,
                (_, true) => write!(f, " - {}*{}", body, k)?,
                (_, false) => write!(f, " + {}*{}", body, k)?,
            }
        }
        Ok(())
    }
}

impl<K: Ord + Copy + fmt::Display> fmt::Debug for Element<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
