use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Laurent polynomial in `u` with rational coefficients.
///
/// Terms are kept sorted by ascending exponent and never store a zero
/// coefficient, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, BigRational)>,
}

/// Dense coefficient vector of an ordinary polynomial, lowest degree first.
pub(crate) type Dense = Vec<BigRational>;

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly {
                terms: vec![(exp, c)],
            }
        }
    }

    /// `u^exp`
    pub fn upow(exp: i64) -> Self {
        Self::monomial(BigRational::one(), exp)
    }

    /// Builds the canonical form of an arbitrary term list: like exponents
    /// are merged and zero coefficients dropped.
    pub fn canonicalize<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut terms: Vec<(i64, BigRational)> = raw.into_iter().collect();
        terms.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i64, BigRational)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn terms(&self) -> &[(i64, BigRational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn low_exp(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn high_exp(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        match self.terms.binary_search_by_key(&exp, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    /// The single coefficient of a monomial, if this is one.
    pub fn as_monomial(&self) -> Option<(i64, &BigRational)> {
        if self.terms.len() == 1 {
            Some((self.terms[0].0, &self.terms[0].1))
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        match self.as_monomial() {
            Some((0, c)) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + by, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Substitutes `u -> c u`.
    pub fn rescale_var(&self, c: &BigRational) -> Self {
        Self::canonicalize(
            self.terms
                .iter()
                .map(|(e, k)| (*e, k * pow_rational(c, *e))),
        )
    }

    /// Dense coefficients of `self * u^(-low)` together with `low`.
    pub(crate) fn to_dense(&self) -> (i64, Dense) {
        let Some(low) = self.low_exp() else {
            return (0, Vec::new());
        };
        let high = self.high_exp().unwrap();
        let mut d = vec![BigRational::zero(); (high - low + 1) as usize];
        for (e, c) in &self.terms {
            d[(e - low) as usize] = c.clone();
        }
        (low, d)
    }

    pub(crate) fn from_dense(low: i64, d: &[BigRational]) -> Self {
        LaurentPoly {
            terms: d
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (low + i as i64, c.clone()))
                .collect(),
        }
    }

    /// True if all coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    fn fmt_term(f: &mut fmt::Formatter<'_>, e: i64, c: &BigRational, first: bool) -> fmt::Result {
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        match (e, a.is_one()) {
            (0, _) => write!(f, "{}", a),
            (_, true) => write!(f, "u^{}", e),
            _ => write!(f, "{}*u^{}", a, e),
        }
    }
}

pub(crate) fn pow_rational(c: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(c.clone(), e as usize)
    } else {
        num_traits::pow(c.recip(), (-e) as usize)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            Self::fmt_term(f, *e, c, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

fn merge(a: &LaurentPoly, b: &LaurentPoly, negate_b: bool) -> LaurentPoly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let take_a = j >= b.terms.len() || (i < a.terms.len() && a.terms[i].0 < b.terms[j].0);
        let take_b = i >= a.terms.len() || (j < b.terms.len() && b.terms[j].0 < a.terms[i].0);
        if take_a {
            out.push(a.terms[i].clone());
            i += 1;
        } else if take_b {
            let (e, c) = &b.terms[j];
            out.push((*e, if negate_b { -c } else { c.clone() }));
            j += 1;
        } else {
            let e = a.terms[i].0;
            let c = if negate_b {
                &a.terms[i].1 - &b.terms[j].1
            } else {
                &a.terms[i].1 + &b.terms[j].1
            };
            if !c.is_zero() {
                out.push((e, c));
            }
            i += 1;
            j += 1;
        }
    }
    LaurentPoly { terms: out }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(self, rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(self, rhs, true)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some((e, c)) = self.as_monomial() {
            return LaurentPoly {
                terms: rhs.terms.iter().map(|(f, d)| (e + f, c * d)).collect(),
            };
        }
        if let Some((e, c)) = rhs.as_monomial() {
            return LaurentPoly {
                terms: self.terms.iter().map(|(f, d)| (e + f, d * c)).collect(),
            };
        }
        let low = self.low_exp().unwrap() + rhs.low_exp().unwrap();
        let high = self.high_exp().unwrap() + rhs.high_exp().unwrap();
        let mut acc = vec![BigRational::zero(); (high - low + 1) as usize];
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                acc[(e + f - low) as usize] += c * d;
            }
        }
        LaurentPoly::from_dense(low, &acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

// ----- dense polynomial helpers (ordinary polynomials, lowest degree first) -----

pub(crate) fn dense_trim(d: &mut Dense) {
    while d.last().is_some_and(|c| c.is_zero()) {
        d.pop();
    }
}

/// Quotient and remainder of `a / b` for dense polynomials over Q.
pub(crate) fn dense_divrem(a: &[BigRational], b: &[BigRational]) -> (Dense, Dense) {
    let mut r: Dense = a.to_vec();
    dense_trim(&mut r);
    let mut bb: Dense = b.to_vec();
    dense_trim(&mut bb);
    assert!(!bb.is_empty(), "polynomial division by zero");
    if r.len() < bb.len() {
        return (Vec::new(), r);
    }
    let db = bb.len() - 1;
    let lead_inv = bb[db].recip();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] * &lead_inv;
        for (i, bc) in bb.iter().enumerate() {
            let t = &c * bc;
            r[k + i] -= t;
        }
        q[k] = c;
        r.pop();
        dense_trim(&mut r);
    }
    (q, r)
}

/// Monic gcd of two dense polynomials over Q.
pub(crate) fn dense_gcd(a: &[BigRational], b: &[BigRational]) -> Dense {
    let mut x: Dense = a.to_vec();
    let mut y: Dense = b.to_vec();
    dense_trim(&mut x);
    dense_trim(&mut y);
    if !x.is_empty() && !y.is_empty() {
        if let Some(g) = super::modgcd::modular_gcd(&x, &y) {
            return g;
        }
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![BigRational::one()];
        }
        let (_, r) = dense_divrem(&x, &y);
        x = y;
        y = make_monic(r);
    }
    make_monic(x)
}

pub(crate) fn make_monic(mut d: Dense) -> Dense {
    dense_trim(&mut d);
    if let Some(l) = d.last().cloned() {
        if !l.is_one() {
            let li = l.recip();
            for c in d.iter_mut() {
                *c *= &li;
            }
        }
    }
    d
}

/// Scalar `s` such that `s * d` has coprime integer coefficients and a
/// positive constant term. `d` must have a nonzero constant term.
pub(crate) fn primitive_scale(d: &[BigRational]) -> BigRational {
    let mut den_lcm = BigInt::one();
    for c in d {
        if !c.is_zero() {
            den_lcm = den_lcm.lcm(c.denom());
        }
    }
    let mut num_gcd = BigInt::zero();
    for c in d {
        if !c.is_zero() {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
    }
    let mut s = BigRational::new(den_lcm, num_gcd);
    if (&d[0] * &s).is_negative() {
        s = -s;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonicalize_cancels() {
        let p = LaurentPoly::canonicalize(vec![(2, r(1, 1)), (2, r(-1, 1))]);
        assert!(p.is_zero());
    }

    #[test]
    fn canonicalize_constant() {
        let p = LaurentPoly::canonicalize(vec![(0, r(3, 1))]);
        assert_eq!(p, LaurentPoly::from_int(3));
    }

    #[test]
    fn canonicalize_drops_zero_terms() {
        let p = LaurentPoly::canonicalize(vec![(-4, r(1, 2)), (0, r(0, 1))]);
        assert_eq!(p.terms(), &[(-4, r(1, 2))]);
        assert_eq!(LaurentPoly::canonicalize(p.terms().to_vec()), p);
    }

    #[test]
    fn display_ascending() {
        let p = LaurentPoly::canonicalize(vec![(0, r(1, 1)), (-4, r(-3, 2)), (2, r(1, 1))]);
        assert_eq!(p.to_string(), "-3/2*u^-4 + 1 + u^2");
    }

    #[test]
    fn divrem_exact() {
        // (1 - x^2) / (1 - x) = 1 + x
        let a = vec![r(1, 1), r(0, 1), r(-1, 1)];
        let b = vec![r(1, 1), r(-1, 1)];
        let (q, rem) = dense_divrem(&a, &b);
        assert!(rem.is_empty());
        assert_eq!(q, vec![r(1, 1), r(1, 1)]);
    }

    #[test]
    fn gcd_common_factor() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = vec![r(-2, 1), r(1, 1), r(1, 1)];
        let b = vec![r(3, 1), r(-4, 1), r(1, 1)];
        assert_eq!(dense_gcd(&a, &b), vec![r(-1, 1), r(1, 1)]);
    }
}
