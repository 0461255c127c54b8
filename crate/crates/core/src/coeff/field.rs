use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::{dense_divrem, dense_gcd, primitive_scale, Dense, LaurentPoly};
use crate::error::{Error, Result};

/// Element of Q(u), u^2 = q, stored as a reduced fraction of Laurent
/// polynomials.
///
/// Normal form: the denominator is an ordinary polynomial with nonzero
/// constant term, integer coefficients of content one and a positive
/// constant term; all powers of `u` live in the numerator; numerator and
/// denominator are coprime. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        FieldElement {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(r))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// `u^n`
    pub fn upow(n: i64) -> Self {
        Self::from_poly(LaurentPoly::upow(n))
    }

    /// `q^n = u^(2n)`
    pub fn qpow(n: i64) -> Self {
        Self::upow(2 * n)
    }

    pub fn q() -> Self {
        Self::upow(2)
    }

    /// `(-1)^n`
    pub fn sign(n: i64) -> Self {
        Self::from_int(if n.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (a, n) = num.to_dense();
        let (b, d) = den.to_dense();
        if d.len() == 1 {
            let inv = d[0].recip();
            return Self::from_poly(LaurentPoly::from_dense(a - b, &n).scale(&inv));
        }
        let (n, d) = cancel(n, d);
        let s = primitive_scale(&d);
        let n: Dense = n.iter().map(|c| c * &s).collect();
        let d: Dense = d.iter().map(|c| c * &s).collect();
        if d.len() == 1 {
            return Self::from_poly(LaurentPoly::from_dense(a - b, &n));
        }
        FieldElement {
            num: LaurentPoly::from_dense(a - b, &n),
            den: LaurentPoly::from_dense(0, &d),
        }
    }

    /// Normal form of `num / den` for coprime inputs with `den` an
    /// ordinary polynomial with nonzero constant term.
    fn finish(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let d = dense_of(&den);
        if d.len() == 1 {
            return Self::from_poly(num.scale(&d[0].recip()));
        }
        let s = primitive_scale(&d);
        FieldElement {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }

    /// `num / den` where any common factor is known to divide `g`.
    fn cancel_by(num: LaurentPoly, den: LaurentPoly, g: &[BigRational]) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (low, n) = num.to_dense();
        let h = dense_gcd(&n, g);
        if h.len() <= 1 {
            return Self::finish(num, den);
        }
        let n = LaurentPoly::from_dense(low, &dense_divrem(&n, &h).0);
        let d = LaurentPoly::from_dense(0, &dense_divrem(&dense_of(&den), &h).0);
        Self::finish(n, d)
    }

    /// Sum with numerators over equal denominators accumulated before any
    /// cancellation.
    pub fn sum(terms: impl IntoIterator<Item = FieldElement>) -> Self {
        Self::sum_fractions(terms.into_iter().map(|t| (t.num, t.den)))
    }

    /// `sum a_i b_i`, cancelling once per distinct denominator.
    pub fn dot<'a>(pairs: impl Iterator<Item = (&'a FieldElement, &'a FieldElement)>) -> Self {
        Self::sum_fractions(
            pairs
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| (&a.num * &b.num, &a.den * &b.den)),
        )
    }

    fn sum_fractions(terms: impl Iterator<Item = (LaurentPoly, LaurentPoly)>) -> Self {
        let mut groups: Vec<(LaurentPoly, LaurentPoly)> = Vec::new();
        for (num, den) in terms {
            if num.is_zero() {
                continue;
            }
            match groups.iter_mut().find(|(d, _)| *d == den) {
                Some((_, n)) => *n = &*n + &num,
                None => groups.push((den, num)),
            }
        }
        let mut acc = Self::zero();
        for (d, n) in groups {
            let x = if d.is_one() {
                Self::from_poly(n)
            } else {
                let g = dense_of(&d);
                Self::cancel_by(n, d, &g)
            };
            acc = &acc + &x;
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Exact `a/b` for fixed, known nonzero `b`; panics on zero.
    pub fn div_nonzero(&self, rhs: &Self) -> Self {
        self.checked_div(rhs).expect("division by zero")
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        FieldElement {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
    }
}

fn dense_of(p: &LaurentPoly) -> Dense {
    p.to_dense().1
}

/// Removes the common factor of a Laurent numerator and an ordinary
/// denominator.
fn cross_cancel(num: &LaurentPoly, den: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if den.is_one() || num.len() == 1 {
        return (num.clone(), den.clone());
    }
    let (low, n) = num.to_dense();
    let d = dense_of(den);
    let g = dense_gcd(&n, &d);
    if g.len() <= 1 {
        return (num.clone(), den.clone());
    }
    (
        LaurentPoly::from_dense(low, &dense_divrem(&n, &g).0),
        LaurentPoly::from_dense(0, &dense_divrem(&d, &g).0),
    )
}

fn cancel(n: Dense, d: Dense) -> (Dense, Dense) {
    let g = dense_gcd(&n, &d);
    if g.len() <= 1 {
        return (n, d);
    }
    let (nq, _) = dense_divrem(&n, &g);
    let (dq, _) = dense_divrem(&d, &g);
    (nq, dq)
}

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return FieldElement::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            return FieldElement::cancel_by(num, self.den.clone(), &dense_of(&self.den));
        }
        // Henrici: only the common part of the denominators can cancel
        let (bd, dd) = (dense_of(&self.den), dense_of(&rhs.den));
        let g = dense_gcd(&bd, &dd);
        if g.len() <= 1 {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return FieldElement::finish(num, &self.den * &rhs.den);
        }
        let bq = LaurentPoly::from_dense(0, &dense_divrem(&bd, &g).0);
        let dq = LaurentPoly::from_dense(0, &dense_divrem(&dd, &g).0);
        let num = &(&self.num * &dq) + &(&rhs.num * &bq);
        FieldElement::cancel_by(num, &self.den * &dq, &g)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() || rhs.is_zero() {
            return FieldElement::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return FieldElement::from_poly(&self.num * &rhs.num);
        }
        // both factors are reduced, so cross-cancellation suffices
        let (a, b) = cross_cancel(&self.num, &rhs.den);
        let (c, d) = cross_cancel(&rhs.num, &self.den);
        FieldElement::finish(&a * &c, &b * &d)
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.div_nonzero(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl One for FieldElement {
    fn one() -> Self {
        FieldElement::one()
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldElement {
        FieldElement::q()
    }
    fn one() -> FieldElement {
        FieldElement::one()
    }

    #[test]
    fn add_inverse() {
        assert!((q() + (-q())).is_zero());
    }

    #[test]
    fn u_squared_is_q() {
        let u = FieldElement::upow(1);
        assert_eq!(&u * &u, q());
    }

    #[test]
    fn divides_exactly() {
        let a = one() - &q() * &q();
        let b = one() - q();
        assert_eq!(a / b, one() + q());
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(
            one().checked_div(&FieldElement::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn upow_values() {
        assert!(FieldElement::upow(0).is_one());
        assert_eq!(FieldElement::upow(2), q());
        let inv = one() / FieldElement::upow(3);
        assert_eq!(inv, FieldElement::upow(-3));
        assert_eq!(FieldElement::upow(-3).to_string(), "u^-3");
    }

    #[test]
    fn normal_form_display() {
        // (1 - 3/2 u^-4) / (1 + u^2)
        let n = LaurentPoly::canonicalize(vec![
            (0, BigRational::one()),
            (-4, BigRational::new((-3).into(), 2.into())),
        ]);
        let d = LaurentPoly::canonicalize(vec![(0, BigRational::one()), (2, BigRational::one())]);
        let x = FieldElement::new(n, d).unwrap();
        assert_eq!(x.to_string(), "(-3/2*u^-4 + 1)/(1 + u^2)");
    }

    #[test]
    fn denominators_normalized() {
        // 1/(2 - 2q) == (1/2)/(1 - q)
        let a = one() / (FieldElement::from_int(2) - FieldElement::from_int(2) * q());
        let b = FieldElement::ratio(1, 2) / (one() - q());
        assert_eq!(a, b);
        assert_eq!(a.denom().to_string(), "1 - u^2");
        // negative constant term gets flipped
        let c = one() / (q() - one());
        assert_eq!(c.to_string(), "(-1)/(1 - u^2)");
    }

    #[test]
    fn powers_of_u_cancel() {
        let x = q() / (q() + &q() * &q());
        assert_eq!(x, one() / (one() + q()));
    }
}
