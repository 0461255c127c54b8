use std::fmt::Debug;

use super::field::FieldElement;
use super::prime::{Fp, PrimeSpec};
use crate::error::Result;

/// The operations the linear-algebra kernels need from a coefficient field.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    /// Image in the prime field; `None` where a denominator vanishes.
    fn to_prime(&self, spec: &PrimeSpec) -> Option<Fp>;
    /// Whether elimination over this type benefits from a prime-field
    /// pivot search first.
    fn wants_guide() -> bool {
        false
    }
    /// `sum a_i b_i`
    fn dot<'a>(pairs: impl Iterator<Item = (&'a Self, &'a Self)>) -> Self
    where
        Self: 'a,
    {
        let mut acc = Self::zero();
        for (a, b) in pairs {
            if !a.is_zero() && !b.is_zero() {
                acc = acc.add(&a.mul(b));
            }
        }
        acc
    }
}

impl Scalar for FieldElement {
    fn zero() -> Self {
        FieldElement::zero()
    }
    fn one() -> Self {
        FieldElement::one()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        FieldElement::inv(self).ok()
    }
    fn from_i64(n: i64) -> Self {
        FieldElement::from_int(n)
    }
    fn to_prime(&self, spec: &PrimeSpec) -> Option<Fp> {
        spec.specialize(self).ok()
    }
    fn wants_guide() -> bool {
        true
    }
    fn dot<'a>(pairs: impl Iterator<Item = (&'a Self, &'a Self)>) -> Self {
        FieldElement::dot(pairs)
    }
}

impl Scalar for Fp {
    fn zero() -> Self {
        Fp::ZERO
    }
    fn one() -> Self {
        Fp::ONE
    }
    fn is_zero(&self) -> bool {
        Fp::is_zero(*self)
    }
    fn add(&self, o: &Self) -> Self {
        Fp::add(*self, *o)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp::sub(*self, *o)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp::mul(*self, *o)
    }
    fn neg(&self) -> Self {
        Fp::neg(*self)
    }
    fn inv(&self) -> Option<Self> {
        Fp::inv(*self)
    }
    fn from_i64(n: i64) -> Self {
        Fp::from_i64(n)
    }
    fn to_prime(&self, _spec: &PrimeSpec) -> Option<Fp> {
        Some(*self)
    }
}

/// How exact coefficients are mapped into a working scalar type.
pub trait Backend: Clone + Send + Sync {
    type S: Scalar;
    fn lift(&self, x: &FieldElement) -> Result<Self::S>;
    fn name(&self) -> &'static str;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Backend for Exact {
    type S = FieldElement;
    fn lift(&self, x: &FieldElement) -> Result<FieldElement> {
        Ok(x.clone())
    }
    fn name(&self) -> &'static str {
        "exact"
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Prime(pub PrimeSpec);

impl Backend for Prime {
    type S = Fp;
    fn lift(&self, x: &FieldElement) -> Result<Fp> {
        self.0.specialize(x)
    }
    fn name(&self) -> &'static str {
        "prime"
    }
}
