use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;

use super::field::FieldElement;
use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

/// Default modulus, the largest prime below 2^62.
pub const MODULUS: u64 = (1u64 << 62) - 57;

/// Residue modulo [`MODULUS`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn new(v: u64) -> Self {
        Fp(v % MODULUS)
    }

    pub fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(MODULUS as i64) as u64)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(MODULUS));
        Fp(r.to_u64().expect("reduced residue fits"))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }

    pub fn sub(self, o: Fp) -> Fp {
        Fp(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + MODULUS - o.0
        })
    }

    pub fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(MODULUS - self.0)
        }
    }

    pub fn mul(self, o: Fp) -> Fp {
        Fp(((self.0 as u128 * o.0 as u128) % MODULUS as u128) as u64)
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut acc = Fp::ONE;
        let mut b = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(b);
            }
            b = b.mul(b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Fp> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(MODULUS - 2))
        }
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Evaluation point for the prime backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeSpec {
    pub modulus: u64,
    pub u_value: u64,
    pub guard_bound: u64,
}

pub const DEFAULT_GUARD: u64 = 10_000;

impl PrimeSpec {
    pub fn new(u_value: u64, guard_bound: u64) -> Result<Self> {
        let s = PrimeSpec {
            modulus: MODULUS,
            u_value: u_value % MODULUS,
            guard_bound,
        };
        s.validate()?;
        Ok(s)
    }

    /// Draws a fresh evaluation point passing the genericity guard.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        loop {
            let v = rng.gen_range(2..MODULUS - 1);
            if let Ok(s) = Self::new(v, DEFAULT_GUARD) {
                return s;
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modulus != MODULUS {
            return Err(Error::InvalidPrimeSpec(format!(
                "only the modulus {} is supported",
                MODULUS
            )));
        }
        if self.guard_bound == 0 {
            return Err(Error::InvalidPrimeSpec(
                "guard bound must be positive".into(),
            ));
        }
        let u = Fp::new(self.u_value);
        if u.is_zero() {
            return Err(Error::InvalidPrimeSpec(
                "u must be a nonzero residue".into(),
            ));
        }
        let mut p = Fp::ONE;
        for n in 1..=self.guard_bound {
            p = p.mul(u);
            if p == Fp::ONE {
                return Err(Error::InvalidPrimeSpec(format!(
                    "u = {} has multiplicative order {}",
                    self.u_value, n
                )));
            }
        }
        Ok(())
    }

    pub fn u(&self) -> Fp {
        Fp::new(self.u_value)
    }

    fn vanishes(&self) -> Error {
        Error::DenominatorVanishes {
            modulus: self.modulus,
            u_value: self.u_value,
        }
    }

    fn rational(&self, c: &BigRational) -> Result<Fp> {
        let d = Fp::from_bigint(c.denom());
        let d = d.inv().ok_or_else(|| self.vanishes())?;
        Ok(Fp::from_bigint(c.numer()).mul(d))
    }

    fn eval_poly(&self, p: &LaurentPoly) -> Result<Fp> {
        let u = self.u();
        let ui = u.inv().ok_or_else(|| self.vanishes())?;
        let mut acc = Fp::ZERO;
        for (e, c) in p.terms() {
            let m = if *e >= 0 {
                u.pow(*e as u64)
            } else {
                ui.pow(e.unsigned_abs())
            };
            acc = acc.add(self.rational(c)?.mul(m));
        }
        Ok(acc)
    }

    /// Image of `x` under `u -> u_value`.
    pub fn specialize(&self, x: &FieldElement) -> Result<Fp> {
        if x.is_zero() {
            return Ok(Fp::ZERO);
        }
        let d = self.eval_poly(x.denom())?;
        let di = d.inv().ok_or_else(|| self.vanishes())?;
        Ok(self.eval_poly(x.numer())?.mul(di))
    }
}

/// Free-function form of [`PrimeSpec::specialize`].
pub fn specialize(x: &FieldElement, s: &PrimeSpec) -> Result<Fp> {
    s.specialize(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> PrimeSpec {
        PrimeSpec::new(123_456_789, DEFAULT_GUARD).unwrap()
    }

    #[test]
    fn modulus_is_prime() {
        // Miller-Rabin with the deterministic base set for 64-bit inputs
        let n = MODULUS;
        let mut d = n - 1;
        let mut s = 0;
        while d.is_multiple_of(2) {
            d /= 2;
            s += 1;
        }
        for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = Fp::new(a).pow(d);
            if x == Fp::ONE || x == Fp::ONE.neg() {
                continue;
            }
            let mut ok = false;
            for _ in 1..s {
                x = x.mul(x);
                if x == Fp::ONE.neg() {
                    ok = true;
                    break;
                }
            }
            assert!(ok, "witness {a}");
        }
    }

    #[test]
    fn specialize_examples() {
        let s = spec();
        let u0 = s.u();
        assert_eq!(s.specialize(&FieldElement::zero()).unwrap(), Fp::ZERO);
        assert_eq!(s.specialize(&FieldElement::q()).unwrap(), u0.mul(u0));
        let one = FieldElement::one();
        let q = FieldElement::q();
        let x = (&one - &(&q * &q)) / (&one - &q);
        assert_eq!(s.specialize(&x).unwrap(), Fp::ONE.add(u0.mul(u0)));
    }

    #[test]
    fn vanishing_denominator() {
        let s = PrimeSpec::new(2, DEFAULT_GUARD).unwrap();
        // 1/(4 - q) at u = 2
        let x = FieldElement::one() / (FieldElement::from_int(4) - FieldElement::q());
        assert!(matches!(
            s.specialize(&x),
            Err(Error::DenominatorVanishes { .. })
        ));
    }

    #[test]
    fn guard_rejects_roots_of_unity() {
        assert!(PrimeSpec::new(1, DEFAULT_GUARD).is_err());
        assert!(PrimeSpec::new(MODULUS - 1, DEFAULT_GUARD).is_err());
        assert!(PrimeSpec::new(0, DEFAULT_GUARD).is_err());
    }
}
