//! Polynomial gcd over Q by reduction modulo word-size primes.
//!
//! Images modulo primes not dividing the leading coefficients bound the
//! degree of the true gcd from above, so a constant image certifies
//! coprimality outright. Otherwise the scaled images are combined by CRT,
//! lifted to the symmetric range and accepted only after exact trial
//! division; on failure the caller falls back to Euclid over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const PRIMES: [u64; 6] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits")
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd in F_p[x].
fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        // x <- x mod y
        let dy = y.len() - 1;
        let inv = invmod(y[dy], p);
        while x.len() > dy {
            let c = mulmod(*x.last().unwrap(), inv, p);
            let k = x.len() - 1 - dy;
            if c != 0 {
                for (i, &yc) in y.iter().enumerate() {
                    let t = mulmod(c, yc, p);
                    x[k + i] = (x[k + i] + p - t) % p;
                }
            }
            x.pop();
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    if let Some(&l) = x.last() {
        let inv = invmod(l, p);
        for c in x.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    x
}

/// Primitive integer multiple of a rational polynomial.
fn primitive_int(d: &[BigRational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in d {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = d.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn divides_exactly(d: &[BigInt], a: &[BigInt]) -> bool {
    // trial division over Z; the divisor is primitive, so Gauss's lemma
    // makes integrality of the quotient equivalent to divisibility over Q
    let mut r = a.to_vec();
    let dd = d.len() - 1;
    let lead = &d[dd];
    while r.len() > dd {
        let top = r.last().unwrap().clone();
        if top.is_zero() {
            r.pop();
            continue;
        }
        let (qc, rem) = top.div_rem(lead);
        if !rem.is_zero() {
            return false;
        }
        let k = r.len() - 1 - dd;
        for (i, dc) in d.iter().enumerate() {
            r[k + i] -= &qc * dc;
        }
        r.pop();
    }
    r.iter().all(|c| c.is_zero())
}

/// Monic gcd of two nonzero rational polynomials, or `None` when the
/// modular reconstruction does not certify itself within the prime budget.
pub(crate) fn modular_gcd(a: &[BigRational], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let pa = primitive_int(a);
    let pb = primitive_int(b);
    if pa.len() < 2 || pb.len() < 2 {
        return Some(vec![BigRational::one()]);
    }
    let la = pa.last().unwrap();
    let lb = pb.last().unwrap();
    let lc = la.gcd(lb);
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut best_deg = usize::MAX;
    for &p in PRIMES.iter() {
        if reduce(la, p) == 0 || reduce(lb, p) == 0 {
            continue;
        }
        let am: Vec<u64> = pa.iter().map(|c| reduce(c, p)).collect();
        let bm: Vec<u64> = pb.iter().map(|c| reduce(c, p)).collect();
        let g = gcd_mod(&am, &bm, p);
        let deg = g.len() - 1;
        if deg == 0 {
            return Some(vec![BigRational::one()]);
        }
        if deg > best_deg {
            continue; // unlucky prime
        }
        let scale = reduce(&lc, p);
        let img: Vec<u64> = g.iter().map(|&c| mulmod(c, scale, p)).collect();
        if deg < best_deg {
            best_deg = deg;
            modulus = BigInt::from(p);
            acc = img.iter().map(|&c| BigInt::from(c)).collect();
        } else {
            // CRT: x = acc mod M, x = img mod p
            let pm = BigInt::from(p);
            let minv = BigInt::from(invmod(reduce(&modulus, p), p));
            for (x, &r) in acc.iter_mut().zip(&img) {
                let diff = (BigInt::from(r) - &*x).mod_floor(&pm);
                let t = (diff * &minv).mod_floor(&pm);
                *x += &modulus * t;
            }
            modulus *= pm;
        }
        let half = &modulus >> 1;
        let lifted: Vec<BigInt> = acc
            .iter()
            .map(|c| if c > &half { c - &modulus } else { c.clone() })
            .collect();
        let cand = primitive_int(
            &lifted
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect::<Vec<_>>(),
        );
        if divides_exactly(&cand, &pa) && divides_exactly(&cand, &pb) {
            let l = BigRational::from_integer(cand.last().unwrap().clone());
            return Some(
                cand.into_iter()
                    .map(|c| BigRational::from_integer(c) / &l)
                    .collect(),
            );
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Vec<BigRational> {
        c.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn coprime_and_common_factor() {
        // (x - 1)(x + 2) and (x - 1)(3x + 5)
        let a = poly(&[-2, 1, 1]);
        let b = poly(&[-5, 2, 3]);
        assert_eq!(modular_gcd(&a, &b).unwrap(), poly(&[-1, 1]));
        let c = poly(&[1, 0, 1]);
        assert_eq!(modular_gcd(&a, &c).unwrap(), poly(&[1]));
    }

    #[test]
    fn rational_inputs() {
        let half = BigRational::new(1.into(), 2.into());
        // (x/2 + 1/2)(x - 3) = x^2/2 - x - 3/2 and (x + 1)^2
        let a = vec![
            -BigRational::from_integer(3.into()) * &half,
            -BigRational::one(),
            half.clone(),
        ];
        let b = poly(&[1, 2, 1]);
        assert_eq!(modular_gcd(&a, &b).unwrap(), poly(&[1, 1]));
    }

    #[test]
    fn large_coefficients() {
        // (1000003 x + 999983)(x^3 - 7) and (1000003 x + 999983)(x^2 + 11)
        let f = poly(&[999983, 1000003]);
        let mul = |a: &[BigRational], b: &[BigRational]| {
            let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let a = mul(&f, &poly(&[-7, 0, 0, 1]));
        let b = mul(&f, &poly(&[11, 0, 1]));
        let g = modular_gcd(&a, &b).unwrap();
        let want: Vec<BigRational> = f
            .iter()
            .map(|c| c / BigRational::from_integer(1000003.into()))
            .collect();
        assert_eq!(g, want);
    }
}
