//! Dense univariate polynomials over the coefficient field, stored as
//! ascending coefficient vectors.

use super::field::FieldElement;

pub type UPoly = Vec<FieldElement>;

pub fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &[FieldElement]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn mul(a: &[FieldElement], b: &[FieldElement]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElement::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[FieldElement], b: &[FieldElement]) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].inv().expect("nonzero leading coefficient");
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut qt = vec![FieldElement::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] * &lead;
        for (j, y) in b.iter().enumerate().take(db + 1) {
            let idx = dr - db + j;
            r[idx] = &r[idx] - &(&c * y);
        }
        qt[dr - db] = c;
        r = trim(r);
    }
    (trim(qt), r)
}

pub fn divides(d: &[FieldElement], p: &[FieldElement]) -> bool {
    degree(d).is_some() && divrem(p, d).1.is_empty()
}

/// `prod (x - r)` over the given roots.
pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a FieldElement>) -> UPoly {
    let mut p = vec![FieldElement::one()];
    for r in roots {
        p = mul(&p, &[-r, FieldElement::one()]);
    }
    p
}

pub fn eval(p: &[FieldElement], x: &FieldElement) -> FieldElement {
    p.iter()
        .rev()
        .fold(FieldElement::zero(), |acc, c| &(&acc * x) + c)
}

/// Multiplicity of `r` as a root of `p` (zero polynomial gives 0).
pub fn root_multiplicity(p: &[FieldElement], r: &FieldElement) -> usize {
    let lin = [-r, FieldElement::one()];
    let mut cur = trim(p.to_vec());
    let mut n = 0;
    while degree(&cur).is_some_and(|d| d > 0) {
        let (qt, rem) = divrem(&cur, &lin);
        if !rem.is_empty() {
            break;
        }
        cur = qt;
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    #[test]
    fn division_round_trip() {
        let a = from_roots(&[fe(1), fe(-1), FieldElement::q()]);
        let b = from_roots(&[fe(-1)]);
        let (qt, r) = divrem(&a, &b);
        assert!(r.is_empty());
        assert_eq!(mul(&qt, &b), a);
        assert!(divides(&b, &a));
        assert!(!divides(&from_roots(&[fe(2)]), &a));
        assert_eq!(eval(&a, &fe(1)), FieldElement::zero());
    }

    #[test]
    fn multiplicities() {
        let p = from_roots(&[fe(2), fe(2), fe(3)]);
        assert_eq!(root_multiplicity(&p, &fe(2)), 2);
        assert_eq!(root_multiplicity(&p, &fe(3)), 1);
        assert_eq!(root_multiplicity(&p, &fe(1)), 0);
    }
}
