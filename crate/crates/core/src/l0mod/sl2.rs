use crate::coeff::FieldElement;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// The `d`-dimensional irreducible sl2-module in its weight basis
/// `v_{d-1}, v_{d-3}, ..., v_{1-d}`; returns `(E12, E21, H)`.
///
/// `E21` maps the k-th basis vector to the (k+1)-th, and `E12` is scaled so
/// that `[E12, E21] = H`.
pub fn sl2_irrep(
    d: usize,
) -> Result<(
    Matrix<FieldElement>,
    Matrix<FieldElement>,
    Matrix<FieldElement>,
)> {
    if d == 0 {
        return Err(Error::InvalidModule(
            "sl2 irrep dimension must be positive".into(),
        ));
    }
    let mut e = Matrix::zeros(d, d);
    let mut f = Matrix::zeros(d, d);
    let mut h = Matrix::zeros(d, d);
    let top = d as i64 - 1;
    for k in 0..d {
        h.set(k, k, FieldElement::from_int(top - 2 * k as i64));
        if k + 1 < d {
            f.set(k + 1, k, FieldElement::one());
            // E12 E21 v_k = (k+1)(d-1-k) v_k
            let c = (k as i64 + 1) * (top - k as i64);
            e.set(k, k + 1, FieldElement::from_int(c));
        }
    }
    Ok((e, f, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_hold() {
        for d in 1..=5 {
            let (e, f, h) = sl2_irrep(d).unwrap();
            assert_eq!(e.commutator(&f), h);
            assert_eq!(h.commutator(&e), e.scale(&FieldElement::from_int(2)));
            assert_eq!(h.commutator(&f), f.scale(&FieldElement::from_int(-2)));
        }
    }

    #[test]
    fn small_cases() {
        let (e, f, h) = sl2_irrep(1).unwrap();
        assert!(e.is_zero() && f.is_zero() && h.is_zero());
        let (_, _, h) = sl2_irrep(2).unwrap();
        assert_eq!(h.get(0, 0), &FieldElement::one());
        assert_eq!(h.get(1, 1), &FieldElement::from_int(-1));
        let (_, _, h) = sl2_irrep(3).unwrap();
        assert_eq!(h.get(0, 0), &FieldElement::from_int(2));
        assert!(sl2_irrep(0).is_err());
    }
}
