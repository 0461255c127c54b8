use super::element::Element;
use super::keys::LKey;
use crate::error::{Error, Result};

pub type LElement = Element<LKey>;

/// A Z-basis (m1, m2) of Z^2; m = j*m1 + k*m2 has degree j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GradingBasis {
    pub m1: (i64, i64),
    pub m2: (i64, i64),
}

impl GradingBasis {
    pub fn new(m1: (i64, i64), m2: (i64, i64)) -> Result<Self> {
        let d = m1.0 * m2.1 - m1.1 * m2.0;
        if d != 1 && d != -1 {
            return Err(Error::BadDeterminant(d));
        }
        Ok(GradingBasis { m1, m2 })
    }

    pub fn standard() -> Self {
        GradingBasis {
            m1: (1, 0),
            m2: (0, 1),
        }
    }

    /// `m11*m22 - m12*m21`, always +1 or -1.
    pub fn alpha(&self) -> i64 {
        self.m1.0 * self.m2.1 - self.m1.1 * self.m2.0
    }

    /// `m11*c1 + m12*c2`
    pub fn beta(&self) -> LElement {
        central(self.m1)
    }

    /// `m21*c1 + m22*c2`, which spans the commutators of L0.
    pub fn gamma(&self) -> LElement {
        central(self.m2)
    }

    pub fn m21_odd(&self) -> bool {
        self.m2.0.rem_euclid(2) == 1
    }

    /// `m21*m22`, the exponent scale in the L0 structure constants.
    pub fn m2_prod(&self) -> i64 {
        self.m2.0 * self.m2.1
    }

    /// Coordinates `(j, k)` with `m = j*m1 + k*m2`.
    pub fn coords(&self, m: (i64, i64)) -> (i64, i64) {
        let d = self.alpha();
        let j = (m.0 * self.m2.1 - m.1 * self.m2.0) * d;
        let k = (self.m1.0 * m.1 - self.m1.1 * m.0) * d;
        (j, k)
    }

    pub fn vector(&self, j: i64, k: i64) -> (i64, i64) {
        (j * self.m1.0 + k * self.m2.0, j * self.m1.1 + k * self.m2.1)
    }

    pub fn grade_of(&self, key: &LKey) -> i64 {
        match key {
            LKey::C1 | LKey::C2 => 0,
            LKey::Torus { m, .. } => self.coords(*m).0,
        }
    }

    /// The basis with the grading reversed, used for lowest-weight modules.
    pub fn mirrored(&self) -> Self {
        GradingBasis {
            m1: (-self.m1.0, -self.m1.1),
            m2: self.m2,
        }
    }
}

fn central(v: (i64, i64)) -> LElement {
    use crate::coeff::FieldElement;
    Element::from_terms([
        (LKey::C1, FieldElement::from_int(v.0)),
        (LKey::C2, FieldElement::from_int(v.1)),
    ])
}

pub fn grade_of(key: &LKey, basis: &GradingBasis) -> i64 {
    basis.grade_of(key)
}

/// Keys of the truncated graded piece L_j: `t0^i t^(j m1 + k m2)` for
/// |k| <= window (ascending k, then i), preceded by `c1`, `c2` when j = 0.
pub fn enumerate_graded(j: i64, window: i64, basis: &GradingBasis) -> Vec<LKey> {
    let mut out = Vec::new();
    if j == 0 {
        out.push(LKey::C1);
        out.push(LKey::C2);
    }
    for k in -window..=window {
        let m = basis.vector(j, k);
        for i in 0..2 {
            let key = LKey::t(i, m);
            if key.is_valid() {
                out.push(key);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_determinant() {
        assert_eq!(
            GradingBasis::new((2, 0), (0, 1)),
            Err(Error::BadDeterminant(2))
        );
    }

    #[test]
    fn grades() {
        let std = GradingBasis::standard();
        assert_eq!(std.grade_of(&LKey::C1), 0);
        assert_eq!(std.grade_of(&LKey::t(0, (1, 0))), 1);
        let b = GradingBasis::new((2, 1), (1, 1)).unwrap();
        assert_eq!(b.grade_of(&LKey::t(1, (5, 3))), 2);
        assert_eq!(b.coords((5, 3)), (2, 1));
        let n = GradingBasis::new((0, 1), (1, 0)).unwrap();
        assert_eq!(n.alpha(), -1);
        assert_eq!(n.coords(n.vector(3, -2)), (3, -2));
    }

    #[test]
    fn enumeration_counts() {
        let std = GradingBasis::standard();
        assert_eq!(
            enumerate_graded(1, 0, &std),
            vec![LKey::t(0, (1, 0)), LKey::t(1, (1, 0))]
        );
        assert_eq!(enumerate_graded(0, 1, &std).len(), 7);
        assert_eq!(enumerate_graded(-1, 1, &std).len(), 6);
    }
}
