use super::element::Element;
use super::grading::LElement;
use super::keys::{AffKey, LKey, TauKey};
use crate::coeff::FieldElement;

pub type TauElement = Element<TauKey>;
pub type AffElement = Element<AffKey>;

fn sgn(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Product phase of the quantum torus: `t0^i t^m * t0^j t^n = phase * t0^(i+j) t^(m+n)`
/// with phase `(-1)^(m1 j) q^(m2 n1)`, returned as `(sign, power of u)`.
pub fn torus_phase(m: (i64, i64), j: i64, n: (i64, i64)) -> (i64, i64) {
    (sgn(m.0 * j), 2 * m.1 * n.0)
}

/// Bracket of two basis keys of L.
pub fn bracket_l_keys(a: &LKey, b: &LKey) -> LElement {
    let (LKey::Torus { m, i }, LKey::Torus { m: n, i: j }) = (a, b) else {
        return Element::zero();
    };
    let (i, j) = (*i as i64, *j as i64);
    let left = FieldElement::from_int(sgn(m.0 * j)) * FieldElement::upow(2 * m.1 * n.0);
    let right = FieldElement::from_int(sgn(i * n.0)) * FieldElement::upow(2 * m.0 * n.1);
    let mut out = Element::zero();
    let s = (m.0 + n.0, m.1 + n.1);
    let key = LKey::t(i + j, s);
    let c = &left - &right;
    if key.is_valid() {
        out.add_term(key, c);
    } else {
        debug_assert!(c.is_zero(), "forbidden key with nonzero coefficient");
    }
    if (i + j) % 2 == 0 && s == (0, 0) {
        out.add_term(LKey::C1, &left * &FieldElement::from_int(m.0));
        out.add_term(LKey::C2, &left * &FieldElement::from_int(m.1));
    }
    out
}

pub fn bracket_l(x: &LElement, y: &LElement) -> LElement {
    x.bilinear(y, bracket_l_keys)
}

/// Bracket of two basis keys of tau.
pub fn bracket_tau_keys(a: &TauKey, b: &TauKey) -> TauElement {
    let (TauKey::Mat { m, i, j }, TauKey::Mat { m: n, i: k, j: l }) = (a, b) else {
        return Element::zero();
    };
    let s = (m.0 + n.0, m.1 + n.1);
    let mut out = Element::zero();
    let left = FieldElement::upow(4 * m.1 * n.0);
    if j == k {
        out.add_term(TauKey::e(*i, *l, s), left.clone());
    }
    if l == i {
        out.add_term(TauKey::e(*k, *j, s), -FieldElement::upow(4 * n.1 * m.0));
    }
    // trace form tr(E_ij E_kl) = delta_jk delta_li
    if s == (0, 0) && j == k && l == i {
        out.add_term(TauKey::K1, &left * &FieldElement::from_int(m.0));
        out.add_term(TauKey::K2, &left * &FieldElement::from_int(m.1));
    }
    out
}

pub fn bracket_tau(x: &TauElement, y: &TauElement) -> TauElement {
    x.bilinear(y, bracket_tau_keys)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sl2 {
    E,
    H,
    F,
}

fn split_aff(k: &AffKey) -> Option<(Sl2, i64)> {
    match k {
        AffKey::K => None,
        AffKey::E12(j) => Some((Sl2::E, *j)),
        AffKey::H(j) => Some((Sl2::H, *j)),
        AffKey::E21(j) => Some((Sl2::F, *j)),
    }
}

fn aff_key(x: Sl2, j: i64) -> AffKey {
    match x {
        Sl2::E => AffKey::E12(j),
        Sl2::H => AffKey::H(j),
        Sl2::F => AffKey::E21(j),
    }
}

/// Bracket of two basis keys of the affine algebra:
/// `[X(x^a), Y(x^b)] = [X,Y](x^(a+b)) + a delta_{a+b,0} (X,Y) K`.
pub fn bracket_aff_keys(a: &AffKey, b: &AffKey) -> AffElement {
    let (Some((x, p)), Some((y, r))) = (split_aff(a), split_aff(b)) else {
        return Element::zero();
    };
    let s = p + r;
    let mut out = Element::zero();
    let (sl2, form): (Option<(Sl2, i64)>, i64) = match (x, y) {
        (Sl2::E, Sl2::F) => (Some((Sl2::H, 1)), 1),
        (Sl2::F, Sl2::E) => (Some((Sl2::H, -1)), 1),
        (Sl2::H, Sl2::E) => (Some((Sl2::E, 2)), 0),
        (Sl2::E, Sl2::H) => (Some((Sl2::E, -2)), 0),
        (Sl2::H, Sl2::F) => (Some((Sl2::F, -2)), 0),
        (Sl2::F, Sl2::H) => (Some((Sl2::F, 2)), 0),
        (Sl2::H, Sl2::H) => (None, 2),
        _ => (None, 0),
    };
    if let Some((z, c)) = sl2 {
        out.add_term(aff_key(z, s), FieldElement::from_int(c));
    }
    if s == 0 && form != 0 {
        out.add_term(AffKey::K, FieldElement::from_int(p * form));
    }
    out
}

pub fn bracket_aff(x: &AffElement, y: &AffElement) -> AffElement {
    x.bilinear(y, bracket_aff_keys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(i: i64, m: (i64, i64)) -> LElement {
        Element::basis(LKey::t(i, m))
    }

    #[test]
    fn l_examples() {
        let r = bracket_l(&l(1, (1, 0)), &l(1, (-1, 0)));
        assert_eq!(r, Element::term(LKey::C1, FieldElement::from_int(-1)));
        let r = bracket_l(&l(0, (0, 1)), &l(0, (1, 0)));
        let c = FieldElement::q() - FieldElement::one();
        assert_eq!(r, Element::term(LKey::t(0, (1, 1)), c));
        let x = l(1, (2, -1)).add(&l(0, (1, 1)));
        assert!(bracket_l(&x, &x).is_zero());
        assert!(bracket_l(&Element::basis(LKey::C2), &x).is_zero());
    }

    #[test]
    fn forbidden_key_never_appears() {
        for a in -2..=2 {
            for b in -2..=2 {
                for i in 0..2 {
                    let r = bracket_l(&l(i, (a, b)), &l(i, (-a, -b)));
                    assert!(r.keys().all(|k| k.is_valid()));
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        let e = |i, j, m| Element::basis(TauKey::e(i, j, m));
        let r = bracket_tau(&e(1, 2, (0, 1)), &e(2, 1, (1, 0)));
        let want = Element::from_terms([
            (TauKey::e(1, 1, (1, 1)), FieldElement::qpow(2)),
            (TauKey::e(2, 2, (1, 1)), FieldElement::from_int(-1)),
        ]);
        assert_eq!(r, want);
        let r = bracket_tau(&e(1, 2, (1, 0)), &e(2, 1, (-1, 0)));
        let want = Element::from_terms([
            (TauKey::e(1, 1, (0, 0)), FieldElement::one()),
            (TauKey::e(2, 2, (0, 0)), FieldElement::from_int(-1)),
            (TauKey::K1, FieldElement::one()),
        ]);
        assert_eq!(r, want);
        assert!(bracket_tau(&Element::basis(TauKey::K1), &e(1, 1, (2, 3))).is_zero());
    }

    #[test]
    fn aff_examples() {
        let b = |k| Element::basis(k);
        assert_eq!(
            bracket_aff(&b(AffKey::H(1)), &b(AffKey::H(-1))),
            Element::term(AffKey::K, FieldElement::from_int(2))
        );
        assert_eq!(
            bracket_aff(&b(AffKey::E12(0)), &b(AffKey::E21(0))),
            b(AffKey::H(0))
        );
        assert!(bracket_aff(&b(AffKey::K), &b(AffKey::E12(5))).is_zero());
    }
}
