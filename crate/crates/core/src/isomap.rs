//! The isomorphism L -> tau and the map from the affine part of L0 onto
//! affine sl2, with a harness that checks bracket preservation and
//! injectivity on finite boxes.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    bracket_l, AffElement, AffKey, Element, GradingBasis, LElement, LKey, TauElement, TauKey,
};
use crate::coeff::FieldElement;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

fn half() -> FieldElement {
    FieldElement::ratio(1, 2)
}

/// Image of a basis key of L in tau, in raw torus coordinates.
pub fn phi_tau_key(k: &LKey) -> TauElement {
    phi_tau_key_with(k, true)
}

fn phi_tau_key_with(k: &LKey, correction: bool) -> TauElement {
    match k {
        LKey::C1 => Element::basis(TauKey::K1),
        LKey::C2 => Element::term(TauKey::K2, FieldElement::from_int(2)),
        LKey::Torus { m: (n1, n2), i } => {
            let sign = FieldElement::sign(*i as i64);
            let qn = FieldElement::qpow(-n2);
            let a = n1.div_euclid(2);
            if n1.rem_euclid(2) == 1 {
                Element::from_terms([
                    (TauKey::e(1, 2, (a, *n2)), &sign * &qn),
                    (TauKey::e(2, 1, (a + 1, *n2)), FieldElement::one()),
                ])
            } else {
                let mut e = Element::from_terms([
                    (TauKey::e(1, 1, (a, *n2)), sign),
                    (TauKey::e(2, 2, (a, *n2)), qn),
                ]);
                if correction && *i == 1 && a == 0 && *n2 == 0 {
                    e.add_term(TauKey::K1, half());
                }
                e
            }
        }
    }
}

pub fn phi_tau(x: &LElement) -> TauElement {
    x.map_linear::<_, ()>(|k| Ok(phi_tau_key(k))).unwrap()
}

/// The same map with the `1/2 K1` term on `t0^1 t^0` dropped; it is not a
/// homomorphism and serves as a negative control for the harness.
pub fn phi_tau_uncorrected(x: &LElement) -> TauElement {
    x.map_linear::<_, ()>(|k| Ok(phi_tau_key_with(k, false)))
        .unwrap()
}

/// Image in affine sl2 of an element of `B + <m21 c1 + m22 c2>` (m21 odd).
///
/// `t0^1 t^(2j m2)` goes to `-q^(-2 j^2 m22 m21) H(x^j) + delta_{j,0} K / 2`:
/// the central term sits only at `j = 0`, with the same sign as the `K1`
/// correction of the map to tau. The commonly printed form
/// `-q^(..)(H(x^j) + K/2)` fails on `[t0^0 t^((2j+1) m2), t0^1 t^((2l+1) m2)]`.
pub fn phi_aff(x: &LElement, basis: &GradingBasis) -> Result<AffElement> {
    phi_aff_with(x, basis, false)
}

/// The printed form above; not a homomorphism, kept as a negative control.
pub fn phi_aff_printed(x: &LElement, basis: &GradingBasis) -> Result<AffElement> {
    phi_aff_with(x, basis, true)
}

fn phi_aff_with(x: &LElement, basis: &GradingBasis, printed: bool) -> Result<AffElement> {
    if !basis.m21_odd() {
        return Err(Error::ParityMismatch("the affine map needs m21 odd".into()));
    }
    let p = basis.m2_prod();
    let mut out = Element::zero();
    let mut central = (FieldElement::zero(), FieldElement::zero());
    for (k, c) in x.iter() {
        match k {
            LKey::C1 => central.0 = c.clone(),
            LKey::C2 => central.1 = c.clone(),
            LKey::Torus { m, i } => {
                let (deg, kk) = basis.coords(*m);
                if deg != 0 {
                    return Err(Error::NotInDomain(format!("{k} has degree {deg}")));
                }
                let img = if kk.rem_euclid(2) == 0 {
                    if *i == 0 {
                        return Err(Error::NotInDomain(format!(
                            "{k} lies in the Heisenberg part"
                        )));
                    }
                    let j = kk / 2;
                    let s = -FieldElement::upow(-4 * j * j * p);
                    if printed {
                        Element::from_terms([(AffKey::H(j), s.clone()), (AffKey::K, &s * &half())])
                    } else if j == 0 {
                        Element::from_terms([(AffKey::H(0), s), (AffKey::K, half())])
                    } else {
                        Element::term(AffKey::H(j), s)
                    }
                } else {
                    let j = (kk - 1).div_euclid(2);
                    let s = FieldElement::upow(-(2 * j + 1) * (2 * j + 1) * p);
                    Element::from_terms([
                        (AffKey::E12(j), &s * &FieldElement::sign(*i as i64)),
                        (AffKey::E21(j + 1), s),
                    ])
                };
                out.add_scaled(&img, c);
            }
        }
    }
    // the central part must be a multiple of m21 c1 + m22 c2
    let (a, b) = central;
    if !a.is_zero() || !b.is_zero() {
        let (g1, g2) = (
            FieldElement::from_int(basis.m2.0),
            FieldElement::from_int(basis.m2.1),
        );
        if !(&a * &g2 - &b * &g1).is_zero() {
            return Err(Error::NotInDomain(format!(
                "central part {a}*c1 + {b}*c2 is not a multiple of m21*c1 + m22*c2"
            )));
        }
        let lambda = if basis.m2.0 != 0 { &a / &g1 } else { &b / &g2 };
        out.add_term(AffKey::K, lambda);
    }
    Ok(out)
}

/// Spanning elements of the affine part B for loop indices |j| <= window,
/// followed by m21 c1 + m22 c2.
pub fn affine_generators(basis: &GradingBasis, window: i64) -> Vec<LElement> {
    let mut out = Vec::new();
    for j in -window..=window {
        out.push(Element::basis(LKey::t(1, basis.vector(0, 2 * j))));
        for i in 0..2 {
            out.push(Element::basis(LKey::t(i, basis.vector(0, 2 * j + 1))));
        }
    }
    out.push(basis.gamma());
    out
}

/// Spanning elements of the Heisenberg part A (without its center).
pub fn heisenberg_generators(basis: &GradingBasis, window: i64) -> Vec<LElement> {
    (-window..=window)
        .filter(|&j| j != 0)
        .map(|j| Element::basis(LKey::t(0, basis.vector(0, 2 * j))))
        .collect()
}

/// All basis keys of L with raw torus indices in `[-b, b]^2`, both parities,
/// plus c1 and c2.
pub fn l_box(b: i64) -> Vec<LKey> {
    let mut out = vec![LKey::C1, LKey::C2];
    for m1 in -b..=b {
        for m2 in -b..=b {
            for i in 0..2 {
                let k = LKey::t(i, (m1, m2));
                if k.is_valid() {
                    out.push(k);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HomFailure {
    pub x: String,
    pub y: String,
    pub image_of_bracket: String,
    pub bracket_of_images: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HomReport {
    #[serde(rename = "checkedPairs")]
    pub checked_pairs: usize,
    pub failures: Vec<HomFailure>,
    #[serde(rename = "sourceDim")]
    pub source_dim: usize,
    #[serde(rename = "imageRank")]
    pub image_rank: usize,
    pub injective: bool,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.injective
    }
}

/// Checks `map([x, y]) == [map(x), map(y)]` for all unordered pairs of
/// `sources` and that the images of `sources` are linearly independent.
/// A map error on a bracket counts as a failure.
pub fn verify_hom<S, T, M, BS, BT>(
    sources: &[Element<S>],
    map: M,
    src_bracket: BS,
    tgt_bracket: BT,
) -> HomReport
where
    S: Ord + Copy + Send + Sync + std::fmt::Display,
    T: Ord + Copy + Send + Sync + std::fmt::Display,
    M: Fn(&Element<S>) -> Result<Element<T>> + Sync,
    BS: Fn(&Element<S>, &Element<S>) -> Element<S> + Sync,
    BT: Fn(&Element<T>, &Element<T>) -> Element<T> + Sync,
{
    let images: Vec<Option<Element<T>>> = sources.par_iter().map(|x| map(x).ok()).collect();
    let n = sources.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let failures: Vec<HomFailure> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let (x, y) = (&sources[a], &sources[b]);
            let lhs = map(&src_bracket(x, y));
            let rhs = match (&images[a], &images[b]) {
                (Some(fx), Some(fy)) => Some(tgt_bracket(fx, fy)),
                _ => None,
            };
            match (lhs, rhs) {
                (Ok(l), Some(r)) if l == r => None,
                (l, r) => Some(HomFailure {
                    x: x.to_string(),
                    y: y.to_string(),
                    image_of_bracket: l.map(|e| e.to_string()).unwrap_or_else(|e| e.to_string()),
                    bracket_of_images: r
                        .map(|e| e.to_string())
                        .unwrap_or_else(|| "undefined".into()),
                }),
            }
        })
        .collect();
    let ok_images: Vec<&Element<T>> = images.iter().flatten().collect();
    let image_rank = rank_of(&ok_images);
    HomReport {
        checked_pairs: pairs.len(),
        failures,
        source_dim: n,
        image_rank,
        injective: image_rank == n && ok_images.len() == n,
    }
}

/// Exact rank of a family of elements.
pub fn rank_of<T: Ord + Copy>(elems: &[&Element<T>]) -> usize {
    let keys: Vec<T> = elems
        .iter()
        .flat_map(|e| e.keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if keys.is_empty() {
        return 0;
    }
    let m = Matrix::from_fn(elems.len(), keys.len(), |i, j| elems[i].coeff(&keys[j]));
    m.rank()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SliceReport {
    pub t2: i64,
    #[serde(rename = "sourceDim")]
    pub source_dim: usize,
    #[serde(rename = "targetDim")]
    pub target_dim: usize,
    pub rank: usize,
    pub ok: bool,
}

/// For each t2-degree b in `[-b_max, b_max]`, restricts the map to the L keys
/// with t1-degree in `[-2a, 2a+1]` and checks it is a bijection onto the
/// matching tau slice (E11, E22, E12 at t1-degree in `[-a, a]`, E21 in
/// `[-a+1, a+1]`; at b = 0 the identity is removed and K1, K2 added).
pub fn phi_tau_slices(a: i64, b_max: i64) -> Vec<SliceReport> {
    (-b_max..=b_max)
        .map(|b| {
            let mut src: Vec<LKey> = Vec::new();
            if b == 0 {
                src.push(LKey::C1);
                src.push(LKey::C2);
            }
            for n1 in -2 * a..=2 * a + 1 {
                for i in 0..2 {
                    let k = LKey::t(i, (n1, b));
                    if k.is_valid() {
                        src.push(k);
                    }
                }
            }
            let mut target: BTreeSet<TauKey> = BTreeSet::new();
            for t in -a..=a {
                target.insert(TauKey::e(1, 1, (t, b)));
                target.insert(TauKey::e(2, 2, (t, b)));
                target.insert(TauKey::e(1, 2, (t, b)));
                target.insert(TauKey::e(2, 1, (t + 1, b)));
            }
            let mut target_dim = target.len();
            if b == 0 {
                target.insert(TauKey::K1);
                target.insert(TauKey::K2);
                // the identity direction E11(0) + E22(0) is not in the derived algebra
                target_dim += 2;
                target_dim -= 1;
            }
            let images: Vec<TauElement> =
                src.iter().map(|k| phi_tau(&Element::basis(*k))).collect();
            let inside = images
                .iter()
                .all(|e| e.keys().all(|k| target.contains(k)) && crate::algebra::in_derived_tau(e));
            let refs: Vec<&TauElement> = images.iter().collect();
            let rank = rank_of(&refs);
            SliceReport {
                t2: b,
                source_dim: src.len(),
                target_dim,
                rank,
                ok: inside && rank == src.len() && rank == target_dim,
            }
        })
        .collect()
}

/// Basis elements for a box, as single-term elements.
pub fn basis_elements(keys: &[LKey]) -> Vec<LElement> {
    keys.iter().map(|k| Element::basis(*k)).collect()
}

/// Checks the affine map on loop indices in `[-window, window]`.
pub fn verify_phi_aff(basis: &GradingBasis, window: i64) -> Result<HomReport> {
    if !basis.m21_odd() {
        return Err(Error::ParityMismatch("the affine map needs m21 odd".into()));
    }
    let gens = affine_generators(basis, window);
    Ok(verify_hom(
        &gens,
        |x| phi_aff(x, basis),
        bracket_l,
        crate::algebra::bracket_aff,
    ))
}
