use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bracket::bracket_l;
use super::element::Element;
use super::grading::{enumerate_graded, GradingBasis, LElement};
use super::keys::LKey;

/// Outcome of the structural identities on a family of basis keys.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IdentityReport {
    pub pairs: usize,
    pub triples: usize,
    pub skew_failures: Vec<String>,
    pub jacobi_failures: Vec<String>,
    pub grading_failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.skew_failures.is_empty()
            && self.jacobi_failures.is_empty()
            && self.grading_failures.is_empty()
    }

    fn merge(mut self, o: IdentityReport) -> Self {
        self.pairs += o.pairs;
        self.triples += o.triples;
        self.skew_failures.extend(o.skew_failures);
        self.jacobi_failures.extend(o.jacobi_failures);
        self.grading_failures.extend(o.grading_failures);
        self
    }
}

fn b(k: &LKey) -> LElement {
    Element::basis(*k)
}

fn jacobi(x: &LKey, y: &LKey, z: &LKey) -> LElement {
    let (x, y, z) = (b(x), b(y), b(z));
    bracket_l(&x, &bracket_l(&y, &z))
        .add(&bracket_l(&y, &bracket_l(&z, &x)))
        .add(&bracket_l(&z, &bracket_l(&x, &y)))
}

fn check_pair(x: &LKey, y: &LKey, basis: &GradingBasis, out: &mut IdentityReport) {
    out.pairs += 1;
    let xy = bracket_l(&b(x), &b(y));
    let yx = bracket_l(&b(y), &b(x));
    if !xy.add(&yx).is_zero() {
        out.skew_failures.push(format!("[{x}, {y}]"));
    }
    let g = basis.grade_of(x) + basis.grade_of(y);
    if xy.keys().any(|k| !k.is_valid() || basis.grade_of(k) != g) {
        out.grading_failures.push(format!("[{x}, {y}] = {xy}"));
    }
}

/// Skew-symmetry, grading compatibility and closure on all pairs, and the
/// Jacobi identity on all triples `a <= b <= c` of `keys` (the identity is
/// alternating, so this covers every ordered triple).
pub fn check_identities(keys: &[LKey], basis: &GradingBasis) -> IdentityReport {
    let n = keys.len();
    (0..n)
        .into_par_iter()
        .map(|a| {
            let mut r = IdentityReport::default();
            for bi in a..n {
                check_pair(&keys[a], &keys[bi], basis, &mut r);
                for c in bi..n {
                    r.triples += 1;
                    if !jacobi(&keys[a], &keys[bi], &keys[c]).is_zero() {
                        r.jacobi_failures
                            .push(format!("({}, {}, {})", keys[a], keys[bi], keys[c]));
                    }
                }
            }
            r
        })
        .reduce(IdentityReport::default, IdentityReport::merge)
}

fn random_key(rng: &mut ChaCha8Rng, bound: i64) -> LKey {
    loop {
        if rng.gen_ratio(1, 20) {
            return if rng.gen_bool(0.5) {
                LKey::C1
            } else {
                LKey::C2
            };
        }
        let m = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        let k = LKey::t(rng.gen_range(0..2), m);
        if k.is_valid() {
            return k;
        }
    }
}

/// The same identities on `count` seeded random triples with raw indices in
/// `[-bound, bound]^2`.
pub fn check_random(count: usize, bound: i64, seed: u64, basis: &GradingBasis) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<[LKey; 3]> = (0..count)
        .map(|_| [0; 3].map(|_| random_key(&mut rng, bound)))
        .collect();
    triples
        .par_iter()
        .map(|[x, y, z]| {
            let mut r = IdentityReport::default();
            check_pair(x, y, basis, &mut r);
            check_pair(y, z, basis, &mut r);
            check_pair(z, x, basis, &mut r);
            r.triples = 1;
            if !jacobi(x, y, z).is_zero() {
                r.jacobi_failures.push(format!("({x}, {y}, {z})"));
            }
            r
        })
        .reduce(IdentityReport::default, IdentityReport::merge)
}

/// For m21 even: commutators of degree-zero keys with `|k| <= window` that
/// leave the span of `m21 c1 + m22 c2`.
pub fn heisenberg_failures(basis: &GradingBasis, window: i64) -> Vec<String> {
    let keys = enumerate_graded(0, window, basis);
    let gamma = basis.gamma();
    let mut out = Vec::new();
    for (a, x) in keys.iter().enumerate() {
        for y in &keys[a + 1..] {
            let c = bracket_l(&b(x), &b(y));
            if c.is_zero() {
                continue;
            }
            // c must be a multiple of gamma
            let (k, v) = gamma.iter().next().expect("gamma is nonzero");
            let s = c.coeff(k).div_nonzero(v);
            if !c.sub(&gamma.scale(&s)).is_zero() {
                out.push(format!("[{x}, {y}] = {c}"));
            }
        }
    }
    out
}

/// For m21 odd: nonzero brackets between the Heisenberg part
/// `t0^0 t^(2j m2)` and the affine part on the window.
pub fn ab_failures(basis: &GradingBasis, window: i64) -> Vec<String> {
    let mut a = Vec::new();
    let mut bb = Vec::new();
    for j in -window..=window {
        if j != 0 {
            a.push(LKey::t(0, basis.vector(0, 2 * j)));
        }
        bb.push(LKey::t(1, basis.vector(0, 2 * j)));
        bb.push(LKey::t(0, basis.vector(0, 2 * j + 1)));
        bb.push(LKey::t(1, basis.vector(0, 2 * j + 1)));
    }
    let mut out = Vec::new();
    for x in &a {
        for y in &bb {
            let c = bracket_l(&b(x), &b(y));
            if !c.is_zero() {
                out.push(format!("[{x}, {y}] = {c}"));
            }
        }
    }
    out
}
