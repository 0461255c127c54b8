use serde::Serialize;

use super::Engine;
use crate::algebra::LKey;
use crate::coeff::{Backend, Scalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GrowthReport {
    pub dims: Vec<usize>,
    /// `dim V_{-n} >= n` for `1 <= n <= depth` (vacuous for a trivial module).
    pub holds: bool,
    /// `(n, rank of the witness family)`.
    pub witness_ranks: Vec<(usize, usize)>,
}

fn column<S: Scalar>(v: Vec<S>) -> Matrix<S> {
    let n = v.len();
    Matrix::from_fn(n, 1, |i, _| v[i].clone())
}

/// A top vector and a degree-zero key `t0^l t^(k m2)`, `k != 0` when
/// possible, that does not kill it.
fn seed_pair<B: Backend>(e: &Engine<B>) -> Result<Option<(usize, u8, i64)>> {
    let kmax = e.trunc.gen_window.max(e.trunc.probe_window);
    let mut ks: Vec<i64> = Vec::new();
    for k in 1..=kmax {
        ks.push(k);
        ks.push(-k);
    }
    ks.push(0);
    for k in ks {
        for l in 0..2u8 {
            let key = LKey::t(l as i64, e.basis.vector(0, k));
            if !key.is_valid() {
                continue;
            }
            let a = e.act(&key, 0)?;
            for b in 0..e.levels[0].dim {
                if a.mul_vec(&e.top_vector(b)).iter().any(|x| !x.is_zero()) {
                    return Ok(Some((b, l, k)));
                }
            }
        }
    }
    Ok(None)
}

/// Rank of the family `(t0^0 t^(-m1))^j t0^l t^((j-n) m1 + k m2) v0`,
/// `0 <= j < n`, inside `V_{-n}`.
pub fn witness_rank<B: Backend>(e: &Engine<B>, n: usize) -> Result<usize> {
    if n == 0 || n > e.depth() {
        return Err(Error::DepthViolation(format!(
            "witness family at degree -{n} needs the module built that far"
        )));
    }
    let Some((b, l, k)) = seed_pair(e)? else {
        return Ok(0);
    };
    let y = LKey::t(0, e.basis.vector(-1, 0));
    let dn = e.levels[n].dim;
    let mut cols = Vec::new();
    for j in 0..n {
        let x = LKey::t(l as i64, e.basis.vector(j as i64 - n as i64, k));
        let mut v = column(e.top_vector(b));
        v = e.act(&x, 0)?.mul(&v);
        let mut level = n - j;
        for _ in 0..j {
            v = e.act(&y, level)?.mul(&v);
            level += 1;
        }
        cols.push(v);
    }
    let m = Matrix::from_fn(dn, n, |r, c| cols[c].get(r, 0).clone());
    Ok(m.rank())
}

pub fn growth_check<B: Backend>(e: &Engine<B>) -> Result<GrowthReport> {
    let dims = e.dims();
    let nontrivial = dims.len() > 1 && dims[1] > 0;
    let holds = !nontrivial || (1..dims.len()).all(|n| dims[n] >= n);
    let mut witness_ranks = Vec::new();
    if nontrivial {
        for n in 1..dims.len() {
            witness_ranks.push((n, witness_rank(e, n)?));
        }
    }
    Ok(GrowthReport {
        dims,
        holds,
        witness_ranks,
    })
}

/// Smallest `p <= max_power` with `(t0^0 t^m + sign t0^1 t^m)^p v = 0` for
/// the top basis vector `v_index`, or `None`. The operator must have
/// degree `<= 0` and `|degree| * max_power` must stay within the built depth.
pub fn integrability_probe<B: Backend>(
    e: &Engine<B>,
    m: (i64, i64),
    sign: i64,
    v_index: usize,
    max_power: usize,
) -> Result<Option<usize>> {
    if m.0.rem_euclid(2) != 1 {
        return Err(Error::Usage(format!(
            "the probe needs an odd first coordinate, got ({}, {})",
            m.0, m.1
        )));
    }
    let k0 = LKey::t(0, m);
    let k1 = LKey::t(1, m);
    let g = e.grade(&k0);
    if g > 0 {
        return Err(Error::DepthViolation(format!(
            "operator has positive degree {g}"
        )));
    }
    let step = (-g) as usize;
    if step * max_power > e.depth() {
        return Err(Error::DepthViolation(format!(
            "{max_power} applications of a degree {g} operator exceed depth {}",
            e.depth()
        )));
    }
    if v_index >= e.levels[0].dim {
        return Err(Error::Usage(format!("no top vector {v_index}")));
    }
    let sg = B::S::from_i64(sign.signum());
    let mut v = e.top_vector(v_index);
    let mut level = 0;
    for p in 1..=max_power {
        let x = e.act(&k0, level)?.add(&e.act(&k1, level)?.scale(&sg));
        v = x.mul_vec(&v);
        level += step;
        if v.iter().all(|c| c.is_zero()) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}
