use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::{AuditFailure, TopModule, TruncationParams};
use crate::algebra::{bracket_l_keys, enumerate_graded, GradingBasis, LElement, LKey};
use crate::coeff::{Backend, FieldElement, Scalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// One homogeneous piece `V_{-s}` of the quotient.
#[derive(Clone, Debug)]
pub struct Level<S: Scalar> {
    pub dim: usize,
    /// `(generator index, basis index one level up)` of each basis vector;
    /// empty at the top.
    pub labels: Vec<(usize, usize)>,
    /// Loop-cell label of each basis vector.
    pub cells: Vec<i64>,
    /// Stacked probe images of the basis (rows: probe-major), and an
    /// invertible square minor used to solve for coordinates.
    signature: Matrix<S>,
    pivot_rows: Vec<usize>,
    minor_inv: Matrix<S>,
}

/// Degree-by-degree construction of the irreducible graded quotient with a
/// prescribed top `V_0`.
pub struct Engine<B: Backend> {
    pub top: Arc<dyn TopModule>,
    pub basis: GradingBasis,
    pub backend: B,
    pub trunc: TruncationParams,
    pub gens: Vec<LKey>,
    pub probes: Vec<LKey>,
    pub levels: Vec<Level<B::S>>,
    memo: Mutex<HashMap<(LKey, usize), Matrix<B::S>>>,
    failures: Mutex<Vec<AuditFailure>>,
    modulus: i64,
}

fn lift_elem<B: Backend>(b: &B, x: &FieldElement) -> Result<B::S> {
    b.lift(x)
}

impl<B: Backend> Engine<B> {
    /// Sets up the top level; `basis` is the grading used (the mirrored
    /// basis for lowest-weight modules).
    pub fn new(
        top: Arc<dyn TopModule>,
        basis: GradingBasis,
        backend: B,
        trunc: TruncationParams,
    ) -> Result<Self> {
        trunc.validate()?;
        let (modulus, cells) = top.cells();
        let d0 = top.dim();
        if cells.len() != d0 {
            return Err(Error::InvalidModule(
                "cell labels do not match the top dimension".into(),
            ));
        }
        let level0 = Level {
            dim: d0,
            labels: Vec::new(),
            cells,
            signature: Matrix::zeros(0, d0),
            pivot_rows: Vec::new(),
            minor_inv: Matrix::zeros(0, 0),
        };
        Ok(Engine {
            gens: enumerate_graded(-1, trunc.gen_window, &basis),
            probes: enumerate_graded(1, trunc.probe_window, &basis),
            top,
            basis,
            backend,
            trunc,
            levels: vec![level0],
            memo: Mutex::new(HashMap::new()),
            failures: Mutex::new(Vec::new()),
            modulus,
        })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim).collect()
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    /// Dimensions of `V_{-s}` split by cell residue `0..modulus`.
    pub fn cell_dims(&self, s: usize) -> Vec<usize> {
        let mut out = vec![0; self.modulus as usize];
        for c in &self.levels[s].cells {
            out[c.rem_euclid(self.modulus) as usize] += 1;
        }
        out
    }

    pub fn audit_failures(&self) -> Vec<AuditFailure> {
        self.failures.lock().unwrap().clone()
    }

    pub(crate) fn record(&self, f: AuditFailure) {
        self.failures.lock().unwrap().push(f);
    }

    pub fn grade(&self, key: &LKey) -> i64 {
        self.basis.grade_of(key)
    }

    fn dim_at(&self, t: i64) -> Result<usize> {
        if t < 0 {
            return Ok(0);
        }
        self.levels
            .get(t as usize)
            .map(|l| l.dim)
            .ok_or_else(|| Error::DepthViolation(format!("degree -{t} has not been built")))
    }

    fn cached(&self, key: &LKey, s: usize) -> Option<Matrix<B::S>> {
        self.memo.lock().unwrap().get(&(*key, s)).cloned()
    }

    fn store(&self, key: LKey, s: usize, m: Matrix<B::S>) {
        self.memo.lock().unwrap().insert((key, s), m);
    }

    /// Matrix of a basis key from `V_{-s}` to `V_{-s+grade}`.
    pub fn act(&self, key: &LKey, s: usize) -> Result<Matrix<B::S>> {
        if let Some(m) = self.cached(key, s) {
            return Ok(m);
        }
        let ds = self.dim_at(s as i64)?;
        let g = self.grade(key);
        let t = s as i64 - g;
        let dt = self.dim_at(t)?;
        let m = if dt == 0 || ds == 0 {
            Matrix::zeros(dt, ds)
        } else if key.is_central() {
            let (c1, c2) = self.top.central();
            let c = if *key == LKey::C1 { c1 } else { c2 };
            Matrix::scalar(ds, &lift_elem(&self.backend, &c)?)
        } else if g >= 0 {
            self.act_nonnegative(key, g, s)?
        } else if g == -1 {
            self.act_lowering(key, s)?
        } else {
            self.act_deep(key, g, s)?
        };
        self.store(*key, s, m.clone());
        Ok(m)
    }

    /// Matrix of a homogeneous element of the given grade.
    pub fn act_elem(&self, x: &LElement, grade: i64, s: usize) -> Result<Matrix<B::S>> {
        let ds = self.dim_at(s as i64)?;
        let dt = self.dim_at(s as i64 - grade)?;
        let mut acc = Matrix::zeros(dt, ds);
        if dt == 0 || ds == 0 {
            return Ok(acc);
        }
        for (k, c) in x.iter() {
            debug_assert!(k.is_central() || self.grade(k) == grade);
            let a = self.act(k, s)?;
            acc = acc.add(&a.scale(&lift_elem(&self.backend, c)?));
        }
        Ok(acc)
    }

    /// `key (g v) = [key, g] v + g (key v)` for the basis vectors `g v` of
    /// `V_{-s}`, `key` of grade `>= 0`.
    fn act_nonnegative(&self, key: &LKey, g: i64, s: usize) -> Result<Matrix<B::S>> {
        if s == 0 {
            debug_assert_eq!(g, 0);
            return self.top.act(key)?.lift(&self.backend);
        }
        let lvl = &self.levels[s];
        let dt = self.dim_at(s as i64 - g)?;
        let here = self.act(key, s - 1)?;
        let mut out = Matrix::zeros(dt, lvl.dim);
        let mut by_gen: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for (c, &(gi, b)) in lvl.labels.iter().enumerate() {
            by_gen.entry(gi).or_default().push((c, b));
        }
        let mut gis: Vec<_> = by_gen.keys().copied().collect();
        gis.sort_unstable();
        for gi in gis {
            let gen = self.gens[gi];
            let comm = self.act_elem(&bracket_l_keys(key, &gen), g - 1, s - 1)?;
            let below = s as i64 - 1 - g;
            let lower = if below >= 0 {
                Some(self.act(&gen, below as usize)?.mul(&here))
            } else {
                None
            };
            for &(c, b) in &by_gen[&gi] {
                for r in 0..dt {
                    let mut v = comm.get(r, b).clone();
                    if let Some(l) = &lower {
                        v = v.add(l.get(r, b));
                    }
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Probe images of `key . v_b` for every basis vector of `V_{-s}`,
    /// `key` of grade -1, stacked probe-major.
    fn signature_of(&self, key: &LKey, s: usize) -> Result<Matrix<B::S>> {
        let ds = self.levels[s].dim;
        let blocks = self
            .probes
            .par_iter()
            .map(|h| {
                let mut blk = self.act_elem(&bracket_l_keys(h, key), 0, s)?;
                if s >= 1 {
                    let hv = self.act(h, s)?;
                    blk = blk.add(&self.act(key, s - 1)?.mul(&hv));
                }
                Ok(blk)
            })
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Matrix<B::S>> = blocks.iter().collect();
        Ok(Matrix::vstack(&refs, ds))
    }

    /// Grade -1 keys outside the generator window: solved from their probe
    /// images against the next level's signature.
    fn act_lowering(&self, key: &LKey, s: usize) -> Result<Matrix<B::S>> {
        let next = self.levels.get(s + 1).ok_or_else(|| {
            Error::DepthViolation(format!("degree -{} has not been built", s + 1))
        })?;
        let sig = self.signature_of(key, s)?;
        let rhs = sig.select_rows(&next.pivot_rows);
        let x = next.minor_inv.mul(&rhs);
        let resid = next.signature.mul(&x).sub(&sig);
        if !resid.is_zero() {
            self.record(AuditFailure {
                kind: "window".into(),
                detail: format!(
                    "{key} at degree -{s}: probe images leave the span of the truncated degree -{}",
                    s + 1
                ),
            });
        }
        Ok(x)
    }

    /// Grade <= -2: write `key` as `[y, z] / c` with `y` of grade -1.
    fn act_deep(&self, key: &LKey, g: i64, s: usize) -> Result<Matrix<B::S>> {
        let LKey::Torus { m, i } = *key else {
            unreachable!("central keys have grade 0")
        };
        for k1 in (0..)
            .flat_map(|n: i64| if n == 0 { vec![0] } else { vec![n, -n] })
            .take(64)
        {
            let y = LKey::t(0, self.basis.vector(-1, k1));
            let ym = self.basis.vector(-1, k1);
            let z = LKey::t(i as i64, (m.0 - ym.0, m.1 - ym.1));
            if !z.is_valid() {
                continue;
            }
            let br = bracket_l_keys(&y, &z);
            let c = br.coeff(key);
            if c.is_zero() {
                continue;
            }
            debug_assert_eq!(br.len(), 1);
            // a specialization may kill c; another decomposition then serves
            let Some(inv) = lift_elem(&self.backend, &c)?.inv() else {
                continue;
            };
            let yz = self
                .act(&y, (s as i64 - (g + 1)) as usize)?
                .mul(&self.act(&z, s)?);
            let zy = self.act(&z, s + 1)?.mul(&self.act(&y, s)?);
            return Ok(yz.sub(&zy).scale(&inv));
        }
        Err(Error::Inconsistent(format!(
            "no commutator decomposition found for {key}"
        )))
    }

    /// Builds `V_{-s-1}` from the stored levels.
    pub fn extend(&mut self) -> Result<()> {
        let s = self.depth();
        let ds = self.levels[s].dim;
        let ng = self.gens.len();
        let ncols = ng * ds;
        let mut cols_by_gen: Vec<Matrix<B::S>> = Vec::with_capacity(ng);
        if ds > 0 {
            cols_by_gen = self
                .gens
                .par_iter()
                .map(|g| self.signature_of(g, s))
                .collect::<Result<Vec<_>>>()?;
        }
        let nrows = self.probes.len() * ds;
        let full = Matrix::from_fn(nrows, ncols, |r, c| {
            cols_by_gen[c / ds].get(r, c % ds).clone()
        });
        let cb = full.column_basis();
        let sel = cb.sel;
        let sig = full.select_cols(&sel);
        let labels: Vec<(usize, usize)> = sel.iter().map(|&c| (c / ds, c % ds)).collect();
        let cells: Vec<i64> = labels
            .iter()
            .map(|&(gi, b)| {
                let k = self.basis.coords(key_m(&self.gens[gi])).1;
                (self.levels[s].cells[b] + k).rem_euclid(self.modulus)
            })
            .collect();
        let dim = sel.len();
        let level = Level {
            dim,
            labels,
            cells,
            signature: sig.clone(),
            pivot_rows: cb.pivot_rows,
            minor_inv: cb.minor_inv,
        };
        // coordinates of every g v_b in the new basis
        let coords = cb.coords;
        self.levels.push(level);
        for (gi, g) in self.gens.iter().enumerate() {
            let m = Matrix::from_fn(dim, ds, |r, b| coords.get(r, gi * ds + b).clone());
            self.store(*g, s, m);
        }
        for (hi, h) in self.probes.iter().enumerate() {
            let rows: Vec<usize> = (hi * ds..(hi + 1) * ds).collect();
            self.store(*h, s + 1, sig.select_rows(&rows));
        }
        Ok(())
    }

    pub fn build_to(&mut self, depth: usize) -> Result<()> {
        while self.depth() < depth {
            self.extend()?;
        }
        Ok(())
    }
}

pub(crate) fn key_m(key: &LKey) -> (i64, i64) {
    match key {
        LKey::Torus { m, .. } => *m,
        _ => (0, 0),
    }
}
