//! Z^2-graded modules `V (x) C[x, 1/x]`: the loop extension of a built
//! graded module, user-supplied degree-zero submodules `W`, and the cell
//! dimensions of the irreducible quotient with top `W`.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{enumerate_graded, GradingBasis, LKey};
use crate::coeff::{Backend, FieldElement, Scalar};
use crate::error::{Error, Result};
use crate::hwmod::{Engine, TopModule, TruncationParams};
use crate::linalg::{Matrix, SpanBuilder};


/// `W` as a residue pattern: base vector `b` of `V_0` tensored with `x^r`
/// lies in `W` iff `r mod modulus` is in `residues[b]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubmoduleSpecW {
    pub modulus: i64,
    pub residues: Vec<Vec<i64>>,
}

impl SubmoduleSpecW {
    pub fn new(modulus: i64, residues: Vec<Vec<i64>>) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::InvalidModule(
                "pattern modulus must be positive".into(),
            ));
        }
        let residues: Vec<Vec<i64>> = residues
            .into_iter()
            .map(|r| {
                let mut r: Vec<i64> = r.into_iter().map(|x| x.rem_euclid(modulus)).collect();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        if residues.iter().all(Vec::is_empty) {
            return Err(Error::InvalidModule("empty submodule pattern".into()));
        }
        Ok(SubmoduleSpecW { modulus, residues })
    }

    /// Every loop exponent for every base vector.
    pub fn full(dim: usize) -> Self {
        SubmoduleSpecW {
            modulus: 1,
            residues: vec![vec![0]; dim],
        }
    }

    pub fn contains(&self, b: usize, r: i64) -> bool {
        self.residues[b].contains(&r.rem_euclid(self.modulus))
    }

    /// Base vectors present in cell `r`.
    pub fn cell(&self, r: i64) -> Vec<usize> {
        (0..self.residues.len())
            .filter(|&b| self.contains(b, r))
            .collect()
    }

    /// Moves residue `from` of base vector `b` to `to`.
    pub fn perturbed(&self, b: usize, from: i64, to: i64) -> Result<Self> {
        let mut r = self.residues.clone();
        r[b].retain(|&x| x != from.rem_euclid(self.modulus));
        r[b].push(to);
        Self::new(self.modulus, r)
    }
}

/// `V (x) C[x, 1/x]` over a built graded module, viewed on the loop window
/// `|r| <= loop_window`; cell `(-s, r)` is `V_{-s} (x) x^r`.
pub struct Z2GradedModule<B: Backend> {
    pub base: Engine<B>,
    pub loop_window: i64,
}

impl<B: Backend> Z2GradedModule<B> {
    pub fn cell_dim(&self, s: usize, r: i64) -> Option<usize> {
        if r.abs() > self.loop_window {
            return None;
        }
        self.base.levels.get(s).map(|l| l.dim)
    }

    /// Rows `s = 0..=depth`, columns `r = -R..=R`, before any reduction.
    pub fn grid(&self) -> Vec<Vec<usize>> {
        (0..=self.base.depth())
            .map(|s| {
                (-self.loop_window..=self.loop_window)
                    .map(|r| self.cell_dim(s, r).unwrap_or(0))
                    .collect()
            })
            .collect()
    }

    /// `t0^i t^(a m1 + b m2)` sends cell `(-s, r)` to `(-s + a, r + b)`.
    pub fn target_cell(&self, key: &LKey, s: usize, r: i64) -> (i64, i64) {
        let (a, b) = match key {
            LKey::Torus { m, .. } => self.base.basis.coords(*m),
            _ => (0, 0),
        };
        (-(s as i64) + a, r + b)
    }
}

pub fn extend_z2<B: Backend>(base: Engine<B>, loop_window: i64) -> Z2GradedModule<B> {
    Z2GradedModule { base, loop_window }
}

/// The top `W` with loop exponents taken modulo the pattern modulus. Since
/// multiplication by `x^modulus` commutes with the action, every cell of
/// the quotient is isomorphic to the residue cell it reduces to.
pub struct LoopTop {
    pub base: Arc<dyn TopModule>,
    pub basis: GradingBasis,
    pub spec: SubmoduleSpecW,
    /// `(base vector, residue)` of each basis vector of the periodized `W`.
    pub index: Vec<(usize, i64)>,
}

impl LoopTop {
    pub fn new(
        base: Arc<dyn TopModule>,
        basis: GradingBasis,
        spec: SubmoduleSpecW,
    ) -> Result<Self> {
        if spec.residues.len() != base.dim() {
            return Err(Error::InvalidModule(format!(
                "pattern lists {} base vectors, the top has {}",
                spec.residues.len(),
                base.dim()
            )));
        }
        let mut index = Vec::new();
        for rho in 0..spec.modulus {
            for b in spec.cell(rho) {
                index.push((b, rho));
            }
        }
        Ok(LoopTop {
            base,
            basis,
            spec,
            index,
        })
    }

    fn shift(&self, key: &LKey) -> i64 {
        match key {
            LKey::Torus { m, .. } => self.basis.coords(*m).1,
            _ => 0,
        }
    }
}

impl TopModule for LoopTop {
    fn dim(&self) -> usize {
        self.index.len()
    }

    fn act(&self, key: &LKey) -> Result<Matrix<FieldElement>> {
        let a = self.base.act(key)?;
        let k = self.shift(key);
        let m = self.spec.modulus;
        let n = self.index.len();
        let pos = |b: usize, rho: i64| self.index.iter().position(|&x| x == (b, rho));
        let mut out = Matrix::zeros(n, n);
        for (c, &(b, rho)) in self.index.iter().enumerate() {
            let to = (rho + k).rem_euclid(m);
            for b2 in 0..a.rows() {
                let v = a.get(b2, b);
                if v.is_zero() {
                    continue;
                }
                let r = pos(b2, to).ok_or_else(|| {
                    Error::SubmoduleRejected(format!("{key} leaves the pattern at residue {to}"))
                })?;
                out.set(r, c, v.clone());
            }
        }
        Ok(out)
    }

    fn central(&self) -> (FieldElement, FieldElement) {
        self.base.central()
    }

    fn cells(&self) -> (i64, Vec<i64>) {
        (self.spec.modulus, self.index.iter().map(|x| x.1).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WReport {
    pub invariant: bool,
    pub irreducible_at_window: bool,
    pub detail: Vec<String>,
}

/// `W_{r'} <- W_r` block of a base action matrix.
fn block(a: &Matrix<FieldElement>, to: &[usize], from: &[usize]) -> Matrix<FieldElement> {
    Matrix::from_fn(to.len(), from.len(), |i, j| a.get(to[i], from[j]).clone())
}

/// Invariance of `W` under the degree-zero keys with `|k| <= window`, and
/// irreducibility as a graded module certified on that window: every cell's
/// endomorphisms reachable by products of those keys form the full matrix
/// algebra, and every nonempty cell is reachable from every other.
pub fn verify_w(
    top: &dyn TopModule,
    basis: &GradingBasis,
    spec: &SubmoduleSpecW,
    window: i64,
) -> Result<WReport> {
    if spec.residues.len() != top.dim() {
        return Err(Error::InvalidModule(
            "pattern does not match the top dimension".into(),
        ));
    }
    let keys = enumerate_graded(0, window, basis);
    let mut actions = Vec::new();
    for key in &keys {
        let k = match key {
            LKey::Torus { m, .. } => basis.coords(*m).1,
            _ => 0,
        };
        actions.push((*key, k, top.act(key)?));
    }
    let m = spec.modulus;
    let mut detail = Vec::new();
    let mut invariant = true;
    for rho in 0..m {
        let from = spec.cell(rho);
        for (key, k, a) in &actions {
            for &b in &from {
                for b2 in 0..a.rows() {
                    if !a.get(b2, b).is_zero() && !spec.contains(b2, rho + k) {
                        invariant = false;
                        detail.push(format!(
                            "{key} sends base vector {b} at residue {rho} outside the pattern"
                        ));
                    }
                }
            }
        }
    }
    if !invariant {
        return Ok(WReport {
            invariant,
            irreducible_at_window: false,
            detail,
        });
    }
    let span = window.max(m);
    let cells: Vec<i64> = (-span..=span)
        .filter(|&r| !spec.cell(r).is_empty())
        .collect();
    let mut irreducible = true;
    for rho in 0..m {
        let src = spec.cell(rho);
        if src.is_empty() {
            continue;
        }
        let reach = transfer_spaces(&actions, spec, rho, span);
        let here = reach.iter().find(|(r, _)| *r == rho).map_or(0, |x| x.1);
        if here != src.len() * src.len() {
            irreducible = false;
            detail.push(format!(
                "cell {rho}: reachable endomorphisms span {here} of {}",
                src.len() * src.len()
            ));
        }
        for &r in &cells {
            if reach.iter().all(|(c, d)| *c != r || *d == 0) {
                irreducible = false;
                detail.push(format!("cell {r} is not reached from cell {rho}"));
            }
        }
    }
    Ok(WReport {
        invariant,
        irreducible_at_window: irreducible,
        detail,
    })
}

/// Dimensions of the spaces of maps `W_rho -> W_r`, `|r| <= span`, spanned
/// by products of the given actions, saturated breadth-first.
fn transfer_spaces(
    actions: &[(LKey, i64, Matrix<FieldElement>)],
    spec: &SubmoduleSpecW,
    rho: i64,
    span: i64,
) -> Vec<(i64, usize)> {
    let src = spec.cell(rho);
    let cells: Vec<i64> = (-span..=span).collect();
    let idx = |r: i64| (r + span) as usize;
    let mut spaces: Vec<SpanBuilder<FieldElement>> = cells
        .iter()
        .map(|&r| SpanBuilder::new(spec.cell(r).len() * src.len()))
        .collect();
    let flat = |x: &Matrix<FieldElement>| -> Vec<FieldElement> {
        (0..x.rows()).flat_map(|i| x.row(i).to_vec()).collect()
    };
    let id = Matrix::identity(src.len());
    spaces[idx(rho)].insert(&flat(&id));
    let mut queue = vec![(rho, id)];
    while let Some((r, x)) = queue.pop() {
        let from = spec.cell(r);
        for (_, k, a) in actions {
            let r2 = r + k;
            if r2.abs() > span {
                continue;
            }
            let to = spec.cell(r2);
            if to.is_empty() {
                continue;
            }
            let y = block(a, &to, &from).mul(&x);
            if y.is_zero() {
                continue;
            }
            if spaces[idx(r2)].insert(&flat(&y)) {
                queue.push((r2, y));
            }
        }
    }
    cells.iter().map(|&r| (r, spaces[idx(r)].dim())).collect()
}

/// Cell dimensions of the irreducible quotient with top `W`, rows
/// `s = 0..=depth`, columns `r = -R..=R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Z2Grid {
    pub depth: usize,
    pub loop_window: i64,
    pub modulus: i64,
    pub rows: Vec<Vec<usize>>,
}

impl Z2Grid {
    pub fn get(&self, s: usize, r: i64) -> usize {
        self.rows[s][(r + self.loop_window) as usize]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s");
        for r in -self.loop_window..=self.loop_window {
            out.push_str(&format!(",{r}"));
        }
        out.push('\n');
        for (s, row) in self.rows.iter().enumerate() {
            out.push_str(&s.to_string());
            for d in row {
                out.push_str(&format!(",{d}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the quotient with the periodized `W` as top and reads off cell
/// dimensions; a `W` failing invariance is rejected.
pub fn z2_dims<B: Backend>(
    module: &Z2GradedModule<B>,
    spec: &SubmoduleSpecW,
    trunc: TruncationParams,
    backend: B,
) -> Result<(Z2Grid, Engine<B>)> {
    let base = &module.base;
    let report = verify_w(base.top.as_ref(), &base.basis, spec, trunc.gen_window)?;
    if !report.invariant {
        return Err(Error::SubmoduleRejected(report.detail.join("; ")));
    }
    let top = LoopTop::new(base.top.clone(), base.basis, spec.clone())?;
    let mut e = Engine::new(Arc::new(top), base.basis, backend, trunc)?;
    e.build_to(trunc.max_depth)?;
    let m = spec.modulus;
    let rows = (0..=trunc.max_depth)
        .map(|s| {
            let per = e.cell_dims(s);
            (-module.loop_window..=module.loop_window)
                .map(|r| per[r.rem_euclid(m) as usize])
                .collect()
        })
        .collect();
    Ok((
        Z2Grid {
            depth: trunc.max_depth,
            loop_window: module.loop_window,
            modulus: m,
            rows,
        },
        e,
    ))
}

/// Checks that every stored action of the generators and probes moves loop
/// cells by exactly the key's `m2`-coordinate.
pub fn shift_audit<B: Backend>(e: &Engine<B>) -> Result<Vec<String>> {
    let m = e.modulus();
    let mut bad = Vec::new();
    for s in 0..=e.depth() {
        let mut keys: Vec<(LKey, usize, usize)> = Vec::new();
        if s < e.depth() {
            keys.extend(e.gens.iter().map(|g| (*g, s, s + 1)));
        }
        if s >= 1 {
            keys.extend(e.probes.iter().map(|h| (*h, s, s - 1)));
        }
        for (key, from, to) in keys {
            let a = e.act(&key, from)?;
            let k = match key {
                LKey::Torus { m: v, .. } => e.basis.coords(v).1,
                _ => 0,
            };
            for c in 0..a.cols() {
                for r in 0..a.rows() {
                    if a.get(r, c).is_zero() {
                        continue;
                    }
                    let src = e.levels[from].cells[c];
                    let dst = e.levels[to].cells[r];
                    if (src + k - dst).rem_euclid(m) != 0 {
                        bad.push(format!("{key} at degree -{from}: cell {src} -> {dst}"));
                    }
                }
            }
        }
    }
    Ok(bad)
}

/// `W` patterns of the two worked examples.
pub fn remark52_even_pattern() -> SubmoduleSpecW {
    SubmoduleSpecW::new(2, vec![vec![0]]).expect("valid pattern")
}

/// For the three-dimensional module with basis `v2, v0, v-2`.
pub fn remark52_odd_pattern() -> SubmoduleSpecW {
    SubmoduleSpecW::new(2, vec![vec![0], vec![1], vec![0]]).expect("valid pattern")
}
