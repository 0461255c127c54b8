//! Graded highest- (and lowest-) weight modules, built degree by degree as
//! the quotient of the induced module by its maximal graded submodule
//! meeting the top trivially.

mod engine;
mod probes;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use engine::{Engine, Level};
pub use probes::{growth_check, integrability_probe, witness_rank, GrowthReport};

use crate::algebra::{bracket_l_keys, enumerate_graded, GradingBasis, LKey};
use crate::coeff::{Backend, Exact, FieldElement, Prime, PrimeSpec, Scalar};
use crate::error::{Error, Result};
use crate::l0mod::L0Module;
use crate::linalg::Matrix;

/// Generator window `K` (lowering operators `|k| <= K`), probe window `K'`
/// and the number of degrees to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TruncationParams {
    pub gen_window: i64,
    pub probe_window: i64,
    pub max_depth: usize,
}

impl TruncationParams {
    pub fn new(gen_window: i64, probe_window: i64, max_depth: usize) -> Result<Self> {
        let t = TruncationParams {
            gen_window,
            probe_window,
            max_depth,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gen_window < 1 || self.probe_window < 1 {
            return Err(Error::Usage(
                "generator and probe windows must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Highest,
    Lowest,
}

impl Direction {
    /// The grading the engine runs with.
    pub fn grading(self, basis: &GradingBasis) -> GradingBasis {
        match self {
            Direction::Highest => *basis,
            Direction::Lowest => basis.mirrored(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditFailure {
    pub kind: String,
    pub detail: String,
}

/// A finite-dimensional module over the degree-zero part, used as the top
/// of a graded module.
pub trait TopModule: Send + Sync {
    fn dim(&self) -> usize;
    /// Action of a degree-zero basis key.
    fn act(&self, key: &LKey) -> Result<Matrix<FieldElement>>;
    /// Scalars by which `c1`, `c2` act.
    fn central(&self) -> (FieldElement, FieldElement);
    /// Loop-cell labels of the basis, as `(modulus, label per vector)`.
    fn cells(&self) -> (i64, Vec<i64>) {
        (1, vec![0; self.dim()])
    }
}

impl TopModule for L0Module {
    fn dim(&self) -> usize {
        self.dimension()
    }
    fn act(&self, key: &LKey) -> Result<Matrix<FieldElement>> {
        L0Module::act(self, key)
    }
    fn central(&self) -> (FieldElement, FieldElement) {
        L0Module::central(self)
    }
}

/// Builds the exact graded module to `trunc.max_depth`.
pub fn build_hw_module(
    v0: Arc<dyn TopModule>,
    basis: &GradingBasis,
    trunc: TruncationParams,
    direction: Direction,
) -> Result<Engine<Exact>> {
    build_with(v0, basis, trunc, direction, Exact)
}

pub fn build_with<B: Backend>(
    v0: Arc<dyn TopModule>,
    basis: &GradingBasis,
    trunc: TruncationParams,
    direction: Direction,
    backend: B,
) -> Result<Engine<B>> {
    let mut e = Engine::new(v0, direction.grading(basis), backend, trunc)?;
    e.build_to(trunc.max_depth)?;
    Ok(e)
}

/// Prime-field build; a specialization hitting a vanishing denominator is
/// retried at a fresh evaluation point drawn from the seeded generator.
pub fn build_hw_module_prime(
    v0: Arc<dyn TopModule>,
    basis: &GradingBasis,
    trunc: TruncationParams,
    direction: Direction,
    seed: u64,
) -> Result<Engine<Prime>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..8 {
        let spec = PrimeSpec::random(&mut rng);
        match build_with(v0.clone(), basis, trunc, direction, Prime(spec)) {
            Err(e @ Error::DenominatorVanishes { .. }) => last = Some(e),
            r => return r,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Exact-vs-prime dimension agreement on a common truncation.
pub fn backend_agreement(
    v0: Arc<dyn TopModule>,
    basis: &GradingBasis,
    trunc: TruncationParams,
    direction: Direction,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let a = build_hw_module(v0.clone(), basis, trunc, direction)?.dims();
    let b = build_hw_module_prime(v0, basis, trunc, direction, seed)?.dims();
    Ok((a, b))
}

/// One row of a stability scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanRow {
    pub gen_window: i64,
    pub probe_window: i64,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Whether the last two truncations agree at every depth.
    pub stable: bool,
}

pub fn stability_scan<B: Backend>(
    v0: Arc<dyn TopModule>,
    basis: &GradingBasis,
    truncs: &[TruncationParams],
    direction: Direction,
    backend: B,
) -> Result<ScanReport> {
    let mut rows = Vec::new();
    for t in truncs {
        let e = build_with(v0.clone(), basis, *t, direction, backend.clone())?;
        rows.push(ScanRow {
            gen_window: t.gen_window,
            probe_window: t.probe_window,
            dims: e.dims(),
        });
    }
    let stable = rows.len() >= 2 && rows[rows.len() - 2].dims == rows[rows.len() - 1].dims;
    Ok(ScanReport { rows, stable })
}

impl<B: Backend> Engine<B> {
    /// Post-hoc checks: commutation consistency for all pairs of keys with
    /// `|k| <= window` from the stored grades -1, 0, 1, joint surjectivity of
    /// the lowering maps, and faithfulness of the probes.
    pub fn audit(&self, window: i64) -> Result<Vec<AuditFailure>> {
        let mut keys = Vec::new();
        for g in [-1, 0, 1] {
            keys.extend(enumerate_graded(g, window, &self.basis));
        }
        let depth = self.depth() as i64;
        let mut out = Vec::new();
        for a in &keys {
            for b in &keys {
                if a >= b {
                    continue;
                }
                let (ga, gb) = (self.grade(a), self.grade(b));
                for s in 0..=depth {
                    let inside = |t: i64| (0..=depth).contains(&t);
                    if !inside(s - ga) || !inside(s - gb) || !inside(s - ga - gb) {
                        continue;
                    }
                    let s = s as usize;
                    let ab = self.act(a, (s as i64 - gb) as usize)?.mul(&self.act(b, s)?);
                    let ba = self.act(b, (s as i64 - ga) as usize)?.mul(&self.act(a, s)?);
                    let lhs = self.act_elem(&bracket_l_keys(a, b), ga + gb, s)?;
                    if lhs != ab.sub(&ba) {
                        out.push(AuditFailure {
                            kind: "commutation".into(),
                            detail: format!("[{a}, {b}] on degree -{s}"),
                        });
                    }
                }
            }
        }
        for s in 0..self.depth() {
            let dn = self.levels[s + 1].dim;
            let lowers: Vec<Matrix<B::S>> = self
                .gens
                .iter()
                .map(|g| self.act(g, s))
                .collect::<Result<_>>()?;
            let joined = Matrix::from_fn(dn, lowers.len() * self.levels[s].dim, |r, c| {
                let d = self.levels[s].dim;
                lowers[c / d].get(r, c % d).clone()
            });
            if joined.rank() != dn {
                out.push(AuditFailure {
                    kind: "surjectivity".into(),
                    detail: format!("lowering maps do not span degree -{}", s + 1),
                });
            }
            let raises: Vec<Matrix<B::S>> = self
                .probes
                .iter()
                .map(|h| self.act(h, s + 1))
                .collect::<Result<_>>()?;
            let refs: Vec<&Matrix<B::S>> = raises.iter().collect();
            if Matrix::vstack(&refs, dn).rank() != dn {
                out.push(AuditFailure {
                    kind: "faithfulness".into(),
                    detail: format!("probes kill a vector of degree -{}", s + 1),
                });
            }
        }
        let d0 = self.levels[0].dim;
        for h in &self.probes {
            if !self.act(h, 0)?.is_zero() || self.act(h, 0)?.cols() != d0 {
                out.push(AuditFailure {
                    kind: "highest-weight".into(),
                    detail: format!("{h} does not kill the top"),
                });
            }
        }
        out.extend(self.audit_failures());
        Ok(out)
    }

    /// Vector of the top basis lifted to the working scalars.
    pub fn top_vector(&self, b: usize) -> Vec<B::S> {
        let mut v = vec![B::S::zero(); self.levels[0].dim];
        v[b] = B::S::one();
        v
    }
}

#[cfg(test)]
mod tests;
