use super::character::PsiA;
use super::sl2::sl2_irrep;
use crate::algebra::GradingBasis;
use crate::coeff::{upoly, FieldElement};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

type M = Matrix<FieldElement>;

/// Data of an evaluation module: points `mu_s`, sl2 irreducible dimensions
/// `dims_s`, and `psi` on the commutative part.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalModuleSpec {
    pub mu: Vec<FieldElement>,
    pub dims: Vec<usize>,
    pub psi: PsiA,
}

impl EvalModuleSpec {
    pub fn new(mu: Vec<FieldElement>, dims: Vec<usize>, psi: PsiA) -> Result<Self> {
        let s = EvalModuleSpec { mu, dims, psi };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu.is_empty() || self.mu.len() != self.dims.len() {
            return Err(Error::InvalidModule(format!(
                "need as many points as dimensions (got {} and {})",
                self.mu.len(),
                self.dims.len()
            )));
        }
        for (a, m) in self.mu.iter().enumerate() {
            if m.is_zero() {
                return Err(Error::InvalidModule(
                    "evaluation points must be nonzero".into(),
                ));
            }
            if self.mu[..a].contains(m) {
                return Err(Error::InvalidModule(format!(
                    "repeated evaluation point {m}"
                )));
            }
        }
        if self.dims.contains(&0) {
            return Err(Error::InvalidModule(
                "sl2 dimensions must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dims.iter().product()
    }

    /// `prod (x - mu_s)` over the slots carrying a nontrivial sl2-module.
    pub fn nontrivial_root_poly(&self) -> Vec<FieldElement> {
        upoly::from_roots(
            self.mu
                .iter()
                .zip(&self.dims)
                .filter(|(_, &d)| d > 1)
                .map(|(m, _)| m),
        )
    }
}

/// The slot-embedded sl2 generators of a tensor product of irreducibles.
#[derive(Clone, Debug)]
pub struct EvalModule {
    pub spec: EvalModuleSpec,
    pub basis: GradingBasis,
    pub e12: Vec<M>,
    pub e21: Vec<M>,
    pub h: Vec<M>,
}

fn embed(x: &M, before: usize, after: usize) -> M {
    M::identity(before).kron(x).kron(&M::identity(after))
}

impl EvalModule {
    pub fn new(spec: EvalModuleSpec, basis: GradingBasis) -> Result<Self> {
        spec.validate()?;
        if !basis.m21_odd() {
            return Err(Error::ParityMismatch(
                "evaluation modules need m21 odd".into(),
            ));
        }
        if spec.psi.basis != basis {
            return Err(Error::InvalidModule(
                "psi was built for a different basis".into(),
            ));
        }
        let (mut e12, mut e21, mut h) = (Vec::new(), Vec::new(), Vec::new());
        for s in 0..spec.dims.len() {
            let before: usize = spec.dims[..s].iter().product();
            let after: usize = spec.dims[s + 1..].iter().product();
            let (e, f, hh) = sl2_irrep(spec.dims[s])?;
            e12.push(embed(&e, before, after));
            e21.push(embed(&f, before, after));
            h.push(embed(&hh, before, after));
        }
        Ok(EvalModule {
            spec,
            basis,
            e12,
            e21,
            h,
        })
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    /// `sum_s c_s X^(s)` with `c_s = mu_s^p`.
    fn slot_sum(&self, xs: &[M], p: i64) -> M {
        let n = self.dimension();
        let mut acc = M::zeros(n, n);
        for (x, mu) in xs.iter().zip(&self.spec.mu) {
            acc = acc.add(&x.scale(&mu.pow(p).expect("nonzero point")));
        }
        acc
    }

    /// Action of `t0^i t^(k m2)`.
    pub fn act_torus(&self, i: u8, k: i64) -> Result<M> {
        let n = self.dimension();
        let m = self.basis.m2_prod();
        if k.rem_euclid(2) == 0 {
            let j = k / 2;
            if i == 0 {
                let v = self.spec.psi.value_at(j)?;
                return Ok(M::scalar(n, &v));
            }
            let c = -FieldElement::upow(-4 * j * j * m);
            Ok(self.slot_sum(&self.h, j).scale(&c))
        } else {
            let j = (k - 1).div_euclid(2);
            let c = FieldElement::upow(-k * k * m);
            let raise = self
                .slot_sum(&self.e12, j)
                .scale(&FieldElement::sign(i as i64));
            let lower = self.slot_sum(&self.e21, j + 1);
            Ok(raise.add(&lower).scale(&c))
        }
    }

    /// Whether both operators `sum_i b_i q^((2i+1)^2 m/2) t0^k t^((2i+1) m2)`
    /// and `sum_i b_i q^(2 i^2 m) t0^1 t^(2i m2)` vanish on the module, with
    /// `m = m21 m22` and `b` indexed from `b_0`.
    pub fn remark26_check(&self, bpoly: &[FieldElement], k: u8) -> Result<bool> {
        let n = self.dimension();
        let m = self.basis.m2_prod();
        let mut odd = M::zeros(n, n);
        let mut even = M::zeros(n, n);
        for (i, b) in bpoly.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let i = i as i64;
            let c = b * &FieldElement::upow((2 * i + 1) * (2 * i + 1) * m);
            odd = odd.add(&self.act_torus(k, 2 * i + 1)?.scale(&c));
            let c = b * &FieldElement::upow(4 * i * i * m);
            even = even.add(&self.act_torus(1, 2 * i)?.scale(&c));
        }
        Ok(odd.is_zero() && even.is_zero())
    }
}

/// The divisibility side of the annihilation criterion:
/// `prod (x - mu_s) | sum b_i x^i` over the slots with nontrivial sl2-action.
pub fn remark26_predicate(spec: &EvalModuleSpec, bpoly: &[FieldElement]) -> bool {
    upoly::divides(&spec.nontrivial_root_poly(), bpoly)
}
