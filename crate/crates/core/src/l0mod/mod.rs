//! Finite-dimensional irreducible L0-modules: characters (m21 even) and
//! evaluation modules over tensor products of sl2 irreducibles (m21 odd).

mod character;
mod eval;
mod sl2;

use std::collections::BTreeMap;

pub use character::{
    central_scalars, even_scale, odd_scale, psi_from_exp_poly_even, psi_from_exp_poly_odd,
    remark52_character, Character, CharacterSource, ExpPolyDataEven, ExpPolyDataOdd, PsiA,
    PsiASource,
};
pub use eval::{remark26_predicate, EvalModule, EvalModuleSpec};
pub use sl2::sl2_irrep;

use crate::algebra::{enumerate_graded, GradingBasis, LKey};
use crate::coeff::FieldElement;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Debug)]
pub enum L0Kind {
    Character(Character),
    Eval(EvalModule),
}

/// A finite-dimensional L0-module; actions are computed on demand for any
/// degree-zero key.
#[derive(Clone, Debug)]
pub struct L0Module {
    pub basis: GradingBasis,
    pub kind: L0Kind,
}

impl L0Module {
    pub fn dimension(&self) -> usize {
        match &self.kind {
            L0Kind::Character(_) => 1,
            L0Kind::Eval(e) => e.dimension(),
        }
    }

    pub fn m21_odd(&self) -> bool {
        self.basis.m21_odd()
    }

    pub fn central(&self) -> (FieldElement, FieldElement) {
        match &self.kind {
            L0Kind::Character(c) => c.central(),
            L0Kind::Eval(e) => e.spec.psi.central(),
        }
    }

    pub fn psi_beta(&self) -> FieldElement {
        match &self.kind {
            L0Kind::Character(c) => c.psi_beta().clone(),
            L0Kind::Eval(e) => e.spec.psi.psi_beta().clone(),
        }
    }

    /// Action matrix of a degree-zero basis key.
    pub fn act(&self, key: &LKey) -> Result<Matrix<FieldElement>> {
        let n = self.dimension();
        match key {
            LKey::C1 => Ok(Matrix::scalar(n, &self.central().0)),
            LKey::C2 => Ok(Matrix::scalar(n, &self.central().1)),
            LKey::Torus { m, i } => {
                let (g, k) = self.basis.coords(*m);
                if g != 0 {
                    return Err(Error::NotInDomain(format!("{key} has degree {g}, not 0")));
                }
                match &self.kind {
                    L0Kind::Character(c) => Ok(Matrix::scalar(1, &c.value_at(*i, k)?)),
                    L0Kind::Eval(e) => e.act_torus(*i, k),
                }
            }
        }
    }

    /// Action matrices for all degree-zero keys with `|k| <= window`.
    pub fn window_actions(&self, window: i64) -> Result<BTreeMap<LKey, Matrix<FieldElement>>> {
        enumerate_graded(0, window, &self.basis)
            .into_iter()
            .map(|k| Ok((k, self.act(&k)?)))
            .collect()
    }

    pub fn remark26_check(&self, bpoly: &[FieldElement], k: u8) -> Result<bool> {
        match &self.kind {
            L0Kind::Eval(e) => e.remark26_check(bpoly, k),
            L0Kind::Character(_) => Err(Error::ParityMismatch(
                "the annihilation check applies to evaluation modules".into(),
            )),
        }
    }
}

impl From<Character> for L0Module {
    fn from(c: Character) -> Self {
        L0Module {
            basis: c.basis,
            kind: L0Kind::Character(c),
        }
    }
}

pub fn character_module(c: Character) -> L0Module {
    c.into()
}

/// Builds `V(mu, psi)` for a basis with m21 odd; the window only bounds the
/// keys that [`L0Module::window_actions`] callers typically ask for, the
/// module itself answers any degree-zero key.
pub fn build_eval_module(spec: EvalModuleSpec, basis: &GradingBasis) -> Result<L0Module> {
    let e = EvalModule::new(spec, *basis)?;
    Ok(L0Module {
        basis: *basis,
        kind: L0Kind::Eval(e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{bracket_l_keys, Element};

    fn odd_basis() -> GradingBasis {
        GradingBasis::new((0, 1), (1, 0)).unwrap()
    }

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    fn eval(mu: Vec<i64>, dims: Vec<usize>) -> L0Module {
        let b = odd_basis();
        let spec = EvalModuleSpec::new(
            mu.into_iter().map(fe).collect(),
            dims,
            PsiA::zero(b).unwrap(),
        )
        .unwrap();
        build_eval_module(spec, &b).unwrap()
    }

    fn act_elem(m: &L0Module, x: &Element<LKey>) -> Matrix<FieldElement> {
        let n = m.dimension();
        let mut acc = Matrix::zeros(n, n);
        for (k, c) in x.iter() {
            acc = acc.add(&m.act(k).unwrap().scale(c));
        }
        acc
    }

    #[test]
    fn trivial_eval_module() {
        let m = eval(vec![1], vec![1]);
        assert_eq!(m.dimension(), 1);
        for (k, a) in m.window_actions(2).unwrap() {
            if !matches!(k, LKey::Torus { i: 0, m } if m.0 % 2 == 0) {
                assert!(a.is_zero(), "{k}");
            }
        }
    }

    #[test]
    fn fundamental_eval_module() {
        let m = eval(vec![1], vec![2]);
        let a = m.act(&LKey::t(1, (0, 0))).unwrap();
        assert_eq!(
            a,
            Matrix::from_rows(vec![vec![fe(-1), fe(0)], vec![fe(0), fe(1)]])
        );
    }

    #[test]
    fn three_dim_raise_plus_lower() {
        let m = eval(vec![1], vec![3]);
        let b = odd_basis();
        let a = m.act(&LKey::t(0, b.m2)).unwrap();
        let (e, f, _) = sl2_irrep(3).unwrap();
        let want = e.add(&f).scale(&FieldElement::upow(-b.m2_prod()));
        assert_eq!(a, want);
    }

    #[test]
    fn commutation_on_window() {
        let bases = [odd_basis(), GradingBasis::new((1, 1), (1, 2)).unwrap()];
        for b in bases {
            let spec = EvalModuleSpec::new(
                vec![fe(1), fe(-2)],
                vec![2, 2],
                PsiA::from_values(
                    b,
                    (-3..=3).filter(|&j| j != 0).map(|j| (j, fe(j))).collect(),
                    fe(3),
                )
                .unwrap(),
            )
            .unwrap();
            let m = build_eval_module(spec, &b).unwrap();
            let keys = enumerate_graded(0, 3, &b);
            for x in &keys {
                for y in &keys {
                    let lhs = act_elem(&m, &bracket_l_keys(x, y));
                    let rhs = m.act(x).unwrap().commutator(&m.act(y).unwrap());
                    assert_eq!(lhs, rhs, "[{x}, {y}]");
                }
            }
        }
    }

    #[test]
    fn character_kills_commutators() {
        let b = GradingBasis::new((1, 0), (2, 1)).unwrap();
        let psi = remark52_character(&b).unwrap();
        let m = L0Module::from(psi);
        let keys = enumerate_graded(0, 3, &b);
        for x in &keys {
            for y in &keys {
                assert!(act_elem(&m, &bracket_l_keys(x, y)).is_zero());
            }
        }
        assert!(act_elem(&m, &b.gamma()).is_zero());
    }

    #[test]
    fn remark26_examples() {
        let m = eval(vec![1], vec![2]);
        let lin = vec![fe(-1), fe(1)];
        assert!(m.remark26_check(&lin, 0).unwrap());
        assert!(m.remark26_check(&lin, 1).unwrap());
        assert!(!m.remark26_check(&[fe(1)], 0).unwrap());
        let t = eval(vec![1], vec![1]);
        assert!(t.remark26_check(&[fe(1)], 1).unwrap());
    }

    #[test]
    fn irreducible_spot_check() {
        for d in 1..=3 {
            let m = eval(vec![1], vec![d]);
            let gens: Vec<_> = m.window_actions(2).unwrap().into_values().collect();
            assert_eq!(Matrix::generated_algebra_dim(&gens), d * d);
        }
    }
}
