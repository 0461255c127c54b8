use std::collections::BTreeMap;

use crate::algebra::{GradingBasis, LKey};
use crate::coeff::FieldElement;
use crate::error::{Error, Result};

/// Exp-polynomial data: distinct nonzero roots `alpha_r`, and for each root a
/// coefficient list `b_r0, b_r1, ...` of a polynomial in the index.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolyDataOdd {
    pub roots: Vec<FieldElement>,
    pub coeffs: Vec<Vec<FieldElement>>,
}

/// As [`ExpPolyDataOdd`], with one coefficient table per parity of `t0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolyDataEven {
    pub roots: Vec<FieldElement>,
    pub coeffs: [Vec<Vec<FieldElement>>; 2],
}

fn check_roots(roots: &[FieldElement]) -> Result<()> {
    for (a, r) in roots.iter().enumerate() {
        if r.is_zero() {
            return Err(Error::InvalidModule(
                "exp-polynomial roots must be nonzero".into(),
            ));
        }
        if roots[..a].contains(r) {
            return Err(Error::InvalidModule(format!(
                "repeated exp-polynomial root {r}"
            )));
        }
    }
    Ok(())
}

fn check_table(roots: &[FieldElement], coeffs: &[Vec<FieldElement>]) -> Result<()> {
    if coeffs.len() != roots.len() {
        return Err(Error::InvalidModule(format!(
            "{} roots but {} coefficient lists",
            roots.len(),
            coeffs.len()
        )));
    }
    Ok(())
}

impl ExpPolyDataOdd {
    pub fn new(roots: Vec<FieldElement>, coeffs: Vec<Vec<FieldElement>>) -> Result<Self> {
        check_roots(&roots)?;
        check_table(&roots, &coeffs)?;
        Ok(ExpPolyDataOdd { roots, coeffs })
    }

    /// `sum_r (sum_s b_rs i^s) alpha_r^i`
    pub fn numerator(&self, i: i64) -> FieldElement {
        exp_poly_value(&self.roots, &self.coeffs, i)
    }

    pub fn constant_sum(&self) -> FieldElement {
        constant_sum(&self.coeffs)
    }
}

impl ExpPolyDataEven {
    pub fn new(roots: Vec<FieldElement>, coeffs: [Vec<Vec<FieldElement>>; 2]) -> Result<Self> {
        check_roots(&roots)?;
        check_table(&roots, &coeffs[0])?;
        check_table(&roots, &coeffs[1])?;
        Ok(ExpPolyDataEven { roots, coeffs })
    }

    pub fn numerator(&self, j: u8, i: i64) -> FieldElement {
        exp_poly_value(&self.roots, &self.coeffs[j as usize], i)
    }
}

fn constant_sum(coeffs: &[Vec<FieldElement>]) -> FieldElement {
    coeffs
        .iter()
        .filter_map(|c| c.first())
        .fold(FieldElement::zero(), |a, b| &a + b)
}

fn exp_poly_value(roots: &[FieldElement], coeffs: &[Vec<FieldElement>], i: i64) -> FieldElement {
    let mut acc = FieldElement::zero();
    let x = FieldElement::from_int(i);
    for (root, poly) in roots.iter().zip(coeffs) {
        let p = poly
            .iter()
            .rev()
            .fold(FieldElement::zero(), |a, c| &(&a * &x) + c);
        if !p.is_zero() {
            acc = &acc + &(&p * &root.pow(i).expect("nonzero root"));
        }
    }
    acc
}

/// Where the values of a character come from.
#[derive(Clone, Debug, PartialEq)]
pub enum CharacterSource {
    ExpPoly(ExpPolyDataEven),
    /// Explicit values `psi(t0^j t^(i m2))`, keyed by `(j, i)`.
    Values(BTreeMap<(u8, i64), FieldElement>),
    /// Explicit derived-sequence values `f_{j,i}`, keyed by `(j, i)`.
    Sequence(BTreeMap<(u8, i64), FieldElement>),
}

/// A linear functional on L0 for m21 even, i.e. a one-dimensional L0-module.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub basis: GradingBasis,
    pub source: CharacterSource,
    psi_beta: FieldElement,
    psi_t01: FieldElement,
}

/// `(1 - (-1)^j q^(i alpha)) q^(i^2 m21 m22 / 2)`, the factor relating
/// `psi(t0^j t^(i m2))` to the derived sequence.
pub fn even_scale(basis: &GradingBasis, j: u8, i: i64) -> FieldElement {
    let sign = FieldElement::sign(j as i64);
    let head = &FieldElement::one() - &(&sign * &FieldElement::qpow(i * basis.alpha()));
    &head * &FieldElement::upow(i * i * basis.m2_prod())
}

fn require_even(basis: &GradingBasis) -> Result<()> {
    if basis.m21_odd() {
        return Err(Error::ParityMismatch(
            "a character needs m21 even; use an evaluation module".into(),
        ));
    }
    Ok(())
}

impl Character {
    pub fn zero(basis: GradingBasis) -> Result<Self> {
        let data = ExpPolyDataEven::new(Vec::new(), [Vec::new(), Vec::new()])?;
        psi_from_exp_poly_even(&data, &basis)
    }

    /// A character given by explicit values on a finite window; keys outside
    /// the window are reported as [`Error::OutsideWindow`].
    pub fn from_values(
        basis: GradingBasis,
        values: BTreeMap<(u8, i64), FieldElement>,
        psi_beta: FieldElement,
        psi_t01: FieldElement,
    ) -> Result<Self> {
        require_even(&basis)?;
        Ok(Character {
            basis,
            source: CharacterSource::Values(values),
            psi_beta,
            psi_t01,
        })
    }

    /// A character given by its derived sequence `f_{j,i}`, with
    /// `f_{0,0} = psi(beta)` and `f_{1,0} = 2 psi(t0^1 t^0)`.
    pub fn from_sequence(
        basis: GradingBasis,
        f: BTreeMap<(u8, i64), FieldElement>,
    ) -> Result<Self> {
        require_even(&basis)?;
        let psi_beta = f.get(&(0, 0)).cloned().unwrap_or_else(FieldElement::zero);
        let psi_t01 = f
            .get(&(1, 0))
            .map(|x| x * &FieldElement::ratio(1, 2))
            .unwrap_or_else(FieldElement::zero);
        Ok(Character {
            basis,
            source: CharacterSource::Sequence(f),
            psi_beta,
            psi_t01,
        })
    }

    pub fn with_psi_t01(mut self, v: FieldElement) -> Self {
        self.psi_t01 = v;
        self
    }

    pub fn with_psi_beta(mut self, v: FieldElement) -> Self {
        self.psi_beta = v;
        self
    }

    pub fn psi_beta(&self) -> &FieldElement {
        &self.psi_beta
    }

    pub fn psi_t01(&self) -> &FieldElement {
        &self.psi_t01
    }

    /// The scalars by which `c1` and `c2` act: solved from `psi(beta)` and
    /// `psi(m21 c1 + m22 c2) = 0`.
    pub fn central(&self) -> (FieldElement, FieldElement) {
        central_scalars(&self.basis, &self.psi_beta)
    }

    /// `psi(t0^j t^(i m2))`; `(0, 0)` is not a basis key.
    pub fn value_at(&self, j: u8, i: i64) -> Result<FieldElement> {
        if i == 0 {
            return match j {
                1 => Ok(self.psi_t01.clone()),
                _ => Err(Error::NotInDomain("t0^0 t^0 is not a basis element".into())),
            };
        }
        match &self.source {
            CharacterSource::ExpPoly(d) => {
                let n = d.numerator(j, i);
                Ok(n.div_nonzero(&even_scale(&self.basis, j, i)))
            }
            CharacterSource::Values(v) => v.get(&(j, i)).cloned().ok_or_else(|| {
                Error::OutsideWindow(format!("psi(t0^{j} t^({i} m2)) is not in the value window"))
            }),
            CharacterSource::Sequence(f) => {
                let x = f.get(&(j, i)).ok_or_else(|| {
                    Error::OutsideWindow(format!("f_({j},{i}) is not in the sequence window"))
                })?;
                Ok(x.div_nonzero(&even_scale(&self.basis, j, i)))
            }
        }
    }

    /// `psi` on a basis key of L0.
    pub fn value(&self, key: &LKey) -> Result<FieldElement> {
        match key {
            LKey::C1 => Ok(self.central().0),
            LKey::C2 => Ok(self.central().1),
            LKey::Torus { m, i } => {
                let (g, k) = self.basis.coords(*m);
                if g != 0 {
                    return Err(Error::NotInDomain(format!("{key} has degree {g}")));
                }
                self.value_at(*i, k)
            }
        }
    }
}

pub fn central_scalars(
    basis: &GradingBasis,
    psi_beta: &FieldElement,
) -> (FieldElement, FieldElement) {
    let d = FieldElement::from_int(basis.alpha());
    let c1 = &(psi_beta * &FieldElement::from_int(basis.m2.1)) / &d;
    let c2 = &(psi_beta * &FieldElement::from_int(-basis.m2.0)) / &d;
    (c1, c2)
}

/// Quasifinite character (m21 even) built from exp-polynomial data.
pub fn psi_from_exp_poly_even(data: &ExpPolyDataEven, basis: &GradingBasis) -> Result<Character> {
    require_even(basis)?;
    let psi_beta = constant_sum(&data.coeffs[0]);
    let psi_t01 = &constant_sum(&data.coeffs[1]) * &FieldElement::ratio(1, 2);
    Ok(Character {
        basis: *basis,
        source: CharacterSource::ExpPoly(data.clone()),
        psi_beta,
        psi_t01,
    })
}

/// The character used in the worked example on non-irreducible loop
/// modules: roots 1 and -1 with unit coefficients in both parities, so
/// `psi(t0^j t^(i m2)) = ((-1)^i + 1) / ((1 - (-1)^j q^(i alpha)) q^(i^2 m21 m22 / 2))`.
pub fn remark52_character(basis: &GradingBasis) -> Result<Character> {
    let one = || vec![FieldElement::one()];
    let data = ExpPolyDataEven::new(
        vec![FieldElement::one(), FieldElement::from_int(-1)],
        [vec![one(), one()], vec![one(), one()]],
    )?;
    psi_from_exp_poly_even(&data, basis)
}

/// Where the values of `psi` on the subalgebra spanned by `t0^0 t^(2j m2)` come from.
#[derive(Clone, Debug, PartialEq)]
pub enum PsiASource {
    ExpPoly(ExpPolyDataOdd),
    /// Explicit values `psi(t0^0 t^(2j m2))` keyed by `j`.
    Values(BTreeMap<i64, FieldElement>),
    /// Explicit derived-sequence values `f_j` keyed by `j`.
    Sequence(BTreeMap<i64, FieldElement>),
}

/// `psi` restricted to the commutative part for m21 odd, plus `psi(beta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiA {
    pub basis: GradingBasis,
    pub source: PsiASource,
    psi_beta: FieldElement,
}

/// `(1 - q^(2i alpha)) q^(2 i^2 m21 m22)`
pub fn odd_scale(basis: &GradingBasis, i: i64) -> FieldElement {
    let head = &FieldElement::one() - &FieldElement::qpow(2 * i * basis.alpha());
    &head * &FieldElement::qpow(2 * i * i * basis.m2_prod())
}

fn require_odd(basis: &GradingBasis) -> Result<()> {
    if !basis.m21_odd() {
        return Err(Error::ParityMismatch(
            "an evaluation module needs m21 odd; use a character".into(),
        ));
    }
    Ok(())
}

impl PsiA {
    pub fn zero(basis: GradingBasis) -> Result<Self> {
        psi_from_exp_poly_odd(&ExpPolyDataOdd::new(Vec::new(), Vec::new())?, &basis)
    }

    pub fn from_values(
        basis: GradingBasis,
        values: BTreeMap<i64, FieldElement>,
        psi_beta: FieldElement,
    ) -> Result<Self> {
        require_odd(&basis)?;
        Ok(PsiA {
            basis,
            source: PsiASource::Values(values),
            psi_beta,
        })
    }

    pub fn from_sequence(basis: GradingBasis, f: BTreeMap<i64, FieldElement>) -> Result<Self> {
        require_odd(&basis)?;
        let psi_beta = f.get(&0).cloned().unwrap_or_else(FieldElement::zero);
        Ok(PsiA {
            basis,
            source: PsiASource::Sequence(f),
            psi_beta,
        })
    }

    pub fn psi_beta(&self) -> &FieldElement {
        &self.psi_beta
    }

    pub fn central(&self) -> (FieldElement, FieldElement) {
        central_scalars(&self.basis, &self.psi_beta)
    }

    /// `psi(t0^0 t^(2j m2))` for `j != 0`.
    pub fn value_at(&self, j: i64) -> Result<FieldElement> {
        if j == 0 {
            return Err(Error::NotInDomain("t0^0 t^0 is not a basis element".into()));
        }
        match &self.source {
            PsiASource::ExpPoly(d) => Ok(d.numerator(j).div_nonzero(&odd_scale(&self.basis, j))),
            PsiASource::Values(v) => v.get(&j).cloned().ok_or_else(|| {
                Error::OutsideWindow(format!(
                    "psi(t0^0 t^({} m2)) is not in the value window",
                    2 * j
                ))
            }),
            PsiASource::Sequence(f) => {
                let x = f.get(&j).ok_or_else(|| {
                    Error::OutsideWindow(format!("f_{j} is not in the sequence window"))
                })?;
                Ok(x.div_nonzero(&odd_scale(&self.basis, j)))
            }
        }
    }
}

/// Functional on the Heisenberg part (m21 odd) from exp-polynomial data.
pub fn psi_from_exp_poly_odd(data: &ExpPolyDataOdd, basis: &GradingBasis) -> Result<PsiA> {
    require_odd(basis)?;
    Ok(PsiA {
        basis: *basis,
        source: PsiASource::ExpPoly(data.clone()),
        psi_beta: data.constant_sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    #[test]
    fn remark52_values() {
        let b = GradingBasis::standard();
        let psi = remark52_character(&b).unwrap();
        assert_eq!(psi.psi_beta(), &fe(2));
        assert_eq!(psi.psi_t01(), &fe(1));
        for i in [-3, -1, 1, 5] {
            assert!(psi.value_at(0, i).unwrap().is_zero());
            assert!(psi.value_at(1, i).unwrap().is_zero());
        }
        // i = 2, j = 1, standard basis (m21 m22 = 0, alpha = 1): 2 / (1 + q^2)
        let v = psi.value_at(1, 2).unwrap();
        assert_eq!(v, fe(2) / (fe(1) + FieldElement::qpow(2)));
        assert!(psi.value(&LKey::t(0, (0, 0))).is_err());
        // gamma = c2 acts as zero, beta = c1 as 2
        assert_eq!(psi.central(), (fe(2), fe(0)));
    }

    #[test]
    fn zero_character() {
        let psi = Character::zero(GradingBasis::standard()).unwrap();
        assert!(psi.psi_beta().is_zero());
        assert!(psi.value_at(0, 3).unwrap().is_zero());
        let w = Character::from_values(GradingBasis::standard(), BTreeMap::new(), fe(0), fe(0));
        assert!(matches!(
            w.unwrap().value_at(0, 3),
            Err(Error::OutsideWindow(_))
        ));
    }

    #[test]
    fn parity_checks() {
        let odd = GradingBasis::new((0, 1), (1, 0)).unwrap();
        assert!(remark52_character(&odd).is_err());
        assert!(PsiA::zero(GradingBasis::standard()).is_err());
        assert!(PsiA::zero(odd).is_ok());
    }

    #[test]
    fn odd_examples() {
        let basis = GradingBasis::new((0, 1), (1, 0)).unwrap();
        assert_eq!(basis.alpha(), -1);
        let d = ExpPolyDataOdd::new(vec![fe(1)], vec![vec![fe(1)]]).unwrap();
        assert_eq!(
            psi_from_exp_poly_odd(&d, &basis).unwrap().psi_beta(),
            &fe(1)
        );

        // basis with alpha = 1 and m21 odd
        let basis = GradingBasis::new((0, -1), (1, 0)).unwrap();
        assert_eq!(basis.alpha(), 1);
        let d = ExpPolyDataOdd::new(vec![FieldElement::qpow(2)], vec![vec![fe(1)]]).unwrap();
        let psi = psi_from_exp_poly_odd(&d, &basis).unwrap();
        let want = FieldElement::qpow(2)
            / (&(fe(1) - FieldElement::qpow(2)) * &FieldElement::qpow(2 * basis.m2_prod()));
        assert_eq!(psi.value_at(1).unwrap(), want);
    }

    #[test]
    fn rejects_bad_roots() {
        assert!(ExpPolyDataOdd::new(vec![fe(0)], vec![vec![]]).is_err());
        assert!(ExpPolyDataOdd::new(vec![fe(2), fe(2)], vec![vec![], vec![]]).is_err());
        assert!(ExpPolyDataOdd::new(vec![fe(2)], vec![]).is_err());
    }
}
