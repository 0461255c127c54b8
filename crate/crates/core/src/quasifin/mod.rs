//! Quasifiniteness criteria: derived sequences, recurrence detection by exact
//! Hankel kernels, and the polynomial conditions on the degree-zero module.

use serde::Serialize;

use crate::algebra::{torus_phase, GradingBasis, LElement, LKey};
use crate::coeff::{upoly, FieldElement, PrimeSpec, Scalar, DEFAULT_GUARD};
use crate::error::{Error, Result};
use crate::l0mod::{
    build_eval_module, even_scale, odd_scale, Character, EvalModuleSpec, L0Module, PsiA,
};
use crate::linalg::Matrix;

#[cfg(test)]
mod tests;

/// `P = sum a_i X^i` with `X = t^(m2)` (m21 even) or `X = t^(2 m2)` (m21 odd).
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrencePoly {
    pub coeffs: Vec<FieldElement>,
    pub odd: bool,
}

/// Exponent of `u` relating `a_i` to `b_i`: `a_i = b_i u^(w i^2 m21 m22)`.
fn weight(odd: bool) -> i64 {
    if odd {
        4
    } else {
        1
    }
}

impl RecurrencePoly {
    pub fn new(coeffs: Vec<FieldElement>, odd: bool) -> Result<Self> {
        let (Some(a0), Some(an)) = (coeffs.first(), coeffs.last()) else {
            return Err(Error::InvalidModule("empty polynomial".into()));
        };
        if a0.is_zero() || an.is_zero() {
            return Err(Error::InvalidModule(
                "need nonzero constant and leading coefficients".into(),
            ));
        }
        Ok(RecurrencePoly { coeffs, odd })
    }

    /// From the recurrence coefficients `b_i` of the derived sequence.
    pub fn from_b(b: &[FieldElement], odd: bool, basis: &GradingBasis) -> Result<Self> {
        let w = weight(odd) * basis.m2_prod();
        let a = b
            .iter()
            .enumerate()
            .map(|(i, c)| c * &FieldElement::upow(w * (i * i) as i64))
            .collect();
        Self::new(a, odd)
    }

    pub fn b_coeffs(&self, basis: &GradingBasis) -> Vec<FieldElement> {
        let w = weight(self.odd) * basis.m2_prod();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * &FieldElement::upow(-w * (i * i) as i64))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn a(&self, i: i64) -> FieldElement {
        if i < 0 {
            return FieldElement::zero();
        }
        self.coeffs
            .get(i as usize)
            .cloned()
            .unwrap_or_else(FieldElement::zero)
    }
}

/// Derived sequence on a contiguous index range: one row per parity of
/// `t0` (two for m21 even, one for m21 odd).
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceWindow {
    pub odd: bool,
    pub lo: i64,
    pub hi: i64,
    pub rows: Vec<Vec<FieldElement>>,
}

impl SequenceWindow {
    pub fn new(odd: bool, lo: i64, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let len = rows.first().map_or(0, Vec::len);
        if rows.len() != if odd { 1 } else { 2 } || rows.iter().any(|r| r.len() != len) {
            return Err(Error::InvalidModule("ragged sequence window".into()));
        }
        Ok(SequenceWindow {
            odd,
            lo,
            hi: lo + len as i64 - 1,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, j: usize, i: i64) -> &FieldElement {
        &self.rows[j][(i - self.lo) as usize]
    }

    pub fn shifted(&self, by: i64) -> Self {
        SequenceWindow {
            lo: self.lo + by,
            hi: self.hi + by,
            ..self.clone()
        }
    }
}

/// The degree-zero data a quasifiniteness question is asked about.
#[derive(Clone, Debug)]
pub enum Functional {
    Even(Character),
    Odd(EvalModuleSpec),
}

impl Functional {
    fn basis(&self) -> GradingBasis {
        match self {
            Functional::Even(c) => c.basis,
            Functional::Odd(s) => s.psi.basis,
        }
    }
}

fn check_parity(basis: &GradingBasis, odd: bool) -> Result<()> {
    if basis.m21_odd() != odd {
        return Err(Error::ParityMismatch(format!(
            "basis has m21 {} but the data is for m21 {}",
            if basis.m21_odd() { "odd" } else { "even" },
            if odd { "odd" } else { "even" }
        )));
    }
    Ok(())
}

/// `f_{j,i} = (1 - (-1)^j q^(i alpha)) q^(i^2 m21 m22 / 2) psi(t0^j t^(i m2))`
/// for `|i| <= range`, with `f_{0,0} = psi(beta)` and `f_{1,0} = 2 psi(t0^1 t^0)`.
pub fn derive_sequence_even(
    psi: &Character,
    basis: &GradingBasis,
    range: i64,
) -> Result<SequenceWindow> {
    check_parity(basis, false)?;
    let mut rows = vec![Vec::new(), Vec::new()];
    for (j, row) in rows.iter_mut().enumerate() {
        for i in -range..=range {
            row.push(match (j, i) {
                (0, 0) => psi.psi_beta().clone(),
                (_, 0) => psi.psi_t01() * &FieldElement::from_int(2),
                _ => &even_scale(basis, j as u8, i) * &psi.value_at(j as u8, i)?,
            });
        }
    }
    SequenceWindow::new(false, -range, rows)
}

/// `f_i = (1 - q^(2 i alpha)) q^(2 i^2 m21 m22) psi(t0^0 t^(2 i m2))`, `f_0 = psi(beta)`.
pub fn derive_sequence_odd(psi: &PsiA, basis: &GradingBasis, range: i64) -> Result<SequenceWindow> {
    check_parity(basis, true)?;
    let row = (-range..=range)
        .map(|i| {
            if i == 0 {
                Ok(psi.psi_beta().clone())
            } else {
                Ok(&odd_scale(basis, i) * &psi.value_at(i)?)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SequenceWindow::new(true, -range, vec![row])
}

pub fn derive_sequence(f: &Functional, basis: &GradingBasis, range: i64) -> Result<SequenceWindow> {
    match f {
        Functional::Even(c) => derive_sequence_even(c, basis, range),
        Functional::Odd(s) => derive_sequence_odd(&s.psi, basis, range),
    }
}

fn hankel(w: &SequenceWindow, n: usize) -> Matrix<FieldElement> {
    let mut rows = Vec::new();
    for row in &w.rows {
        for start in 0..row.len().saturating_sub(n) {
            rows.push(row[start..=start + n].to_vec());
        }
    }
    if rows.is_empty() {
        return Matrix::zeros(0, n + 1);
    }
    Matrix::from_rows(rows)
}

fn spec_for_screen() -> PrimeSpec {
    PrimeSpec::new(1_234_567_891_011, DEFAULT_GUARD).expect("fixed point passes the guard")
}

/// Full column rank modulo the prime implies full rank over the field, so
/// those orders are skipped without exact elimination.
fn prime_full_rank(m: &Matrix<FieldElement>) -> bool {
    let spec = spec_for_screen();
    let mut img = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut r = Vec::with_capacity(m.cols());
        for x in m.row(i) {
            match x.to_prime(&spec) {
                Some(v) => r.push(v),
                None => return false,
            }
        }
        img.push(r);
    }
    !img.is_empty() && Matrix::from_rows(img).rank() == m.cols()
}

/// Minimal monic recurrence `sum b_i f_{j,k+i} = 0` holding on the whole window
/// for every parity row.
pub fn detect_b(w: &SequenceWindow, max_order: usize) -> Result<Option<Vec<FieldElement>>> {
    if w.len() < 2 * max_order + 2 {
        return Err(Error::OutsideWindow(format!(
            "window of length {} is too short for order {}",
            w.len(),
            max_order
        )));
    }
    for n in 0..=max_order {
        let h = hankel(w, n);
        if prime_full_rank(&h) {
            continue;
        }
        for v in h.kernel() {
            if v[n].is_zero() {
                continue;
            }
            let lead = v[n].inv()?;
            let b: Vec<FieldElement> = v.iter().map(|x| x * &lead).collect();
            if !b[0].is_zero() {
                return Ok(Some(b));
            }
        }
    }
    Ok(None)
}

pub fn recurrence_detect(
    w: &SequenceWindow,
    basis: &GradingBasis,
    max_order: usize,
) -> Result<Option<RecurrencePoly>> {
    check_parity(basis, w.odd)?;
    match detect_b(w, max_order)? {
        Some(b) => Ok(Some(RecurrencePoly::from_b(&b, w.odd, basis)?)),
        None => Ok(None),
    }
}

/// `c * t0^j t^(n m2) * sum_i a_i s_i X^i` as an element of L, where
/// `X = t^(step m2)` and `s_i` is an optional per-term twist.
fn times_p(
    basis: &GradingBasis,
    j: u8,
    n: i64,
    step: i64,
    p: &RecurrencePoly,
    twist: impl Fn(i64) -> FieldElement,
) -> LElement {
    let head = basis.vector(0, n);
    let mut out = LElement::zero();
    for (i, a) in p.coeffs.iter().enumerate() {
        let i = i as i64;
        let s = n + step * i;
        let (sign, upow) = torus_phase(head, 0, basis.vector(0, step * i));
        let c = &(a * &twist(i)) * &(&FieldElement::from_int(sign) * &FieldElement::upow(upow));
        let key = LKey::t(j as i64, basis.vector(0, s));
        if key.is_valid() {
            out.add_term(key, c);
        } else {
            debug_assert!(c.is_zero(), "t0^0 t^0 with a nonzero coefficient");
        }
    }
    out
}

/// The element `t0^j t^(k m2) (P(X) - (-1)^j q^(k' alpha) P(q^alpha X)) + delta a_{-k} q^(..) beta`
/// shared by the even condition and the first odd condition.
fn shifted_difference(basis: &GradingBasis, p: &RecurrencePoly, j: u8, k: i64) -> LElement {
    let step = if p.odd { 2 } else { 1 };
    let alpha = basis.alpha();
    let sign = FieldElement::sign(j as i64);
    let twisted = |i: i64| &sign * &FieldElement::qpow(step * (k + i) * alpha);
    let mut x = times_p(basis, j, step * k, step, p, |i| {
        &FieldElement::one() - &twisted(i)
    });
    if j == 0 {
        let a = p.a(-k);
        if !a.is_zero() {
            let w = weight(p.odd) * basis.m2_prod();
            x.add_scaled(&basis.beta(), &(&a * &FieldElement::upow(-2 * w * k * k)));
        }
    }
    x
}

fn psi_of(psi: &Character, x: &LElement) -> Result<FieldElement> {
    let mut acc = FieldElement::zero();
    for (k, c) in x.iter() {
        acc = &acc + &(c * &psi.value(k)?);
    }
    Ok(acc)
}

fn act_of(m: &L0Module, x: &LElement) -> Result<Matrix<FieldElement>> {
    let n = m.dimension();
    let mut acc = Matrix::zeros(n, n);
    for (k, c) in x.iter() {
        acc = acc.add(&m.act(k)?.scale(c));
    }
    Ok(acc)
}

/// Whether `psi` kills `t0^j t^(k m2) P(t^(m2)) - (-1)^j q^(k alpha) t0^j t^(k m2) P(q^alpha t^(m2))
/// + delta_{j,0} a_{-k} q^(-k^2 m21 m22) beta` for `|k| <= window` and both `j`.
pub fn check_condition_even(
    psi: &Character,
    p: &RecurrencePoly,
    basis: &GradingBasis,
    window: i64,
) -> Result<bool> {
    check_parity(basis, false)?;
    if p.odd {
        return Err(Error::ParityMismatch(
            "odd-case polynomial for an even basis".into(),
        ));
    }
    for k in -window..=window {
        for j in 0..2u8 {
            if !psi_of(psi, &shifted_difference(basis, p, j, k))?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The three annihilation conditions for m21 odd, as matrix identities on
/// the evaluation module, for `|k| <= window`.
pub fn check_condition_odd(
    spec: &EvalModuleSpec,
    p: &RecurrencePoly,
    basis: &GradingBasis,
    window: i64,
) -> Result<bool> {
    check_parity(basis, true)?;
    if !p.odd {
        return Err(Error::ParityMismatch(
            "even-case polynomial for an odd basis".into(),
        ));
    }
    let m = build_eval_module(spec.clone(), basis)?;
    let alpha = basis.alpha();
    let shift = |i: i64| FieldElement::qpow(2 * i * alpha);
    let one = |_: i64| FieldElement::one();
    for k in -window..=window {
        let mut elems = vec![shifted_difference(basis, p, 0, k)];
        elems.push(times_p(basis, 0, 2 * k + 1, 2, p, one));
        elems.push(times_p(basis, 0, 2 * k + 1, 2, p, shift));
        elems.push(times_p(basis, 1, k, 2, p, one));
        elems.push(times_p(basis, 1, k, 2, p, shift));
        for x in &elems {
            if !act_of(&m, x)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchParams {
    pub max_order: usize,
    pub window: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Quasifinite {
        certificate: RecurrencePoly,
        checked_range: (i64, i64),
    },
    UnknownWithinWindow {
        max_order: usize,
        window: i64,
    },
}

impl Verdict {
    pub fn is_quasifinite(&self) -> bool {
        matches!(self, Verdict::Quasifinite { .. })
    }
}

/// `prod (x - mu_s)(x - q^(2 alpha) mu_s)` over the nontrivial slots.
fn slot_factor(spec: &EvalModuleSpec, basis: &GradingBasis) -> Vec<FieldElement> {
    let shift = FieldElement::qpow(2 * basis.alpha());
    let mut roots = Vec::new();
    for (mu, d) in spec.mu.iter().zip(&spec.dims) {
        if *d > 1 {
            roots.push(mu.clone());
            roots.push(mu * &shift);
        }
    }
    upoly::from_roots(&roots)
}

/// Search for a certificate polynomial. The search is bounded, so a failed
/// search is reported as unknown rather than as non-quasifinite.
pub fn verdict(f: &Functional, params: SearchParams) -> Result<Verdict> {
    let basis = f.basis();
    let unknown = Verdict::UnknownWithinWindow {
        max_order: params.max_order,
        window: params.window,
    };
    let w = derive_sequence(f, &basis, params.window)?;
    let Some(b) = detect_b(&w, params.max_order)? else {
        return Ok(unknown);
    };
    let (p, ok) = match f {
        Functional::Even(psi) => {
            let p = RecurrencePoly::from_b(&b, false, &basis)?;
            let r = reach(&p, params.window);
            let ok = check_condition_even(psi, &p, &basis, r)?;
            (p, ok)
        }
        Functional::Odd(spec) => {
            let q = upoly::mul(&b, &slot_factor(spec, &basis));
            let p = RecurrencePoly::from_b(&q, true, &basis)?;
            let r = reach(&p, params.window);
            let ok = check_condition_odd(spec, &p, &basis, r)?;
            (p, ok)
        }
    };
    if !ok {
        return Ok(unknown);
    }
    let r = reach(&p, params.window);
    Ok(Verdict::Quasifinite {
        certificate: p,
        checked_range: (-r, r),
    })
}

/// Conditions are checked for those `k` whose terms stay inside the window.
fn reach(p: &RecurrencePoly, window: i64) -> i64 {
    (window - p.degree() as i64).max(0)
}
