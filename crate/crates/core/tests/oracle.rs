mod common;

use std::sync::Arc;

use common::{exact_oracle, prime_oracle};
use qtorus::algebra::GradingBasis;
use qtorus::coeff::{Exact, FieldElement, Prime, PrimeSpec};
use qtorus::hwmod::{build_hw_module, build_with, Direction, TopModule, TruncationParams};
use qtorus::l0mod::{
    build_eval_module, remark52_character, Character, EvalModuleSpec, L0Module, PsiA,
};
use qtorus::ztwo::{
    extend_z2, remark52_even_pattern, remark52_odd_pattern, z2_dims, SubmoduleSpecW,
};

fn spec() -> PrimeSpec {
    PrimeSpec::new(1_000_003, 10_000).unwrap()
}

fn even(psi: Character) -> Arc<dyn TopModule> {
    Arc::new(L0Module::from(psi))
}

fn odd_top(dims: Vec<usize>) -> (Arc<dyn TopModule>, GradingBasis) {
    let basis = GradingBasis::new((0, 1), (1, 0)).unwrap();
    let mu = (1..=dims.len() as i64)
        .map(FieldElement::from_int)
        .collect();
    let spec = EvalModuleSpec::new(mu, dims, PsiA::zero(basis).unwrap()).unwrap();
    (Arc::new(build_eval_module(spec, &basis).unwrap()), basis)
}

fn t(k: i64, depth: usize) -> TruncationParams {
    TruncationParams::new(k, k, depth).unwrap()
}

#[test]
fn remark52_module() {
    let basis = GradingBasis::standard();
    let top = even(remark52_character(&basis).unwrap());
    let e = build_hw_module(top.clone(), &basis, t(2, 3), Direction::Highest).unwrap();
    assert!(e.audit(1).unwrap().is_empty());
    assert_eq!(e.dims(), vec![1, 2, 5, 10]);
    assert_eq!(
        exact_oracle(top.clone(), basis, 2, 2).dims(2),
        e.dims()[..3]
    );
    assert_eq!(prime_oracle(top, basis, 2, 2, spec()).dims(3), e.dims());
}

#[test]
fn half_value_module() {
    // the truncations do not stabilize, but at a fixed window both sides agree
    let basis = GradingBasis::standard();
    let psi = remark52_character(&basis)
        .unwrap()
        .with_psi_t01(FieldElement::ratio(1, 2));
    let top = even(psi);
    for k in [1, 2] {
        let e = build_hw_module(top.clone(), &basis, t(k, 1), Direction::Highest).unwrap();
        assert_eq!(e.dims()[1], 4 * k as usize + 2);
        assert_eq!(exact_oracle(top.clone(), basis, k, k).dims(1), e.dims());
    }
    let p = build_with(
        top.clone(),
        &basis,
        t(1, 2),
        Direction::Highest,
        Prime(spec()),
    )
    .unwrap();
    assert_eq!(prime_oracle(top, basis, 1, 1, spec()).dims(2), p.dims());
}

#[test]
fn twisted_basis_and_zero_character() {
    let basis = GradingBasis::new((1, 0), (2, 1)).unwrap();
    for psi in [
        remark52_character(&basis).unwrap(),
        Character::zero(basis).unwrap(),
    ] {
        let top = even(psi);
        let e = build_hw_module(top.clone(), &basis, t(2, 2), Direction::Highest).unwrap();
        assert_eq!(exact_oracle(top, basis, 2, 2).dims(2), e.dims());
    }
}

#[test]
fn evaluation_modules() {
    let (top, basis) = odd_top(vec![2]);
    let e = build_hw_module(top.clone(), &basis, t(2, 1), Direction::Highest).unwrap();
    assert_eq!(exact_oracle(top.clone(), basis, 2, 2).dims(1), e.dims());
    let p = build_with(
        top.clone(),
        &basis,
        t(2, 2),
        Direction::Highest,
        Prime(spec()),
    )
    .unwrap();
    assert_eq!(prime_oracle(top, basis, 2, 2, spec()).dims(2), p.dims());
}

#[test]
fn loop_grids() {
    let basis = GradingBasis::standard();
    let top = even(remark52_character(&basis).unwrap());
    let base = build_hw_module(top.clone(), &basis, t(2, 0), Direction::Highest).unwrap();
    let (grid, _) = z2_dims(
        &extend_z2(base, 3),
        &remark52_even_pattern(),
        t(2, 2),
        Exact,
    )
    .unwrap();
    let o = exact_oracle(top, basis, 2, 2).cell_dims(&remark52_even_pattern(), 2, 3);
    assert_eq!(grid.rows, o);

    let (top, basis) = odd_top(vec![3]);
    let w = remark52_odd_pattern();
    let base = build_with(
        top.clone(),
        &basis,
        t(2, 0),
        Direction::Highest,
        Prime(spec()),
    )
    .unwrap();
    let (grid, _) = z2_dims(&extend_z2(base, 3), &w, t(2, 2), Prime(spec())).unwrap();
    let o = prime_oracle(top.clone(), basis, 2, 2, spec()).cell_dims(&w, 2, 3);
    assert_eq!(grid.rows, o);
    let full = SubmoduleSpecW::full(3);
    let o = prime_oracle(top, basis, 1, 1, spec()).cell_dims(&full, 1, 1);
    assert!(o.iter().all(|row| row.iter().all(|&d| d == row[0])));
}
