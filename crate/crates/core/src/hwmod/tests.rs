use std::collections::BTreeMap;

use super::*;
use crate::l0mod::{
    build_eval_module, remark52_character, Character, EvalModuleSpec, L0Module, PsiA,
};

fn fe(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

fn remark52() -> Arc<dyn TopModule> {
    Arc::new(L0Module::from(
        remark52_character(&GradingBasis::standard()).unwrap(),
    ))
}

#[test]
fn zero_character_is_trivial() {
    let v0: Arc<dyn TopModule> = Arc::new(L0Module::from(
        Character::zero(GradingBasis::standard()).unwrap(),
    ));
    let t = TruncationParams::new(4, 4, 3).unwrap();
    let e = build_hw_module(v0, &GradingBasis::standard(), t, Direction::Highest).unwrap();
    assert_eq!(e.dims(), vec![1, 0, 0, 0]);
    assert!(e.audit(2).unwrap().is_empty());
    assert_eq!(integrability_probe(&e, (-1, 0), 1, 0, 3).unwrap(), Some(1));
    assert!(growth_check(&e).unwrap().holds);
}

#[test]
fn remark52_first_levels() {
    let t = TruncationParams::new(3, 3, 2).unwrap();
    let e = build_hw_module(remark52(), &GradingBasis::standard(), t, Direction::Highest).unwrap();
    let d = e.dims();
    assert!(d[1] >= 1 && d[1] <= 4, "{d:?}");
    let fails = e.audit(2).unwrap();
    assert!(fails.is_empty(), "{fails:?}");
}

#[test]
fn prime_matches_exact() {
    let t = TruncationParams::new(3, 3, 2).unwrap();
    let (a, b) = backend_agreement(
        remark52(),
        &GradingBasis::standard(),
        t,
        Direction::Highest,
        7,
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn eval_module_raising_operator() {
    let b = GradingBasis::new((0, 1), (1, 0)).unwrap();
    let spec = EvalModuleSpec::new(vec![fe(1)], vec![2], PsiA::zero(b).unwrap()).unwrap();
    let v0: Arc<dyn TopModule> = Arc::new(build_eval_module(spec, &b).unwrap());
    let t = TruncationParams::new(2, 2, 1).unwrap();
    let e = build_hw_module(v0, &b, t, Direction::Highest).unwrap();
    assert_eq!(integrability_probe(&e, b.m2, -1, 1, 3).unwrap(), Some(2));
    assert_eq!(integrability_probe(&e, b.m2, -1, 0, 3).unwrap(), Some(1));
}

#[test]
fn value_window_outside_is_reported() {
    let b = GradingBasis::standard();
    let vals: BTreeMap<(u8, i64), FieldElement> = BTreeMap::new();
    let c = Character::from_values(b, vals, fe(1), fe(0)).unwrap();
    let v0: Arc<dyn TopModule> = Arc::new(L0Module::from(c));
    let t = TruncationParams::new(2, 2, 1).unwrap();
    assert!(matches!(
        build_hw_module(v0, &b, t, Direction::Highest),
        Err(Error::OutsideWindow(_))
    ));
}
