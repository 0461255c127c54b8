use std::collections::BTreeMap;

use super::*;
use crate::l0mod::{psi_from_exp_poly_odd, remark52_character, ExpPolyDataOdd};

fn fe(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

fn odd_basis() -> GradingBasis {
    GradingBasis::new((0, 1), (1, 0)).unwrap()
}

fn params(max_order: usize, window: i64) -> SearchParams {
    SearchParams { max_order, window }
}

#[test]
fn zero_character() {
    let b = GradingBasis::standard();
    let psi = Character::zero(b).unwrap();
    let w = derive_sequence_even(&psi, &b, 4).unwrap();
    assert!(w.rows.iter().flatten().all(FieldElement::is_zero));
    let v = verdict(&Functional::Even(psi.clone()), params(3, 8)).unwrap();
    let Verdict::Quasifinite { certificate, .. } = v else {
        panic!("zero character should be quasifinite");
    };
    assert_eq!(certificate.coeffs, vec![fe(1)]);
    let p = RecurrencePoly::new(vec![fe(3), fe(0), fe(-5)], false).unwrap();
    assert!(check_condition_even(&psi, &p, &b, 3).unwrap());
}

#[test]
fn remark52_sequence_and_certificate() {
    let b = GradingBasis::standard();
    let psi = remark52_character(&b).unwrap();
    let w = derive_sequence_even(&psi, &b, 5).unwrap();
    for j in 0..2 {
        for i in -5..=5i64 {
            assert_eq!(
                w.get(j, i),
                &fe(if i % 2 == 0 { 2 } else { 0 }),
                "f({j},{i})"
            );
        }
    }
    let b2 = detect_b(&w, 4).unwrap().unwrap();
    assert_eq!(b2, vec![fe(-1), fe(0), fe(1)]);
    let p = recurrence_detect(&w, &b, 4).unwrap().unwrap();
    assert!(check_condition_even(&psi, &p, &b, 4).unwrap());
    let linear = RecurrencePoly::from_b(&[fe(-1), fe(1)], false, &b).unwrap();
    assert!(!check_condition_even(&psi, &linear, &b, 4).unwrap());
    let v = verdict(&Functional::Even(psi), params(4, 8)).unwrap();
    match v {
        Verdict::Quasifinite { certificate, .. } => assert_eq!(certificate.degree(), 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn half_value_breaks_the_recurrence() {
    let b = GradingBasis::standard();
    let psi = remark52_character(&b)
        .unwrap()
        .with_psi_t01(FieldElement::ratio(1, 2));
    let v = verdict(&Functional::Even(psi), params(4, 8)).unwrap();
    assert!(!v.is_quasifinite());
}

#[test]
fn twisted_even_basis() {
    // m21 m22 = 2, so the a/b rescaling is nontrivial
    let b = GradingBasis::new((1, 0), (2, 1)).unwrap();
    let psi = remark52_character(&b).unwrap();
    let w = derive_sequence_even(&psi, &b, 5).unwrap();
    assert_eq!(w.get(1, 2), &fe(2));
    let p = recurrence_detect(&w, &b, 3).unwrap().unwrap();
    assert_ne!(p.coeffs[2], fe(1));
    assert_eq!(p.b_coeffs(&b), vec![fe(-1), fe(0), fe(1)]);
    assert!(check_condition_even(&psi, &p, &b, 3).unwrap());
    // the unscaled polynomial is not a certificate
    let naive = RecurrencePoly::new(vec![fe(-1), fe(0), fe(1)], false).unwrap();
    assert!(!check_condition_even(&psi, &naive, &b, 3).unwrap());
}

#[test]
fn geometric_sequence() {
    let q = FieldElement::q();
    let row: Vec<FieldElement> = (-4..=4).map(|i| q.pow(i).unwrap()).collect();
    let w = SequenceWindow::new(true, -4, vec![row]).unwrap();
    let b = detect_b(&w, 3).unwrap().unwrap();
    assert_eq!(b, vec![-&q, fe(1)]);
}

#[test]
fn odd_constant_sequence() {
    let basis = odd_basis();
    let data = ExpPolyDataOdd::new(vec![fe(1)], vec![vec![fe(1)]]).unwrap();
    let psi = psi_from_exp_poly_odd(&data, &basis).unwrap();
    let w = derive_sequence_odd(&psi, &basis, 4).unwrap();
    assert!(w.rows[0].iter().all(|x| x == &fe(1)));
    assert!(matches!(
        derive_sequence_even(
            &Character::zero(GradingBasis::standard()).unwrap(),
            &basis,
            2
        ),
        Err(Error::ParityMismatch(_))
    ));
}

fn factorial_window(len: usize) -> SequenceWindow {
    let mut acc = FieldElement::one();
    let mut row = Vec::new();
    for n in 1..=len as i64 {
        acc = &acc * &fe(n);
        row.push(acc.clone());
    }
    let lo = -(len as i64 / 2);
    SequenceWindow::new(false, lo, vec![row.clone(), row]).unwrap()
}

#[test]
fn factorials_have_no_short_recurrence() {
    let w = factorial_window(17);
    assert_eq!(detect_b(&w, 4).unwrap(), None);
    let f: BTreeMap<(u8, i64), FieldElement> = (0..2u8)
        .flat_map(|j| (w.lo..=w.hi).map(move |i| (j, i)))
        .map(|(j, i)| ((j, i), w.get(j as usize, i).clone()))
        .collect();
    let psi = Character::from_sequence(GradingBasis::standard(), f).unwrap();
    let v = verdict(&Functional::Even(psi), params(4, 8)).unwrap();
    assert_eq!(
        v,
        Verdict::UnknownWithinWindow {
            max_order: 4,
            window: 8
        }
    );
}

#[test]
fn short_window_is_rejected() {
    let w = factorial_window(9);
    assert!(matches!(detect_b(&w, 4), Err(Error::OutsideWindow(_))));
}

#[test]
fn detection_is_shift_invariant() {
    let b = GradingBasis::standard();
    let psi = remark52_character(&b).unwrap();
    let w = derive_sequence_even(&psi, &b, 5).unwrap();
    assert_eq!(
        detect_b(&w, 4).unwrap(),
        detect_b(&w.shifted(7), 4).unwrap()
    );
}

fn spec(mu: Vec<FieldElement>, dims: Vec<usize>, basis: &GradingBasis) -> EvalModuleSpec {
    EvalModuleSpec::new(mu, dims, PsiA::zero(*basis).unwrap()).unwrap()
}

#[test]
fn odd_conditions() {
    for basis in [odd_basis(), GradingBasis::new((1, 1), (1, 2)).unwrap()] {
        let trivial = spec(vec![fe(1)], vec![1], &basis);
        let one = RecurrencePoly::new(vec![fe(1)], true).unwrap();
        assert!(check_condition_odd(&trivial, &one, &basis, 2).unwrap());

        let s = spec(vec![fe(1)], vec![2], &basis);
        assert!(!check_condition_odd(&s, &one, &basis, 2).unwrap());
        let shift = FieldElement::qpow(2 * basis.alpha());
        let q = upoly::from_roots(&[fe(1), shift.clone()]);
        let p = RecurrencePoly::from_b(&q, true, &basis).unwrap();
        assert!(check_condition_odd(&s, &p, &basis, 2).unwrap());
        // missing the shifted root
        let half = RecurrencePoly::from_b(&upoly::from_roots(&[fe(1)]), true, &basis).unwrap();
        assert!(!check_condition_odd(&s, &half, &basis, 2).unwrap());

        let v = verdict(&Functional::Odd(s), params(3, 6)).unwrap();
        let Verdict::Quasifinite { certificate, .. } = v else {
            panic!("evaluation module with zero psi should be quasifinite");
        };
        assert_eq!(certificate.b_coeffs(&basis), q);
    }
}

#[test]
fn odd_exp_poly_verdict() {
    let basis = GradingBasis::new((1, 1), (1, 2)).unwrap();
    let data = ExpPolyDataOdd::new(
        vec![fe(2), FieldElement::q()],
        vec![vec![fe(1), fe(1)], vec![fe(-3)]],
    )
    .unwrap();
    let psi = psi_from_exp_poly_odd(&data, &basis).unwrap();
    let s = EvalModuleSpec::new(vec![fe(1), fe(3)], vec![2, 1], psi).unwrap();
    let v = verdict(&Functional::Odd(s.clone()), params(4, 10)).unwrap();
    let Verdict::Quasifinite { certificate, .. } = v else {
        panic!("exp-polynomial data should be quasifinite");
    };
    let b = certificate.b_coeffs(&basis);
    assert_eq!(upoly::root_multiplicity(&b, &fe(2)), 2);
    assert_eq!(upoly::root_multiplicity(&b, &FieldElement::q()), 1);
    assert_eq!(upoly::root_multiplicity(&b, &fe(1)), 1);
    assert_eq!(upoly::root_multiplicity(&b, &fe(3)), 0);
    assert_eq!(certificate.degree(), 5);
}
