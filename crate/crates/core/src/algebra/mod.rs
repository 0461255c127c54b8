//! The three Lie algebras: L (built on the rank-3 quantum torus), tau
//! (gl2 over the rank-2 torus, centrally extended) and affine sl2.

mod bracket;
mod checks;
mod element;
mod grading;
mod keys;
mod text;

pub use bracket::{
    bracket_aff, bracket_aff_keys, bracket_l, bracket_l_keys, bracket_tau, bracket_tau_keys,
    torus_phase, AffElement, TauElement,
};
pub use checks::{
    ab_failures, check_identities, check_random, heisenberg_failures, IdentityReport,
};
pub use element::Element;
pub use grading::{enumerate_graded, grade_of, GradingBasis, LElement};
pub use keys::{AffKey, LKey, TauKey};
pub use text::{parse_aff, parse_aff_key, parse_l, parse_l_key, parse_tau, parse_tau_key};

/// Whether a tau element lies in the derived algebra, i.e. has no
/// component along the degree-zero identity `E11(t^0) + E22(t^0)`.
pub fn in_derived_tau(x: &TauElement) -> bool {
    let a = x.coeff(&TauKey::e(1, 1, (0, 0)));
    let b = x.coeff(&TauKey::e(2, 2, (0, 0)));
    (&a + &b).is_zero()
}
