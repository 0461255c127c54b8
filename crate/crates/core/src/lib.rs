//! Exact computer algebra for the Lie algebra of a rank-3 quantum torus:
//! brackets, the structural isomorphisms, degree-0 modules, graded
//! highest-weight modules and quasifiniteness checks.

pub mod algebra;
pub mod cli;
pub mod coeff;
pub mod error;
pub mod hwmod;
pub mod isomap;
pub mod l0mod;
pub mod linalg;
pub mod quasifin;
pub mod ztwo;

pub use error::{Error, Result};
