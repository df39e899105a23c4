//! Operator models: a free-boson realization of the Cartan currents on a
//! Fock space and the classical vacuum module of the affine algebra.

pub mod checks;
pub mod classical;
pub mod field;
pub mod heis;
pub mod hq;
pub mod locality;
pub mod space;
pub mod useries;

pub use field::{Field, XSer};
pub use heis::Heis;
pub use hq::HQ;
pub use space::{FVec, Mono};
