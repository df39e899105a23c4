//! Exact hbar-adic formal distribution calculus: windowed series, rational
//! kernels, a normal-ordering engine for current algebras and a Fock-space
//! model of the Cartan currents.

pub mod anchors;
pub mod error;
pub mod fock;
pub mod gcm;
pub mod hseries;
pub mod kernels;
pub mod opseries;
pub mod poly;
pub mod report;
pub mod rewrite;
pub mod scalar;
pub mod suites;
pub mod window;

pub use error::{Error, Result};
pub use gcm::Gcm;
pub use hseries::{HSeries, Witness};
pub use opseries::OpSeries;
pub use poly::Poly;
pub use scalar::Q;
pub use window::{window_after, Window, WindowOp};
