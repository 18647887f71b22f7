//! Master-equation and quantum-trajectory analysis of metastable open
//! quantum systems.
//!
//! The linear-algebra kernel, model definitions and Liouvillian
//! construction are generic over the floating-point type ([`Real`]); the
//! spectral analysis, trajectory sampling and statistics run in `f64`
//! through the aliases below.

pub mod error;
pub mod metastat;
pub mod models;
pub mod numkernel;
pub mod qme;
pub mod reset;
pub mod unravel;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

/// Double-precision complex scalar.
pub type C64 = scalar::Cx<f64>;
/// Double-precision complex matrix.
pub type Matrix = numkernel::CMatrix<f64>;
/// Double-precision complex vector.
pub type Vector = numkernel::CVector<f64>;
/// Double-precision Lindblad model.
pub type Model = qme::LindbladModel<f64>;
