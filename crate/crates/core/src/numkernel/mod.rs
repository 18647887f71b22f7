//! Dense complex linear algebra: eigensystems, Sylvester equations,
//! exponential propagation, quadrature and root bracketing.

mod eigen;
mod lu;
mod matrix;
mod propagate;
mod quadrature;
mod roots;
mod sylvester;
mod tolerances;

use num_complex::Complex;
use thiserror::Error;

pub use eigen::{eig_general, eig_general_with, eigenvalues, hermitian_eigenvalues, hessenberg, schur, EigenSystem, Schur, MAX_DIM};
pub use lu::{inverse, solve_linear};
pub use matrix::{pure_trace_distance, trace_distance, CMatrix, CVector};
pub use propagate::Propagator;
pub use quadrature::{integrate, integrate_to_infinity, Quadrature};
pub use roots::bisect;
pub use sylvester::{solve_sylvester, solve_sylvester_with};
pub use tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix dimension {dim} exceeds the supported maximum")]
    TooLarge { dim: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("QR iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("matrix is defective or numerically non-diagonalisable (eigenvalue condition {condition:e})")]
    DefectiveMatrix { eigenvalues: Vec<Complex<f64>>, condition: f64 },
    #[error("matrix is singular (pivot {pivot:e})")]
    Singular { pivot: f64 },
    #[error("Sylvester pencil is singular: |a_i + b_j| = {separation:e}")]
    SingularPencil { separation: f64 },
    #[error("Sylvester residual {residual:e} exceeds tolerance")]
    InaccurateSolution { residual: f64 },
    #[error("root is not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },
    #[error("quadrature did not reach tolerance (error estimate {estimate:e})")]
    QuadratureFailed { estimate: f64 },
}
