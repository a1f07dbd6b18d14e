//! Finite operator models at one fiber: compatible complex structures,
//! truncated Fock spaces, the Schrodinger-type representation, symbol
//! quantization by quadrature, projector purification and Bargmann-Toeplitz
//! operators.

mod dump;
mod purify;
mod quadrature;
mod repr;
mod space;
mod structure;
mod toeplitz;

pub use dump::{read_binary, write_binary, write_text};
pub use purify::{convergence_order_fit, purify_projector, random_near_projector, PurifyOptions, Purification, PurifyStep};
pub use quadrature::{gauss_hermite, quantize_symbol, QuadratureSpec, Quantized};
pub use repr::{build_representation, displacement, Representation};
pub use space::{FockOperator, FockSpace};
pub use structure::{compatible_j, CompatibleStructure};
pub use structure::standard_omega;
pub use toeplitz::{bargmann_toeplitz, bargmann_toeplitz_complex, bargmann_toeplitz_terms};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("fiber form is numerically degenerate (smallest singular value {sigma_min:e}, largest {sigma_max:e})")]
    DegenerateFiber { sigma_min: f64, sigma_max: f64 },
    #[error("seed metric is not symmetric positive definite")]
    SeedNotPositive,
    #[error("expected a {expected} x {expected} matrix, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("representation parameter must be positive, got {0}")]
    NonPositiveLambda(f64),
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),
    #[error("purification needs ||S^2 - S|| < 1/4, got {0}")]
    PurifyPrecondition(f64),
    #[error("purification stopped after {iterations} iterations at residual {residual:e}")]
    MaxIterExceeded { iterations: usize, residual: f64 },
    #[error("quadrature not converged: doubling the order moved an entry by {shift:e}")]
    QuadratureNotConverged { shift: f64 },
    #[error("symbol has no closed-form Fourier transform")]
    UnsupportedSymbol,
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
