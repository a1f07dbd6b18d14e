//! Wick-type star products on flat algebroid frames and their comparison
//! with Bargmann-Toeplitz operators.

mod config;
mod extract;
mod oracle;
mod product;

pub use config::{default_complex_structure, flat_frame_check, wick_tensor, FlatFrameConfig};
pub use extract::{neville_at_zero, total_symbol_extract, Extraction, ExtractionSpec, NumPoly};
pub use oracle::{oracle_compare, OracleSpec, SlopeReport};
pub use product::{
    check_associativity, commutator_check, star, star_series, AssociativityReport, CommutatorVerdict, FormalFunction,
};

use thiserror::Error;

use crate::fock::FockError;
use crate::symplectic::SymplecticError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StarError {
    #[error("frame is not flat: {0}")]
    NotFlat(String),
    #[error("frame form must be constant")]
    NonConstantForm,
    #[error("frame form is singular")]
    Singular,
    #[error("complex structure fails check: {0}")]
    Incompatible(&'static str),
    #[error("no complex structure given and the frame form is not orthogonal")]
    MissingComplexStructure,
    #[error("polynomial lives on {found} variables, expected {expected}")]
    ChartMismatch { expected: usize, found: usize },
    #[error("Wick tensor invariant violated: {0}")]
    Invariant(&'static str),
    #[error("{0}")]
    Symplectic(#[from] SymplecticError),
    #[error("{0}")]
    Fock(#[from] FockError),
    #[error("extrapolation did not converge for order {order}: error estimate {estimate:e}")]
    ExtrapolationNotConverged { order: usize, estimate: f64 },
    #[error("the operator oracle needs the standard frame on R^2n")]
    OracleFrame,
}
