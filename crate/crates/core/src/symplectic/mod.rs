//! Symplectic forms on an algebroid frame, the induced Poisson bivector,
//! the central extension with its contact form, and the linear and Dirac
//! brackets on the dual of the extension.

mod dirac;
mod extension;
mod poisson;

pub use dirac::{dirac_bracket_on_s, linear_poisson_bracket, FiberLinearFn, LiePoissonSign};
pub use extension::{central_extension, contact_form_check, CentralExtension, ContactVerdict};
pub use poisson::{induced_poisson, poisson_bracket, schouten_jacobi, PoissonBivector, Trivector};

use thiserror::Error;

use crate::algebroid::{ce_differential, AlgebroidPresentation, FrameKForm};
use crate::linalg::{poly_det, poly_is_antisymmetric, PolyMatrix};
use crate::ring::PolyFn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("frame form must be a {0} x {0} matrix")]
    Shape(usize),
    #[error("frame form is not antisymmetric")]
    NotAntisymmetric,
    #[error("frame form has identically zero determinant")]
    Singular,
    #[error("determinant of the frame form is not constant: {0}")]
    NonConstantDeterminant(String),
    #[error("frame form is not constant")]
    NonConstant,
    #[error("polynomial lives on {found} variables, expected {expected}")]
    ChartMismatch { expected: usize, found: usize },
    #[error("fiber function has {found} fiber coordinates, expected {expected}")]
    FiberMismatch { expected: usize, found: usize },
}

pub(crate) fn check_frame_form(a: &AlgebroidPresentation, omega: &PolyMatrix) -> Result<(), SymplecticError> {
    let r = a.rank();
    if omega.len() != r || omega.iter().any(|row| row.len() != r) {
        return Err(SymplecticError::Shape(r));
    }
    for p in omega.iter().flatten() {
        if p.nvars() != a.nvars() {
            return Err(SymplecticError::ChartMismatch { expected: a.nvars(), found: p.nvars() });
        }
    }
    if !poly_is_antisymmetric(omega) {
        return Err(SymplecticError::NotAntisymmetric);
    }
    Ok(())
}

/// Closedness and nondegeneracy of a frame 2-form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticVerdict {
    /// `d omega`; `None` when the rank is below 3 and the 3-form space is zero.
    pub d_omega: Option<FrameKForm>,
    pub closed: bool,
    pub determinant: PolyFn,
    /// Determinant is a nonzero constant.
    pub nondegenerate: bool,
}

impl SymplecticVerdict {
    pub fn passed(&self) -> bool {
        self.closed && self.nondegenerate
    }
}

pub fn check_symplectic(a: &AlgebroidPresentation, omega: &PolyMatrix) -> Result<SymplecticVerdict, SymplecticError> {
    check_frame_form(a, omega)?;
    let form = FrameKForm::from_matrix(a.nvars(), omega);
    let d_omega = if a.rank() >= 3 {
        Some(ce_differential(a, &form).expect("degree 2 below rank"))
    } else {
        None
    };
    let closed = d_omega.as_ref().is_none_or(FrameKForm::is_zero);
    let determinant = poly_det(a.nvars(), omega);
    let nondegenerate = determinant.as_constant().is_some_and(|d| d != num_traits::Zero::zero());
    Ok(SymplecticVerdict { d_omega, closed, determinant, nondegenerate })
}
