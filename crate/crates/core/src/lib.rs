//! Symplectic Lie algebroids in a local frame: exact verification of the
//! algebroid and symplectic axioms, the induced Poisson structure, the
//! central extension and osculating Heisenberg groups, finite Fock-space
//! operator models, and a Wick-type star product checked against
//! Bargmann-Toeplitz operators.

pub mod algebroid;
pub mod catalog;
pub mod fock;
pub mod heisenberg;
pub mod linalg;
pub mod random;
pub mod ring;
pub mod star;
pub mod symplectic;

pub use algebroid::{
    bracket_sections, ce_differential, check_axioms, AlgebroidError, AlgebroidPresentation,
    AxiomReport, Check, FrameKForm, Section,
};
pub use ring::{parse_poly, Chart, EtaLaurent, FormalSeries, PolyFn, Q, QI};
