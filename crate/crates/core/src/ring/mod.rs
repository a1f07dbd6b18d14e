//! Exact polynomial arithmetic on a chart, truncated series in the
//! deformation parameter, and the expression parser.

pub mod chart;
pub mod coeff;
pub mod parse;
pub mod poly;
pub mod series;

pub use chart::{Chart, ChartError};
pub use coeff::{conj, gauss, imag_unit, q, q_to_f64, qi64, qi_to_c64, real, Coeff, Q, QI};
pub use parse::{parse_poly, ParseError};
pub use poly::{grlex, CPoly, Exponents, Poly, PolyFn};
pub use series::{series_mul, EtaLaurent, FormalSeries, SeriesError};

/// Partial derivative of `p` along coordinate `axis`.
pub fn poly_derive<C: Coeff>(p: &Poly<C>, axis: usize) -> Poly<C> {
    p.derive(axis)
}
