use std::sync::Arc;

use num_complex::Complex64;
use num_traits::One;
use rayon::prelude::*;

use super::{star, FlatFrameConfig, StarError};
use crate::catalog::standard_omega_matrix;
use crate::fock::{bargmann_toeplitz_complex, FockSpace};
use crate::ring::{CPoly, PolyFn};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    pub hbars: Vec<f64>,
    pub cutoff: usize,
    pub buffer: usize,
    /// Remainders below `floor * ||T_f T_g||` count as floating-point zero.
    pub floor: f64,
}

impl Default for OracleSpec {
    /// Five points of the geometric grid `1/64 .. 1/4`, cutoff 32, buffer 8.
    fn default() -> Self {
        OracleSpec { hbars: (0..5).map(|k| 0.25 / 2f64.powi(k)).collect(), cutoff: 32, buffer: 8, floor: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    pub order: usize,
    /// `(hbar, R(hbar))` pairs.
    pub points: Vec<(f64, f64)>,
    /// Least-squares slope of `log R` against `log hbar` over points above the floor.
    pub slope: Option<f64>,
    /// Fewer than two points above the floor: the truncated product is exact
    /// up to rounding and no slope can be fitted.
    pub at_floor: bool,
}

impl SlopeReport {
    /// Slope at least `order + 0.8`, or the remainder vanishes numerically.
    pub fn passed(&self) -> bool {
        self.at_floor || self.slope.is_some_and(|s| s >= self.order as f64 + 0.8)
    }
}

fn is_standard_frame(cfg: &FlatFrameConfig) -> bool {
    let a = cfg.algebroid();
    let n = a.nvars();
    if n == 0 || !n.is_multiple_of(2) || a.rank() != n {
        return false;
    }
    let identity_anchor = (0..n).all(|i| {
        (0..n).all(|k| {
            let p = &a.anchor()[i][k];
            if i == k { p.as_constant().is_some_and(|c| c.is_one()) } else { p.is_zero() }
        })
    });
    let std = standard_omega_matrix(n, n);
    let omega_std = (0..n).all(|i| (0..n).all(|j| std[i][j].as_constant().as_ref() == Some(&cfg.omega()[i][j])));
    identity_anchor && omega_std && cfg.complex_structure() == cfg.omega()
}

fn slope_fit(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = points.iter().fold((0.0, 0.0), |(n, d), (x, y)| {
        let dx = x.ln() - mx;
        (n + dx * (y.ln() - my), d + dx * dx)
    });
    num / den
}

/// `R(hbar) = || T_f T_g - sum_{k <= N} hbar^k T_{(f*g)_k} ||` on levels below
/// `cutoff - buffer`, with the slope of `log R` against `log hbar`.
pub fn oracle_compare(
    cfg: &FlatFrameConfig,
    f: &PolyFn,
    g: &PolyFn,
    order: usize,
    spec: &OracleSpec,
) -> Result<SlopeReport, StarError> {
    if !is_standard_frame(cfg) {
        return Err(StarError::OracleFrame);
    }
    let modes = cfg.nvars() / 2;
    let space = Arc::new(FockSpace::new(modes, spec.cutoff));
    let (fc, gc) = (f.complexify(), g.complexify());
    let series = star(cfg, &fc, &gc, order)?;
    let coeffs: Vec<CPoly> = series.coeffs().to_vec();
    let rows: Vec<(f64, f64, f64)> = spec
        .hbars
        .par_iter()
        .map(|&h| {
            let tf = bargmann_toeplitz_complex(&fc, h, space.clone())?;
            let tg = bargmann_toeplitz_complex(&gc, h, space.clone())?;
            let lhs = tf.mul(&tg);
            let mut diff = lhs.clone();
            for (k, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let t = bargmann_toeplitz_complex(c, h, space.clone())?;
                diff = diff.sub(&t.scale(Complex64::new(h.powi(k as i32), 0.0)));
            }
            Ok((h, diff.norm_below(spec.buffer), lhs.norm_below(spec.buffer)))
        })
        .collect::<Result<_, StarError>>()?;
    let points: Vec<(f64, f64)> = rows.iter().map(|&(h, r, _)| (h, r)).collect();
    let above: Vec<(f64, f64)> =
        rows.iter().filter(|&&(_, r, scale)| r > spec.floor * scale.max(1.0)).map(|&(h, r, _)| (h, r)).collect();
    let at_floor = above.len() < 2;
    let slope = (!at_floor).then(|| slope_fit(&above));
    Ok(SlopeReport { order, points, slope, at_floor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ring::parse_poly;

    fn cfg() -> FlatFrameConfig {
        let a = catalog::tangent(1);
        FlatFrameConfig::new(&a, &catalog::standard_omega_matrix(2, 2), None).unwrap()
    }

    fn p(s: &str) -> PolyFn {
        parse_poly(s, &catalog::phase_space_chart(1)).unwrap()
    }

    #[test]
    fn squares_have_slope_two() {
        let rep = oracle_compare(&cfg(), &p("x^2"), &p("y^2"), 1, &OracleSpec::default()).unwrap();
        assert!(!rep.at_floor);
        let s = rep.slope.unwrap();
        assert!((s - 2.0).abs() < 0.05, "slope {s}");
        assert!(rep.passed());
    }

    #[test]
    fn order_zero_remainder_is_linear_for_xy() {
        let rep = oracle_compare(&cfg(), &p("x"), &p("y"), 0, &OracleSpec::default()).unwrap();
        assert!(!rep.at_floor);
        assert!((rep.slope.unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn exact_cases_sit_at_floor() {
        let rep = oracle_compare(&cfg(), &p("x"), &p("y"), 1, &OracleSpec::default()).unwrap();
        assert!(rep.at_floor && rep.passed());
        let rep = oracle_compare(&cfg(), &p("1"), &p("x*y^2"), 0, &OracleSpec::default()).unwrap();
        assert!(rep.at_floor);
    }

    #[test]
    fn rejects_other_frames() {
        let a = catalog::b_algebroid(1);
        let c = FlatFrameConfig::new(&a, &catalog::standard_omega_matrix(2, 2), None).unwrap();
        let f = parse_poly("f", a.chart()).unwrap();
        assert!(matches!(oracle_compare(&c, &f, &f, 1, &OracleSpec::default()), Err(StarError::OracleFrame)));
    }
}
