use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::StarError;
use crate::fock::{bargmann_toeplitz_terms, FockError, FockOperator, FockSpace};
use crate::ring::{qi_to_c64, CPoly};

/// Polynomial with floating-point complex coefficients, as produced by fits.
#[derive(Debug, Clone, PartialEq)]
pub struct NumPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl NumPoly {
    pub fn zero(nvars: usize) -> Self {
        NumPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn from_exact(p: &CPoly) -> Self {
        NumPoly { nvars: p.nvars(), terms: p.terms().iter().map(|(e, c)| (e.clone(), qi_to_c64(c))).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeff(&self, exps: &[u32]) -> Complex64 {
        self.terms.get(exps).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.terms.iter()
    }

    pub fn eval(&self, point: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(point).map(|(&k, x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// Largest coefficient difference to an exact polynomial.
    pub fn distance_to(&self, p: &CPoly) -> f64 {
        let other = NumPoly::from_exact(p);
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|e| (self.coeff(e) - other.coeff(e)).norm())
            .fold(0.0, f64::max)
    }

    /// Drops coefficients below `eps` in modulus.
    pub fn chop(&self, eps: f64) -> Self {
        NumPoly { nvars: self.nvars, terms: self.terms.iter().filter(|(_, c)| c.norm() > eps).map(|(e, c)| (e.clone(), *c)).collect() }
    }

    fn term_list(&self) -> Vec<(Vec<u32>, Complex64)> {
        self.terms.iter().map(|(e, c)| (e.clone(), *c)).collect()
    }
}

impl fmt::Display for NumPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("v{}", i + 1) } else { format!("v{}^{}", i + 1, k) })
                    .collect();
                if mono.is_empty() {
                    format!("({:.6e}{:+.6e}i)", c.re, c.im)
                } else {
                    format!("({:.6e}{:+.6e}i)*{}", c.re, c.im, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Value at `0` of the interpolating polynomial through `(x_i, y_i)` and
/// the difference between the last two diagonal entries of the tableau as
/// an error estimate.
pub fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> (Complex64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let m = xs.len();
    let mut p: Vec<Complex64> = ys.to_vec();
    let mut prev_top = p[0];
    let mut est = f64::INFINITY;
    for level in 1..m {
        for i in 0..m - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
        est = (p[0] - prev_top).norm();
        prev_top = p[0];
    }
    (p[0], est)
}

/// Monomials of total degree at most `d` in `n` variables.
fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=d {
            cur.push(k);
            rec(n, d - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Coherent-state expectation `<K_w, T K_w> / <K_w, K_w>` with
/// `K_w = sum conj(w)^alpha / sqrt(hbar^|alpha| alpha!) e_alpha`.
fn berezin(op: &FockOperator, hbar: f64, point: &[f64]) -> Complex64 {
    let space = &op.space;
    let n = space.modes();
    let w: Vec<Complex64> = (0..n).map(|j| Complex64::new(point[j], point[n + j]) / 2f64.sqrt()).collect();
    let v: DVector<Complex64> = DVector::from_iterator(
        space.dim(),
        space.basis().iter().map(|alpha| {
            alpha.iter().zip(&w).fold(Complex64::new(1.0, 0.0), |acc, (&k, wj)| {
                let fact: f64 = (1..=k).map(|m| m as f64).product();
                acc * wj.conj().powu(k) / (hbar.powi(k as i32) * fact).sqrt()
            })
        }),
    );
    let tv = &op.matrix * &v;
    v.dotc(&tv) / v.dotc(&v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionSpec {
    /// Sample values of `hbar`, at least two.
    pub hbars: Vec<f64>,
    /// Base points in phase-space coordinates `x_1..x_n, y_1..y_n`.
    pub points: Vec<Vec<f64>>,
    /// Number of symbol coefficients `f_0..f_order` to recover.
    pub order: usize,
    /// Degree of the polynomial ansatz for each coefficient.
    pub fit_degree: u32,
    /// Largest accepted error estimate.
    pub tolerance: f64,
}

impl ExtractionSpec {
    /// Geometric grid `1/16 .. 1/2` and a lattice with `fit_degree + 2`
    /// values per coordinate in `[-0.4, 0.4]`, enough to determine the fit.
    pub fn standard(modes: usize, order: usize, fit_degree: u32) -> Self {
        let hbars = (0..6).map(|k| 0.5 * 2f64.powf(-0.6 * k as f64)).collect();
        let m = (fit_degree as usize + 2).max(3);
        let vals: Vec<f64> = (0..m).map(|i| -0.4 + 0.8 * i as f64 / (m - 1) as f64).collect();
        let mut points: Vec<Vec<f64>> = vec![Vec::new()];
        for _ in 0..2 * modes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        ExtractionSpec { hbars, points, order, fit_degree, tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub coeffs: Vec<NumPoly>,
    /// Per-coefficient error estimate: extrapolation spread plus fit residual.
    pub errors: Vec<f64>,
}

/// Recovers `f_0..f_N` with `T(hbar) ~ sum hbar^k T_{f_k}` by repeated
/// peel-off: the leading symbol is the `hbar -> 0` limit of the Berezin
/// symbol, fitted by a polynomial and then subtracted as a Toeplitz operator.
pub fn total_symbol_extract<F>(
    family: F,
    space: Arc<FockSpace>,
    spec: &ExtractionSpec,
) -> Result<Extraction, StarError>
where
    F: Fn(f64) -> Result<FockOperator, FockError> + Sync,
{
    if spec.hbars.len() < 2 {
        return Err(StarError::Invariant("at least two hbar samples are needed"));
    }
    let nvars = 2 * space.modes();
    let mut residual: Vec<FockOperator> = spec.hbars.par_iter().map(|&h| family(h)).collect::<Result<_, _>>()?;
    let basis = monomials(nvars, spec.fit_degree);
    let design = DMatrix::from_fn(spec.points.len(), basis.len(), |r, c| {
        Complex64::new(basis[c].iter().zip(&spec.points[r]).map(|(&k, x)| x.powi(k as i32)).product(), 0.0)
    });
    let svd = design.clone().svd(true, true);
    let mut coeffs = Vec::with_capacity(spec.order + 1);
    let mut errors = Vec::with_capacity(spec.order + 1);
    for k in 0..=spec.order {
        let samples: Vec<(Complex64, f64)> = spec
            .points
            .par_iter()
            .map(|pt| {
                let ys: Vec<Complex64> = residual
                    .iter()
                    .zip(&spec.hbars)
                    .map(|(op, &h)| berezin(op, h, pt) / h.powi(k as i32))
                    .collect();
                neville_at_zero(&spec.hbars, &ys)
            })
            .collect();
        let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.0));
        let sol = svd.solve(&rhs, 1e-12).map_err(|_| StarError::Invariant("singular fit"))?;
        let fit_res = (&design * &sol - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let spread = samples.iter().map(|s| s.1).fold(0.0, f64::max);
        let est = spread + fit_res;
        if !(est <= spec.tolerance) {
            return Err(StarError::ExtrapolationNotConverged { order: k, estimate: est });
        }
        let poly = NumPoly { nvars, terms: basis.iter().cloned().zip(sol.iter().copied()).collect() }.chop(1e-13);
        let terms = poly.term_list();
        residual = residual
            .into_par_iter()
            .zip(spec.hbars.par_iter())
            .map(|(op, &h)| {
                let t = bargmann_toeplitz_terms(nvars, &terms, h, op.space.clone())?;
                Ok(op.sub(&t.scale(Complex64::new(h.powi(k as i32), 0.0))))
            })
            .collect::<Result<_, FockError>>()?;
        coeffs.push(poly);
        errors.push(est);
    }
    Ok(Extraction { coeffs, errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::phase_space_chart;
    use crate::fock::bargmann_toeplitz;
    use crate::ring::parse_poly;

    #[test]
    fn neville_recovers_polynomials() {
        let xs = [0.5, 0.3, 0.2, 0.1];
        let ys: Vec<Complex64> = xs.iter().map(|x| Complex64::new(2.0 - x + 3.0 * x * x, x * x)).collect();
        let (v, est) = neville_at_zero(&xs, &ys);
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(est < 1e-12);
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(2, 3).len(), 10);
        assert_eq!(monomials(4, 2).len(), 15);
    }

    #[test]
    fn berezin_of_toeplitz_z() {
        let chart = phase_space_chart(1);
        let space = Arc::new(FockSpace::new(1, 40));
        let x = parse_poly("x", &chart).unwrap();
        let op = bargmann_toeplitz(&x, 0.25, space).unwrap();
        let b = berezin(&op, 0.25, &[0.3, -0.2]);
        assert!((b - Complex64::new(0.3, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn toeplitz_round_trip() {
        let chart = phase_space_chart(1);
        let f = parse_poly("x^2*y - 3*y + 1/2", &chart).unwrap();
        let space = Arc::new(FockSpace::new(1, 32));
        let spec = ExtractionSpec::standard(1, 2, 3);
        let ex = total_symbol_extract(|h| bargmann_toeplitz(&f, h, space.clone()), space.clone(), &spec).unwrap();
        assert!(ex.coeffs[0].distance_to(&f.complexify()) < 1e-6);
        assert!(ex.coeffs[1].distance_to(&CPoly::zero(2)) < 1e-4);
        assert!(ex.coeffs[2].distance_to(&CPoly::zero(2)) < 1e-4);
    }

    #[test]
    fn identity_family() {
        let space = Arc::new(FockSpace::new(1, 24));
        let spec = ExtractionSpec::standard(1, 1, 2);
        let ex = total_symbol_extract(|_| Ok(FockOperator::identity(space.clone())), space.clone(), &spec).unwrap();
        assert!(ex.coeffs[0].distance_to(&CPoly::one(2)) < 1e-9);
        assert!(ex.coeffs[1].distance_to(&CPoly::zero(2)) < 1e-9);
    }

    #[test]
    fn commutator_symbol() {
        let chart = phase_space_chart(1);
        let x = parse_poly("x", &chart).unwrap();
        let y = parse_poly("y", &chart).unwrap();
        let space = Arc::new(FockSpace::new(1, 32));
        let spec = ExtractionSpec::standard(1, 1, 2);
        let fam = |h: f64| {
            let tx = bargmann_toeplitz(&x, h, space.clone())?;
            let ty = bargmann_toeplitz(&y, h, space.clone())?;
            Ok(tx.commutator(&ty))
        };
        let ex = total_symbol_extract(fam, space.clone(), &spec).unwrap();
        assert!(ex.coeffs[0].distance_to(&CPoly::zero(2)) < 1e-6);
        assert!((ex.coeffs[1].coeff(&[0, 0]) - Complex64::new(0.0, -1.0)).norm() < 1e-4);
    }

    #[test]
    fn too_few_samples() {
        let space = Arc::new(FockSpace::new(1, 8));
        let mut spec = ExtractionSpec::standard(1, 0, 1);
        spec.hbars.truncate(1);
        assert!(total_symbol_extract(|_| Ok(FockOperator::identity(space.clone())), space.clone(), &spec).is_err());
    }
}
