use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{build_representation, displacement, max_abs, CMatrix, CompatibleStructure, FockError, FockOperator, FockSpace};
use crate::heisenberg::{HomogeneousSymbol, SymbolKind};

/// Nodes and weights of the `order`-point Gauss-Hermite rule for the weight
/// `exp(-x^2)`, from the eigen-decomposition of the Jacobi matrix.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order > 0, "quadrature order must be positive");
    let jac = DMatrix::from_fn(order, order, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| (eig.eigenvalues[k], std::f64::consts::PI.sqrt() * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Points per axis.
    pub order: usize,
    /// Re-run at twice the order and compare.
    pub check_convergence: bool,
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { order: 48, check_convergence: true, tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct Quantized {
    pub op: FockOperator,
    /// Prefactor in front of the Fourier integral.
    pub c_norm: f64,
    /// Order actually used for `op`.
    pub order: usize,
    /// Largest entry change between `order / 2` and `order`, when checked.
    pub shift: Option<f64>,
}

/// `Op_lambda(u) = c_norm * integral u^(zeta) pi_lambda(zeta, 0) d zeta` with
/// `c_norm = (2 pi)^{-2n}`.
///
/// The symbol is pulled back to the fiber through `omega`; for the ground
/// state `exp(-xi^T Q xi / lambda)` with `Q = Omega^{-1} g Omega^{-T}`, the
/// Fourier transform is `(pi lambda)^n det(Q)^{-1/2} exp(-lambda zeta^T g zeta / 4)`.
pub fn quantize_symbol(
    u: &HomogeneousSymbol,
    lambda: f64,
    space: Arc<FockSpace>,
    c: &CompatibleStructure,
    spec: &QuadratureSpec,
) -> Result<Quantized, FockError> {
    if !(lambda > 0.0) {
        return Err(FockError::NonPositiveLambda(lambda));
    }
    let n = c.modes();
    let c_norm = (2.0 * std::f64::consts::PI).powi(-2 * n as i32);
    let metric = match &u.kind {
        SymbolKind::Zero => {
            return Ok(Quantized { op: FockOperator::zero(space), c_norm, order: 0, shift: None });
        }
        SymbolKind::GroundState { metric, .. } => metric,
        SymbolKind::Custom(_) => return Err(FockError::UnsupportedSymbol),
    };
    let r = 2 * n;
    if metric.len() != r {
        return Err(FockError::DimensionMismatch { expected: r, found: metric.len() });
    }
    let g = DMatrix::from_fn(r, r, |i, j| metric[i][j]);
    let rep = build_representation(space.clone(), c, lambda)?;
    let b = &c.darboux;
    let m = b.transpose() * &g * b;
    let m = (&m + m.transpose()) * 0.5;
    let chol = m.cholesky().ok_or(FockError::SeedNotPositive)?;
    let l = chol.l();
    let lt_inv = l.transpose().try_inverse().ok_or(FockError::SeedNotPositive)?;
    // zeta = B c, c = (2/sqrt(lambda)) L^{-T} y
    let map = b * &lt_inv * (2.0 / lambda.sqrt());
    let jacobian = map.determinant().abs();
    let omega_inv = c.omega.clone().try_inverse().ok_or(FockError::DegenerateFiber { sigma_min: 0.0, sigma_max: 0.0 })?;
    let q = &omega_inv * &g * omega_inv.transpose();
    let prefactor = (std::f64::consts::PI * lambda).powi(n as i32) / q.determinant().sqrt();
    let scale = c_norm * prefactor * jacobian;

    let integrate = |order: usize| -> CMatrix {
        let (nodes, weights) = gauss_hermite(order);
        let total = order.pow(r as u32);
        let d = space.dim();
        // Fixed chunking keeps the summation order independent of threads.
        let chunk = order;
        let partials: Vec<CMatrix> = (0..total.div_ceil(chunk))
            .into_par_iter()
            .map(|blk| {
                let mut acc = CMatrix::zeros(d, d);
                for idx in blk * chunk..((blk + 1) * chunk).min(total) {
                    let mut rem = idx;
                    let mut y = nalgebra::DVector::<f64>::zeros(r);
                    let mut w = 1.0;
                    for k in 0..r {
                        let i = rem % order;
                        rem /= order;
                        y[k] = nodes[i];
                        w *= weights[i];
                    }
                    let zeta = &map * y;
                    let betas = rep.displacement_params(zeta.as_slice());
                    acc += displacement(&space, &betas) * Complex64::new(w, 0.0);
                }
                acc
            })
            .collect();
        let mut sum = CMatrix::zeros(d, d);
        for p in partials {
            sum += p;
        }
        sum * Complex64::new(scale, 0.0)
    };

    let base = integrate(spec.order);
    if !spec.check_convergence {
        return Ok(Quantized { op: FockOperator::new(space, base), c_norm, order: spec.order, shift: None });
    }
    let fine = integrate(2 * spec.order);
    let shift = max_abs(&(&fine - &base));
    if shift > spec.tolerance {
        return Err(FockError::QuadratureNotConverged { shift });
    }
    Ok(Quantized { op: FockOperator::new(space, fine), c_norm, order: 2 * spec.order, shift: Some(shift) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::compatible_j;
    use crate::fock::structure::standard_omega;
    use crate::heisenberg::{ground_state_symbol, OsculatingFiber};

    #[test]
    fn hermite_rule_integrates_polynomials() {
        let (x, w) = gauss_hermite(10);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let moment = |k: i32| x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k)).sum::<f64>();
        assert!((moment(0) - sqrt_pi).abs() < 1e-13);
        assert!(moment(3).abs() < 1e-13);
        assert!((moment(4) - 0.75 * sqrt_pi).abs() < 1e-12);
        assert!((moment(18) - 34459425.0 / 512.0 * sqrt_pi).abs() < 1e-6);
    }

    #[test]
    fn zero_symbol_gives_zero_operator() {
        let c = compatible_j(&standard_omega(1), &DMatrix::identity(2, 2)).unwrap();
        let s = Arc::new(FockSpace::new(1, 4));
        let q = quantize_symbol(&HomogeneousSymbol::zero(0), 1.0, s, &c, &QuadratureSpec::default()).unwrap();
        assert!(q.op.matrix.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn ground_state_quantizes_to_vacuum() {
        let om = standard_omega(1);
        let c = compatible_j(&om, &DMatrix::identity(2, 2)).unwrap();
        let fiber = OsculatingFiber::new(vec![], vec![vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let jm: Vec<Vec<f64>> = (0..2).map(|i| (0..2).map(|j| c.j[(i, j)]).collect()).collect();
        let s0 = ground_state_symbol(&fiber, &jm).unwrap();
        let s = Arc::new(FockSpace::new(1, 16));
        let q = quantize_symbol(&s0, 1.0, s.clone(), &c, &QuadratureSpec::default()).unwrap();
        let sv = q.op.singular_values();
        assert!(sv[1] / sv[0] <= 1e-4, "{:?}", &sv[..3]);
        let tr = q.op.trace();
        let normalized = q.op.scale(tr.inv());
        let p0 = FockOperator::vacuum_projector(s);
        assert!(normalized.sub(&p0).norm() <= 1e-4);
    }
}
