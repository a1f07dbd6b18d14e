use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{spectral_norm, CMatrix, FockError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurifyOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Replace every iterate by its Hermitian part.
    pub symmetrize: bool,
}

impl Default for PurifyOptions {
    fn default() -> Self {
        PurifyOptions { tol: 1e-12, max_iter: 50, symmetrize: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurifyStep {
    /// `||S^2 - S||` before the step.
    pub delta_norm: f64,
    /// `||(S'^2 - S') - (-3 D^2 + 4 D^3)|| / max(1, ||S'||^2)`.
    pub identity_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Purification {
    pub s: CMatrix,
    /// One entry per iteration performed.
    pub steps: Vec<PurifyStep>,
    /// `||S^2 - S||` for the initial and every subsequent iterate.
    pub residuals: Vec<f64>,
}

impl Purification {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    pub fn max_identity_defect(&self) -> f64 {
        self.steps.iter().map(|s| s.identity_defect).fold(0.0, f64::max)
    }
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Iterates `S <- S - (2S - 1)(S^2 - S)` until `||S^2 - S|| <= tol`.
pub fn purify_projector(s0: &CMatrix, opts: &PurifyOptions) -> Result<Purification, FockError> {
    let d = s0.nrows();
    if s0.ncols() != d {
        return Err(FockError::DimensionMismatch { expected: d, found: s0.ncols() });
    }
    let id = CMatrix::identity(d, d);
    let two = Complex64::new(2.0, 0.0);
    let mut s = if opts.symmetrize { hermitian_part(s0) } else { s0.clone() };
    let mut delta = &s * &s - &s;
    let mut norm = spectral_norm(&delta);
    if !(norm < 0.25) {
        return Err(FockError::PurifyPrecondition(norm));
    }
    let mut residuals = vec![norm];
    let mut steps = Vec::new();
    while norm > opts.tol {
        if steps.len() >= opts.max_iter {
            return Err(FockError::MaxIterExceeded { iterations: steps.len(), residual: norm });
        }
        let mut next = &s - (&s * two - &id) * &delta;
        if opts.symmetrize {
            next = hermitian_part(&next);
        }
        let next_delta = &next * &next - &next;
        let d2 = &delta * &delta;
        let predicted = &d2 * Complex64::new(-3.0, 0.0) + &d2 * &delta * Complex64::new(4.0, 0.0);
        let scale = spectral_norm(&next).powi(2).max(1.0);
        let identity_defect = spectral_norm(&(&next_delta - predicted)) / scale;
        steps.push(PurifyStep { delta_norm: norm, identity_defect });
        s = next;
        delta = next_delta;
        norm = spectral_norm(&delta);
        residuals.push(norm);
    }
    Ok(Purification { s, steps, residuals })
}

/// Least-squares slope of `log r_{k+1}` against `log r_k` over consecutive
/// residuals that both exceed `floor`; `None` with fewer than two pairs.
pub fn convergence_order_fit(residuals: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = residuals
        .windows(2)
        .filter(|w| w[0] > floor && w[1] > floor)
        .map(|w| (w[0].ln(), w[1].ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Random Hermitian `dim x dim` matrix, unitarily conjugate to a diagonal
/// with eigenvalues near 0 and 1, whose `||S^2 - S||` is exactly `delta0`
/// in exact arithmetic.
pub fn random_near_projector(dim: usize, delta0: f64, seed: u64) -> CMatrix {
    assert!(dim > 0 && (0.0..0.25).contains(&delta0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // eigenvalue e with e^2 - e = +-x
    let above = |x: f64| (1.0 + (1.0 + 4.0 * x).sqrt()) / 2.0;
    let below = |x: f64| (1.0 - (1.0 - 4.0 * x).sqrt()) / 2.0;
    let eigs: Vec<f64> = (0..dim)
        .map(|k| {
            let x = if k == 0 { delta0 } else { rng.random_range(0.0..=delta0) };
            match (rng.random_bool(0.5), rng.random_bool(0.5)) {
                (true, true) => above(x),
                (true, false) => 1.0 - below(x),
                (false, true) => below(x),
                (false, false) => 1.0 - above(x),
            }
        })
        .collect();
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let u = g.qr().q();
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        eigs.iter().map(|e| Complex64::new(*e, 0.0)),
    ));
    let s = &u * diag * u.adjoint();
    hermitian_part(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::max_abs;

    #[test]
    fn scalar_step() {
        let s0 = CMatrix::from_element(1, 1, Complex64::new(1.1, 0.0));
        let opts = PurifyOptions { tol: 1e-12, max_iter: 1, symmetrize: false };
        let err = purify_projector(&s0, &opts).unwrap_err();
        assert!(matches!(err, FockError::MaxIterExceeded { iterations: 1, .. }));
        let p = purify_projector(&s0, &PurifyOptions::default()).unwrap();
        assert!((p.residuals[0] - 0.11).abs() < 1e-15);
        assert!((p.residuals[1] - 0.030976).abs() < 1e-12);
        let s1 = 1.1 - 1.2 * 0.11;
        assert!((s1 - 0.968f64).abs() < 1e-15);
    }

    #[test]
    fn projector_is_fixed_point() {
        let mut p = CMatrix::zeros(3, 3);
        p[(0, 0)] = Complex64::new(1.0, 0.0);
        let out = purify_projector(&p, &PurifyOptions::default()).unwrap();
        assert_eq!(out.iterations(), 0);
        assert_eq!(out.s, p);
    }

    #[test]
    fn precondition_guard() {
        let s0 = random_near_projector(6, 0.2, 1) * Complex64::new(1.3, 0.0);
        assert!(matches!(purify_projector(&s0, &PurifyOptions::default()), Err(FockError::PurifyPrecondition(_))));
    }

    #[test]
    fn random_twenty_by_twenty() {
        let s0 = random_near_projector(20, 0.1, 3);
        let out = purify_projector(&s0, &PurifyOptions::default()).unwrap();
        assert!((out.residuals[0] - 0.1).abs() < 1e-12);
        assert!(out.iterations() <= 5);
        assert!(out.max_identity_defect() <= 1e-12);
        let order = convergence_order_fit(&out.residuals, 1e-13).unwrap();
        assert!((1.9..=2.1).contains(&order), "{order}");
    }

    #[test]
    fn non_hermitian_input() {
        let mut s0 = random_near_projector(8, 0.05, 9);
        s0[(0, 1)] += Complex64::new(0.01, 0.02);
        let out = purify_projector(&s0, &PurifyOptions::default()).unwrap();
        assert!(out.max_identity_defect() <= 1e-12);
        let sym = purify_projector(&s0, &PurifyOptions { symmetrize: true, ..Default::default() }).unwrap();
        assert!(max_abs(&(&sym.s - sym.s.adjoint())) < 1e-14);
    }
}
