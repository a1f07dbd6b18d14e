use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CMatrix, CompatibleStructure, FockError, FockOperator, FockSpace};

/// Infinitesimal representation of the Heisenberg algebra of one fiber.
///
/// In the Darboux frame `dpi(q_j) = sqrt(lambda/2) (a_j - a_j^+)`,
/// `dpi(p_j) = i sqrt(lambda/2) (a_j + a_j^+)` and `dpi(Z) = i lambda`, so
/// that `[dpi(q_j), dpi(p_j)] = i lambda = dpi([q_j, p_j])`.
#[derive(Debug, Clone)]
pub struct Representation {
    pub space: Arc<FockSpace>,
    pub lambda: f64,
    pub dq: Vec<FockOperator>,
    pub dp: Vec<FockOperator>,
    pub dz: FockOperator,
    darboux_inverse: DMatrix<f64>,
}

pub fn build_representation(
    space: Arc<FockSpace>,
    c: &CompatibleStructure,
    lambda: f64,
) -> Result<Representation, FockError> {
    if !(lambda > 0.0) {
        return Err(FockError::NonPositiveLambda(lambda));
    }
    let n = c.modes();
    if space.modes() != n {
        return Err(FockError::DimensionMismatch { expected: n, found: space.modes() });
    }
    let s = (lambda / 2.0).sqrt();
    let i = Complex64::new(0.0, 1.0);
    let mut dq = Vec::with_capacity(n);
    let mut dp = Vec::with_capacity(n);
    for j in 0..n {
        let a = space.annihilation(j);
        let ad = space.creation(j);
        dq.push(FockOperator::new(space.clone(), (&a - &ad) * Complex64::new(s, 0.0)));
        dp.push(FockOperator::new(space.clone(), (&a + &ad) * (i * s)));
    }
    let dz = FockOperator::identity(space.clone()).scale(i * lambda);
    let darboux_inverse = c.darboux.clone().try_inverse().expect("Darboux frame is a basis");
    Ok(Representation { space, lambda, dq, dp, dz, darboux_inverse })
}

impl Representation {
    pub fn modes(&self) -> usize {
        self.dq.len()
    }

    /// Darboux coordinates `(c_q, c_p)` of a fiber vector.
    pub fn darboux_coords(&self, xi: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(xi);
        (&self.darboux_inverse * v).iter().copied().collect()
    }

    /// `dpi(xi)` for `xi` given in the original frame coordinates.
    pub fn generator(&self, xi: &[f64]) -> FockOperator {
        let n = self.modes();
        let c = self.darboux_coords(xi);
        let mut out = FockOperator::zero(self.space.clone());
        for j in 0..n {
            out = out.add(&self.dq[j].scale(Complex64::new(c[j], 0.0)));
            out = out.add(&self.dp[j].scale(Complex64::new(c[n + j], 0.0)));
        }
        out
    }

    /// Generator images of the frame `e_1..e_r` followed by `Z`.
    pub fn frame_generators(&self) -> Vec<FockOperator> {
        let r = 2 * self.modes();
        let mut out: Vec<FockOperator> = (0..r)
            .map(|k| {
                let mut e = vec![0.0; r];
                e[k] = 1.0;
                self.generator(&e)
            })
            .collect();
        out.push(self.dz.clone());
        out
    }

    /// `pi_lambda(xi, t) = exp(dpi(xi) + t dpi(Z))` on the truncated space.
    pub fn group_element(&self, xi: &[f64], t: f64) -> FockOperator {
        let g = self.generator(xi).add(&self.dz.scale(Complex64::new(t, 0.0)));
        FockOperator::new(self.space.clone(), g.matrix.exp())
    }

    /// Displacement parameters `beta_j = sqrt(lambda/2) (-c_q + i c_p)`.
    pub fn displacement_params(&self, xi: &[f64]) -> Vec<Complex64> {
        let n = self.modes();
        let c = self.darboux_coords(xi);
        let s = (self.lambda / 2.0).sqrt();
        (0..n).map(|j| Complex64::new(-s * c[j], s * c[n + j])).collect()
    }

    /// Matrix elements of the untruncated `pi_lambda(xi, t)` between
    /// retained basis states.
    pub fn group_element_exact(&self, xi: &[f64], t: f64) -> FockOperator {
        let phase = Complex64::new(0.0, self.lambda * t).exp();
        FockOperator::new(self.space.clone(), displacement(&self.space, &self.displacement_params(xi)) * phase)
    }
}

/// Generalized Laguerre `L_k^{(alpha)}(x)` for `k = 0..=kmax`.
fn laguerre_all(kmax: usize, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax >= 1 {
        out.push(1.0 + alpha - x);
    }
    for k in 1..kmax {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Single-mode `<m|D(beta)|n>` for `m, n <= cutoff`.
fn displacement_single(cutoff: usize, beta: Complex64) -> Vec<Vec<Complex64>> {
    let x = beta.norm_sqr();
    let damp = (-x / 2.0).exp();
    let mut d = vec![vec![Complex64::new(0.0, 0.0); cutoff + 1]; cutoff + 1];
    for diff in 0..=cutoff {
        let lag = laguerre_all(cutoff - diff, diff as f64, x);
        let b_pow = beta.powu(diff as u32);
        let nb_pow = (-beta.conj()).powu(diff as u32);
        for low in 0..=cutoff - diff {
            let high = low + diff;
            // sqrt(low! / high!)
            let mut ratio = 1.0;
            for k in low + 1..=high {
                ratio /= (k as f64).sqrt();
            }
            let base = ratio * damp * lag[low];
            d[high][low] = b_pow * base;
            if diff > 0 {
                d[low][high] = nb_pow * base;
            }
        }
    }
    d
}

/// Displacement operator `exp(sum beta_j a_j^+ - conj(beta_j) a_j)` with
/// exact matrix elements.
pub fn displacement(space: &FockSpace, betas: &[Complex64]) -> CMatrix {
    let singles: Vec<_> = betas.iter().map(|b| displacement_single(space.cutoff(), *b)).collect();
    let basis = space.basis();
    let d = space.dim();
    DMatrix::from_fn(d, d, |r, c| {
        let mut acc = Complex64::new(1.0, 0.0);
        for (j, s) in singles.iter().enumerate() {
            acc *= s[basis[r][j] as usize][basis[c][j] as usize];
        }
        acc
    })
}
