use nalgebra::{DMatrix, SymmetricEigen};

use super::FockError;

/// A complex structure tamed by `omega`, its metric and a Darboux frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatibleStructure {
    pub omega: DMatrix<f64>,
    pub j: DMatrix<f64>,
    /// `g = J^T Omega`, i.e. `g(u, v) = omega(J u, v)`.
    pub metric: DMatrix<f64>,
    /// Columns `q_1..q_n, p_1..p_n` with `B^T Omega B` standard and
    /// `B^T g B = I`.
    pub darboux: DMatrix<f64>,
    /// Ratio of extreme singular values of `omega`.
    pub condition: f64,
}

impl CompatibleStructure {
    pub fn modes(&self) -> usize {
        self.omega.nrows() / 2
    }

    /// Largest violation among `J^2 = -I`, `J^T Omega J = Omega` and the
    /// symmetry of `g`, plus the smallest eigenvalue of `g`.
    pub fn defects(&self) -> (f64, f64) {
        let r = self.j.nrows();
        let id = DMatrix::<f64>::identity(r, r);
        let sq = (&self.j * &self.j + &id).amax();
        let pres = (self.j.transpose() * &self.omega * &self.j - &self.omega).amax();
        let sym = (&self.metric - self.metric.transpose()).amax();
        let min_eig = SymmetricEigen::new(self.metric.clone()).eigenvalues.min();
        (sq.max(pres).max(sym), min_eig)
    }
}

/// Standard symplectic matrix `[[0, I], [-I, 0]]`.
pub fn standard_omega(modes: usize) -> DMatrix<f64> {
    let r = 2 * modes;
    DMatrix::from_fn(r, r, |i, j| {
        if j == i + modes && i < modes {
            1.0
        } else if i == j + modes && j < modes {
            -1.0
        } else {
            0.0
        }
    })
}

/// Polar-decomposition construction: with `omega(u, v) = g0(A u, v)`,
/// `J = -A (-A^2)^{-1/2}`; the sign makes `omega(J., .)` positive.
pub fn compatible_j(omega: &DMatrix<f64>, g0: &DMatrix<f64>) -> Result<CompatibleStructure, FockError> {
    let r = omega.nrows();
    if omega.ncols() != r || !r.is_multiple_of(2) {
        return Err(FockError::DimensionMismatch { expected: r, found: omega.ncols() });
    }
    if g0.nrows() != r || g0.ncols() != r {
        return Err(FockError::DimensionMismatch { expected: r, found: g0.nrows() });
    }
    let sv = omega.singular_values();
    let (sigma_min, sigma_max) = (sv.min(), sv.max());
    if !(sigma_min >= 1e-10 * sigma_max) || sigma_max == 0.0 {
        return Err(FockError::DegenerateFiber { sigma_min, sigma_max });
    }
    if (g0 - g0.transpose()).amax() > 1e-12 * g0.amax() {
        return Err(FockError::SeedNotPositive);
    }
    let chol = g0.clone().cholesky().ok_or(FockError::SeedNotPositive)?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse().ok_or(FockError::SeedNotPositive)?;
    // In g0-orthonormal coordinates A becomes the antisymmetric -L^{-1} Omega L^{-T}.
    let a_t = -(&l_inv * omega * l_inv.transpose());
    let neg_sq = -(&a_t * &a_t);
    let neg_sq = (&neg_sq + neg_sq.transpose()) * 0.5;
    let eig = SymmetricEigen::new(neg_sq);
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| 1.0 / e.sqrt()));
    let root_inv = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let j_t = -(&a_t * root_inv);
    let j = l_inv.transpose() * j_t * l.transpose();
    let metric = j.transpose() * omega;
    let metric = (&metric + metric.transpose()) * 0.5;
    let darboux = darboux_frame(&j, &metric);
    Ok(CompatibleStructure { omega: omega.clone(), j, metric, darboux, condition: sigma_max / sigma_min })
}

/// `g`-orthonormal `q_k` that are also `omega`-isotropic, with `p_k = -J q_k`.
fn darboux_frame(j: &DMatrix<f64>, g: &DMatrix<f64>) -> DMatrix<f64> {
    let r = j.nrows();
    let n = r / 2;
    let gdot = |u: &nalgebra::DVector<f64>, v: &nalgebra::DVector<f64>| (u.transpose() * g * v)[(0, 0)];
    let mut found: Vec<nalgebra::DVector<f64>> = Vec::new();
    let mut qs = Vec::new();
    for c in 0..r {
        if qs.len() == n {
            break;
        }
        let mut v = nalgebra::DVector::<f64>::zeros(r);
        v[c] = 1.0;
        for _ in 0..2 {
            for w in &found {
                let proj = gdot(w, &v);
                v -= w * proj;
            }
        }
        let norm = gdot(&v, &v).sqrt();
        if norm < 1e-8 {
            continue;
        }
        v /= norm;
        let jv = j * &v;
        found.push(v.clone());
        found.push(jv);
        qs.push(v);
    }
    let mut b = DMatrix::<f64>::zeros(r, r);
    for (k, q) in qs.iter().enumerate() {
        b.set_column(k, q);
        b.set_column(n + k, &(-(j * q)));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_plane() {
        let om = standard_omega(1);
        let c = compatible_j(&om, &DMatrix::identity(2, 2)).unwrap();
        assert!((&c.j - &om).amax() < 1e-14);
        assert!((&c.metric - DMatrix::<f64>::identity(2, 2)).amax() < 1e-14);
        let scaled = compatible_j(&(om.clone() * 3.5), &DMatrix::identity(2, 2)).unwrap();
        assert!((&scaled.j - &c.j).amax() < 1e-12);
    }

    #[test]
    fn degenerate_fiber() {
        let mut om = standard_omega(2);
        om[(1, 3)] = 0.0;
        om[(3, 1)] = 0.0;
        assert!(matches!(compatible_j(&om, &DMatrix::identity(4, 4)), Err(FockError::DegenerateFiber { .. })));
    }

    #[test]
    fn random_forms_and_seeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let n = 1 + trial % 4;
            let r = 2 * n;
            let m = DMatrix::from_fn(r, r, |_, _| rng.random_range(-1.0..1.0));
            let om = &m - m.transpose() + standard_omega(n) * 2.0;
            let s = DMatrix::from_fn(r, r, |_, _| rng.random_range(-1.0..1.0));
            let g0 = &s * s.transpose() + DMatrix::identity(r, r);
            let c = compatible_j(&om, &g0).unwrap();
            let (defect, min_eig) = c.defects();
            assert!(defect < 1e-10, "defect {defect}");
            assert!(min_eig > 0.0);
            let b = &c.darboux;
            let std = standard_omega(n);
            assert!((b.transpose() * &om * b - &std).amax() < 1e-9);
            assert!((b.transpose() * &c.metric * b - DMatrix::<f64>::identity(r, r)).amax() < 1e-9);
        }
    }
}
