//! Osculating step-2 nilpotent groups on a single fiber: group law,
//! parabolic dilations, the Heisenberg-plus-abelian splitting and the
//! ground-state symbol.

use std::fmt::Debug;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Num, Signed};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeisenbergError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("fiber form is not antisymmetric")]
    NotAntisymmetric,
    #[error("dilation factor must be positive")]
    NonPositiveScale,
    #[error("complex structure fails check: {0}")]
    Incompatible(&'static str),
}

/// Scalars usable in the fiber computations: exact rationals or floats.
pub trait FiberScalar: Clone + Debug + Num + PartialOrd + Signed + Send + Sync {
    /// Treated as zero when choosing pivots and checking antisymmetry.
    fn negligible(&self) -> bool;
    fn half() -> Self;
}

impl FiberScalar for f64 {
    fn negligible(&self) -> bool {
        self.abs() <= 1e-14
    }

    fn half() -> Self {
        0.5
    }
}

impl FiberScalar for BigRational {
    fn negligible(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn half() -> Self {
        BigRational::new(1.into(), 2.into())
    }
}

/// The osculating group at one base point: `R^r` plus a central line, with
/// bracket `[(xi, s), (xi', s')] = (0, omega_x(xi, xi'))`.
#[derive(Debug, Clone, PartialEq)]
pub struct OsculatingFiber<T> {
    pub base_point: Vec<T>,
    omega: Vec<Vec<T>>,
}

impl<T: FiberScalar> OsculatingFiber<T> {
    pub fn new(base_point: Vec<T>, omega: Vec<Vec<T>>) -> Result<Self, HeisenbergError> {
        let r = omega.len();
        for row in &omega {
            if row.len() != r {
                return Err(HeisenbergError::DimensionMismatch { expected: r, found: row.len() });
            }
        }
        for i in 0..r {
            for j in 0..r {
                if !(omega[i][j].clone() + omega[j][i].clone()).negligible() {
                    return Err(HeisenbergError::NotAntisymmetric);
                }
            }
        }
        Ok(OsculatingFiber { base_point, omega })
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[Vec<T>] {
        &self.omega
    }

    /// `omega_x(u, v)`.
    pub fn pair(&self, u: &[T], v: &[T]) -> T {
        let mut acc = T::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                acc = acc + ui.clone() * self.omega[i][j].clone() * vj.clone();
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<T> {
    pub xi: Vec<T>,
    pub t: T,
}

impl<T: FiberScalar> GroupElement<T> {
    pub fn new(xi: Vec<T>, t: T) -> Self {
        GroupElement { xi, t }
    }

    pub fn identity(r: usize) -> Self {
        GroupElement { xi: vec![T::zero(); r], t: T::zero() }
    }

    pub fn inverse(&self) -> Self {
        GroupElement { xi: self.xi.iter().map(|x| -x.clone()).collect(), t: -self.t.clone() }
    }
}

fn check_dim<T>(f: &OsculatingFiber<T>, g: &GroupElement<T>) -> Result<(), HeisenbergError> {
    if g.xi.len() != f.omega.len() {
        return Err(HeisenbergError::DimensionMismatch { expected: f.omega.len(), found: g.xi.len() });
    }
    Ok(())
}

/// `(xi, t)(xi', t') = (xi + xi', t + t' + omega(xi, xi') / 2)`.
pub fn bch_multiply<T: FiberScalar>(
    f: &OsculatingFiber<T>,
    g: &GroupElement<T>,
    h: &GroupElement<T>,
) -> Result<GroupElement<T>, HeisenbergError> {
    check_dim(f, g)?;
    check_dim(f, h)?;
    let xi = g.xi.iter().zip(&h.xi).map(|(a, b)| a.clone() + b.clone()).collect();
    let t = g.t.clone() + h.t.clone() + T::half() * f.pair(&g.xi, &h.xi);
    Ok(GroupElement { xi, t })
}

/// `delta_lambda(xi, t) = (lambda xi, lambda^2 t)`.
pub fn dilation<T: FiberScalar>(
    f: &OsculatingFiber<T>,
    lambda: &T,
    g: &GroupElement<T>,
) -> Result<GroupElement<T>, HeisenbergError> {
    check_dim(f, g)?;
    if !lambda.is_positive() {
        return Err(HeisenbergError::NonPositiveScale);
    }
    Ok(GroupElement {
        xi: g.xi.iter().map(|x| lambda.clone() * x.clone()).collect(),
        t: lambda.clone() * lambda.clone() * g.t.clone(),
    })
}

/// Splitting of the fiber into a symplectic part, listed as Darboux pairs
/// `(e_k, f_k)` with `omega(e_k, f_k) = 1`, and the kernel of `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberSplitting<T> {
    pub v_pairs: Vec<(Vec<T>, Vec<T>)>,
    pub k_basis: Vec<Vec<T>>,
}

impl<T: FiberScalar> FiberSplitting<T> {
    pub fn v_dim(&self) -> usize {
        2 * self.v_pairs.len()
    }

    /// Columns `e_1, f_1, ..., e_m, f_m, k_1, ...`.
    pub fn basis(&self) -> Vec<Vec<T>> {
        self.v_pairs
            .iter()
            .flat_map(|(e, f)| [e.clone(), f.clone()])
            .chain(self.k_basis.iter().cloned())
            .collect()
    }

    /// Matrix of `omega` in the split basis: Darboux blocks then zeros.
    pub fn normal_form(&self) -> Vec<Vec<T>> {
        let r = self.v_dim() + self.k_basis.len();
        let mut m = vec![vec![T::zero(); r]; r];
        for k in 0..self.v_pairs.len() {
            m[2 * k][2 * k + 1] = T::one();
            m[2 * k + 1][2 * k] = -T::one();
        }
        m
    }

    /// Recovers `omega` in the original coordinates from the split basis
    /// and the normal form: `B^{-T} N B^{-1}`.
    pub fn reconstruct(&self) -> Vec<Vec<T>> {
        let cols = self.basis();
        let r = cols.len();
        // b[i][j] = component i of basis vector j
        let b: Vec<Vec<T>> = (0..r).map(|i| (0..r).map(|j| cols[j][i].clone()).collect()).collect();
        let binv = invert(&b).expect("split basis is a basis");
        let n = self.normal_form();
        let mut out = vec![vec![T::zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = T::zero();
                for a in 0..r {
                    for c in 0..r {
                        if !n[a][c].is_zero() {
                            acc = acc + binv[a][i].clone() * n[a][c].clone() * binv[c][j].clone();
                        }
                    }
                }
                out[i][j] = acc;
            }
        }
        out
    }
}

fn invert<T: FiberScalar>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !m[r][col].negligible())
            .max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).expect("comparable"))?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = v.clone() / p.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..2 * n {
                    let d = factor.clone() * m[col][c].clone();
                    m[r][c] = m[r][c].clone() - d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Symplectic Gram-Schmidt on the coordinate basis.
pub fn fiber_decompose<T: FiberScalar>(f: &OsculatingFiber<T>) -> FiberSplitting<T> {
    let r = f.dim();
    let mut work: Vec<Vec<T>> =
        (0..r).map(|i| (0..r).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
    let mut v_pairs = Vec::new();
    loop {
        let mut best: Option<(usize, usize, T)> = None;
        for a in 0..work.len() {
            for b in a + 1..work.len() {
                let w = f.pair(&work[a], &work[b]);
                if w.negligible() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, _, cur)| w.abs() > cur.abs()) {
                    best = Some((a, b, w));
                }
            }
        }
        let Some((a, b, w)) = best else { break };
        let e = work[a].clone();
        let fv: Vec<T> = work[b].iter().map(|x| x.clone() / w.clone()).collect();
        work = work
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != a && *i != b)
            .map(|(_, v)| {
                let c_f = f.pair(&v, &fv);
                let c_e = f.pair(&v, &e);
                v.iter()
                    .zip(&e)
                    .zip(&fv)
                    .map(|((x, ei), fi)| x.clone() - c_f.clone() * ei.clone() + c_e.clone() * fi.clone())
                    .collect()
            })
            .collect();
        v_pairs.push((e, fv));
    }
    FiberSplitting { v_pairs, k_basis: work }
}

/// Function on the dual fiber `(xi, eta)`, homogeneous of a fixed order
/// under `(xi, eta) -> (lambda xi, lambda^2 eta)`.
#[derive(Clone)]
pub struct HomogeneousSymbol {
    pub order: i32,
    pub kind: SymbolKind,
}

#[derive(Clone)]
pub enum SymbolKind {
    Zero,
    /// `exp(-xi^T g xi / eta)` for `eta > 0`, zero otherwise, with
    /// `g = J^T Omega` the metric `omega(J., .)`.
    GroundState { omega: Vec<Vec<f64>>, j: Vec<Vec<f64>>, metric: Vec<Vec<f64>> },
    Custom(Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>),
}

impl Debug for HomogeneousSymbol {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.kind {
            SymbolKind::Zero => "zero",
            SymbolKind::GroundState { .. } => "ground state",
            SymbolKind::Custom(_) => "custom",
        };
        write!(fm, "HomogeneousSymbol {{ order: {}, kind: {kind} }}", self.order)
    }
}

impl HomogeneousSymbol {
    pub fn zero(order: i32) -> Self {
        HomogeneousSymbol { order, kind: SymbolKind::Zero }
    }

    pub fn eval(&self, xi: &[f64], eta: f64) -> f64 {
        match &self.kind {
            SymbolKind::Zero => 0.0,
            SymbolKind::GroundState { metric, .. } => {
                if eta <= 0.0 {
                    return 0.0;
                }
                let mut q = 0.0;
                for (i, xi_i) in xi.iter().enumerate() {
                    for (j, xi_j) in xi.iter().enumerate() {
                        q += xi_i * metric[i][j] * xi_j;
                    }
                }
                (-q / eta).exp()
            }
            SymbolKind::Custom(f) => f(xi, eta),
        }
    }

    /// The metric `omega(J., .)` when this is a ground-state symbol.
    pub fn ground_state_metric(&self) -> Option<&Vec<Vec<f64>>> {
        match &self.kind {
            SymbolKind::GroundState { metric, .. } => Some(metric),
            _ => None,
        }
    }
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Checks `J^2 = -I`, `J^T Omega J = Omega` and that `J^T Omega` is
/// symmetric positive definite, all to `tol`.
pub fn check_compatible(omega: &[Vec<f64>], j: &[Vec<f64>], tol: f64) -> Result<Vec<Vec<f64>>, HeisenbergError> {
    let r = omega.len();
    if j.len() != r || j.iter().any(|row| row.len() != r) {
        return Err(HeisenbergError::DimensionMismatch { expected: r, found: j.len() });
    }
    let j2 = mat_mul(j, j);
    for (a, row) in j2.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            let target = if a == b { -1.0 } else { 0.0 };
            if (v - target).abs() > tol {
                return Err(HeisenbergError::Incompatible("J^2 = -I"));
            }
        }
    }
    let jt = transpose(j);
    let pres = mat_mul(&mat_mul(&jt, omega), j);
    for a in 0..r {
        for b in 0..r {
            if (pres[a][b] - omega[a][b]).abs() > tol {
                return Err(HeisenbergError::Incompatible("omega(J., J.) = omega"));
            }
        }
    }
    let g = mat_mul(&jt, omega);
    for a in 0..r {
        for b in 0..r {
            if (g[a][b] - g[b][a]).abs() > tol {
                return Err(HeisenbergError::Incompatible("omega(J., .) symmetric"));
            }
        }
    }
    let gm = nalgebra::DMatrix::from_fn(r, r, |a, b| g[a][b]);
    if gm.cholesky().is_none() {
        return Err(HeisenbergError::Incompatible("omega(J., .) positive definite"));
    }
    Ok(g)
}

/// `s_0(xi, eta) = exp(-omega(J xi, xi) / eta)` on `eta > 0`, zero elsewhere.
pub fn ground_state_symbol(f: &OsculatingFiber<f64>, j: &[Vec<f64>]) -> Result<HomogeneousSymbol, HeisenbergError> {
    let metric = check_compatible(f.omega(), j, 1e-10)?;
    Ok(HomogeneousSymbol {
        order: 0,
        kind: SymbolKind::GroundState { omega: f.omega().to_vec(), j: j.to_vec(), metric },
    })
}
