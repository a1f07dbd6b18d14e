use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use super::StarError;
use crate::algebroid::{bracket_sections, AlgebroidPresentation, Section};
use crate::linalg::{q_inverse, q_is_pd, q_is_psd, q_mul, q_transpose, PolyMatrix, QMatrix};
use crate::ring::{gauss, CPoly, PolyFn, Q, QI};
use crate::symplectic::{induced_poisson, PoissonBivector};

/// One term `K(alpha, beta) D^alpha f D^beta g` of the order-`k` bidifferential operator.
pub(crate) type KernelTerm = (Vec<u32>, Vec<u32>, CPoly);

/// Data of the exact star product on a flat frame: constant `Omega`, a
/// compatible `J`, the Wick tensor and the commuting derivations
/// `D_i = rho(e_i)`.
#[derive(Debug)]
pub struct FlatFrameConfig {
    algebroid: AlgebroidPresentation,
    omega: QMatrix,
    j: QMatrix,
    lambda: Vec<Vec<CPoly>>,
    poisson: PoissonBivector,
    kernels: RwLock<Vec<Arc<Vec<KernelTerm>>>>,
}

impl Clone for FlatFrameConfig {
    fn clone(&self) -> Self {
        FlatFrameConfig {
            algebroid: self.algebroid.clone(),
            omega: self.omega.clone(),
            j: self.j.clone(),
            lambda: self.lambda.clone(),
            poisson: self.poisson.clone(),
            kernels: RwLock::new(self.kernels.read().expect("kernel cache").clone()),
        }
    }
}

/// All ways to write `total` as an ordered sum of `parts` naturals.
fn compositions(parts: usize, total: u32) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|m| {
            compositions(parts - 1, total - m).into_iter().map(move |mut rest| {
                rest.insert(0, m);
                rest
            })
        })
        .collect()
}

/// Renders a section in the frame, e.g. `e2` or `-f*e1 + 2*e2`.
fn render_section(a: &AlgebroidPresentation, s: &Section) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in s.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let body = c.to_string_with(a.chart());
        let term = if body == "1" {
            format!("e{}", k + 1)
        } else if body == "-1" {
            format!("-e{}", k + 1)
        } else if c.num_terms() == 1 {
            format!("{body}*e{}", k + 1)
        } else {
            format!("({body})*e{}", k + 1)
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => out.push_str(&format!(" - {rest}")),
            None => out.push_str(&format!(" + {p}")),
        }
    }
    out
}

/// Checks that the anchor images of the frame pairwise commute as vector
/// fields; the error names the first offending bracket.
pub fn flat_frame_check(a: &AlgebroidPresentation) -> Result<(), StarError> {
    let n = a.nvars();
    let r = a.rank();
    let rho = a.anchor();
    for i in 0..r {
        for j in i + 1..r {
            let mut nonzero = false;
            for b in 0..n {
                let mut acc = PolyFn::zero(n);
                for d in 0..n {
                    acc += &(&rho[i][d] * &rho[j][b].derive(d));
                    acc -= &(&rho[j][d] * &rho[i][b].derive(d));
                }
                if !acc.is_zero() {
                    nonzero = true;
                    break;
                }
            }
            // Over a point the derivations vanish; the bracket itself still
            // obstructs the exponential formula.
            let br = bracket_sections(a, &Section::frame(n, r, i), &Section::frame(n, r, j))
                .expect("frame sections");
            if nonzero || !br.is_zero() {
                return Err(StarError::NotFlat(format!("[e{},e{}] = {}", i + 1, j + 1, render_section(a, &br))));
            }
        }
    }
    Ok(())
}

/// `J = Omega` when `Omega^T Omega = I`.
pub fn default_complex_structure(omega: &QMatrix) -> Option<QMatrix> {
    let r = omega.len();
    let prod = q_mul(&q_transpose(omega), omega);
    let id = crate::linalg::q_identity(r);
    (prod == id).then(|| omega.clone())
}

/// `Lambda = (-G + i Omega^{-1}) / 2` with `G` the inverse of `g = J^T Omega`.
///
/// Then `Lambda - Lambda^T = i Omega^{-1}` and `Lambda + Lambda^T = -G`.
pub fn wick_tensor(omega: &QMatrix, j: &QMatrix) -> Result<Vec<Vec<QI>>, StarError> {
    let r = omega.len();
    let om_inv = q_inverse(omega).ok_or(StarError::Singular)?;
    if j.len() != r || j.iter().any(|row| row.len() != r) {
        return Err(StarError::Incompatible("shape"));
    }
    let id = crate::linalg::q_identity(r);
    let j2 = q_mul(j, j);
    if j2 != crate::linalg::q_neg(&id) {
        return Err(StarError::Incompatible("J^2 = -I"));
    }
    let jt = q_transpose(j);
    if q_mul(&q_mul(&jt, omega), j) != *omega {
        return Err(StarError::Incompatible("omega(J., J.) = omega"));
    }
    let g = q_mul(&jt, omega);
    if g != q_transpose(&g) || !q_is_pd(&g) {
        return Err(StarError::Incompatible("omega(J., .) positive definite"));
    }
    let big_g = q_inverse(&g).expect("positive definite");
    let half = Q::new(1.into(), 2.into());
    Ok((0..r)
        .map(|a| (0..r).map(|b| gauss(-&big_g[a][b] * &half, &om_inv[a][b] * &half)).collect())
        .collect())
}

impl FlatFrameConfig {
    /// `j` defaults to `Omega` when `Omega` is orthogonal.
    pub fn new(a: &AlgebroidPresentation, omega: &PolyMatrix, j: Option<QMatrix>) -> Result<Self, StarError> {
        let poisson = induced_poisson(a, omega)?;
        flat_frame_check(a)?;
        let om: QMatrix = omega
            .iter()
            .map(|row| row.iter().map(|p| p.as_constant().ok_or(StarError::NonConstantForm)).collect())
            .collect::<Result<_, _>>()?;
        let j = match j {
            Some(j) => j,
            None => default_complex_structure(&om).ok_or(StarError::MissingComplexStructure)?,
        };
        let lam = wick_tensor(&om, &j)?;
        let n = a.nvars();
        let lambda = lam.iter().map(|row| row.iter().map(|z| CPoly::constant(n, z.clone())).collect()).collect();
        let cfg = FlatFrameConfig {
            algebroid: a.clone(),
            omega: om,
            j,
            lambda,
            poisson,
            kernels: RwLock::new(Vec::new()),
        };
        cfg.check_invariants()?;
        Ok(cfg)
    }

    /// Replaces the Wick tensor without any checks; used to probe how the
    /// product reacts to a tensor that is not constant.
    pub fn with_lambda(mut self, lambda: Vec<Vec<CPoly>>) -> Self {
        self.lambda = lambda;
        self.kernels = RwLock::new(Vec::new());
        self
    }

    /// `Lambda - Lambda^T = i Omega^{-1}` and `-(Lambda + Lambda^T)` positive semidefinite.
    pub fn check_invariants(&self) -> Result<(), StarError> {
        let r = self.rank();
        let om_inv = q_inverse(&self.omega).ok_or(StarError::Singular)?;
        let mut sym: QMatrix = vec![vec![Q::zero(); r]; r];
        for a in 0..r {
            for b in 0..r {
                let (Some(x), Some(y)) = (self.lambda[a][b].as_constant(), self.lambda[b][a].as_constant()) else {
                    return Err(StarError::Invariant("Lambda is not constant"));
                };
                let anti = &x - &y;
                if anti != gauss(Q::zero(), om_inv[a][b].clone()) {
                    return Err(StarError::Invariant("Lambda - Lambda^T = i Omega^{-1}"));
                }
                let s = &x + &y;
                if !s.im.is_zero() {
                    return Err(StarError::Invariant("Lambda + Lambda^T real"));
                }
                sym[a][b] = -s.re;
            }
        }
        if !q_is_psd(&sym) {
            return Err(StarError::Invariant("-(Lambda + Lambda^T) positive semidefinite"));
        }
        Ok(())
    }

    pub fn algebroid(&self) -> &AlgebroidPresentation {
        &self.algebroid
    }

    pub fn nvars(&self) -> usize {
        self.algebroid.nvars()
    }

    pub fn rank(&self) -> usize {
        self.algebroid.rank()
    }

    pub fn omega(&self) -> &QMatrix {
        &self.omega
    }

    pub fn complex_structure(&self) -> &QMatrix {
        &self.j
    }

    pub fn lambda(&self) -> &[Vec<CPoly>] {
        &self.lambda
    }

    pub fn poisson(&self) -> &PoissonBivector {
        &self.poisson
    }

    /// `D_i p = rho(e_i)(p)`.
    pub fn apply_d(&self, i: usize, p: &CPoly) -> CPoly {
        let n = self.nvars();
        let mut acc = CPoly::zero(n);
        for (a, coef) in self.algebroid.anchor()[i].iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let d = p.derive(a);
            if !d.is_zero() {
                acc += &(&coef.complexify() * &d);
            }
        }
        acc
    }

    /// Terms of `(1/k!) (sum Lambda^{ij} D_i (x) D_j)^k`, grouped by the
    /// multi-indices hitting each argument.
    pub(crate) fn kernel(&self, k: usize) -> Arc<Vec<KernelTerm>> {
        if let Some(kern) = self.kernels.read().expect("kernel cache").get(k) {
            return kern.clone();
        }
        let mut cache = self.kernels.write().expect("kernel cache");
        while cache.len() <= k {
            let next = self.build_kernel(cache.len());
            cache.push(Arc::new(next));
        }
        cache[k].clone()
    }

    fn build_kernel(&self, k: usize) -> Vec<KernelTerm> {
        let r = self.rank();
        let n = self.nvars();
        let pairs: Vec<(usize, usize)> =
            (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).filter(|&(i, j)| !self.lambda[i][j].is_zero()).collect();
        if k == 0 {
            return vec![(vec![0; r], vec![0; r], CPoly::one(n))];
        }
        if pairs.is_empty() {
            return Vec::new();
        }
        let mut acc: HashMap<(Vec<u32>, Vec<u32>), CPoly> = HashMap::new();
        for counts in compositions(pairs.len(), k as u32) {
            let mut alpha = vec![0u32; r];
            let mut beta = vec![0u32; r];
            let mut coef = CPoly::one(n);
            for (&(i, j), &m) in pairs.iter().zip(&counts) {
                if m == 0 {
                    continue;
                }
                alpha[i] += m;
                beta[j] += m;
                let fact: Q = (2..=m).map(|t| Q::from_integer(t.into())).product();
                coef = &coef * &self.lambda[i][j].pow(m).scale(&gauss(Q::one() / fact, Q::zero()));
            }
            *acc.entry((alpha, beta)).or_insert_with(|| CPoly::zero(n)) += &coef;
        }
        let mut out: Vec<KernelTerm> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect();
        out.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        out
    }
}
