use std::collections::BTreeMap;

use super::{check_frame_form, SymplecticError};
use crate::algebroid::AlgebroidPresentation;
use crate::linalg::{poly_inverse_unimodular, PolyMatrix};
use crate::ring::{Chart, PolyFn};

/// Bivector `sum_{a<b} pi^{ab} d_a ^ d_b` stored as a full antisymmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonBivector {
    pub chart: Chart,
    pub pi: PolyMatrix,
}

impl PoissonBivector {
    pub fn new(chart: Chart, pi: PolyMatrix) -> Self {
        PoissonBivector { chart, pi }
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn entry(&self, a: usize, b: usize) -> &PolyFn {
        &self.pi[a][b]
    }

    /// Nonzero upper-triangular entries as `pi[a][b] = expr`, 1-based.
    pub fn lines(&self) -> Vec<String> {
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.pi[a][b].is_zero() {
                    out.push(format!("pi[{}][{}] = {}", a + 1, b + 1, self.pi[a][b].to_string_with(&self.chart)));
                }
            }
        }
        out
    }
}

/// Pushes `-omega^{-1}` forward along the anchor: `pi = -R omega^{-1} R^T`
/// with `R^a_i` the `d/dx_a` component of `rho(e_i)`.
pub fn induced_poisson(a: &AlgebroidPresentation, omega: &PolyMatrix) -> Result<PoissonBivector, SymplecticError> {
    check_frame_form(a, omega)?;
    let n = a.nvars();
    let r = a.rank();
    let (det, inv) = poly_inverse_unimodular(n, omega);
    let inv = match inv {
        Some(inv) => inv,
        None if det.is_zero() => return Err(SymplecticError::Singular),
        None => return Err(SymplecticError::NonConstantDeterminant(det.to_string_with(a.chart()))),
    };
    let rho = a.anchor();
    let mut pi = vec![vec![PolyFn::zero(n); n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let mut acc = PolyFn::zero(n);
            for i in 0..r {
                if rho[i][x].is_zero() {
                    continue;
                }
                for j in 0..r {
                    if inv[i][j].is_zero() || rho[j][y].is_zero() {
                        continue;
                    }
                    acc -= &(&(&rho[i][x] * &inv[i][j]) * &rho[j][y]);
                }
            }
            pi[y][x] = -&acc;
            pi[x][y] = acc;
        }
    }
    Ok(PoissonBivector { chart: a.chart().clone(), pi })
}

/// Trivector on the base stored on increasing index triples.
#[derive(Debug, Clone, PartialEq)]
pub struct Trivector {
    pub chart: Chart,
    pub comps: BTreeMap<(usize, usize, usize), PolyFn>,
}

impl Trivector {
    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn first_nonzero(&self) -> Option<String> {
        self.comps.iter().next().map(|((a, b, c), p)| {
            format!("[pi,pi][{}][{}][{}] = {}", a + 1, b + 1, c + 1, p.to_string_with(&self.chart))
        })
    }
}

/// `[pi, pi]^{abc}` through the cyclic formula.
pub fn schouten_jacobi(pi: &PoissonBivector) -> Trivector {
    let n = pi.dim();
    let p = &pi.pi;
    let mut comps = BTreeMap::new();
    let derivs: Vec<Vec<Vec<PolyFn>>> =
        (0..n).map(|d| p.iter().map(|row| row.iter().map(|e| e.derive(d)).collect()).collect()).collect();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut acc = PolyFn::zero(n);
                for d in 0..n {
                    acc += &(&p[d][a] * &derivs[d][b][c]);
                    acc += &(&p[d][b] * &derivs[d][c][a]);
                    acc += &(&p[d][c] * &derivs[d][a][b]);
                }
                if !acc.is_zero() {
                    comps.insert((a, b, c), acc);
                }
            }
        }
    }
    Trivector { chart: pi.chart.clone(), comps }
}

/// `{f, g} = sum pi^{ab} d_a f d_b g`.
pub fn poisson_bracket(pi: &PoissonBivector, f: &PolyFn, g: &PolyFn) -> Result<PolyFn, SymplecticError> {
    let n = pi.dim();
    for h in [f, g] {
        if h.nvars() != n {
            return Err(SymplecticError::ChartMismatch { expected: n, found: h.nvars() });
        }
    }
    let df: Vec<PolyFn> = (0..n).map(|a| f.derive(a)).collect();
    let dg: Vec<PolyFn> = (0..n).map(|b| g.derive(b)).collect();
    let mut acc = PolyFn::zero(n);
    for a in 0..n {
        if df[a].is_zero() {
            continue;
        }
        for b in 0..n {
            if !pi.pi[a][b].is_zero() && !dg[b].is_zero() {
                acc += &(&(&pi.pi[a][b] * &df[a]) * &dg[b]);
            }
        }
    }
    Ok(acc)
}
