use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::{CMatrix, FockError, FockOperator, FockSpace};
use crate::ring::{qi_to_c64, CPoly, PolyFn};

fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `x^a y^b` with `z = (x + i y)/sqrt 2` as a map `(p, q) -> coefficient`
/// of `z^p conj(z)^q`.
fn expand_mode(a: u32, b: u32) -> BTreeMap<(u32, u32), Complex64> {
    let mut out = BTreeMap::new();
    let pre = Complex64::new(0.0, -1.0).powu(b) * 2f64.powf(-((a + b) as f64) / 2.0);
    for s in 0..=a {
        for t in 0..=b {
            let sign = if (b - t).is_multiple_of(2) { 1.0 } else { -1.0 };
            let c = pre * (binomial(a, s) * binomial(b, t) * sign);
            *out.entry((s + t, a - s + b - t)).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
    }
    out
}

fn sqrt_fact_ratio(lo: u32, hi: u32) -> f64 {
    (lo + 1..=hi).map(|m| (m as f64).sqrt()).product()
}

/// Toeplitz operator of a real polynomial symbol; see [`bargmann_toeplitz_complex`].
pub fn bargmann_toeplitz(f: &PolyFn, hbar: f64, space: Arc<FockSpace>) -> Result<FockOperator, FockError> {
    bargmann_toeplitz_complex(&f.complexify(), hbar, space)
}

/// Compression of multiplication by `f` to holomorphic functions in
/// `L^2(C^n, exp(-|z|^2/hbar))`, in the orthonormal basis
/// `z^alpha / sqrt(hbar^|alpha| alpha!)`, with `z_j = (x_j + i y_j)/sqrt 2`
/// and variables ordered `x_1..x_n, y_1..y_n`. Entries come from the
/// closed-form moments `<z^k, z^k> = hbar^k k!`.
pub fn bargmann_toeplitz_complex(f: &CPoly, hbar: f64, space: Arc<FockSpace>) -> Result<FockOperator, FockError> {
    let terms: Vec<(Vec<u32>, Complex64)> = f.terms().iter().map(|(e, c)| (e.clone(), qi_to_c64(c))).collect();
    bargmann_toeplitz_terms(f.nvars(), &terms, hbar, space)
}

/// Same as [`bargmann_toeplitz_complex`] for a symbol given by floating-point terms.
pub fn bargmann_toeplitz_terms(
    nvars: usize,
    terms: &[(Vec<u32>, Complex64)],
    hbar: f64,
    space: Arc<FockSpace>,
) -> Result<FockOperator, FockError> {
    if !(hbar > 0.0) {
        return Err(FockError::NonPositiveHbar(hbar));
    }
    let n = space.modes();
    if nvars != 2 * n {
        return Err(FockError::DimensionMismatch { expected: 2 * n, found: nvars });
    }
    // (P, Q) multi-indices of z^P conj(z)^Q
    let mut zterms: BTreeMap<(Vec<u32>, Vec<u32>), Complex64> = BTreeMap::new();
    for (exps, c) in terms {
        let mut acc: Vec<((Vec<u32>, Vec<u32>), Complex64)> = vec![((vec![], vec![]), *c)];
        for j in 0..n {
            let m = expand_mode(exps[j], exps[n + j]);
            let mut next = Vec::with_capacity(acc.len() * m.len());
            for ((p, q), c0) in &acc {
                for ((pj, qj), c1) in &m {
                    let mut p2 = p.clone();
                    p2.push(*pj);
                    let mut q2 = q.clone();
                    q2.push(*qj);
                    next.push(((p2, q2), c0 * c1));
                }
            }
            acc = next;
        }
        for (k, v) in acc {
            *zterms.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
    }
    let d = space.dim();
    let mut m = CMatrix::zeros(d, d);
    let basis = space.basis();
    for (col, alpha) in basis.iter().enumerate() {
        for ((p, q), c) in &zterms {
            if c.norm() == 0.0 {
                continue;
            }
            let mut beta = Vec::with_capacity(n);
            let mut ok = true;
            for j in 0..n {
                let k = alpha[j] + p[j];
                if k < q[j] {
                    ok = false;
                    break;
                }
                beta.push(k - q[j]);
            }
            if !ok {
                continue;
            }
            let Some(row) = space.index_of(&beta) else { continue };
            let mut val = *c;
            for j in 0..n {
                let k = alpha[j] + p[j];
                val *= hbar.powf((p[j] + q[j]) as f64 / 2.0) * sqrt_fact_ratio(alpha[j], k) * sqrt_fact_ratio(beta[j], k);
            }
            m[(row, col)] += val;
        }
    }
    Ok(FockOperator::new(space, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::max_abs;
    use crate::catalog::phase_space_chart;
    use crate::ring::parse_poly;

    fn op(src: &str, hbar: f64, modes: usize, cutoff: usize) -> FockOperator {
        let chart = phase_space_chart(modes);
        let f = parse_poly(src, &chart).unwrap();
        bargmann_toeplitz(&f, hbar, Arc::new(FockSpace::new(modes, cutoff))).unwrap()
    }

    #[test]
    fn constant_symbol_is_identity() {
        let t = op("1", 0.3, 2, 4);
        assert!(max_abs(&(t.matrix.clone() - CMatrix::identity(15, 15))) < 1e-15);
    }

    #[test]
    fn number_operator_symbol() {
        let h = 0.25;
        let t = op("1/2*x^2 + 1/2*y^2", h, 1, 10);
        for k in 0..=10 {
            assert!((t.matrix[(k, k)] - Complex64::new(h * (k as f64 + 1.0), 0.0)).norm() < 1e-14);
        }
        let off: f64 = (0..11).flat_map(|i| (0..11).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| t.matrix[(i, j)].norm()).sum();
        assert!(off < 1e-14);
    }

    #[test]
    fn real_symbols_give_hermitian_operators() {
        let t = op("x1^3*y1 - 2*x1*y2 + y1^2", 0.5, 2, 6);
        assert!(max_abs(&(&t.matrix - t.matrix.adjoint())) < 1e-12);
    }

    #[test]
    fn canonical_pair_commutator() {
        let h = 0.125;
        let x = op("x", h, 1, 20);
        let y = op("y", h, 1, 20);
        let c = x.commutator(&y).restrict(19);
        let target = CMatrix::identity(20, 20) * Complex64::new(0.0, -h);
        assert!(max_abs(&(c - target)) < 1e-13);
    }
}
