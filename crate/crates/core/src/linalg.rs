//! Exact dense linear algebra over rationals and over polynomial rings.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::ring::{Coeff, Poly, PolyFn, Q};

/// Dense matrix of rationals, row-major.
pub type QMatrix = Vec<Vec<Q>>;

/// Dense matrix of polynomials, row-major.
pub type PolyMatrix = Vec<Vec<PolyFn>>;

pub fn q_identity(n: usize) -> QMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn q_zeros(r: usize, c: usize) -> QMatrix {
    vec![vec![Q::zero(); c]; r]
}

pub fn q_transpose(a: &QMatrix) -> QMatrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn q_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "shape mismatch");
            (0..cols)
                .map(|j| {
                    let mut s = Q::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn q_neg(a: &QMatrix) -> QMatrix {
    a.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect()
}

/// Row-reduces a copy of `a`; returns the rank.
pub fn q_rank(a: &QMatrix) -> usize {
    let mut m = a.clone();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let piv = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &piv;
                for k in c..cols {
                    let v = &m[rank][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Exact inverse, or `None` when singular.
pub fn q_inverse(a: &QMatrix) -> Option<QMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(q_identity(n))
        .map(|(row, id)| {
            assert_eq!(row.len(), n, "matrix is not square");
            row.iter().cloned().chain(id).collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for k in 0..2 * n {
            m[c][k] = &m[c][k] / &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..2 * n {
                    let v = &m[c][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn q_det(a: &QMatrix) -> Q {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Q::zero() };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &piv;
                for k in c..n {
                    let v = &m[c][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
    }
    det
}

/// Positive semidefiniteness of a symmetric rational matrix by symmetric
/// elimination.
pub fn q_is_psd(a: &QMatrix) -> bool {
    let mut m = a.clone();
    let mut alive: Vec<usize> = (0..a.len()).collect();
    while !alive.is_empty() {
        if alive.iter().any(|&i| m[i][i].is_negative()) {
            return false;
        }
        let Some(p) = alive.iter().copied().find(|&i| m[i][i].is_positive()) else {
            // All remaining diagonal entries vanish, so the block must vanish.
            return alive.iter().all(|&i| alive.iter().all(|&j| m[i][j].is_zero()));
        };
        let piv = m[p][p].clone();
        let rest: Vec<usize> = alive.iter().copied().filter(|&i| i != p).collect();
        for &i in &rest {
            for &j in &rest {
                let v = &m[i][p] * &m[p][j] / &piv;
                m[i][j] -= v;
            }
        }
        alive = rest;
    }
    true
}

/// Positive definiteness of a symmetric rational matrix.
pub fn q_is_pd(a: &QMatrix) -> bool {
    q_is_psd(a) && q_rank(a) == a.len()
}

pub fn poly_zeros(nvars: usize, r: usize, c: usize) -> PolyMatrix {
    vec![vec![PolyFn::zero(nvars); c]; r]
}

pub fn poly_transpose<C: Coeff>(a: &[Vec<Poly<C>>]) -> Vec<Vec<Poly<C>>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Product of polynomial matrices; `nvars` fixes the arity of empty sums.
pub fn poly_mul<C: Coeff>(nvars: usize, a: &[Vec<Poly<C>>], b: &[Vec<Poly<C>>]) -> Vec<Vec<Poly<C>>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Poly::zero(nvars);
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &(&row[k] * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion memoized over column subsets.
pub fn poly_det(nvars: usize, a: &PolyMatrix) -> PolyFn {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix is not square");
    assert!(n <= 20, "determinant too large for subset expansion");
    let mut memo: HashMap<u32, PolyFn> = HashMap::new();
    fn rec(a: &PolyMatrix, nvars: usize, row: usize, used: u32, memo: &mut HashMap<u32, PolyFn>) -> PolyFn {
        let n = a.len();
        if row == n {
            return PolyFn::one(nvars);
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = PolyFn::zero(nvars);
        let mut sign_pos = true;
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            if !a[row][c].is_zero() {
                let minor = rec(a, nvars, row + 1, used | (1 << c), memo);
                let t = &a[row][c] * &minor;
                if sign_pos {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
            sign_pos = !sign_pos;
        }
        memo.insert(used, acc.clone());
        acc
    }
    rec(a, nvars, 0, 0, &mut memo)
}

/// Inverse of a polynomial matrix whose determinant is a nonzero constant.
/// Returns the determinant alongside; the inverse is `None` otherwise.
pub fn poly_inverse_unimodular(nvars: usize, a: &PolyMatrix) -> (PolyFn, Option<PolyMatrix>) {
    let n = a.len();
    let det = poly_det(nvars, a);
    let Some(d) = det.as_constant().filter(|d| !d.is_zero()) else { return (det, None) };
    let inv_d = Q::one() / d;
    let mut inv = poly_zeros(nvars, n, n);
    for i in 0..n {
        for j in 0..n {
            // inv[i][j] = cofactor(j, i) / det
            let minor: PolyMatrix = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c].clone()).collect())
                .collect();
            let mut cof = poly_det(nvars, &minor);
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            inv[i][j] = cof.scale(&inv_d);
        }
    }
    (det, Some(inv))
}

pub fn poly_is_antisymmetric<C: Coeff>(a: &[Vec<Poly<C>>]) -> bool {
    let n = a.len();
    (0..n).all(|i| a[i].len() == n && (0..n).all(|j| (&a[i][j] + &a[j][i]).is_zero()))
}

pub fn poly_eval_matrix(a: &PolyMatrix, point: &[Q]) -> QMatrix {
    a.iter().map(|r| r.iter().map(|p| p.eval(point)).collect()).collect()
}

pub fn poly_from_q_matrix(nvars: usize, a: &QMatrix) -> PolyMatrix {
    a.iter().map(|r| r.iter().map(|x| PolyFn::constant(nvars, x.clone())).collect()).collect()
}
