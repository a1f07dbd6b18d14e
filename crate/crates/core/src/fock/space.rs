use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{spectral_norm, CMatrix};

/// Symmetric Fock space on `modes` oscillators truncated at total
/// occupation `cutoff`.
///
/// Basis order: total occupation ascending, then lexicographically
/// descending, so the vacuum is index 0 and every level set `|alpha| <= L`
/// is a leading block.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSpace {
    modes: usize,
    cutoff: usize,
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn level_states(modes: usize, total: u32) -> Vec<Vec<u32>> {
    if modes == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in level_states(modes - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl FockSpace {
    pub fn new(modes: usize, cutoff: usize) -> Self {
        let basis: Vec<Vec<u32>> = (0..=cutoff as u32).flat_map(|l| level_states(modes, l)).collect();
        let index = basis.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        FockSpace { modes, cutoff, basis, index }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn index_of(&self, occupation: &[u32]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    pub fn level(&self, i: usize) -> usize {
        self.basis[i].iter().sum::<u32>() as usize
    }

    /// Number of basis states with total occupation at most `level`.
    pub fn dim_below(&self, level: usize) -> usize {
        self.basis.iter().take_while(|a| a.iter().sum::<u32>() as usize <= level).count()
    }

    /// Truncated annihilation operator of mode `j`.
    pub fn annihilation(&self, j: usize) -> CMatrix {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (col, a) in self.basis.iter().enumerate() {
            if a[j] == 0 {
                continue;
            }
            let mut b = a.clone();
            b[j] -= 1;
            let row = self.index[&b];
            m[(row, col)] = Complex64::new((a[j] as f64).sqrt(), 0.0);
        }
        m
    }

    pub fn creation(&self, j: usize) -> CMatrix {
        self.annihilation(j).adjoint()
    }
}

/// Dense operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub space: Arc<FockSpace>,
    pub matrix: CMatrix,
}

impl FockOperator {
    pub fn new(space: Arc<FockSpace>, matrix: CMatrix) -> Self {
        assert_eq!(matrix.shape(), (space.dim(), space.dim()), "operator does not match the space");
        FockOperator { space, matrix }
    }

    pub fn identity(space: Arc<FockSpace>) -> Self {
        let d = space.dim();
        FockOperator { space, matrix: DMatrix::identity(d, d) }
    }

    pub fn zero(space: Arc<FockSpace>) -> Self {
        let d = space.dim();
        FockOperator { space, matrix: DMatrix::zeros(d, d) }
    }

    /// Rank-one projector onto the vacuum.
    pub fn vacuum_projector(space: Arc<FockSpace>) -> Self {
        let mut op = Self::zero(space);
        op.matrix[(0, 0)] = Complex64::new(1.0, 0.0);
        op
    }

    pub fn mul(&self, other: &FockOperator) -> FockOperator {
        FockOperator { space: self.space.clone(), matrix: &self.matrix * &other.matrix }
    }

    pub fn add(&self, other: &FockOperator) -> FockOperator {
        FockOperator { space: self.space.clone(), matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &FockOperator) -> FockOperator {
        FockOperator { space: self.space.clone(), matrix: &self.matrix - &other.matrix }
    }

    pub fn scale(&self, c: Complex64) -> FockOperator {
        FockOperator { space: self.space.clone(), matrix: &self.matrix * c }
    }

    pub fn commutator(&self, other: &FockOperator) -> FockOperator {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Leading block on occupation levels `<= level`.
    pub fn restrict(&self, level: usize) -> CMatrix {
        let k = self.space.dim_below(level);
        self.matrix.view((0, 0), (k, k)).into_owned()
    }

    pub fn norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }

    /// Spectral norm of the block on levels `<= cutoff - buffer`.
    pub fn norm_below(&self, buffer: usize) -> f64 {
        let level = self.space.cutoff().saturating_sub(buffer);
        spectral_norm(&self.restrict(level))
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.matrix.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }
}
