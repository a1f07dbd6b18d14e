//! Lie algebroids presented in a local frame over one chart.
//!
//! A presentation stores the anchor images `rho(e_i)` of the frame and the
//! structure functions `[e_i, e_j] = sum_k c_ij^k e_k`. Nothing about the
//! axioms is enforced at construction; [`check_axioms`] verifies them.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ring::{Chart, PolyFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebroidError {
    #[error("anchor has {rows} rows and {cols} columns; expected {rank} x {dim}")]
    AnchorShape { rows: usize, cols: usize, rank: usize, dim: usize },
    #[error("structure array does not have shape {0} x {0} x {0}")]
    StructureShape(usize),
    #[error("polynomial has {found} variables but the chart has {expected}")]
    ChartMismatch { expected: usize, found: usize },
    #[error("section has {found} components but the frame has rank {rank}")]
    SectionRank { rank: usize, found: usize },
    #[error("form of degree {degree} has no differential on a rank-{rank} algebroid")]
    DegreeOverflow { degree: usize, rank: usize },
    #[error("frame index {index} out of range for rank {rank}")]
    IndexRange { index: usize, rank: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebroidPresentation {
    chart: Chart,
    rank: usize,
    anchor: Vec<Vec<PolyFn>>,
    structure: Vec<Vec<Vec<PolyFn>>>,
}

/// Section `sum_i g^i e_i` of the algebroid.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub coeffs: Vec<PolyFn>,
}

impl Section {
    pub fn zero(nvars: usize, rank: usize) -> Self {
        Section { coeffs: vec![PolyFn::zero(nvars); rank] }
    }

    /// The frame element `e_i`.
    pub fn frame(nvars: usize, rank: usize, i: usize) -> Self {
        let mut s = Self::zero(nvars, rank);
        s.coeffs[i] = PolyFn::one(nvars);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PolyFn::is_zero)
    }

    pub fn add(&self, other: &Section) -> Section {
        Section { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Section) -> Section {
        Section { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, p: &PolyFn) -> Section {
        Section { coeffs: self.coeffs.iter().map(|c| c * p).collect() }
    }
}

impl AlgebroidPresentation {
    pub fn new(
        chart: Chart,
        anchor: Vec<Vec<PolyFn>>,
        structure: Vec<Vec<Vec<PolyFn>>>,
    ) -> Result<Self, AlgebroidError> {
        let rank = anchor.len();
        let dim = chart.dim();
        for row in &anchor {
            if row.len() != dim {
                return Err(AlgebroidError::AnchorShape { rows: rank, cols: row.len(), rank, dim });
            }
            for p in row {
                check_arity(dim, p)?;
            }
        }
        if structure.len() != rank
            || structure.iter().any(|r| r.len() != rank || r.iter().any(|c| c.len() != rank))
        {
            return Err(AlgebroidError::StructureShape(rank));
        }
        for p in structure.iter().flatten().flatten() {
            check_arity(dim, p)?;
        }
        Ok(AlgebroidPresentation { chart, rank, anchor, structure })
    }

    /// Builds a presentation from nonzero brackets `[e_i, e_j] = sum p e_k`
    /// given as `(i, j, k, p)` with zero-based indices; the `(j, i)` entries
    /// are filled in antisymmetrically.
    pub fn from_brackets(
        chart: Chart,
        anchor: Vec<Vec<PolyFn>>,
        brackets: &[(usize, usize, usize, PolyFn)],
    ) -> Result<Self, AlgebroidError> {
        let rank = anchor.len();
        let n = chart.dim();
        let mut c = vec![vec![vec![PolyFn::zero(n); rank]; rank]; rank];
        for (i, j, k, p) in brackets {
            for &idx in [i, j, k] {
                if idx >= rank {
                    return Err(AlgebroidError::IndexRange { index: idx, rank });
                }
            }
            c[*i][*j][*k] = p.clone();
            c[*j][*i][*k] = -p;
        }
        Self::new(chart, anchor, c)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn nvars(&self) -> usize {
        self.chart.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Row `i` holds the components of `rho(e_i)` along `d/dx_a`.
    pub fn anchor(&self) -> &[Vec<PolyFn>] {
        &self.anchor
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> &PolyFn {
        &self.structure[i][j][k]
    }

    pub fn set_structure(&mut self, i: usize, j: usize, k: usize, p: PolyFn) {
        assert_eq!(p.nvars(), self.nvars(), "chart mismatch");
        self.structure[i][j][k] = p;
    }

    /// `rho(e_i)(p)`.
    pub fn anchor_apply(&self, i: usize, p: &PolyFn) -> PolyFn {
        let mut acc = PolyFn::zero(self.nvars());
        for (a, coef) in self.anchor[i].iter().enumerate() {
            if !coef.is_zero() {
                acc += &(coef * &p.derive(a));
            }
        }
        acc
    }

    /// `rho(X)(p)` for a section `X`.
    pub fn anchor_apply_section(&self, x: &Section, p: &PolyFn) -> PolyFn {
        let mut acc = PolyFn::zero(self.nvars());
        for (i, g) in x.coeffs.iter().enumerate() {
            if !g.is_zero() {
                acc += &(g * &self.anchor_apply(i, p));
            }
        }
        acc
    }

    /// Components of the vector field `rho(X)`.
    pub fn vector_field(&self, x: &Section) -> Vec<PolyFn> {
        (0..self.nvars())
            .map(|a| {
                let mut acc = PolyFn::zero(self.nvars());
                for (i, g) in x.coeffs.iter().enumerate() {
                    acc += &(g * &self.anchor[i][a]);
                }
                acc
            })
            .collect()
    }

    fn check_section(&self, x: &Section) -> Result<(), AlgebroidError> {
        if x.coeffs.len() != self.rank {
            return Err(AlgebroidError::SectionRank { rank: self.rank, found: x.coeffs.len() });
        }
        for p in &x.coeffs {
            check_arity(self.nvars(), p)?;
        }
        Ok(())
    }

    /// The central extension and other constructions append frame elements.
    pub(crate) fn into_parts(self) -> (Chart, Vec<Vec<PolyFn>>, Vec<Vec<Vec<PolyFn>>>) {
        (self.chart, self.anchor, self.structure)
    }
}

fn check_arity(expected: usize, p: &PolyFn) -> Result<(), AlgebroidError> {
    if p.nvars() != expected {
        return Err(AlgebroidError::ChartMismatch { expected, found: p.nvars() });
    }
    Ok(())
}

/// Bracket of sections, extended from the frame by the Leibniz rule.
pub fn bracket_sections(
    a: &AlgebroidPresentation,
    x: &Section,
    y: &Section,
) -> Result<Section, AlgebroidError> {
    a.check_section(x)?;
    a.check_section(y)?;
    let n = a.nvars();
    let r = a.rank();
    let mut out = Section::zero(n, r);
    for i in 0..r {
        if x.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..r {
            if y.coeffs[j].is_zero() {
                continue;
            }
            let xy = &x.coeffs[i] * &y.coeffs[j];
            for k in 0..r {
                let c = &a.structure[i][j][k];
                if !c.is_zero() {
                    out.coeffs[k] += &(&xy * c);
                }
            }
        }
    }
    for k in 0..r {
        out.coeffs[k] += &a.anchor_apply_section(x, &y.coeffs[k]);
        out.coeffs[k] -= &a.anchor_apply_section(y, &x.coeffs[k]);
    }
    Ok(out)
}

/// Outcome of one axiom check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Location and value of the first nonzero defect.
    pub witness: Option<(String, PolyFn)>,
}

impl Check {
    fn pass(name: &'static str) -> Self {
        Check { name, passed: true, witness: None }
    }

    fn fail(name: &'static str, at: String, p: PolyFn) -> Self {
        Check { name, passed: false, witness: Some((at, p)) }
    }

    pub fn describe(&self, chart: &Chart) -> String {
        match &self.witness {
            None => format!("{}: pass", self.name),
            Some((at, p)) => format!("{}: FAIL at {} = {}", self.name, at, p.to_string_with(chart)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub antisymmetry: Check,
    pub anchor_morphism: Check,
    pub jacobi: Check,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.antisymmetry.passed && self.anchor_morphism.passed && self.jacobi.passed
    }

    pub fn checks(&self) -> [&Check; 3] {
        [&self.antisymmetry, &self.anchor_morphism, &self.jacobi]
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks().into_iter().find(|c| !c.passed)
    }
}

/// Verifies antisymmetry, the anchor morphism property and Jacobi.
pub fn check_axioms(a: &AlgebroidPresentation) -> AxiomReport {
    let n = a.nvars();
    let r = a.rank();

    let mut antisymmetry = Check::pass("antisymmetry");
    'anti: for i in 0..r {
        for j in i..r {
            for k in 0..r {
                let s = &a.structure[i][j][k] + &a.structure[j][i][k];
                if !s.is_zero() {
                    antisymmetry = Check::fail(
                        "antisymmetry",
                        format!("c[{}][{}]^{} + c[{}][{}]^{}", i + 1, j + 1, k + 1, j + 1, i + 1, k + 1),
                        s,
                    );
                    break 'anti;
                }
            }
        }
    }

    let mut anchor_morphism = Check::pass("anchor morphism");
    'anchor: for i in 0..r {
        for j in i + 1..r {
            for b in 0..n {
                // rho([e_i,e_j])^b
                let mut lhs = PolyFn::zero(n);
                for k in 0..r {
                    lhs += &(&a.structure[i][j][k] * &a.anchor[k][b]);
                }
                // [rho(e_i), rho(e_j)]^b
                let mut rhs = PolyFn::zero(n);
                for d in 0..n {
                    rhs += &(&a.anchor[i][d] * &a.anchor[j][b].derive(d));
                    rhs -= &(&a.anchor[j][d] * &a.anchor[i][b].derive(d));
                }
                let defect = &lhs - &rhs;
                if !defect.is_zero() {
                    anchor_morphism = Check::fail(
                        "anchor morphism",
                        format!("rho([e{},e{}]) - [rho(e{}),rho(e{})] along d/d{}", i + 1, j + 1, i + 1, j + 1, a.chart.name(b)),
                        defect,
                    );
                    break 'anchor;
                }
            }
        }
    }

    let mut jacobi = Check::pass("jacobi");
    let e = |i: usize| Section::frame(n, r, i);
    let br = |x: &Section, y: &Section| bracket_sections(a, x, y).expect("frame sections");
    'jac: for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                let t1 = br(&e(i), &br(&e(j), &e(k)));
                let t2 = br(&e(j), &br(&e(k), &e(i)));
                let t3 = br(&e(k), &br(&e(i), &e(j)));
                let sum = t1.add(&t2).add(&t3);
                if let Some(l) = sum.coeffs.iter().position(|p| !p.is_zero()) {
                    jacobi = Check::fail(
                        "jacobi",
                        format!("cyclic sum over (e{},e{},e{}) along e{}", i + 1, j + 1, k + 1, l + 1),
                        sum.coeffs[l].clone(),
                    );
                    break 'jac;
                }
            }
        }
    }

    AxiomReport { antisymmetry, anchor_morphism, jacobi }
}

/// Totally antisymmetric form on the frame, stored on strictly increasing
/// index tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameKForm {
    nvars: usize,
    rank: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, PolyFn>,
}

/// Sign of the permutation sorting `idx`, or `None` when an index repeats.
fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut even = true;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            even = !even;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, even))
    }
}

impl FrameKForm {
    pub fn zero(nvars: usize, rank: usize, degree: usize) -> Self {
        FrameKForm { nvars, rank, degree, comps: BTreeMap::new() }
    }

    /// Two-form with `omega(e_i, e_j) = m[i][j]`; only the upper triangle is
    /// read.
    pub fn from_matrix(nvars: usize, m: &[Vec<PolyFn>]) -> Self {
        let r = m.len();
        let mut out = Self::zero(nvars, r, 2);
        for i in 0..r {
            for j in i + 1..r {
                out.set(&[i, j], m[i][j].clone());
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, PolyFn> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Sets the component on `idx` (any order) respecting antisymmetry.
    pub fn set(&mut self, idx: &[usize], p: PolyFn) {
        assert_eq!(idx.len(), self.degree, "wrong number of indices");
        assert!(idx.iter().all(|&i| i < self.rank), "index out of range");
        let (sorted, even) = sort_sign(idx).expect("repeated index in antisymmetric form");
        let p = if even { p } else { -p };
        if p.is_zero() {
            self.comps.remove(&sorted);
        } else {
            self.comps.insert(sorted, p);
        }
    }

    /// Evaluates on frame elements `e_{idx[0]}, ..., e_{idx[k-1]}`.
    pub fn get(&self, idx: &[usize]) -> PolyFn {
        assert_eq!(idx.len(), self.degree, "wrong number of indices");
        match sort_sign(idx) {
            None => PolyFn::zero(self.nvars),
            Some((sorted, even)) => match self.comps.get(&sorted) {
                None => PolyFn::zero(self.nvars),
                Some(p) if even => p.clone(),
                Some(p) => -p,
            },
        }
    }

    pub fn sub(&self, other: &FrameKForm) -> FrameKForm {
        assert_eq!((self.degree, self.rank), (other.degree, other.rank), "form shape mismatch");
        let mut out = self.clone();
        for (k, p) in &other.comps {
            let v = &out.get(k) - p;
            out.set(k, v);
        }
        out
    }

    /// First nonzero component, with its (1-based) index tuple rendered.
    pub fn first_nonzero(&self) -> Option<(String, PolyFn)> {
        self.comps.iter().next().map(|(k, p)| {
            let idx: Vec<String> = k.iter().map(|i| (i + 1).to_string()).collect();
            (format!("[{}]", idx.join(",")), p.clone())
        })
    }
}

impl fmt::Display for FrameKForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(k, p)| {
                let idx: Vec<String> = k.iter().map(|i| (i + 1).to_string()).collect();
                format!("[{}]: {}", idx.join(","), p.format_with(|a| format!("x{}", a + 1)))
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Chevalley-Eilenberg differential of the algebroid (with anchor).
pub fn ce_differential(
    a: &AlgebroidPresentation,
    alpha: &FrameKForm,
) -> Result<FrameKForm, AlgebroidError> {
    let r = a.rank();
    let k = alpha.degree;
    if alpha.rank != r {
        return Err(AlgebroidError::SectionRank { rank: r, found: alpha.rank });
    }
    if alpha.nvars != a.nvars() {
        return Err(AlgebroidError::ChartMismatch { expected: a.nvars(), found: alpha.nvars });
    }
    if k + 1 > r {
        return Err(AlgebroidError::DegreeOverflow { degree: k, rank: r });
    }
    let n = a.nvars();
    let mut out = FrameKForm::zero(n, r, k + 1);
    for tuple in increasing_tuples(r, k + 1) {
        let mut acc = PolyFn::zero(n);
        for p in 0..=k {
            let rest: Vec<usize> = tuple.iter().enumerate().filter(|(i, _)| *i != p).map(|(_, &v)| v).collect();
            let term = a.anchor_apply(tuple[p], &alpha.get(&rest));
            if p % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        for p in 0..=k {
            for q in p + 1..=k {
                let rest: Vec<usize> = tuple
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != p && *i != q)
                    .map(|(_, &v)| v)
                    .collect();
                let mut term = PolyFn::zero(n);
                for l in 0..r {
                    let c = a.structure(tuple[p], tuple[q], l);
                    if c.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(k);
                    idx.push(l);
                    idx.extend_from_slice(&rest);
                    let v = alpha.get(&idx);
                    if !v.is_zero() {
                        term += &(c * &v);
                    }
                }
                if (p + q) % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
        }
        out.set(&tuple, acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ring::{parse_poly, q};

    #[test]
    fn b_frame_brackets_vanish() {
        let a = catalog::b_algebroid(1);
        let n = a.nvars();
        let e1 = Section::frame(n, 2, 0);
        let e2 = Section::frame(n, 2, 1);
        assert!(bracket_sections(&a, &e1, &e2).unwrap().is_zero());
    }

    #[test]
    fn zero_frame_bracket_is_second_generator() {
        let a = catalog::zero_algebroid(1);
        let n = a.nvars();
        let e1 = Section::frame(n, 2, 0);
        let e2 = Section::frame(n, 2, 1);
        assert_eq!(bracket_sections(&a, &e1, &e2).unwrap(), e2);
    }

    #[test]
    fn self_bracket_is_zero() {
        let a = catalog::zero_algebroid(1);
        let c = a.chart().clone();
        let x = Section {
            coeffs: vec![parse_poly("f^2 + x2", &c).unwrap(), parse_poly("3*f*x2 - 1", &c).unwrap()],
        };
        assert!(bracket_sections(&a, &x, &x).unwrap().is_zero());
    }

    #[test]
    fn bundled_frames_satisfy_axioms() {
        assert!(check_axioms(&catalog::b_algebroid(1)).all_passed());
        assert!(check_axioms(&catalog::zero_algebroid(1)).all_passed());
    }

    #[test]
    fn mutated_zero_algebroid_breaks_anchor_morphism() {
        let mut a = catalog::zero_algebroid(1);
        let f = parse_poly("f", a.chart()).unwrap();
        a.set_structure(0, 1, 1, f.clone());
        a.set_structure(1, 0, 1, -&f);
        let rep = check_axioms(&a);
        assert!(rep.antisymmetry.passed);
        assert!(!rep.anchor_morphism.passed);
        let (_, w) = rep.anchor_morphism.witness.clone().unwrap();
        assert!(!w.is_zero());
    }

    #[test]
    fn non_antisymmetric_structure_is_reported() {
        let mut a = catalog::zero_algebroid(1);
        a.set_structure(1, 0, 1, PolyFn::zero(2));
        let rep = check_axioms(&a);
        assert!(!rep.antisymmetry.passed);
    }

    #[test]
    fn closed_forms_on_bundled_frames() {
        for a in [catalog::b_algebroid(1), catalog::zero_algebroid(1), catalog::tangent(1)] {
            let n = a.nvars();
            let mut om = FrameKForm::zero(n, 2, 2);
            om.set(&[0, 1], PolyFn::one(n));
            // rank 2: the 2-form is top degree
            assert!(matches!(ce_differential(&a, &om), Err(AlgebroidError::DegreeOverflow { .. })));
        }
        let a = catalog::b_algebroid(2);
        let om = catalog::standard_omega(a.nvars(), 4);
        assert!(ce_differential(&a, &om).unwrap().is_zero());
    }

    #[test]
    fn differential_of_function_is_anchor() {
        let a = catalog::b_algebroid(1);
        let c = a.chart().clone();
        let mut g = FrameKForm::zero(2, 2, 0);
        g.set(&[], parse_poly("f^2*x2", &c).unwrap());
        let dg = ce_differential(&a, &g).unwrap();
        assert_eq!(dg.get(&[0]), parse_poly("2*f^2*x2", &c).unwrap());
        assert_eq!(dg.get(&[1]), parse_poly("f^2", &c).unwrap());
        let _ = q(1, 1);
    }
}
