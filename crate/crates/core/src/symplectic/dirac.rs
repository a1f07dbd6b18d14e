use num_traits::{One, Zero};

use super::{CentralExtension, SymplecticError};
use crate::linalg::{q_inverse, QMatrix};
use crate::ring::{EtaLaurent, PolyFn, Q};

/// Sign of the fiber-linear Poisson structure on the dual of the extension.
///
/// `Plus` takes `{xi_i, xi_j} = sum_k c_ij^k xi_k + eta omega_ij` and
/// `{xi_i, p} = rho(e_i)(p)`; `Minus` negates both. The Dirac bracket on the
/// `eta > 0` stratum equals `+(1/eta){f, g}` for `Minus` and `-(1/eta){f, g}`
/// for `Plus` when `{f, g}` is computed from [`induced_poisson`](super::induced_poisson).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiePoissonSign {
    Plus,
    #[default]
    Minus,
}

impl LiePoissonSign {
    fn factor(self) -> Q {
        match self {
            LiePoissonSign::Plus => Q::one(),
            LiePoissonSign::Minus => -Q::one(),
        }
    }
}

/// Function on the dual of the extension, polynomial in the base coordinates
/// and the fiber coordinates `xi_1..xi_r`, Laurent in `eta`.
///
/// Stored as an [`EtaLaurent`] whose coefficients use `nbase + rank`
/// variables, base coordinates first.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberLinearFn {
    nbase: usize,
    rank: usize,
    inner: EtaLaurent,
}

impl FiberLinearFn {
    pub fn zero(nbase: usize, rank: usize) -> Self {
        FiberLinearFn { nbase, rank, inner: EtaLaurent::zero(nbase + rank) }
    }

    /// Pullback `p~` of a base function.
    pub fn from_base(p: &PolyFn, rank: usize) -> Self {
        let nbase = p.nvars();
        let lifted = PolyFn::from_terms(
            nbase + rank,
            p.terms().iter().map(|(e, c)| {
                let mut e2 = e.clone();
                e2.resize(nbase + rank, 0);
                (e2, c.clone())
            }),
        );
        FiberLinearFn { nbase, rank, inner: EtaLaurent::term(lifted, 0) }
    }

    /// Fiber coordinate `xi_i` (zero-based).
    pub fn xi(nbase: usize, rank: usize, i: usize) -> Self {
        assert!(i < rank, "fiber index out of range");
        FiberLinearFn { nbase, rank, inner: EtaLaurent::term(PolyFn::var(nbase + rank, nbase + i), 0) }
    }

    /// `eta^power`.
    pub fn eta_pow(nbase: usize, rank: usize, power: i32) -> Self {
        FiberLinearFn { nbase, rank, inner: EtaLaurent::term(PolyFn::one(nbase + rank), power) }
    }

    pub fn nbase(&self) -> usize {
        self.nbase
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn inner(&self) -> &EtaLaurent {
        &self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!((self.nbase, self.rank), (other.nbase, other.rank), "fiber coordinate mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        FiberLinearFn { inner: self.inner.add(&other.inner), nbase: self.nbase, rank: self.rank }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_shape(other);
        FiberLinearFn { inner: self.inner.sub(&other.inner), nbase: self.nbase, rank: self.rank }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_shape(other);
        FiberLinearFn { inner: self.inner.mul(&other.inner), nbase: self.nbase, rank: self.rank }
    }

    pub fn scale(&self, c: &Q) -> Self {
        FiberLinearFn { inner: self.inner.scale(c), nbase: self.nbase, rank: self.rank }
    }

    fn map_terms(&self, f: impl Fn(i32, &PolyFn) -> (i32, PolyFn)) -> Self {
        let mut out = EtaLaurent::zero(self.nbase + self.rank);
        for (k, p) in self.inner.terms() {
            let (k2, p2) = f(*k, p);
            out = out.add(&EtaLaurent::term(p2, k2));
        }
        FiberLinearFn { nbase: self.nbase, rank: self.rank, inner: out }
    }

    /// Partial derivative along base coordinate `a`.
    pub fn d_base(&self, a: usize) -> Self {
        self.map_terms(|k, p| (k, p.derive(a)))
    }

    /// Partial derivative along `xi_i`.
    pub fn d_xi(&self, i: usize) -> Self {
        let axis = self.nbase + i;
        self.map_terms(|k, p| (k, p.derive(axis)))
    }

    /// Partial derivative along `eta`.
    pub fn d_eta(&self) -> Self {
        self.map_terms(|k, p| (k - 1, p.scale(&Q::from_integer(k.into()))))
    }

    /// Restriction to `xi = 0`: a Laurent polynomial in `eta` over the base.
    pub fn restrict_to_s(&self) -> EtaLaurent {
        let mut out = EtaLaurent::zero(self.nbase);
        for (k, p) in self.inner.terms() {
            let base = PolyFn::from_terms(
                self.nbase,
                p.terms()
                    .iter()
                    .filter(|(e, _)| e[self.nbase..].iter().all(|&x| x == 0))
                    .map(|(e, c)| (e[..self.nbase].to_vec(), c.clone())),
            );
            out = out.add(&EtaLaurent::term(base, *k));
        }
        out
    }
}

/// Fiber-linear Poisson bracket on the dual of the extension, extended to
/// polynomials by the Leibniz rule.
pub fn linear_poisson_bracket(
    e: &CentralExtension,
    f: &FiberLinearFn,
    g: &FiberLinearFn,
    sign: LiePoissonSign,
) -> Result<FiberLinearFn, SymplecticError> {
    let n = e.nvars();
    let r = e.base_rank();
    for h in [f, g] {
        if h.nbase != n {
            return Err(SymplecticError::ChartMismatch { expected: n, found: h.nbase });
        }
        if h.rank != r {
            return Err(SymplecticError::FiberMismatch { expected: r, found: h.rank });
        }
    }
    let s = sign.factor();
    let a = &e.algebroid;
    let lift = |p: &PolyFn| FiberLinearFn::from_base(p, r);
    // {xi_i, xi_j} and {xi_i, x_a}
    let xi_bracket = |i: usize, j: usize| {
        let mut acc = FiberLinearFn::zero(n, r);
        for k in 0..r {
            let c = a.structure(i, j, k);
            if !c.is_zero() {
                acc = acc.add(&lift(c).mul(&FiberLinearFn::xi(n, r, k)));
            }
        }
        let c = a.structure(i, j, r);
        if !c.is_zero() {
            acc = acc.add(&lift(c).mul(&FiberLinearFn::eta_pow(n, r, 1)));
        }
        acc.scale(&s)
    };
    let dfx: Vec<FiberLinearFn> = (0..r).map(|i| f.d_xi(i)).collect();
    let dgx: Vec<FiberLinearFn> = (0..r).map(|i| g.d_xi(i)).collect();
    let dfb: Vec<FiberLinearFn> = (0..n).map(|b| f.d_base(b)).collect();
    let dgb: Vec<FiberLinearFn> = (0..n).map(|b| g.d_base(b)).collect();
    let mut out = FiberLinearFn::zero(n, r);
    for i in 0..r {
        for j in 0..r {
            if i == j || dfx[i].is_zero() || dgx[j].is_zero() {
                continue;
            }
            let br = xi_bracket(i, j);
            if !br.is_zero() {
                out = out.add(&dfx[i].mul(&dgx[j]).mul(&br));
            }
        }
        for b in 0..n {
            let rho = &a.anchor()[i][b];
            if rho.is_zero() {
                continue;
            }
            let rho = lift(&rho.scale(&s));
            let t = dfx[i].mul(&dgb[b]).sub(&dfb[b].mul(&dgx[i]));
            if !t.is_zero() {
                out = out.add(&rho.mul(&t));
            }
        }
    }
    Ok(out)
}

fn constant_form(e: &CentralExtension) -> Result<QMatrix, SymplecticError> {
    let r = e.base_rank();
    let mut m = vec![vec![Q::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            m[i][j] = e.omega[i][j].as_constant().ok_or(SymplecticError::NonConstant)?;
        }
    }
    Ok(m)
}

/// Dirac bracket of pulled-back base functions on the stratum
/// `{xi = 0, eta > 0}`, computed from the constraint formula with
/// `C_ij = {xi_i, xi_j}` restricted to the stratum.
pub fn dirac_bracket_on_s(
    e: &CentralExtension,
    f: &PolyFn,
    g: &PolyFn,
    sign: LiePoissonSign,
) -> Result<EtaLaurent, SymplecticError> {
    let n = e.nvars();
    let r = e.base_rank();
    for h in [f, g] {
        if h.nvars() != n {
            return Err(SymplecticError::ChartMismatch { expected: n, found: h.nvars() });
        }
    }
    let om = constant_form(e)?;
    let om_inv = q_inverse(&om).ok_or(SymplecticError::Singular)?;
    // On the stratum C = s eta omega, so C^{-1} = s eta^{-1} omega^{-1}.
    let s = sign.factor();
    let big_f = FiberLinearFn::from_base(f, r);
    let big_g = FiberLinearFn::from_base(g, r);
    let mut out = linear_poisson_bracket(e, &big_f, &big_g, sign)?;
    let f_xi: Vec<FiberLinearFn> = (0..r)
        .map(|i| linear_poisson_bracket(e, &big_f, &FiberLinearFn::xi(n, r, i), sign))
        .collect::<Result<_, _>>()?;
    let xi_g: Vec<FiberLinearFn> = (0..r)
        .map(|j| linear_poisson_bracket(e, &FiberLinearFn::xi(n, r, j), &big_g, sign))
        .collect::<Result<_, _>>()?;
    let eta_inv = FiberLinearFn::eta_pow(n, r, -1);
    for i in 0..r {
        for j in 0..r {
            if om_inv[i][j].is_zero() {
                continue;
            }
            let c_inv = eta_inv.scale(&(&s * &om_inv[i][j]));
            out = out.sub(&c_inv.mul(&f_xi[i]).mul(&xi_g[j]));
        }
    }
    Ok(out.restrict_to_s())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ring::parse_poly;
    use crate::symplectic::central_extension;

    fn ext(a: crate::AlgebroidPresentation) -> CentralExtension {
        let om = catalog::standard_omega_matrix(a.nvars(), a.rank());
        central_extension(&a, &om).unwrap()
    }

    #[test]
    fn linear_bracket_generators_plus_convention() {
        let e = ext(catalog::tangent(1));
        let xi1 = FiberLinearFn::xi(2, 2, 0);
        let xi2 = FiberLinearFn::xi(2, 2, 1);
        let eta = FiberLinearFn::eta_pow(2, 2, 1);
        assert_eq!(linear_poisson_bracket(&e, &xi1, &xi2, LiePoissonSign::Plus).unwrap(), eta);
        assert!(linear_poisson_bracket(&e, &eta, &xi1, LiePoissonSign::Plus).unwrap().is_zero());

        let b = ext(catalog::b_algebroid(1));
        let f = parse_poly("f", b.chart()).unwrap();
        let ft = FiberLinearFn::from_base(&f, 2);
        assert_eq!(linear_poisson_bracket(&b, &xi1, &ft, LiePoissonSign::Plus).unwrap(), ft);
        assert_eq!(linear_poisson_bracket(&b, &xi1, &ft, LiePoissonSign::Minus).unwrap(), ft.scale(&-Q::one()));
    }

    #[test]
    fn dirac_bracket_tangent_and_b() {
        let e = ext(catalog::tangent(1));
        let x = parse_poly("x", e.chart()).unwrap();
        let y = parse_poly("y", e.chart()).unwrap();
        let d = dirac_bracket_on_s(&e, &x, &y, LiePoissonSign::Minus).unwrap();
        assert_eq!(d, EtaLaurent::term(PolyFn::one(2), -1));
        let d_plus = dirac_bracket_on_s(&e, &x, &y, LiePoissonSign::Plus).unwrap();
        assert_eq!(d_plus, EtaLaurent::term(-PolyFn::one(2), -1));
        assert!(dirac_bracket_on_s(&e, &x, &x, LiePoissonSign::Minus).unwrap().is_zero());

        let b = ext(catalog::b_algebroid(1));
        let f = parse_poly("f", b.chart()).unwrap();
        let x2 = parse_poly("x2", b.chart()).unwrap();
        let d = dirac_bracket_on_s(&b, &f, &x2, LiePoissonSign::Minus).unwrap();
        assert_eq!(d, EtaLaurent::term(f, -1));
    }

    #[test]
    fn nonconstant_form_is_rejected() {
        let a = catalog::b_algebroid(1);
        let f = parse_poly("f", a.chart()).unwrap();
        let om = vec![vec![PolyFn::zero(2), f.clone()], vec![-&f, PolyFn::zero(2)]];
        let e = central_extension(&a, &om).unwrap();
        assert_eq!(dirac_bracket_on_s(&e, &f, &f, LiePoissonSign::Minus), Err(SymplecticError::NonConstant));
    }

    #[test]
    fn eta_derivative() {
        let e = FiberLinearFn::eta_pow(1, 1, -2);
        assert_eq!(e.d_eta(), FiberLinearFn::eta_pow(1, 1, -3).scale(&Q::from_integer((-2).into())));
    }
}
