//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::chart::Chart;
use super::coeff::{Coeff, Q, QI};

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// Sparse polynomial in a fixed number of variables.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Exponents, C>,
}

/// Polynomial function on a chart with rational coefficients.
pub type PolyFn = Poly<Q>;

/// Polynomial with Gaussian-rational coefficients.
pub type CPoly = Poly<QI>;

/// Graded-lexicographic comparison of exponent vectors.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The coordinate function `x_axis`.
    pub fn var(nvars: usize, axis: usize) -> Self {
        assert!(axis < nvars, "axis {axis} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[axis] = 1;
        Self::monomial(nvars, e, C::one())
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: C) -> Self {
        assert_eq!(exps.len(), nvars, "exponent length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Exponents, C)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, C> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the value if the polynomial is constant (including zero).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative along `axis`.
    pub fn derive(&self, axis: usize) -> Self {
        assert!(axis < self.nvars, "axis {axis} out of range for {} variables", self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[axis] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[axis] -= 1;
            out.add_term(e2, c.clone() * C::from_int(e[axis] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Terms sorted by descending graded-lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }

    /// Canonical text using the chart's coordinate names.
    pub fn to_string_with(&self, chart: &Chart) -> String {
        assert_eq!(chart.dim(), self.nvars, "chart dimension mismatch");
        self.format_with(|i| chart.name(i).to_string())
    }

    /// Canonical text with caller-provided variable names.
    pub fn format_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let (neg, body) = c.format_parts();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { name(i) } else { format!("{}^{}", name(i), k) })
                .collect();
            match (body, mono.is_empty()) {
                (None, true) => out.push('1'),
                (None, false) => out.push_str(&mono.join("*")),
                (Some(b), true) => out.push_str(&b),
                (Some(b), false) => {
                    let _ = write!(out, "{}*{}", b, mono.join("*"));
                }
            }
        }
        out
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials live on different charts");
    }
}

impl PolyFn {
    /// Embeds into Gaussian-rational coefficients.
    pub fn complexify(&self) -> CPoly {
        self.map_coeffs(|c| super::coeff::real(c.clone()))
    }
}

impl CPoly {
    pub fn conj(&self) -> CPoly {
        self.map_coeffs(super::coeff::conj)
    }

    pub fn real_part(&self) -> PolyFn {
        self.map_coeffs(|c| c.re.clone())
    }

    pub fn imag_part(&self) -> PolyFn {
        self.map_coeffs(|c| c.im.clone())
    }
}

impl<'a, C: Coeff> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &'a Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a, C: Coeff> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &'a Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &'a Poly<C>) -> Poly<C> {
        self.check_arity(rhs);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> AddAssign<&Poly<C>> for Poly<C> {
    fn add_assign(&mut self, rhs: &Poly<C>) {
        self.check_arity(rhs);
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl<C: Coeff> SubAssign<&Poly<C>> for Poly<C> {
    fn sub_assign(&mut self, rhs: &Poly<C>) {
        self.check_arity(rhs);
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::coeff::q;

    fn chart() -> Chart {
        Chart::new(["f", "x2"]).unwrap()
    }

    #[test]
    fn derivatives() {
        let f = PolyFn::var(2, 0);
        let x2 = PolyFn::var(2, 1);
        let f2 = f.pow(2);
        assert_eq!(f2.derive(0), f.scale(&q(2, 1)));
        assert!(f2.derive(1).is_zero());
        let p = (&f * &x2).scale(&q(3, 1));
        assert_eq!(p.derive(0), x2.scale(&q(3, 1)));
    }

    #[test]
    fn canonical_printing() {
        let c = chart();
        let f = PolyFn::var(2, 0);
        let x2 = PolyFn::var(2, 1);
        let p = &(&f.pow(2) * &x2).scale(&q(3, 1)) - &PolyFn::constant(2, q(1, 2));
        assert_eq!(p.to_string_with(&c), "3*f^2*x2 - 1/2");
        assert_eq!((-&f).to_string_with(&c), "-f");
        assert_eq!(PolyFn::zero(2).to_string_with(&c), "0");
        assert_eq!(PolyFn::one(2).to_string_with(&c), "1");
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let f = PolyFn::var(2, 0);
        let z = &f - &f;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }
}
