//! Truncated formal power series in the deformation parameter.

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use thiserror::Error;

use super::coeff::{Coeff, Q};
use super::poly::{Poly, PolyFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("coefficients live on different charts ({0} vs {1} variables)")]
    ChartMismatch(usize, usize),
}

/// `c_0 + c_1 h + ... + c_N h^N` with polynomial coefficients, arithmetic
/// truncated at `h^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries<C> {
    coeffs: Vec<Poly<C>>,
}

impl<C: Coeff> FormalSeries<C> {
    pub fn zero(nvars: usize, order: usize) -> Self {
        FormalSeries { coeffs: vec![Poly::zero(nvars); order + 1] }
    }

    pub fn one(nvars: usize, order: usize) -> Self {
        Self::from_poly(Poly::one(nvars), order)
    }

    /// Series whose only nonzero coefficient is the constant term `p`.
    pub fn from_poly(p: Poly<C>, order: usize) -> Self {
        let mut s = Self::zero(p.nvars(), order);
        s.coeffs[0] = p;
        s
    }

    /// Builds from explicit coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Poly<C>>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        let n = coeffs[0].nvars();
        assert!(coeffs.iter().all(|c| c.nvars() == n), "coefficients on different charts");
        FormalSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn nvars(&self) -> usize {
        self.coeffs[0].nvars()
    }

    pub fn coeff(&self, k: usize) -> &Poly<C> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Poly<C>] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, p: Poly<C>) {
        assert_eq!(p.nvars(), self.nvars(), "chart mismatch");
        self.coeffs[k] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Lowest order with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiplies by `h^shift`, dropping what falls beyond the order.
    pub fn shift(&self, shift: usize) -> Self {
        let mut out = Self::zero(self.nvars(), self.order());
        for k in 0..=self.order() {
            if k + shift <= self.order() {
                out.coeffs[k + shift] = self.coeffs[k].clone();
            }
        }
        out
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        if self.nvars() != other.nvars() {
            return Err(SeriesError::ChartMismatch(self.nvars(), other.nvars()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(FormalSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(FormalSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        FormalSeries { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    /// Cauchy product truncated at the common order.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        series_mul(self, other)
    }
}

/// Cauchy product of two series with equal order and chart.
pub fn series_mul<C: Coeff>(
    a: &FormalSeries<C>,
    b: &FormalSeries<C>,
) -> Result<FormalSeries<C>, SeriesError> {
    a.check(b)?;
    let n = a.order();
    let mut out = FormalSeries::zero(a.nvars(), n);
    for i in 0..=n {
        if a.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..=(n - i) {
            if b.coeffs[j].is_zero() {
                continue;
            }
            out.coeffs[i + j] += &(&a.coeffs[i] * &b.coeffs[j]);
        }
    }
    Ok(out)
}

impl<C: Coeff> Add for &FormalSeries<C> {
    type Output = FormalSeries<C>;
    fn add(self, rhs: Self) -> FormalSeries<C> {
        self.try_add(rhs).expect("series mismatch")
    }
}

impl<C: Coeff> Sub for &FormalSeries<C> {
    type Output = FormalSeries<C>;
    fn sub(self, rhs: Self) -> FormalSeries<C> {
        self.try_sub(rhs).expect("series mismatch")
    }
}

/// Finite Laurent polynomial in the central fiber variable `eta` with
/// polynomial coefficients on the base.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaLaurent {
    nvars: usize,
    terms: BTreeMap<i32, PolyFn>,
}

impl EtaLaurent {
    pub fn zero(nvars: usize) -> Self {
        EtaLaurent { nvars, terms: BTreeMap::new() }
    }

    /// `p * eta^power`.
    pub fn term(p: PolyFn, power: i32) -> Self {
        let mut out = Self::zero(p.nvars());
        if !p.is_zero() {
            out.terms.insert(power, p);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<i32, PolyFn> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, power: i32) -> PolyFn {
        self.terms.get(&power).cloned().unwrap_or_else(|| PolyFn::zero(self.nvars))
    }

    fn add_term(&mut self, power: i32, p: &PolyFn) {
        let cur = self.coeff(power);
        let sum = &cur + p;
        if sum.is_zero() {
            self.terms.remove(&power);
        } else {
            self.terms.insert(power, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "chart mismatch");
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(*k, p);
        }
        out
    }

    pub fn neg(&self) -> Self {
        EtaLaurent { nvars: self.nvars, terms: self.terms.iter().map(|(k, p)| (*k, -p)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "chart mismatch");
        let mut out = Self::zero(self.nvars);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                out.add_term(ka + kb, &(pa * pb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, p) in &self.terms {
            out.add_term(*k, &p.scale(c));
        }
        out
    }
}
