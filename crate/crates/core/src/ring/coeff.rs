//! Coefficient fields: exact rationals and Gaussian rationals.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// Exact Gaussian rational `a + b i`.
pub type QI = Complex<BigRational>;

/// Field of polynomial coefficients.
pub trait Coeff: Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync {
    /// Splits the coefficient into a sign and an unsigned textual body for
    /// canonical printing. The body is `None` when it is exactly one.
    fn format_parts(&self) -> (bool, Option<String>);

    /// Coefficient `n / 1`.
    fn from_int(n: i64) -> Self;
}

/// Builds the rational `num / den`.
///
/// Panics if `den` is zero.
pub fn q(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn qi64(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Builds the Gaussian rational `re + im i`.
pub fn gauss(re: Q, im: Q) -> QI {
    Complex::new(re, im)
}

/// Embeds a rational as a Gaussian rational.
pub fn real(re: Q) -> QI {
    Complex::new(re, Q::zero())
}

/// The imaginary unit.
pub fn imag_unit() -> QI {
    Complex::new(Q::zero(), Q::one())
}

/// Formats a rational as `a` or `a/b` without sign handling.
pub fn fmt_rational(r: &Q) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64` to a rational.
pub fn q_to_f64(r: &Q) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

/// Nearest complex float to a Gaussian rational.
pub fn qi_to_c64(z: &QI) -> num_complex::Complex64 {
    num_complex::Complex64::new(q_to_f64(&z.re), q_to_f64(&z.im))
}

/// Complex conjugate of a Gaussian rational.
pub fn conj(z: &QI) -> QI {
    Complex::new(z.re.clone(), -z.im.clone())
}

impl Coeff for Q {
    fn format_parts(&self) -> (bool, Option<String>) {
        let neg = self.is_negative();
        let abs = self.abs();
        if abs.is_one() {
            (neg, None)
        } else {
            (neg, Some(fmt_rational(&abs)))
        }
    }

    fn from_int(n: i64) -> Self {
        qi64(n)
    }
}

impl Coeff for QI {
    fn format_parts(&self) -> (bool, Option<String>) {
        if self.im.is_zero() {
            return self.re.format_parts();
        }
        if self.re.is_zero() {
            let neg = self.im.is_negative();
            let abs = self.im.abs();
            let body = if abs.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", fmt_rational(&abs))
            };
            return (neg, Some(body));
        }
        let (re_neg, im_neg) = (self.re.is_negative(), self.im.is_negative());
        let re = if re_neg {
            format!("-{}", fmt_rational(&self.re.abs()))
        } else {
            fmt_rational(&self.re)
        };
        let im_abs = self.im.abs();
        let im = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rational(&im_abs))
        };
        (false, Some(format!("({} {} {})", re, if im_neg { "-" } else { "+" }, im)))
    }

    fn from_int(n: i64) -> Self {
        real(qi64(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parts() {
        assert_eq!(q(-1, 2).format_parts(), (true, Some("1/2".into())));
        assert_eq!(q(3, 1).format_parts(), (false, Some("3".into())));
        assert_eq!(q(-1, 1).format_parts(), (true, None));
    }

    #[test]
    fn gaussian_parts() {
        assert_eq!(gauss(q(0, 1), q(-1, 1)).format_parts(), (true, Some("i".into())));
        assert_eq!(gauss(q(0, 1), q(1, 2)).format_parts(), (false, Some("1/2*i".into())));
        assert_eq!(
            gauss(q(-1, 2), q(-1, 2)).format_parts(),
            (false, Some("(-1/2 - 1/2*i)".into()))
        );
    }
}
