//! Scalar fields used throughout the crate: exact rationals and `f64`.
//!
//! Every matrix and algebra is homogeneous in one field. The exact field is
//! the default for all structural computations; `f64` exists for irrational
//! spectra, Gram-matrix inputs and the geodesic integrator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::eigen::{self, EigenError, Eigenspace};
use crate::linalg::Matrix;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Relative threshold below which a float pivot is treated as zero.
pub const FLOAT_RANK_TOL: f64 = 1e-9;

/// Absolute tolerance for float symmetry / skewness checks.
pub const FLOAT_SYMMETRY_TOL: f64 = 1e-12;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for the exact rational field.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    /// Zero test for rank decisions. `scale` is the magnitude of the data the
    /// value was computed from; exact scalars ignore it.
    fn is_negligible(&self, scale: f64) -> bool;

    /// Absolute-tolerance comparison; exact equality for rationals.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn is_zero(&self) -> bool {
        self.is_negligible(1.0)
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Spectral decomposition of a symmetric matrix in this field.
    fn symmetric_eigen(m: &Matrix<Self>) -> Result<Vec<Eigenspace<Self>>, EigenError>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn symmetric_eigen(m: &Matrix<Self>) -> Result<Vec<Eigenspace<Self>>, EigenError> {
        eigen::exact_symmetric_eigen(m)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ratio_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_RANK_TOL * scale.max(1.0)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn symmetric_eigen(m: &Matrix<Self>) -> Result<Vec<Eigenspace<Self>>, EigenError> {
        eigen::float_symmetric_eigen(m)
    }
}

fn ratio_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Very large numerator/denominator: shift both down before dividing.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer().abs() >> shift).to_f64().unwrap_or(f64::MAX);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::MAX);
    let v = n / d;
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// `p` or `p/q`, the textual form used by the file format and reports.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal literal (`-0.25`) into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_digits}{frac_part}");
        let mut n: BigInt = digits.parse().ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac_part.len());
        return Some(Rational::new(n, d));
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Shorthand for small rational literals, mostly used in tests and fixtures.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}
