//! Exact-rational and double-precision probability values.
//!
//! Every table in the crate is generic over [`Scalar`]. Rational mode is the
//! default for no-signaling and classical constructions; float mode carries
//! quantum-kernel output. The two modes never mix implicitly: a
//! `Behavior<Rational>` and a `Behavior<f64>` are different types, and the
//! dynamic [`Prob`] wrapper refuses cross-mode arithmetic.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Default tolerance for float comparisons.
pub const FLOAT_TOL: f64 = 1e-9;

/// Entries above this count as "possible" in float mode.
pub const POSITIVE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Rational => f.write_str("rational"),
            Mode::Float => f.write_str("float"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ScalarError {
    #[error("cannot parse `{0}` as a rational")]
    Parse(String),
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(String),
    #[error("mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: Mode, found: Mode },
}

/// Numeric backend for probability tables.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    /// Strict positivity: `> 0` exactly, or `> 1e-12` in float mode.
    fn is_possible(&self) -> bool;

    /// Equality: exact for rationals, `|a - b| <= tol` for floats.
    fn close_to(&self, other: &Self, tol: f64) -> bool;

    fn to_prob(&self) -> Prob;
    fn from_prob(p: &Prob) -> Result<Self, ScalarError>;

    /// `ceil(self * 2^64)` clamped to `[0, 2^64]`, used by the samplers.
    fn sampling_threshold(&self) -> u128;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_possible(&self) -> bool {
        self.is_positive()
    }

    fn close_to(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_prob(&self) -> Prob {
        Prob::Exact(self.clone())
    }

    fn from_prob(p: &Prob) -> Result<Self, ScalarError> {
        match p {
            Prob::Exact(r) => Ok(r.clone()),
            Prob::Float(_) => Err(ScalarError::ModeMismatch {
                expected: Mode::Rational,
                found: Mode::Float,
            }),
        }
    }

    fn sampling_threshold(&self) -> u128 {
        let one = BigRational::one();
        if !self.is_positive() {
            return 0;
        }
        if *self >= one {
            return 1u128 << 64;
        }
        let scaled = self * BigRational::from_integer(BigInt::from(1u128 << 64));
        scaled.ceil().to_integer().to_u128().unwrap_or(1u128 << 64)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_possible(&self) -> bool {
        *self > POSITIVE_EPS
    }

    fn close_to(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn to_prob(&self) -> Prob {
        Prob::Float(*self)
    }

    fn from_prob(p: &Prob) -> Result<Self, ScalarError> {
        match p {
            Prob::Float(v) => Ok(*v),
            Prob::Exact(_) => Err(ScalarError::ModeMismatch {
                expected: Mode::Float,
                found: Mode::Rational,
            }),
        }
    }

    fn sampling_threshold(&self) -> u128 {
        if *self <= 0.0 {
            0
        } else if *self >= 1.0 {
            1u128 << 64
        } else {
            (*self * 18_446_744_073_709_551_616.0).ceil() as u128
        }
    }
}

/// A probability in either numeric mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Prob {
    Exact(Rational),
    Float(f64),
}

impl Prob {
    /// Rational probability; must lie in `[0, 1]`.
    pub fn exact(r: Rational) -> Result<Self, ScalarError> {
        if r.is_negative() || r > BigRational::one() {
            return Err(ScalarError::OutOfRange(r.to_string()));
        }
        Ok(Prob::Exact(r))
    }

    /// Float probability; values within 1e-12 of `[0, 1]` are clamped.
    pub fn float(v: f64) -> Result<Self, ScalarError> {
        if !(-POSITIVE_EPS..=1.0 + POSITIVE_EPS).contains(&v) {
            return Err(ScalarError::OutOfRange(v.to_string()));
        }
        Ok(Prob::Float(v.clamp(0.0, 1.0)))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Prob::Exact(_) => Mode::Rational,
            Prob::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Prob::Exact(r) => Scalar::to_f64(r),
            Prob::Float(v) => *v,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Prob::Exact(r) => Some(r),
            Prob::Float(_) => None,
        }
    }

    pub fn checked_add(&self, other: &Prob) -> Result<Prob, ScalarError> {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Ok(Prob::Exact(a + b)),
            (Prob::Float(a), Prob::Float(b)) => Ok(Prob::Float(a + b)),
            _ => Err(ScalarError::ModeMismatch {
                expected: self.mode(),
                found: other.mode(),
            }),
        }
    }

    pub fn checked_mul(&self, other: &Prob) -> Result<Prob, ScalarError> {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Ok(Prob::Exact(a * b)),
            (Prob::Float(a), Prob::Float(b)) => Ok(Prob::Float(a * b)),
            _ => Err(ScalarError::ModeMismatch {
                expected: self.mode(),
                found: other.mode(),
            }),
        }
    }

    /// Decimal rendering with 12 significant digits.
    pub fn to_decimal_string(&self) -> String {
        format_sig(self.to_f64(), 12)
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prob::Exact(r) => f.write_str(&format_rational(r)),
            Prob::Float(v) => write!(f, "{v}"),
        }
    }
}

/// `num/den` rendering, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let s = s.trim();
    let err = || ScalarError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| err())?,
        )),
    }
}

/// Formats a float with `digits` significant digits, trimming trailing zeros.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn rational_round_trip_and_lowest_terms() {
        let r = parse_rational("2/6").unwrap();
        assert_eq!(format_rational(&r), "1/3");
        assert_eq!(parse_rational("1").unwrap(), q(1, 1));
        assert_eq!(format_rational(&q(1, 1)), "1/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn prob_constructors_enforce_range() {
        assert!(Prob::exact(q(3, 2)).is_err());
        assert!(Prob::exact(q(-1, 2)).is_err());
        assert_eq!(Prob::float(1.0 + 5e-13).unwrap(), Prob::Float(1.0));
        assert_eq!(Prob::float(-5e-13).unwrap(), Prob::Float(0.0));
        assert!(Prob::float(1.01).is_err());
    }

    #[test]
    fn mixed_mode_arithmetic_is_refused() {
        let a = Prob::exact(q(1, 2)).unwrap();
        let b = Prob::float(0.5).unwrap();
        assert!(a.checked_add(&b).is_err());
        assert_eq!(a.checked_mul(&a).unwrap(), Prob::Exact(q(1, 4)));
    }

    #[test]
    fn thresholds() {
        assert_eq!(q(1, 2).sampling_threshold(), 1u128 << 63);
        assert_eq!(q(1, 1).sampling_threshold(), 1u128 << 64);
        assert_eq!(Rational::zero().sampling_threshold(), 0);
        // ceil(2^64 / 3)
        assert_eq!(q(1, 3).sampling_threshold(), (1u128 << 64) / 3 + 1);
        assert_eq!(0.5f64.sampling_threshold(), 1u128 << 63);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.9007834230632089, 12), "0.900783423063");
        assert_eq!(format_sig(1.0, 12), "1");
    }
}
