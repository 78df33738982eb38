//! Scalar coefficients.
//!
//! Every computation runs in a single scalar mode: exact rationals for
//! derivations and certificates, `f64` for truncated-matrix numerics. The
//! generic [`Coefficient`] trait carries the static mode; [`Scalar`] is the
//! dynamically tagged form used at I/O boundaries, where mixing modes is an
//! error rather than a silent conversion.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("scalar mode mismatch: expected {expected}, found {found}")]
    ModeMismatch {
        expected: ScalarMode,
        found: ScalarMode,
    },
    #[error("cannot parse {0:?} as an exact rational (expected \"num/den\" or an integer)")]
    BadRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("non-finite float {0}")]
    NonFinite(f64),
}

/// Field element usable as a polynomial coefficient.
pub trait Coefficient:
    Num + Neg<Output = Self> + PartialOrd + Clone + fmt::Debug + Send + Sync + 'static
{
    const MODE: ScalarMode;

    /// Zero in exact mode; below `1e-12` in magnitude in float mode.
    fn is_negligible(&self) -> bool;

    fn from_int(n: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn to_scalar(&self) -> Scalar;
    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError>;
}

impl Coefficient for Rational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }

    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Exact(q) => Ok(q.clone()),
            Scalar::Float(_) => Err(ScalarError::ModeMismatch {
                expected: ScalarMode::Exact,
                found: ScalarMode::Float,
            }),
        }
    }
}

impl Coefficient for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-12
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }

    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Float(x) => Ok(*x),
            Scalar::Exact(_) => Err(ScalarError::ModeMismatch {
                expected: ScalarMode::Float,
                found: ScalarMode::Exact,
            }),
        }
    }
}

/// A mode-tagged scalar.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Exact(_) => ScalarMode::Exact,
            Scalar::Float(_) => ScalarMode::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => Coefficient::to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    fn mismatch(&self, rhs: &Scalar) -> ScalarError {
        ScalarError::ModeMismatch {
            expected: self.mode(),
            found: rhs.mode(),
        }
    }

    /// Parses `"num/den"` or an integer as exact, anything else float-like as float.
    pub fn parse(s: &str) -> Result<Scalar, ScalarError> {
        match parse_rational(s) {
            Ok(q) => Ok(Scalar::Exact(q)),
            Err(e @ ScalarError::ZeroDenominator(_)) => Err(e),
            Err(_) => {
                let x: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| ScalarError::BadRational(s.to_string()))?;
                if x.is_finite() {
                    Ok(Scalar::Float(x))
                } else {
                    Err(ScalarError::NonFinite(x))
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => f.write_str(&format_rational(q)),
            Scalar::Float(x) => write!(f, "{x:e}"),
        }
    }
}

/// Parses `"num/den"` or a bare integer. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| ScalarError::BadRational(s.to_string()))?;
    let den = BigInt::from_str(den).map_err(|_| ScalarError::BadRational(s.to_string()))?;
    if den.is_zero() {
        return Err(ScalarError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Always `"num/den"`, including integers (`"2/1"`).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Shorthand for building rationals in code and tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binary expansion of a finite float.
pub fn rational_from_f64(x: f64) -> Result<Rational, ScalarError> {
    Rational::from_f64(x).ok_or(ScalarError::NonFinite(x))
}

/// Like [`parse_rational`], but also reads plain decimals (`"0.37"`, `"-1.5"`)
/// as the exact rational they denote.
pub fn parse_decimal(s: &str) -> Result<Rational, ScalarError> {
    let t = s.trim();
    let Some((int, frac)) = t.split_once('.') else {
        return parse_rational(s);
    };
    let bad = || ScalarError::BadRational(s.to_string());
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let (neg, int) = match int.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, int.strip_prefix('+').unwrap_or(int)),
    };
    if !int.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| bad())?;
    let q = Rational::new(digits, BigInt::from(10).pow(frac.len() as u32));
    Ok(if neg { -q } else { q })
}
