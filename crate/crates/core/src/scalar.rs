//! Field elements shared by every other module.
//!
//! A [`Scalar`] is either an exact rational (arbitrary precision, used for the
//! rational kernel so that identities can be checked by literal equality) or a
//! complex double (used for the trigonometric kernel and for anything that has
//! to go through an eigensolver). Mixing the two in one operation is an error.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Float divisions by a number smaller than this in magnitude are rejected.
pub const POLE_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("mixed arithmetic modes ({0} and {1})")]
    ModeMismatch(Mode, Mode),
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("division by {magnitude:e}, below the pole threshold")]
    NearPole { magnitude: f64 },
    #[error("transcendental function of an exact scalar")]
    ExactModeUnsupported,
    #[error("cannot represent {0} exactly")]
    NotRational(String),
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
}

#[derive(Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(Complex64),
}

impl Scalar {
    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Float => Scalar::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(mode: Mode) -> Self {
        Scalar::from_int(1, mode)
    }

    pub fn from_int(value: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(value))),
            Mode::Float => Scalar::Float(Complex64::new(value as f64, 0.0)),
        }
    }

    /// Exact `numer / denom`. Panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        Scalar::complex(re, 0.0)
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    /// Literal zero test; floats are not compared against a tolerance here.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Modulus as a double. Nonzero exact values never collapse to `0.0`.
    pub fn abs(&self) -> f64 {
        match self {
            Scalar::Exact(r) => {
                if r.is_zero() {
                    return 0.0;
                }
                let value = r.abs().to_f64().unwrap_or(f64::INFINITY);
                if value == 0.0 {
                    f64::MIN_POSITIVE
                } else {
                    value
                }
            }
            Scalar::Float(z) => z.norm(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(r) => Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Float(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Converts into `mode`. Floats only convert to exact when they are
    /// real dyadic rationals, which every finite real double is.
    pub fn to_mode(&self, mode: Mode) -> Result<Scalar, ScalarError> {
        match (self, mode) {
            (Scalar::Exact(_), Mode::Exact) | (Scalar::Float(_), Mode::Float) => Ok(self.clone()),
            (Scalar::Exact(_), Mode::Float) => Ok(Scalar::Float(self.to_complex())),
            (Scalar::Float(z), Mode::Exact) => {
                if z.im != 0.0 {
                    return Err(ScalarError::NotRational(format!("{z}")));
                }
                BigRational::from_float(z.re)
                    .map(Scalar::Exact)
                    .ok_or_else(|| ScalarError::NotRational(format!("{}", z.re)))
            }
        }
    }

    fn check_mode(&self, other: &Scalar) -> Result<(), ScalarError> {
        if self.mode() == other.mode() {
            Ok(())
        } else {
            Err(ScalarError::ModeMismatch(self.mode(), other.mode()))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_mode(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_mode(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_mode(other)?;
        Ok(self * other)
    }

    /// Division with pole detection: exact zero, or a float below
    /// [`POLE_THRESHOLD`], is rejected.
    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_mode(other)?;
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if b.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Exact(a / b))
                }
            }
            (Scalar::Float(a), Scalar::Float(b)) => {
                let magnitude = b.norm();
                if magnitude < POLE_THRESHOLD {
                    Err(ScalarError::NearPole { magnitude })
                } else {
                    Ok(Scalar::Float(a / b))
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn recip(&self) -> Result<Scalar, ScalarError> {
        Scalar::one(self.mode()).try_div(self)
    }

    pub fn sinh(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Exact(_) => Err(ScalarError::ExactModeUnsupported),
            Scalar::Float(z) => Ok(Scalar::Float(z.sinh())),
        }
    }

    pub fn powi(&self, exponent: u32) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(num_traits::pow(r.clone(), exponent as usize)),
            Scalar::Float(z) => Scalar::Float(z.powu(exponent)),
        }
    }

    /// Literal equality in exact mode, tolerance comparison in float mode.
    pub fn approx_eq(&self, other: &Scalar, tol: &Tolerance) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_complex(), other.to_complex());
                tol.accepts((a - b).norm(), a.norm().max(b.norm()))
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(z) => write!(f, "({}, {})", z.re, z.im),
        }
    }
}

/// Parses `"p"` or `"p/q"` as an exact rational.
impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let parse_int =
            |t: &str| BigInt::from_str(t.trim()).map_err(|_| ScalarError::Parse(s.to_owned()));
        match trimmed.split_once('/') {
            Some((p, q)) => {
                let (p, q) = (parse_int(p)?, parse_int(q)?);
                if q.is_zero() {
                    return Err(ScalarError::DivisionByZero);
                }
                Ok(Scalar::Exact(BigRational::new(p, q)))
            }
            None => Ok(Scalar::Exact(BigRational::from_integer(parse_int(
                trimmed,
            )?))),
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;

            /// Panics when the operands are in different modes; use the
            /// `try_*` methods where that can happen.
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a $op b),
                    (a, b) => panic!("mixed arithmetic modes ({} and {})", a.mode(), b.mode()),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);
binary_op!(Mul, mul, *);

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&r.to_string()),
            Scalar::Float(z) => {
                let mut tuple = serializer.serialize_tuple(2)?;
                tuple.serialize_element(&z.re)?;
                tuple.serialize_element(&z.im)?;
                tuple.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl<'de> Visitor<'de> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a \"p/q\" string, an integer, a number, or a [re, im] pair")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::from_int(v, Mode::Exact))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                i64::try_from(v)
                    .map(|v| Scalar::from_int(v, Mode::Exact))
                    .map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
                Ok(Scalar::real(v))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Scalar, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Scalar::complex(re, im))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// Absolute/relative tolerance for float comparisons. Exact comparisons
/// ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance {
        absolute: 0.0,
        relative: 0.0,
    };

    pub fn new(absolute: f64, relative: f64) -> Option<Self> {
        let valid = |x: f64| x.is_finite() && x >= 0.0;
        (valid(absolute) && valid(relative)).then_some(Tolerance { absolute, relative })
    }

    pub fn absolute(absolute: f64) -> Self {
        Tolerance {
            absolute,
            relative: 0.0,
        }
    }

    /// `difference <= absolute + relative * scale`.
    pub fn accepts(&self, difference: f64, scale: f64) -> bool {
        difference <= self.absolute + self.relative * scale
    }
}
