use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{parse_rational, Ball, Field, Quad, Rational, Sign, DEFAULT_PRECISION_BITS};

/// Absolute tolerance applied to [`Scalar::Float`] comparisons.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// How much a verdict can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Certainty {
    /// Every number involved was an exact field element.
    Exact,
    /// Some number carried a rounding radius or a float tolerance.
    CertifiedWithinPrecision,
}

impl Certainty {
    pub fn and(self, other: Certainty) -> Certainty {
        self.max(other)
    }
}

/// A real number in one of three representations.
///
/// Arithmetic between an exact value and an approximate one yields the
/// approximate representation; floats absorb everything. Two exact values
/// from different quadratic fields fall back to balls.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Quad),
    Approx(Ball),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Quad::rational(Rational::zero()))
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(Quad::rational(Rational::from_integer(BigInt::from(v))))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Quad::rational(super::ratio(num, den)))
    }

    pub fn rational(q: Rational) -> Self {
        Scalar::Exact(Quad::rational(q))
    }

    /// `a + b·√k`.
    pub fn quad(a: Rational, b: Rational, k: u32) -> Self {
        Scalar::Exact(Quad::new(a, b, k))
    }

    pub fn float(v: f64) -> Self {
        Scalar::Float(v)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) if q.is_rational() => Some(q.a()),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn certainty(&self) -> Certainty {
        if self.is_exact() {
            Certainty::Exact
        } else {
            Certainty::CertifiedWithinPrecision
        }
    }

    /// Quadratic field parameter of an exact value (1 for rationals).
    pub fn field_k(&self) -> Option<u32> {
        match self {
            Scalar::Exact(q) => Some(q.k()),
            _ => None,
        }
    }

    pub fn sign(&self) -> Sign {
        match self {
            Scalar::Exact(q) => q.sign(),
            Scalar::Approx(b) => b.sign(),
            Scalar::Float(v) => {
                if v.abs() <= FLOAT_TOLERANCE {
                    Sign::Zero
                } else if *v > 0.0 {
                    Sign::Positive
                } else {
                    Sign::Negative
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Sign::Zero
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64(),
            Scalar::Approx(b) => b.to_f64(),
            Scalar::Float(v) => *v,
        }
    }

    pub fn to_ball(&self, bits: u32) -> Option<Ball> {
        match self {
            Scalar::Exact(q) => {
                let a = Ball::from_rational(q.a(), bits);
                if q.is_rational() {
                    return Some(a);
                }
                let b = Ball::from_rational(q.b(), bits);
                let root = Ball::sqrt_rational(&Rational::from_integer(q.k().into()), bits);
                Some(a.add(&b.mul(&root)))
            }
            Scalar::Approx(b) => Some(b.clone()),
            Scalar::Float(_) => None,
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.sign() == Sign::Negative {
            -self
        } else {
            self.clone()
        }
    }

    pub fn max_of(self, other: Scalar) -> Scalar {
        if self.cmp_value(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Structural identity: same representation, same stored digits. This is
    /// what file round-trips must preserve; `==` compares values.
    pub fn identical(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Approx(a), Scalar::Approx(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }

    fn combine(
        &self,
        rhs: &Scalar,
        exact: impl Fn(&Quad, &Quad) -> Option<Quad>,
        ball: impl Fn(&Ball, &Ball) -> Ball,
        float: impl Fn(f64, f64) -> f64,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => Scalar::Float(float(self.to_f64(), rhs.to_f64())),
            (Scalar::Exact(a), Scalar::Exact(b)) => match exact(a, b) {
                Some(q) => Scalar::Exact(q),
                None => {
                    let (x, y) = (
                        self.to_ball(DEFAULT_PRECISION_BITS).expect("exact converts"),
                        rhs.to_ball(DEFAULT_PRECISION_BITS).expect("exact converts"),
                    );
                    Scalar::Approx(ball(&x, &y))
                }
            },
            _ => {
                let bits = match (self, rhs) {
                    (Scalar::Approx(a), Scalar::Approx(b)) => a.bits().min(b.bits()),
                    (Scalar::Approx(a), _) | (_, Scalar::Approx(a)) => a.bits(),
                    _ => DEFAULT_PRECISION_BITS,
                };
                let x = self.to_ball(bits).expect("non-float converts");
                let y = rhs.to_ball(bits).expect("non-float converts");
                Scalar::Approx(ball(&x, &y))
            }
        }
    }

    /// Parses the compact text form used in behavior and weight files:
    /// `p/q`, a finite decimal, `p/q+r/s*sqrt(k)`, `~<float>`, or
    /// `ball(<mid>,<rad>,<bits>)`.
    pub fn parse_token(text: &str) -> Result<Scalar, ParseScalarError> {
        let t = text.trim();
        let err = || ParseScalarError(t.to_string());
        if let Some(rest) = t.strip_prefix('~') {
            return rest.trim().parse::<f64>().map(Scalar::Float).map_err(|_| err());
        }
        if let Some(inner) = t.strip_prefix("ball(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(err());
            }
            let mid: BigInt = parts[0].parse().map_err(|_| err())?;
            let rad: BigInt = parts[1].parse().map_err(|_| err())?;
            let bits: u32 = parts[2].parse().map_err(|_| err())?;
            if rad < BigInt::zero() {
                return Err(err());
            }
            return Ok(Scalar::Approx(Ball::from_parts(mid, rad, bits)));
        }
        if let Some(pos) = t.find("sqrt(") {
            let k_text = t[pos + 5..].strip_suffix(')').ok_or_else(err)?;
            let k: u32 = k_text.trim().parse().map_err(|_| err())?;
            if !super::quadratic::is_square_free(k) {
                return Err(err());
            }
            let head = &t[..pos];
            // head looks like "a+b*" / "a-b*" / "b*" / "-" / "" / "a+" / "a-"
            let head = head.strip_suffix('*').unwrap_or(head);
            let split = head.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
            let (a_text, b_text) = match split {
                Some(i) => (&head[..i], &head[i..]),
                None => ("0", head),
            };
            let a = parse_rational(a_text).ok_or_else(err)?;
            let b = match b_text {
                "" | "+" => Rational::from_integer(1.into()),
                "-" => Rational::from_integer((-1).into()),
                other => parse_rational(other).ok_or_else(err)?,
            };
            return Ok(Scalar::quad(a, b, k));
        }
        parse_rational(t).map(Scalar::rational).ok_or_else(err)
    }

    /// Inverse of [`Scalar::parse_token`]; round-trips bit-exactly.
    pub fn to_token(&self) -> String {
        match self {
            Scalar::Exact(q) => q.to_string(),
            Scalar::Approx(b) => format!("ball({},{},{})", b.mid(), b.rad(), b.bits()),
            Scalar::Float(v) => format!("~{v:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar `{0}`")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scalar::parse_token(s)
    }
}

/// Extra bits carried while the simplex pivots on enclosures.
const SHARPENING_BITS: u32 = 256;

impl Field for Scalar {
    fn zero_value() -> Self {
        Scalar::zero()
    }
    fn one_value() -> Self {
        Scalar::one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.combine(rhs, Quad::checked_add, Ball::add, |a, b| a + b)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.combine(rhs, Quad::checked_sub, Ball::sub, |a, b| a - b)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.combine(rhs, Quad::checked_mul, Ball::mul, |a, b| a * b)
    }
    fn over(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        self.combine(rhs, Quad::checked_div, Ball::div, |a, b| a / b)
    }
    fn negated(&self) -> Self {
        match self {
            Scalar::Exact(q) => Scalar::Exact(Quad::new(-q.a().clone(), -q.b().clone(), q.k())),
            Scalar::Approx(b) => Scalar::Approx(b.neg()),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }
    fn sign(&self) -> Sign {
        Scalar::sign(self)
    }
    fn is_inexact(&self) -> bool {
        matches!(self, Scalar::Approx(_))
    }
    fn sharpened(&self) -> Self {
        match self {
            Scalar::Approx(b) => Scalar::Approx(Ball::from_parts(
                b.mid() << SHARPENING_BITS as usize,
                BigInt::zero(),
                b.bits() + SHARPENING_BITS,
            )),
            other => other.clone(),
        }
    }
    fn zero_tolerance(&self) -> Option<Self> {
        match self {
            Scalar::Approx(b) => {
                let bits = b.bits() + SHARPENING_BITS;
                let mid = BigInt::from(1) << (bits - b.bits() / 2) as usize;
                Some(Scalar::Approx(Ball::from_parts(mid, BigInt::zero(), bits)))
            }
            _ => None,
        }
    }
    fn restored(&self) -> Self {
        match self {
            Scalar::Approx(b) if b.bits() > SHARPENING_BITS => Scalar::Approx(b.with_bits(b.bits() - SHARPENING_BITS)),
            other => other.clone(),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $field:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Field::$field(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Field::$field(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Field::$field(&self, rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Field::$field(self, &rhs)
            }
        }
    };
}

scalar_binop!(Add, add, plus);
scalar_binop!(Sub, sub, minus);
scalar_binop!(Mul, mul, times);
scalar_binop!(Div, div, over);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.negated()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.negated()
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

/// Value equality: exact for field elements, within precision otherwise.
impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.minus(other).is_zero()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<Ball> for Scalar {
    fn from(b: Ball) -> Self {
        Scalar::Approx(b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Approx(b) => write!(f, "{b}"),
            Scalar::Float(v) => write!(f, "{v:.12}±{FLOAT_TOLERANCE:.0e}"),
        }
    }
}
