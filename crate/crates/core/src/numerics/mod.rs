//! Exact and precision-tracked arithmetic, plus the exact simplex solver.
//!
//! Every polytopic decider in the crate runs on [`Scalar`], which is either
//! an exact element of a real quadratic field, a fixed-point ball with a
//! rigorous radius, or a tolerance-compared float coming from the quantum
//! backend. The LP engine is generic over [`Field`] so it runs unchanged on
//! plain [`Rational`]s and on [`Scalar`]s.

mod ball;
mod lp;
mod quadratic;
mod scalar;

pub use ball::{Ball, DEFAULT_PRECISION_BITS};
pub use lp::{Constraint, LinearProgram, LpError, LpResult, Objective, Relation};
pub use quadratic::{is_square_free, Quad};
pub use scalar::{Certainty, ParseScalarError, Scalar, FLOAT_TOLERANCE};

use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn from_ordering(ord: std::cmp::Ordering) -> Self {
        match ord {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        }
    }

    pub fn to_ordering(self) -> std::cmp::Ordering {
        match self {
            Sign::Negative => std::cmp::Ordering::Less,
            Sign::Zero => std::cmp::Ordering::Equal,
            Sign::Positive => std::cmp::Ordering::Greater,
        }
    }
}

/// Ordered-field operations needed by the simplex engine.
///
/// Method names avoid `add`/`mul` so they never collide with `std::ops`
/// during method resolution.
pub trait Field: Clone + std::fmt::Debug {
    fn zero_value() -> Self;
    fn one_value() -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    /// Panics when `rhs` is zero.
    fn over(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn sign(&self) -> Sign;

    fn is_zero_value(&self) -> bool {
        self.sign() == Sign::Zero
    }
    fn is_positive_value(&self) -> bool {
        self.sign() == Sign::Positive
    }
    fn is_negative_value(&self) -> bool {
        self.sign() == Sign::Negative
    }
    fn cmp_value(&self, rhs: &Self) -> std::cmp::Ordering {
        self.minus(rhs).sign().to_ordering()
    }

    /// True for enclosures whose radius grows under arithmetic.
    fn is_inexact(&self) -> bool {
        false
    }
    /// The centre of an enclosure as a zero-radius value at raised precision.
    fn sharpened(&self) -> Self {
        self.clone()
    }
    /// Undoes [`Field::sharpened`] on a computed value.
    fn restored(&self) -> Self {
        self.clone()
    }
    /// For an inexact value, the magnitude below which sharpened values
    /// computed from data of its precision are indistinguishable from zero.
    fn zero_tolerance(&self) -> Option<Self> {
        None
    }
}

impl Field for Rational {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn one_value() -> Self {
        One::one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn over(&self, rhs: &Self) -> Self {
        assert!(!Zero::is_zero(rhs), "division by zero");
        self / rhs
    }
    fn negated(&self) -> Self {
        -self
    }

    fn sign(&self) -> Sign {
        if Zero::is_zero(self) {
            Sign::Zero
        } else if Signed::is_positive(self) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// `p/q` shorthand used throughout the crate and its tests.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Ok(q) = text.parse::<Rational>() {
        return Some(q);
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: num_bigint::BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(num_bigint::BigInt::from(10), frac_part.len());
    let q = Rational::new(numer, denom);
    Some(if neg { -q } else { q })
}

/// Formats a rational as `p/q` (or `p` for integers).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}
