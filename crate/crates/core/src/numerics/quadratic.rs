use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Field, Rational, Sign};

/// An element `a + b·√k` of the real quadratic field `Q(√k)`.
///
/// `k` is a square-free integer greater than one, or `1` for plain
/// rationals. Values with `b = 0` are normalized to `k = 1` so that they mix
/// freely with every field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    a: Rational,
    b: Rational,
    k: u32,
}

/// Returns true when `k` has no repeated prime factor.
pub fn is_square_free(k: u32) -> bool {
    if k == 0 {
        return false;
    }
    let mut p = 2u32;
    while p.saturating_mul(p) <= k {
        if k.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl Quad {
    /// Panics if `k` is not square-free.
    pub fn new(a: Rational, b: Rational, k: u32) -> Self {
        assert!(is_square_free(k), "field parameter {k} is not square-free");
        if b.is_zero() || k == 1 {
            let a = if k == 1 { a + b } else { a };
            Quad { a, b: Rational::zero(), k: 1 }
        } else {
            Quad { a, b, k }
        }
    }

    pub fn rational(a: Rational) -> Self {
        Quad { a, b: Rational::zero(), k: 1 }
    }

    /// `√k` itself.
    pub fn sqrt(k: u32) -> Self {
        Quad::new(Rational::zero(), Rational::one(), k)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Common field of two operands, or `None` if they live in different
    /// quadratic extensions.
    pub fn common_field(&self, other: &Quad) -> Option<u32> {
        match (self.k, other.k) {
            (1, k) | (k, 1) => Some(k),
            (k1, k2) if k1 == k2 => Some(k1),
            _ => None,
        }
    }

    pub fn checked_add(&self, rhs: &Quad) -> Option<Quad> {
        let k = self.common_field(rhs)?;
        Some(Quad::new(&self.a + &rhs.a, &self.b + &rhs.b, k))
    }

    pub fn checked_sub(&self, rhs: &Quad) -> Option<Quad> {
        let k = self.common_field(rhs)?;
        Some(Quad::new(&self.a - &rhs.a, &self.b - &rhs.b, k))
    }

    pub fn checked_mul(&self, rhs: &Quad) -> Option<Quad> {
        let k = self.common_field(rhs)?;
        let kq = Rational::from_integer(BigInt::from(k));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * kq;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Some(Quad::new(a, b, k))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Quad> {
        if self.is_zero() {
            return None;
        }
        let kq = Rational::from_integer(BigInt::from(self.k));
        // a² − k·b² is nonzero because √k is irrational
        let norm = &self.a * &self.a - &self.b * &self.b * kq;
        Some(Quad::new(&self.a / &norm, -(&self.b) / &norm, self.k))
    }

    pub fn checked_div(&self, rhs: &Quad) -> Option<Quad> {
        self.checked_mul(&rhs.inverse()?)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of `a + b√k`.
    pub fn sign(&self) -> Sign {
        let sa = self.a.sign();
        let sb = self.b.sign();
        match (sa, sb) {
            (s, Sign::Zero) => s,
            (Sign::Zero, s) => s,
            (x, y) if x == y => x,
            _ => {
                let kq = Rational::from_integer(BigInt::from(self.k));
                let a2 = &self.a * &self.a;
                let b2k = &self.b * &self.b * kq;
                if a2 > b2k {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = rational_to_f64(&self.a);
        let b = rational_to_f64(&self.b);
        a + b * f64::from(self.k).sqrt()
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sqrt = format!("sqrt({})", self.k);
        let b_abs = self.b.abs();
        let b_part = if b_abs.is_one() { sqrt } else { format!("{b_abs}*{sqrt}") };
        match (self.a.is_zero(), self.b.is_negative()) {
            (true, false) => write!(f, "{b_part}"),
            (true, true) => write!(f, "-{b_part}"),
            (false, false) => write!(f, "{}+{b_part}", self.a),
            (false, true) => write!(f, "{}-{b_part}", self.a),
        }
    }
}
