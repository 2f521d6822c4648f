use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rational, Sign};

/// Working precision used for non-constructible coordinates.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Guard bits used while evaluating series; they absorb the truncation and
/// argument-reduction error so the final radius stays within two ulps.
const GUARD_BITS: u32 = 64;

/// A fixed-point ball `[mid − rad, mid + rad] · 2^−bits`.
///
/// Every operation returns a ball that contains the exact result of the
/// operation applied to any points of the operand balls. A ball whose
/// interval contains zero has sign [`Sign::Zero`]: that is the "equal within
/// precision" reading used by the deciders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    bits: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// Division rounded to nearest (ties away from zero).
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    let twice: BigInt = &r * 2;
    if twice.abs() >= den.abs() {
        // floor division leaves r with the sign of den
        if den.is_positive() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn div_ceil_pos(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

impl Ball {
    pub fn from_parts(mid: BigInt, rad: BigInt, bits: u32) -> Self {
        assert!(!rad.is_negative(), "ball radius must be non-negative");
        Ball { mid, rad, bits }
    }

    pub fn mid(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad(&self) -> &BigInt {
        &self.rad
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        let scaled = q.numer() * pow2(bits);
        let mid = div_round(&scaled, q.denom());
        let exact = (&mid * q.denom()) == scaled;
        let rad = if exact { BigInt::zero() } else { BigInt::one() };
        Ball { mid, rad, bits }
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        Ball { mid: BigInt::from(v) << bits as usize, rad: BigInt::zero(), bits }
    }

    /// Ball around `√q` for a non-negative rational `q`.
    pub fn sqrt_rational(q: &Rational, bits: u32) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        // floor(q · 2^{2·bits}) then integer square root
        let scaled = (q.numer() << (2 * bits as usize)).div_floor(q.denom());
        let mid = scaled.sqrt();
        Ball { mid, rad: BigInt::from(2), bits }
    }

    /// Re-expresses the ball at a coarser precision.
    pub fn with_bits(&self, bits: u32) -> Self {
        if bits == self.bits {
            return self.clone();
        }
        if bits > self.bits {
            let shift = (bits - self.bits) as usize;
            return Ball { mid: &self.mid << shift, rad: &self.rad << shift, bits };
        }
        let shift = pow2(self.bits - bits);
        let mid = div_round(&self.mid, &shift);
        let rad = div_ceil_pos(&self.rad, &shift) + 1;
        Ball { mid, rad, bits }
    }

    fn aligned(&self, other: &Ball) -> (Ball, Ball) {
        let bits = self.bits.min(other.bits);
        (self.with_bits(bits), other.with_bits(bits))
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let (x, y) = self.aligned(other);
        Ball { mid: x.mid + y.mid, rad: x.rad + y.rad, bits: x.bits }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        let (x, y) = self.aligned(other);
        Ball { mid: x.mid - y.mid, rad: x.rad + y.rad, bits: x.bits }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: -&self.mid, rad: self.rad.clone(), bits: self.bits }
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let (x, y) = self.aligned(other);
        let scale = pow2(x.bits);
        let mid = div_round(&(&x.mid * &y.mid), &scale);
        let spread = x.mid.abs() * &y.rad + y.mid.abs() * &x.rad + &x.rad * &y.rad;
        let rounding = if (&mid * &scale) == (&x.mid * &y.mid) { 0 } else { 1 };
        let rad = div_ceil_pos(&spread, &scale) + rounding;
        Ball { mid, rad, bits: x.bits }
    }

    /// Panics if the divisor ball contains zero.
    pub fn div(&self, other: &Ball) -> Ball {
        let (x, y) = self.aligned(other);
        let ym = y.mid.abs();
        assert!(ym > y.rad, "division by a ball that contains zero");
        let scale = pow2(x.bits);
        let mid = div_round(&(&x.mid * &scale), &y.mid);
        let spread = (x.mid.abs() * &y.rad + &ym * &x.rad) * &scale;
        let denom = &ym * (&ym - &y.rad);
        let rad = div_ceil_pos(&spread, &denom) + 1;
        Ball { mid, rad, bits: x.bits }
    }

    /// Sign, with [`Sign::Zero`] whenever the ball straddles zero.
    pub fn sign(&self) -> Sign {
        if self.mid.abs() <= self.rad {
            Sign::Zero
        } else if self.mid.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    /// Lower and upper end points as rationals.
    pub fn bounds(&self) -> (Rational, Rational) {
        let den = pow2(self.bits);
        (Rational::new(&self.mid - &self.rad, den.clone()), Rational::new(&self.mid + &self.rad, den))
    }

    pub fn midpoint(&self) -> Rational {
        Rational::new(self.mid.clone(), pow2(self.bits))
    }

    pub fn radius(&self) -> Rational {
        Rational::new(self.rad.clone(), pow2(self.bits))
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.bits.saturating_sub(60) as usize;
        let top = (&self.mid >> shift).to_f64().unwrap_or(f64::NAN);
        top / 2f64.powi((self.bits as usize - shift) as i32)
    }

    /// π as a ball.
    pub fn pi(bits: u32) -> Ball {
        let w = bits + GUARD_BITS;
        let one = pow2(w);
        // Machin: π = 16·atan(1/5) − 4·atan(1/239)
        let pi = atan_inv(5, &one) * 16 - atan_inv(239, &one) * 4;
        Ball { mid: pi, rad: BigInt::from(1u64 << 20), bits: w }.with_bits(bits)
    }

    /// `cos(π·p/q)` as a ball.
    pub fn cos_pi_frac(p: i64, q: i64, bits: u32) -> Ball {
        trig_pi_frac(p, q, bits, true)
    }

    /// `sin(π·p/q)` as a ball.
    pub fn sin_pi_frac(p: i64, q: i64, bits: u32) -> Ball {
        trig_pi_frac(p, q, bits, false)
    }
}

/// atan(1/x) in fixed point with unit `one`; error stays below a few
/// hundred units, far under the guard bits.
fn atan_inv(x: u64, one: &BigInt) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = one / &x;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn trig_pi_frac(p: i64, q: i64, bits: u32, cosine: bool) -> Ball {
    assert!(q != 0, "zero denominator in angle");
    let (mut p, mut q) = (p as i128, q as i128);
    if q < 0 {
        p = -p;
        q = -q;
    }
    // reduce the angle to π·p/q with p/q ∈ (−1, 1]
    let two_q = 2 * q;
    p = p.rem_euclid(two_q);
    if p > q {
        p -= two_q;
    }
    let w = bits + GUARD_BITS;
    let one = pow2(w);
    let pi = atan_inv(5, &one) * 16 - atan_inv(239, &one) * 4;
    let theta = div_round(&(pi * BigInt::from(p)), &BigInt::from(q));
    let theta2 = div_round(&(&theta * &theta), &one);
    // Taylor series: cos = Σ (−1)^k θ^{2k}/(2k)!, sin = Σ (−1)^k θ^{2k+1}/(2k+1)!
    let mut term = if cosine { one.clone() } else { theta.clone() };
    let mut sum = BigInt::zero();
    let mut n: i64 = if cosine { 0 } else { 1 };
    let mut positive = true;
    while !term.is_zero() {
        if positive {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = div_round(&(&term * &theta2), &one);
        term = div_round(&term, &BigInt::from((n + 1) * (n + 2)));
        n += 2;
        positive = !positive;
    }
    let rad = BigInt::from(1u64 << 24);
    Ball { mid: sum, rad, bits: w }.with_bits(bits)
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rad = self.radius();
        let rad_f = super::quadratic::rational_to_f64(&rad);
        write!(f, "{:.15}±{:.1e}", self.to_f64(), rad_f)
    }
}
