//! Numeric helpers shared by the exact and floating-point code paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations needed by the enumerator transforms, implemented for `f64`
/// and exact `BigRational`.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + Send
    + Sync
{
    fn from_i128(v: i128) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact equality for rationals, `|a - b| <= tol` for floats.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn from_ratio(num: i128, den: i128) -> Self {
        Self::from_i128(num) / Self::from_i128(den)
    }
}

impl Scalar for f64 {
    fn from_i128(v: i128) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

impl Scalar for BigRational {
    fn from_i128(v: i128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

pub fn int(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Closest f64 to a rational, robust to numerators and denominators that
/// overflow f64 individually.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64 - 60;
    let scaled = if shift > 0 {
        r / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        r * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let q = scaled.round().to_integer().to_f64().unwrap_or(f64::NAN);
    q * 2f64.powi(shift as i32)
}

/// Exact rational value of a finite f64.
pub fn f64_to_ratio(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap_or_else(BigRational::zero)
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions on the exact binary value).
pub fn rationalize(v: f64, max_den: i64) -> BigRational {
    if !v.is_finite() {
        return BigRational::zero();
    }
    let neg = v < 0.0;
    let x = f64_to_ratio(v.abs());
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    let limit = BigInt::from(max_den);
    loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > limit {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    let out = if q1.is_zero() { BigRational::zero() } else { BigRational::new(p1, q1) };
    if neg {
        -out
    } else {
        out
    }
}

/// `a` and `b` agree to a relative tolerance `rel` (absolute near zero).
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

pub fn abs_ratio(r: &BigRational) -> BigRational {
    r.abs()
}
