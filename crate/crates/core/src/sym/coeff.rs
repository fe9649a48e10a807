use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficient ring for [`Poly`](super::Poly): exact integers or exact rationals.
pub trait Coeff:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Send
    + Sync
{
    /// `self / other` if the quotient lies in the ring.
    fn exact_div(&self, other: &Self) -> Option<Self>;
    fn is_neg(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn mul_ref(&self, other: &Self) -> Self;
}

impl Coeff for BigInt {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }

    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

impl Coeff for BigRational {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }

    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

/// Correctly scaled conversion that survives numerators and denominators beyond f64 range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (ToPrimitive::to_f64(r.numer()), ToPrimitive::to_f64(r.denom())) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    // bring both to ~60 significant bits
    let n = if nb > 60 {
        r.numer() >> ((nb - 60) as usize)
    } else {
        r.numer().clone()
    };
    let d = if db > 60 {
        r.denom() >> ((db - 60) as usize)
    } else {
        r.denom().clone()
    };
    let nf = ToPrimitive::to_f64(&n).unwrap_or(0.0);
    let df = ToPrimitive::to_f64(&d).unwrap_or(1.0);
    let exp = (shift - (nb.min(60) - db.min(60))) as i32;
    nf / df * 2f64.powi(exp)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
