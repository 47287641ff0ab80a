//! Scalar abstraction shared by every routine in the crate.
//!
//! The deciders are only meaningful over an exact field ([`Rational`]); the
//! floating-point instances exist for the numerical falsifier and for quick
//! experiments where rounding is acceptable.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used by every decider.
pub type Rational = BigRational;

/// Field-like scalar: exact rationals or IEEE floats.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact, so `is_zero` is a trustworthy singularity test.
    const EXACT: bool;

    /// Nearest representable value to `x`; exact types use the continued-fraction
    /// convergent with denominator at most `max_denominator`.
    fn from_f64_approx(x: f64, max_denominator: u64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every scalar type represents small integers")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b { a.clone() } else { b.clone() }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b { a.clone() } else { b.clone() }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_f64_approx(x: f64, max_denominator: u64) -> Self {
        snap_to_rational(x, max_denominator)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64_approx(x: f64, _max_denominator: u64) -> Self {
        x
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_f64_approx(x: f64, _max_denominator: u64) -> Self {
        x as f32
    }
}

/// Best rational approximation of `x` with denominator `<= max_denominator`.
///
/// Walks the continued-fraction convergents and finishes with the best
/// semiconvergent, so the result is the closest fraction within the bound.
pub fn snap_to_rational(x: f64, max_denominator: u64) -> BigRational {
    if !x.is_finite() {
        return BigRational::zero();
    }
    let exact = match BigRational::from_float(x) {
        Some(r) => r,
        None => return BigRational::zero(),
    };
    let max_den = BigInt::from(max_denominator.max(1));
    if exact.denom() <= &max_den {
        return exact;
    }

    // convergents p/q of the exact binary value
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let q2 = &q0 + &a * &q1;
        if q2 > max_den {
            // best semiconvergent with the remaining denominator room
            let k = (&max_den - &q0).div_floor(&q1);
            let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
            let conv = BigRational::new(p1.clone(), q1.clone());
            let d_semi = (&semi - &exact).abs();
            let d_conv = (&conv - &exact).abs();
            return if d_semi < d_conv { semi } else { conv };
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return BigRational::new(p1, q1);
        }
        rest = frac.recip();
    }
}
