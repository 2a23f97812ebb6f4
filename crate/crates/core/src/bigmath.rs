//! Conversions from exact big numbers to `f64` that survive magnitudes far
//! beyond the `f64` exponent range of the intermediate values.

use std::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Bits kept from the top of a big integer before converting.
const MANTISSA_BITS: u64 = 64;

/// Natural log of a positive big integer, relative error around 1e-16.
///
/// Returns `-inf` for zero.
pub fn ln_biguint(value: &BigUint) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = value.bits();
    if bits <= MANTISSA_BITS {
        return value.to_f64().expect("fits").ln();
    }
    let shift = bits - MANTISSA_BITS;
    let top = (value >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * LN_2
}

/// `x · 2^exp` without overflowing intermediate powers.
fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(exp as i32)
}

/// Nearest `f64` (to within one ulp) of `num / den`.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient carries at least 64 significant bits.
    let shift = den.bits() as i64 - num.bits() as i64 + MANTISSA_BITS as i64 + 1;
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    ldexp(quotient.to_f64().expect("bounded quotient"), -shift)
}

/// Nearest `f64` of an exact rational.
pub fn rational_to_f64(value: &BigRational) -> f64 {
    let magnitude = ratio_to_f64(value.numer().magnitude(), value.denom().magnitude());
    if value.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

pub fn to_bigint(value: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, value.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn ln_of_small_and_huge_values() {
        assert_eq!(ln_biguint(&BigUint::one()), 0.0);
        assert!((ln_biguint(&BigUint::from(11u32)) - 11f64.ln()).abs() < 1e-15);
        // 3^5000: compare against 5000 ln 3
        let big = BigUint::from(3u32).pow(5000);
        let expected = 5000.0 * 3f64.ln();
        assert!((ln_biguint(&big) - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn ratios_far_outside_f64_range() {
        let a = BigUint::from(7u32) << 5000u32;
        let b = BigUint::from(2u32) << 5000u32;
        assert_eq!(ratio_to_f64(&a, &b), 3.5);
        let tiny = ratio_to_f64(&BigUint::one(), &(BigUint::one() << 1070u32));
        assert!(tiny > 0.0 && tiny < 1e-300);
        assert_eq!(
            ratio_to_f64(&BigUint::from(1u32), &BigUint::from(3u32)),
            1.0 / 3.0
        );
    }

    #[test]
    fn signed_rational() {
        let r = BigRational::new(BigInt::from(-2), BigInt::from(9));
        assert_eq!(rational_to_f64(&r), -2.0 / 9.0);
    }
}
