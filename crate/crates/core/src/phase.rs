//! Points of the circle `R/Z` in 128-bit fixed point.
//!
//! A [`Phase`] stores `θ mod 1` as `θ · 2^128` in a `u128`. Addition and
//! multiplication by integers wrap, which is exactly reduction mod 1, so
//! `x0 + n·α` is computed without drift for any `n`: the only error is the
//! initial rounding of `α` (at most `2^-129`), amplified by `n`.

use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;
const TAU: f64 = std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Phase(u128);

impl Phase {
    pub const ZERO: Phase = Phase(0);
    pub const HALF: Phase = Phase(1u128 << 127);

    pub const fn from_bits(bits: u128) -> Self {
        Phase(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// Exact fractional part of a finite double.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "phase of a non-finite value");
        let frac = x - x.floor();
        if frac >= 1.0 {
            // -tiny rounds to 1.0 after the subtraction
            return Phase::ZERO;
        }
        // frac has at most 53 significant bits, so the scaled value is an integer
        Phase((frac * TWO_POW_128) as u128)
    }

    /// `num/den mod 1`, rounded to nearest.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.sign() == Sign::Minus { (-num, -den) } else { (num.clone(), den.clone()) };
        let r = num.mod_floor(&den);
        let scaled: BigInt = (r << 128u32) + (&den >> 1u32);
        let q = scaled.div_floor(&den);
        Phase(low_u128(&q))
    }

    /// `num/den mod 1`, rounded to nearest.
    pub fn from_ratio_u64(num: u64, den: u64) -> Self {
        Phase::from_ratio(&BigInt::from(num), &BigInt::from(den))
    }

    /// Value in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        let v = self.0 as f64 / TWO_POW_128;
        if v >= 1.0 {
            0.0
        } else {
            v
        }
    }

    /// Representative in `[-1/2, 1/2)`, with full relative precision near 0.
    pub fn centered(self) -> f64 {
        (self.0 as i128) as f64 / TWO_POW_128
    }

    /// Circle norm `||θ||`, the distance to the nearest integer.
    pub fn norm(self) -> f64 {
        self.centered().abs()
    }

    pub fn wrapping_mul(self, n: u128) -> Self {
        Phase(self.0.wrapping_mul(n))
    }

    pub fn mul_i64(self, n: i64) -> Self {
        if n >= 0 {
            self.wrapping_mul(n as u128)
        } else {
            -self.wrapping_mul(n.unsigned_abs() as u128)
        }
    }

    pub fn mul_biguint(self, n: &BigUint) -> Self {
        self.wrapping_mul(low_u128(&BigInt::from(n.clone())))
    }

    /// `e(θ) = exp(2πiθ)`.
    pub fn e(self) -> Complex64 {
        // split off whole quarter turns exactly, leaving |t| <= 1/8
        const Q: u128 = 1 << 126;
        let mut quarter = self.0 >> 126;
        let mut r = (self.0 & (Q - 1)) as i128;
        if r >= (Q >> 1) as i128 {
            r -= Q as i128;
            quarter += 1;
        }
        let (s, c) = (TAU * (r as f64 / TWO_POW_128)).sin_cos();
        match quarter & 3 {
            0 => Complex64::new(c, s),
            1 => Complex64::new(-s, c),
            2 => Complex64::new(-c, -s),
            _ => Complex64::new(s, -c),
        }
    }

    /// `e(θ) - 1 = -2 sin²(πθ) + i sin(2πθ)`, accurate for small `||θ||`.
    pub fn e_minus_one(self) -> Complex64 {
        let t = self.centered();
        let s = (std::f64::consts::PI * t).sin();
        Complex64::new(-2.0 * s * s, (TAU * t).sin())
    }
}

fn low_u128(v: &BigInt) -> u128 {
    let m: BigInt = v.mod_floor(&(BigInt::from(1u8) << 128u32));
    m.to_u128().expect("reduced mod 2^128")
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_add(rhs.0))
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        self.0 = self.0.wrapping_add(rhs.0);
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_sub(rhs.0))
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase(self.0.wrapping_neg())
    }
}

/// A phase together with an absolute error bound on the real number it
/// approximates. Used for α, where `||mα||` must be certified against the
/// accumulated error `|m| · error`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedPhase {
    pub phase: Phase,
    pub error: f64,
}

impl CertifiedPhase {
    /// Rounding error of a `Phase` built by [`Phase::from_ratio`].
    pub const ROUNDING: f64 = 1.5 / TWO_POW_128;

    pub fn exact(phase: Phase) -> Self {
        CertifiedPhase { phase, error: 0.0 }
    }

    pub fn from_f64(x: f64) -> Self {
        CertifiedPhase::exact(Phase::from_f64(x))
    }

    /// `m·α mod 1` and the certified error of that value.
    pub fn multiple(&self, m: i64) -> (Phase, f64) {
        (self.phase.mul_i64(m), self.error * m.unsigned_abs() as f64)
    }

    /// Lower bound for `||mα||` valid for the true α.
    pub fn certified_norm(&self, m: i64) -> f64 {
        let (p, err) = self.multiple(m);
        (p.norm() - err).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn from_f64_matches_fractional_part() {
        assert_eq!(Phase::from_f64(0.25).to_f64(), 0.25);
        assert_eq!(Phase::from_f64(2.75).to_f64(), 0.75);
        assert_eq!(Phase::from_f64(-0.25).to_f64(), 0.75);
        assert_eq!(Phase::from_f64(-1e-300).to_f64(), 0.0);
        assert_eq!(Phase::from_f64(3.0), Phase::ZERO);
    }

    #[test]
    fn centered_and_norm() {
        assert_eq!(Phase::from_f64(0.75).centered(), -0.25);
        assert_eq!(Phase::HALF.centered(), -0.5);
        assert_eq!(Phase::HALF.norm(), 0.5);
        assert!((Phase::from_f64(-0.1).norm() - 0.1).abs() < 1e-16);
    }

    #[test]
    fn ratio_rounds_to_nearest() {
        let third = Phase::from_ratio(&BigInt::from(1), &BigInt::from(3));
        let back = third.wrapping_mul(3);
        assert!(back.bits() <= 2 || back.bits() >= u128::MAX - 2);
        let neg = Phase::from_ratio(&BigInt::from(-1), &BigInt::from(4));
        assert_eq!(neg.to_f64(), 0.75);
        let neg_den = Phase::from_ratio(&BigInt::from(1), &BigInt::from(-4));
        assert_eq!(neg_den.to_f64(), 0.75);
    }

    #[test]
    fn e_minus_one_small_angle() {
        let p = Phase::from_f64(1e-20);
        let z = p.e_minus_one();
        assert!((z.im - std::f64::consts::TAU * 1e-20).abs() < 1e-34);
        assert!(z.re.abs() < 1e-38);
    }

    #[test]
    fn mul_biguint_reduces_mod_one() {
        let p = Phase::from_f64(0.5);
        assert_eq!(p.mul_biguint(&BigUint::from(3u8)), Phase::HALF);
        let big = BigUint::from(1u8) << 200u32;
        assert_eq!(p.mul_biguint(&(big + 1u8)), Phase::HALF);
    }

    proptest! {
        #[test]
        fn incremental_addition_equals_multiplication(bits in any::<u128>(), n in 0u64..5000) {
            let a = Phase::from_bits(bits);
            let mut acc = Phase::ZERO;
            for _ in 0..n { acc += a; }
            prop_assert_eq!(acc, a.wrapping_mul(n as u128));
        }

        #[test]
        fn norm_is_distance_to_integers(x in -1e6f64..1e6) {
            let d = (x - x.round()).abs();
            prop_assert!((Phase::from_f64(x).norm() - d).abs() <= 1e-9);
        }

        #[test]
        fn negation_is_inverse(bits in any::<u128>(), other in any::<u128>()) {
            let a = Phase::from_bits(bits);
            let b = Phase::from_bits(other);
            prop_assert_eq!(a + (-a), Phase::ZERO);
            prop_assert_eq!((a + b) - b, a);
        }
    }
}
