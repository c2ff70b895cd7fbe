//! Rational enclosures of real numbers and certified comparisons against
//! `e^x` for rational `x >= 0`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn exact(x: BigRational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    /// `a·[lo, hi] + b` for integers `a >= 0`, `b`.
    pub fn affine(&self, a: &BigInt, b: &BigInt) -> Enclosure {
        assert!(!a.is_negative());
        let a = BigRational::from_integer(a.clone());
        let b = BigRational::from_integer(b.clone());
        Enclosure { lo: &self.lo * &a + &b, hi: &self.hi * &a + &b }
    }

    /// Enclosure of `|x|`; `None` when the interval contains 0 in its
    /// interior, i.e. the sign is undecided.
    pub fn abs(&self) -> Option<Enclosure> {
        if !self.lo.is_negative() {
            Some(self.clone())
        } else if !self.hi.is_positive() {
            Some(Enclosure { lo: -&self.hi, hi: -&self.lo })
        } else {
            None
        }
    }
}

pub(crate) fn rat_to_f64(x: &BigRational) -> f64 {
    // scale so that the quotient has ~64 significant bits
    let num = x.numer();
    let den = x.denom();
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 { (num << shift as u64) / den } else { num / (den << (-shift) as u64) };
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

pub(crate) fn big_rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Enclosure of `√d` of width `2^-bits`.
pub(crate) fn sqrt_enclosure(d: &BigInt, bits: u32) -> Enclosure {
    assert!(!d.is_negative());
    let scaled: BigInt = d << (2 * bits as u64);
    let r = scaled.sqrt();
    let den = BigInt::one() << bits as u64;
    let lo = BigRational::new(r.clone(), den.clone());
    let hi = if &r * &r == scaled { lo.clone() } else { BigRational::new(r + 1, den) };
    Enclosure { lo, hi }
}

/// Fixed-point bounds `[lo, hi] / 2^prec` on `e^x` for rational `x >= 0`.
fn exp_fixed(x: &BigRational, prec: u64) -> (BigInt, BigInt) {
    assert!(!x.is_negative());
    // halve until y = x / 2^s <= 1/2
    let mut s = 0u64;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut y = x.clone();
    while y > half {
        y /= BigInt::from(2);
        s += 1;
    }
    let p = prec + s + 16;
    let one: BigInt = BigInt::one() << p;
    let (yn, yd) = (y.numer().clone(), y.denom().clone());

    // Taylor series; truncating every term keeps the lower sum a lower bound,
    // rounding up and adding twice the last term bounds the tail for y <= 1/2
    let mut lo = one.clone();
    let mut term = one.clone();
    let mut i = 1u64;
    while !term.is_zero() {
        term = (&term * &yn) / (&yd * i);
        lo += &term;
        i += 1;
    }
    let mut hi = one.clone();
    let mut term = one;
    let mut i = 1u64;
    loop {
        let d = &yd * i;
        term = (&term * &yn + &d - 1u32).div_floor(&d);
        hi += &term;
        i += 1;
        if term <= BigInt::one() {
            break;
        }
    }
    hi += 2 * term + 1;

    for _ in 0..s {
        lo = (&lo * &lo) >> p;
        let sq = &hi * &hi;
        let floor: BigInt = &sq >> p;
        hi = if (&floor << p) == sq { floor } else { floor + 1 };
    }
    (lo >> (s + 16), (hi >> (s + 16)) + 1)
}

/// Enclosure of `e^x`, relative width about `2^-prec`.
pub fn exp_enclosure(x: &BigRational, prec: u64) -> Enclosure {
    let (lo, hi) = exp_fixed(x, prec);
    let den = BigInt::one() << prec;
    Enclosure { lo: BigRational::new(lo, den.clone()), hi: BigRational::new(hi, den) }
}

/// Certified `q > e^x` for rational `x >= 0`.
pub fn exceeds_exp(q: &BigUint, x: &BigRational) -> bool {
    if x.is_zero() {
        return *q > BigUint::one();
    }
    // coarse decision from bit lengths: q in [2^(b-1), 2^b)
    let b = q.bits() as f64;
    let xf = rat_to_f64(x);
    let ln2 = std::f64::consts::LN_2;
    if xf > b * ln2 + 1.0 {
        return false;
    }
    if xf < (b - 1.0) * ln2 - 1.0 {
        return true;
    }
    let qr = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, q.clone()));
    let mut prec = 64 + q.bits();
    loop {
        let e = exp_enclosure(x, prec);
        // e^x is irrational for rational x != 0, so one side eventually wins
        if qr > e.hi {
            return true;
        }
        if qr < e.lo {
            return false;
        }
        prec *= 2;
    }
}

/// `ceil(e^x / q)` for rational `x > 0` and `q >= 1`.
pub fn ceil_exp_over(x: &BigRational, q: &BigUint) -> Result<BigUint> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("exponent must be positive".into()));
    }
    let qi = BigInt::from_biguint(Sign::Plus, q.clone());
    let xf = rat_to_f64(x);
    let mut prec = 64 + (xf / std::f64::consts::LN_2).max(0.0) as u64;
    loop {
        let e = exp_enclosure(x, prec);
        let lo = ceil_rat(&(&e.lo / BigRational::from_integer(qi.clone())));
        let hi = ceil_rat(&(&e.hi / BigRational::from_integer(qi.clone())));
        if lo == hi {
            return Ok(lo.to_biguint().expect("positive"));
        }
        prec *= 2;
        if prec > 1 << 24 {
            return Err(Error::PrecisionExhausted("exponential bound undecided".into()));
        }
    }
}

pub(crate) fn ceil_rat(x: &BigRational) -> BigInt {
    x.numer().div_ceil(x.denom())
}

pub(crate) fn floor_rat(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exp_encloses_reference_values() {
        for (x, reference) in [(r(1, 2), 0.5f64.exp()), (r(1, 1), 1f64.exp()), (r(13, 2), 6.5f64.exp()), (r(0, 1), 1.0)]
        {
            let e = exp_enclosure(&x, 100);
            assert!(e.lo <= e.hi);
            assert!((rat_to_f64(&e.lo) - reference).abs() <= 1e-13 * reference);
            assert!(rat_to_f64(&e.width()) < 1e-25 * reference);
        }
    }

    #[test]
    fn exp_of_large_argument() {
        // e^{346.5} ≈ 2^{499.9}
        let e = exp_enclosure(&r(693, 2), 80);
        let lo_bits = floor_rat(&e.lo).bits();
        assert_eq!(lo_bits, 500);
        let rel = rat_to_f64(&(e.width() / &e.lo));
        assert!(rel < 1e-20);
    }

    #[test]
    fn exceeds_exp_decisions() {
        let x = r(1, 2);
        assert!(!exceeds_exp(&BigUint::from(1u8), &x));
        assert!(exceeds_exp(&BigUint::from(2u8), &x));
        let x = r(2, 1); // e^2 = 7.389
        assert!(!exceeds_exp(&BigUint::from(7u8), &x));
        assert!(exceeds_exp(&BigUint::from(8u8), &x));
        assert!(exceeds_exp(&BigUint::from(1000u32), &r(6, 1)));
        assert!(!exceeds_exp(&BigUint::from(403u32), &r(6, 1)));
    }

    #[test]
    fn ceil_exp_over_small() {
        assert_eq!(ceil_exp_over(&r(1, 2), &BigUint::from(1u8)).unwrap(), BigUint::from(2u8));
        assert_eq!(ceil_exp_over(&r(2, 1), &BigUint::from(4u8)).unwrap(), BigUint::from(2u8));
        assert_eq!(ceil_exp_over(&r(13, 2), &BigUint::from(13u8)).unwrap(), BigUint::from(52u8));
    }

    #[test]
    fn sqrt_bounds() {
        let e = sqrt_enclosure(&BigInt::from(5), 64);
        let sq_lo = &e.lo * &e.lo;
        let sq_hi = &e.hi * &e.hi;
        assert!(sq_lo < big_rat(5) && sq_hi > big_rat(5));
        let e = sqrt_enclosure(&BigInt::from(16), 10);
        assert_eq!(e.lo, big_rat(4));
        assert_eq!(e.hi, big_rat(4));
    }

    #[test]
    fn abs_of_enclosure() {
        let e = Enclosure { lo: r(-3, 1), hi: r(-1, 1) };
        assert_eq!(e.abs().unwrap(), Enclosure { lo: r(1, 1), hi: r(3, 1) });
        assert!(Enclosure { lo: r(-1, 1), hi: r(1, 1) }.abs().is_none());
    }
}
