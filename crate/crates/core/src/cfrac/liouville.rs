//! Liouville-type α with `q_{k+1} > e^{τ q_k / 2}` for every `k >= 1`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::real::ceil_exp_over;
use super::{expand_cf, half_tau_q, ContinuedFraction, IrrationalSpec};
use crate::error::{Error, Result};

/// Cap on the size of `e^{τ q_k / 2}` (in bits) for the next quotient.
pub const DEFAULT_MAX_Q_BITS: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GrowthRule {
    /// a_{k+1} = ceil(e^{τ q_k/2} / q_k) + 1
    Minimal,
    /// a_{k+1} = ceil(e^{factor·τ q_k/2} / q_k) + 1 with factor >= 1
    Steeper { factor: f64 },
}

/// Builds `[0; 1, a_2, …, a_K]` by the growth rule. K is reduced when the
/// next quotient would exceed [`DEFAULT_MAX_Q_BITS`] bits; it is never below 2.
pub fn construct_liouville(tau: f64, k: usize, rule: GrowthRule) -> Result<(IrrationalSpec, ContinuedFraction)> {
    construct_liouville_capped(tau, k, rule, DEFAULT_MAX_Q_BITS)
}

pub fn construct_liouville_capped(
    tau: f64,
    k: usize,
    rule: GrowthRule,
    max_bits: u64,
) -> Result<(IrrationalSpec, ContinuedFraction)> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument("tau must be positive".into()));
    }
    if k < 2 {
        return Err(Error::InvalidBound("need K >= 2".into()));
    }
    let factor = match rule {
        GrowthRule::Minimal => 1.0,
        GrowthRule::Steeper { factor } if factor >= 1.0 && factor.is_finite() => factor,
        GrowthRule::Steeper { .. } => return Err(Error::InvalidArgument("growth factor must be >= 1".into())),
    };
    let mut quotients = vec![BigUint::one()];
    let (mut q_prev, mut q) = (BigUint::one(), BigUint::one());
    while quotients.len() < k {
        let x: BigRational = half_tau_q(tau * factor, &q);
        let bits_needed = super::real::rat_to_f64(&x) / std::f64::consts::LN_2;
        if bits_needed > max_bits as f64 {
            break;
        }
        let a = ceil_exp_over(&x, &q)? + 1u32;
        let next = &a * &q + &q_prev;
        quotients.push(a);
        q_prev = std::mem::replace(&mut q, next);
    }
    if quotients.len() < 2 {
        return Err(Error::BudgetExceeded("second quotient exceeds the size cap".into()));
    }
    let spec = IrrationalSpec::Explicit(quotients);
    let cf = expand_cf(&spec, usize::MAX)?;
    Ok((spec, cf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfrac::{is_resonant, resonant_indices};
    use num_traits::ToPrimitive;

    #[test]
    fn tau_one_sequence() {
        let (_, cf) = construct_liouville(1.0, 25, GrowthRule::Minimal).unwrap();
        assert_eq!(cf.len(), 5);
        let q: Vec<u64> = (0..5).map(|k| cf.q_u64(k).unwrap()).collect();
        assert_eq!(q, vec![1, 1, 4, 13, 693]);
        // q_5 ≈ e^{346.5}
        assert_eq!(cf.q(5).bits(), 500);
        assert_eq!(resonant_indices(&cf, 1.0, 1), vec![1, 2, 3, 4]);
        cf.check_invariants().unwrap();
    }

    #[test]
    fn first_step() {
        let (_, cf) = construct_liouville(1.0, 2, GrowthRule::Minimal).unwrap();
        assert!(cf.q(2).to_f64().unwrap() > 0.5f64.exp());
        assert!(is_resonant(&cf, 1.0, 1));
    }

    #[test]
    fn steeper_rule_grows_faster() {
        let (_, a) = construct_liouville(0.5, 4, GrowthRule::Minimal).unwrap();
        let (_, b) = construct_liouville(0.5, 4, GrowthRule::Steeper { factor: 3.0 }).unwrap();
        assert!(b.q(4) > a.q(4));
        assert_eq!(resonant_indices(&b, 0.5, 1), vec![1, 2, 3]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(construct_liouville(0.0, 5, GrowthRule::Minimal).is_err());
        assert!(construct_liouville(1.0, 1, GrowthRule::Minimal).is_err());
        assert!(construct_liouville(1.0, 5, GrowthRule::Steeper { factor: 0.5 }).is_err());
    }
}
