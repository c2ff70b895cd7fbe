//! Continued fractions of α ∈ (0, 1).
//!
//! Convergents follow the usual indexing: `(p_{-1}, q_{-1}) = (1, 0)`,
//! `(p_0, q_0) = (0, 1)` and `q_{k+1} = a_{k+1} q_k + q_{k-1}`.
//!
//! Quadratic surds are expanded exactly with the periodic `(P + √D)/Q`
//! recurrence. Decimal literals carry an error radius and are expanded on
//! both ends of their enclosure; expansion stops with
//! [`Error::PrecisionExhausted`] once the ends disagree. An explicit quotient
//! sequence `[0; a_1, …, a_K]` denotes the rational number it spells.

mod liouville;
pub mod real;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use liouville::{construct_liouville, construct_liouville_capped, GrowthRule, DEFAULT_MAX_Q_BITS};
pub use real::Enclosure;

use crate::error::{Error, Result};
use crate::phase::{CertifiedPhase, Phase};
use real::{big_rat, exceeds_exp, floor_rat, rat_to_f64, sqrt_enclosure};

/// π − 3 to 125 decimal places.
const PI_MINUS_3: &str = "0.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrrationalSpec {
    /// `(a + b√d) / c`
    QuadraticSurd { a: BigInt, b: BigInt, d: BigInt, c: BigInt },
    /// A decimal literal whose true value lies within `2^-bits` of it.
    Decimal { digits: String, bits: u32 },
    /// `[0; a_1, …, a_K]`
    Explicit(Vec<BigUint>),
}

impl IrrationalSpec {
    /// (√5 − 1)/2 = [0; 1, 1, 1, …].
    pub fn golden() -> Self {
        IrrationalSpec::surd(-1, 1, 5, 2)
    }

    pub fn surd(a: i64, b: i64, d: i64, c: i64) -> Self {
        IrrationalSpec::QuadraticSurd { a: a.into(), b: b.into(), d: d.into(), c: c.into() }
    }

    /// π − 3 known to `bits` bits (at most 415).
    pub fn pi_minus_3(bits: u32) -> Result<Self> {
        let spec = IrrationalSpec::Decimal { digits: PI_MINUS_3.to_string(), bits };
        spec.validate()?;
        Ok(spec)
    }

    pub fn explicit(quotients: &[u64]) -> Self {
        IrrationalSpec::Explicit(quotients.iter().map(|&a| BigUint::from(a)).collect())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, IrrationalSpec::Explicit(_))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IrrationalSpec::QuadraticSurd { b, d, c, .. } => {
                if !d.is_positive() || d.sqrt().pow(2) == *d {
                    return Err(Error::InvalidArgument(format!("surd radicand {d} must be a positive nonsquare")));
                }
                if b.is_zero() || c.is_zero() {
                    return Err(Error::InvalidArgument("surd needs b != 0 and c != 0".into()));
                }
            }
            IrrationalSpec::Decimal { digits, bits } => {
                let (_, places) = parse_decimal(digits)?;
                if *bits == 0 {
                    return Err(Error::InvalidArgument("decimal precision must be positive".into()));
                }
                // 10^-places must not exceed the stated error 2^-bits
                if (places as f64) * std::f64::consts::LOG2_10 < *bits as f64 {
                    return Err(Error::InvalidArgument(format!("{places} decimal places cannot carry {bits} bits")));
                }
            }
            IrrationalSpec::Explicit(seq) => {
                if seq.is_empty() || seq.iter().any(|a| a.is_zero()) {
                    return Err(Error::InvalidArgument("partial quotients must be >= 1".into()));
                }
                return Ok(());
            }
        }
        let e = self.enclosure(64)?;
        if !(e.lo.is_positive() && e.hi < big_rat(1)) {
            return Err(Error::InvalidArgument("alpha must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Rational interval containing α. Its width is about `2^-bits` for
    /// surds, fixed by the stated precision for decimals and zero for
    /// explicit sequences.
    pub fn enclosure(&self, bits: u32) -> Result<Enclosure> {
        match self {
            IrrationalSpec::QuadraticSurd { a, b, d, c } => {
                let extra = b.bits() as u32 + 4;
                let s = sqrt_enclosure(d, bits + extra);
                let (lo, hi) = if b.is_negative() { (s.hi, s.lo) } else { (s.lo, s.hi) };
                let br = BigRational::from_integer(b.clone());
                let ar = BigRational::from_integer(a.clone());
                let cr = BigRational::from_integer(c.clone());
                let (lo, hi) = ((&ar + &br * lo) / &cr, (&ar + &br * hi) / &cr);
                Ok(if c.is_negative() { Enclosure { lo: hi, hi: lo } } else { Enclosure { lo, hi } })
            }
            IrrationalSpec::Decimal { digits, bits } => {
                let (x, _) = parse_decimal(digits)?;
                let r = BigRational::new(BigInt::one(), BigInt::one() << *bits as u64);
                Ok(Enclosure { lo: &x - &r, hi: &x + &r })
            }
            IrrationalSpec::Explicit(seq) => {
                let (p, q) = convergents(seq).pop().expect("nonempty");
                Ok(Enclosure::exact(BigRational::new(
                    BigInt::from_biguint(Sign::Plus, p),
                    BigInt::from_biguint(Sign::Plus, q),
                )))
            }
        }
    }

    /// α as a fixed-point phase with a certified error bound.
    pub fn to_phase(&self) -> Result<CertifiedPhase> {
        let e = self.enclosure(192)?;
        let mid = e.midpoint();
        let phase = Phase::from_ratio(mid.numer(), mid.denom());
        let half = rat_to_f64(&e.width()) * 0.5;
        Ok(CertifiedPhase { phase, error: half * (1.0 + 1e-15) + CertifiedPhase::ROUNDING })
    }

    pub fn to_f64(&self) -> Result<f64> {
        Ok(rat_to_f64(&self.enclosure(64)?.midpoint()))
    }
}

impl fmt::Display for IrrationalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrationalSpec::QuadraticSurd { a, b, d, c } => write!(f, "surd:{a},{b},{d},{c}"),
            IrrationalSpec::Decimal { digits, bits } => write!(f, "decimal:{digits}@{bits}"),
            IrrationalSpec::Explicit(seq) => {
                let parts: Vec<String> = seq.iter().map(|a| a.to_string()).collect();
                write!(f, "cf:{}", parts.join(","))
            }
        }
    }
}

/// Accepts `golden`, `pi-3`, `surd:a,b,d,c`, `decimal:DIGITS@BITS` and
/// `cf:a1,a2,…`.
impl FromStr for IrrationalSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse alpha spec {s:?}"));
        let spec = match s {
            "golden" => IrrationalSpec::golden(),
            "pi-3" => IrrationalSpec::pi_minus_3(200)?,
            _ => {
                let (kind, body) = s.split_once(':').ok_or_else(bad)?;
                match kind {
                    "surd" => {
                        let v: Vec<BigInt> =
                            body.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
                        if v.len() != 4 {
                            return Err(bad());
                        }
                        IrrationalSpec::QuadraticSurd {
                            a: v[0].clone(),
                            b: v[1].clone(),
                            d: v[2].clone(),
                            c: v[3].clone(),
                        }
                    }
                    "decimal" => {
                        let (digits, bits) = body.split_once('@').ok_or_else(bad)?;
                        IrrationalSpec::Decimal { digits: digits.to_string(), bits: bits.parse().map_err(|_| bad())? }
                    }
                    "cf" => IrrationalSpec::Explicit(
                        body.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?,
                    ),
                    _ => return Err(bad()),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_decimal(s: &str) -> Result<(BigRational, usize)> {
    let bad = || Error::InvalidArgument(format!("bad decimal literal {s:?}"));
    let (int, frac) = s.trim().split_once('.').unwrap_or((s.trim(), ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Ok((BigRational::new(num, den), frac.len()))
}

/// `(p_k, q_k)` for `k = 0..=K`.
fn convergents(quotients: &[BigUint]) -> Vec<(BigUint, BigUint)> {
    let mut out = Vec::with_capacity(quotients.len() + 1);
    let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::zero());
    let (mut p, mut q) = (BigUint::zero(), BigUint::one());
    out.push((p.clone(), q.clone()));
    for a in quotients {
        let pn = a * &p + &p_prev;
        let qn = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, pn);
        q_prev = std::mem::replace(&mut q, qn);
        out.push((p.clone(), q.clone()));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    alpha: IrrationalSpec,
    quotients: Vec<BigUint>,
    convergents: Vec<(BigUint, BigUint)>,
}

#[derive(Serialize, Deserialize)]
struct CfJson {
    quotients: Vec<String>,
    convergents: Vec<[String; 2]>,
}

impl ContinuedFraction {
    fn from_quotients(alpha: IrrationalSpec, quotients: Vec<BigUint>) -> Self {
        let convergents = convergents(&quotients);
        ContinuedFraction { alpha, quotients, convergents }
    }

    pub fn alpha(&self) -> &IrrationalSpec {
        &self.alpha
    }

    /// Number K of partial quotients.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// a_k for `1 <= k <= K`.
    pub fn a(&self, k: usize) -> &BigUint {
        &self.quotients[k - 1]
    }

    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    pub fn p(&self, k: usize) -> &BigUint {
        &self.convergents[k].0
    }

    pub fn q(&self, k: usize) -> &BigUint {
        &self.convergents[k].1
    }

    /// q_k as u64, or `None` if it does not fit.
    pub fn q_u64(&self, k: usize) -> Option<u64> {
        self.q(k).to_u64()
    }

    pub fn convergents(&self) -> &[(BigUint, BigUint)] {
        &self.convergents
    }

    /// `{"quotients": [...], "convergents": [["p","q"], ...]}`.
    pub fn to_json(&self) -> String {
        let j = CfJson {
            quotients: self.quotients.iter().map(|a| a.to_string()).collect(),
            convergents: self.convergents.iter().map(|(p, q)| [p.to_string(), q.to_string()]).collect(),
        };
        serde_json::to_string(&j).expect("plain strings serialize")
    }

    /// Reads the JSON form; α becomes the explicit sequence. Convergents are
    /// checked against the recurrence.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: CfJson = serde_json::from_str(s)?;
        let quotients: Vec<BigUint> = j
            .quotients
            .iter()
            .map(|a| a.parse().map_err(|_| Error::Format(format!("bad quotient {a:?}"))))
            .collect::<Result<_>>()?;
        let alpha = IrrationalSpec::Explicit(quotients.clone());
        alpha.validate()?;
        let cf = ContinuedFraction::from_quotients(alpha, quotients);
        let listed: Vec<(BigUint, BigUint)> = j
            .convergents
            .iter()
            .map(|[p, q]| match (p.parse(), q.parse()) {
                (Ok(p), Ok(q)) => Ok((p, q)),
                _ => Err(Error::Format(format!("bad convergent [{p:?}, {q:?}]"))),
            })
            .collect::<Result<_>>()?;
        if listed != cf.convergents {
            return Err(Error::Format("convergents do not follow the quotients".into()));
        }
        Ok(cf)
    }

    /// Recurrence, coprimality, determinant identity, growth and the
    /// partial-sum bound `Σ_{j<=J} q_j <= 4 q_J`.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvariantViolation(m));
        let k_max = self.len();
        if convergents(&self.quotients) != self.convergents {
            return fail("convergents do not follow the recurrence".into());
        }
        let mut partial = BigUint::zero();
        for k in 0..=k_max {
            let (p, q) = &self.convergents[k];
            if !p.gcd(q).is_one() {
                return fail(format!("gcd(p_{k}, q_{k}) != 1"));
            }
            let (pp, qp) = if k == 0 { (BigUint::one(), BigUint::zero()) } else { self.convergents[k - 1].clone() };
            let det = BigInt::from(p.clone() * &qp) - BigInt::from(pp * q);
            // (−1)^{k−1}
            let expect = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            if det != expect {
                return fail(format!("determinant identity fails at k = {k}"));
            }
            if k >= 1 {
                partial += q;
                if partial > BigUint::from(4u8) * q {
                    return fail(format!("sum of q_j exceeds 4 q_{k}"));
                }
                if k < k_max && self.q(k + 1) <= q {
                    return fail(format!("q_{} <= q_{k}", k + 1));
                }
                if k + 2 <= k_max && *self.q(k + 2) <= BigUint::from(2u8) * q {
                    return fail(format!("q_{} <= 2 q_{k}", k + 2));
                }
            }
        }
        Ok(())
    }
}

/// First K partial quotients and the convergents of α. An explicit sequence
/// yields at most its own length.
pub fn expand_cf(alpha: &IrrationalSpec, k: usize) -> Result<ContinuedFraction> {
    if k == 0 {
        return Err(Error::InvalidBound("need at least one partial quotient".into()));
    }
    alpha.validate()?;
    let quotients = match alpha {
        IrrationalSpec::Explicit(seq) => seq[..k.min(seq.len())].to_vec(),
        IrrationalSpec::QuadraticSurd { a, b, d, c } => expand_surd(a, b, d, c, k),
        IrrationalSpec::Decimal { .. } => expand_enclosure(&alpha.enclosure(0)?, k)?,
    };
    Ok(ContinuedFraction::from_quotients(alpha.clone(), quotients))
}

/// Exact expansion of `(a + b√d)/c` through `(P + √D)/Q` with `Q | D − P²`.
fn expand_surd(a: &BigInt, b: &BigInt, d: &BigInt, c: &BigInt, k: usize) -> Vec<BigUint> {
    let (a, b, c) = if b.is_negative() { (-a, -b, -c) } else { (a.clone(), b.clone(), c.clone()) };
    let cabs = c.abs();
    let big_d = &b * &b * &c * &c * d;
    let mut p = &a * &cabs;
    let mut q = &c * &cabs;
    let s = big_d.sqrt();
    let floor_term = |p: &BigInt, q: &BigInt| -> BigInt {
        if q.is_positive() {
            (p + &s).div_floor(q)
        } else {
            (p + &s + BigInt::one()).div_floor(q)
        }
    };
    let mut out = Vec::with_capacity(k);
    // a_0 = 0 for α in (0, 1); it still drives the first step
    let mut ai = floor_term(&p, &q);
    for _ in 0..k {
        p = &ai * &q - &p;
        q = (&big_d - &p * &p) / &q;
        ai = floor_term(&p, &q);
        out.push(ai.to_biguint().expect("partial quotients are positive"));
    }
    out
}

/// Expansion of every number in `[lo, hi]`; fails once the ends disagree.
fn expand_enclosure(e: &Enclosure, k: usize) -> Result<Vec<BigUint>> {
    let (mut lo, mut hi) = (e.lo.clone(), e.hi.clone());
    let mut out = Vec::with_capacity(k);
    for i in 0..=k {
        let (fl, fh) = (floor_rat(&lo), floor_rat(&hi));
        if fl != fh {
            return Err(Error::PrecisionExhausted(format!("interval no longer determines a_{i}; supply more bits")));
        }
        if i > 0 {
            out.push(fl.to_biguint().expect("positive"));
        }
        if i == k {
            break;
        }
        let fr = BigRational::from_integer(fl);
        let (rl, rh) = (&lo - &fr, &hi - &fr);
        if rl.is_zero() || rh.is_zero() {
            return Err(Error::PrecisionExhausted(format!("interval end is rational at a_{}", i + 1)));
        }
        // x -> 1/x reverses the order
        lo = rh.recip();
        hi = rl.recip();
    }
    Ok(out)
}

/// ‖θ‖, the distance from θ to the nearest integer.
pub fn circle_norm(theta: f64) -> f64 {
    (theta - theta.round()).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QnormStatus {
    /// 1/(q_{k+1}+q_k) < ‖q_k α‖ < 1/q_{k+1}, certified
    Holds,
    /// certified failure of one of the strict inequalities
    Violated,
    /// k = 0, or α rational and k at the end of its expansion
    OutOfDomain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QnormCheck {
    pub k: usize,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub status: QnormStatus,
}

/// Certifies `1/(q_{k+1} + q_k) < ‖q_k α‖ < 1/q_{k+1}`.
pub fn qnorm_check(cf: &ContinuedFraction, alpha: &IrrationalSpec, k: usize) -> Result<QnormCheck> {
    if k + 1 > cf.len() {
        return Err(Error::InvalidArgument(format!("need k + 1 <= K = {}", cf.len())));
    }
    let q = BigInt::from(cf.q(k).clone());
    let p = BigInt::from(cf.p(k).clone());
    let q1 = BigInt::from(cf.q(k + 1).clone());
    let lower = BigRational::new(BigInt::one(), &q1 + &q);
    let upper = BigRational::new(BigInt::one(), q1.clone());
    let mut report = QnormCheck {
        k,
        lower: rat_to_f64(&lower),
        value: f64::NAN,
        upper: rat_to_f64(&upper),
        status: QnormStatus::OutOfDomain,
    };
    let rational_end = alpha.is_rational() && k + 1 >= cf.len();
    let mut bits = 128u32.max(4 * q1.bits() as u32 + 64);
    loop {
        let e = alpha.enclosure(bits)?.affine(&q, &-&p);
        if let Some(v) = e.abs() {
            report.value = rat_to_f64(&v.midpoint());
            if k == 0 || rational_end {
                return Ok(report);
            }
            if v.lo > lower && v.hi < upper {
                report.status = QnormStatus::Holds;
                return Ok(report);
            }
            if alpha.is_rational() && (v.lo == lower || v.lo == upper) {
                return Ok(report);
            }
            if v.hi <= lower || v.lo >= upper {
                report.status = QnormStatus::Violated;
                return Ok(report);
            }
        } else if k == 0 || rational_end {
            return Ok(report);
        }
        if !matches!(alpha, IrrationalSpec::QuadraticSurd { .. }) || bits > 1 << 20 {
            return Err(Error::PrecisionExhausted(format!("cannot separate ||q_{k} alpha|| from its bounds")));
        }
        bits *= 2;
    }
}

/// Indices `k < K` with `q_{k+1} > e^{τ q_k / 2}` and `q_k >= b1`.
pub fn resonant_indices(cf: &ContinuedFraction, tau: f64, b1: u64) -> Vec<usize> {
    (0..cf.len()).filter(|&k| cf.q(k) >= &BigUint::from(b1) && is_resonant(cf, tau, k)).collect()
}

/// `q_{k+1} > e^{τ q_k / 2}`, certified.
pub fn is_resonant(cf: &ContinuedFraction, tau: f64, k: usize) -> bool {
    if k + 1 > cf.len() {
        return false;
    }
    let x = half_tau_q(tau, cf.q(k));
    exceeds_exp(cf.q(k + 1), &x)
}

pub(crate) fn half_tau_q(tau: f64, q: &BigUint) -> BigRational {
    let t = BigRational::from_float(tau).expect("finite tau");
    t * BigRational::from_integer(BigInt::from(q.clone())) / BigInt::from(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(cf: &ContinuedFraction) -> Vec<u64> {
        (0..=cf.len()).map(|k| cf.q_u64(k).unwrap()).collect()
    }

    #[test]
    fn golden_is_fibonacci() {
        let cf = expand_cf(&IrrationalSpec::golden(), 30).unwrap();
        assert!(cf.quotients().iter().all(|a| a.is_one()));
        let q = qs(&cf);
        assert_eq!(&q[..8], &[1, 1, 2, 3, 5, 8, 13, 21]);
        for k in 1..30 {
            assert_eq!(q[k + 1], q[k] + q[k - 1]);
        }
        cf.check_invariants().unwrap();
    }

    #[test]
    fn explicit_rational() {
        let cf = expand_cf(&IrrationalSpec::explicit(&[2, 1, 2]), 3).unwrap();
        assert_eq!(qs(&cf), vec![1, 2, 3, 8]);
        assert_eq!(cf.p(3), &BigUint::from(3u8));
        let e = cf.alpha().enclosure(10).unwrap();
        assert_eq!(e.lo, BigRational::new(3.into(), 8.into()));
    }

    #[test]
    fn pi_minus_three() {
        let alpha = IrrationalSpec::pi_minus_3(200).unwrap();
        let cf = expand_cf(&alpha, 30).unwrap();
        let a: Vec<u64> = cf.quotients().iter().map(|a| a.to_u64().unwrap()).collect();
        assert_eq!(&a[..10], &[7, 15, 1, 292, 1, 1, 1, 2, 1, 3]);
        assert_eq!(&qs(&cf)[1..5], &[7, 106, 113, 33102]);
        cf.check_invariants().unwrap();
        let short = IrrationalSpec::Decimal { digits: "0.14159265358979".into(), bits: 40 };
        assert!(matches!(expand_cf(&short, 30), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn other_surds() {
        // √2 − 1 = [0; 2, 2, 2, …]
        let cf = expand_cf(&IrrationalSpec::surd(-1, 1, 2, 1), 12).unwrap();
        assert!(cf.quotients().iter().all(|a| *a == BigUint::from(2u8)));
        // (3 − √3)/2 = 0.633… = [0; 1, 1, 1, 2, 1, 2, …]
        let cf = expand_cf(&IrrationalSpec::surd(3, -1, 3, 2), 7).unwrap();
        let a: Vec<u64> = cf.quotients().iter().map(|a| a.to_u64().unwrap()).collect();
        assert_eq!(a, vec![1, 1, 1, 2, 1, 2, 1]);
        // (1 + √7)/(−(-5)) style: negative denominators
        let cf = expand_cf(&IrrationalSpec::surd(-1, -1, 7, -4), 10).unwrap();
        let x = (1.0 + 7f64.sqrt()) / 4.0;
        let approx = cf.p(10).to_f64().unwrap() / cf.q(10).to_f64().unwrap();
        assert!((approx - x).abs() < 1e-9);
    }

    #[test]
    fn validation() {
        assert!(IrrationalSpec::surd(0, 1, 4, 3).validate().is_err());
        assert!(IrrationalSpec::surd(1, 1, 5, 2).validate().is_err());
        assert!(IrrationalSpec::explicit(&[1, 0]).validate().is_err());
        assert!(IrrationalSpec::pi_minus_3(1000).is_err());
        assert!(matches!(expand_cf(&IrrationalSpec::golden(), 0), Err(Error::InvalidBound(_))));
    }

    #[test]
    fn parse_and_display() {
        for s in ["golden", "pi-3", "surd:-1,1,2,1", "decimal:0.25390625@8", "cf:1,3,3,53"] {
            let spec: IrrationalSpec = s.parse().unwrap();
            let again: IrrationalSpec = spec.to_string().parse().unwrap();
            assert_eq!(spec, again);
        }
        assert!("nonsense".parse::<IrrationalSpec>().is_err());
    }

    #[test]
    fn circle_norm_examples() {
        assert_eq!(circle_norm(0.5), 0.5);
        assert_eq!(circle_norm(2.75), 0.25);
        assert_eq!(circle_norm(-0.1), 0.1);
    }

    #[test]
    fn qnorm_golden_five() {
        let alpha = IrrationalSpec::golden();
        let cf = expand_cf(&alpha, 10).unwrap();
        let k = (0..10).find(|&k| cf.q_u64(k) == Some(5)).unwrap();
        let r = qnorm_check(&cf, &alpha, k).unwrap();
        assert_eq!(r.status, QnormStatus::Holds);
        assert!((r.value - 0.09017).abs() < 1e-5);
        assert_eq!(r.lower, 1.0 / 13.0);
        assert_eq!(r.upper, 1.0 / 8.0);
    }

    #[test]
    fn qnorm_rational_end_is_out_of_domain() {
        let alpha = IrrationalSpec::explicit(&[2, 1, 2]);
        let cf = expand_cf(&alpha, 3).unwrap();
        assert_eq!(qnorm_check(&cf, &alpha, 1).unwrap().status, QnormStatus::Holds);
        let end = qnorm_check(&cf, &alpha, 2).unwrap();
        assert_eq!(end.status, QnormStatus::OutOfDomain);
        assert!(qnorm_check(&cf, &alpha, 3).is_err());
    }

    #[test]
    fn resonance_of_golden() {
        let cf = expand_cf(&IrrationalSpec::golden(), 25).unwrap();
        // 2 > e^{1/2}, 3 > e^1 and 5 > e^{3/2}; from q_k = 5 on,
        // q_{k+1} <= 2 q_k < e^{q_k/2}
        assert_eq!(resonant_indices(&cf, 1.0, 1), vec![1, 2, 3]);
        assert_eq!(resonant_indices(&cf, 1.0, 3), vec![3]);
        assert!(resonant_indices(&cf, 1.0, 4).is_empty());
        assert!(resonant_indices(&cf, 1.0, 1_000_000).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let cf = expand_cf(&IrrationalSpec::explicit(&[2, 1, 2]), 3).unwrap();
        let s = cf.to_json();
        assert_eq!(s, r#"{"quotients":["2","1","2"],"convergents":[["0","1"],["1","2"],["1","3"],["3","8"]]}"#);
        assert_eq!(ContinuedFraction::from_json(&s).unwrap(), cf);
        assert!(ContinuedFraction::from_json(&s.replace("\"8\"", "\"9\"")).is_err());
    }

    #[test]
    fn phase_of_golden() {
        let p = IrrationalSpec::golden().to_phase().unwrap();
        assert!((p.phase.to_f64() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-16);
        assert!(p.error < 1e-38);
    }
}
