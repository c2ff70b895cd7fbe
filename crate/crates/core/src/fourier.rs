//! Real analytic functions on R/Z stored as finite Fourier tables.
//!
//! Only `ĥ(m)` for `0 <= m <= M` is stored; `ĥ(-m) = conj ĥ(m)` holds by
//! construction, so every table describes a real function. The decay
//! certificate `C` is the smallest constant with `|ĥ(m)| <= C e^{-τ|m|}` on
//! the table.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cfrac::{resonant_indices, ContinuedFraction};
use crate::error::{Error, Result};
use crate::phase::{CertifiedPhase, Phase};

/// Default lower bound on `||mα||` below which small divisors are refused.
pub const RESONANCE_FLOOR: f64 = 1e-30;
const REALITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticCircleFunction {
    /// ĥ(m) for m = 0..=M
    coeffs: Vec<Complex64>,
    tau: f64,
    decay_c: f64,
    /// m >= 1 with ĥ(m) != 0, ascending
    support: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    tau: f64,
    decay_c: f64,
    m_max: usize,
    /// [m, re, im] for m = -M..=M
    coefficients: Vec<(i64, f64, f64)>,
}

impl AnalyticCircleFunction {
    /// From `ĥ(0..=M)`. The imaginary part of `ĥ(0)` must vanish.
    pub fn new(mut coeffs: Vec<Complex64>, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument("decay parameter tau must be positive".into()));
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Fourier coefficient".into()));
        }
        if coeffs[0].im.abs() > REALITY_TOL {
            return Err(Error::InvariantViolation(format!("imaginary mean {} for a real function", coeffs[0].im)));
        }
        coeffs[0].im = 0.0;
        let decay_c = coeffs.iter().enumerate().map(|(m, c)| c.norm() * (tau * m as f64).exp()).fold(0.0, f64::max);
        let support = (1..coeffs.len()).filter(|&m| coeffs[m] != Complex64::new(0.0, 0.0)).collect();
        Ok(AnalyticCircleFunction { coeffs, tau, decay_c, support })
    }

    /// From `(m, ĥ(m))` pairs over both signs; `ĥ(-m)` must be the conjugate
    /// of `ĥ(m)` wherever either is listed.
    pub fn from_table(entries: &[(i64, Complex64)], tau: f64) -> Result<Self> {
        let m_max = entries.iter().map(|e| e.0.unsigned_abs() as usize).max().unwrap_or(0);
        let mut pos = vec![None; m_max + 1];
        let mut neg = vec![None; m_max + 1];
        for &(m, c) in entries {
            let slot = if m >= 0 { &mut pos[m as usize] } else { &mut neg[(-m) as usize] };
            if slot.replace(c).is_some() {
                return Err(Error::InvalidArgument(format!("coefficient {m} listed twice")));
            }
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut coeffs = vec![zero; m_max + 1];
        for m in 0..=m_max {
            let p = pos[m].unwrap_or(zero);
            let n = if m == 0 { p.conj() } else { neg[m].unwrap_or(zero) };
            if (p - n.conj()).norm() > REALITY_TOL * (1.0 + p.norm()) {
                return Err(Error::InvariantViolation(format!("coefficients at ±{m} are not conjugate")));
            }
            coeffs[m] = p;
        }
        AnalyticCircleFunction::new(coeffs, tau)
    }

    pub fn zero(m_max: usize, tau: f64) -> Self {
        AnalyticCircleFunction::new(vec![Complex64::new(0.0, 0.0); m_max + 1], tau).expect("valid")
    }

    pub fn constant(c: f64, m_max: usize, tau: f64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); m_max + 1];
        coeffs[0] = Complex64::new(c, 0.0);
        AnalyticCircleFunction::new(coeffs, tau).expect("valid")
    }

    /// `ĥ(0)` uniform in [-1, 1]; `ĥ(m) = e^{-τm} u_m` with `u_m` uniform in
    /// the unit disc.
    pub fn random_analytic(seed: u64, tau: f64, m_max: usize) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = Vec::with_capacity(m_max + 1);
        coeffs.push(Complex64::new(rng.random_range(-1.0..=1.0), 0.0));
        for m in 1..=m_max {
            let r: f64 = rng.random::<f64>().sqrt();
            let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            coeffs.push(Complex64::from_polar(r * (-tau * m as f64).exp(), angle));
        }
        AnalyticCircleFunction::new(coeffs, tau)
    }

    pub fn m_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn decay_c(&self) -> f64 {
        self.decay_c
    }

    /// Frequencies m >= 1 with nonzero coefficient.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// ĥ(m) for m = 0..=M.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// ĥ(m) for any integer m (zero outside the table).
    pub fn coefficient(&self, m: i64) -> Complex64 {
        match self.coeffs.get(m.unsigned_abs() as usize) {
            Some(&c) if m >= 0 => c,
            Some(&c) => c.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Σ_m |ĥ(m)| over all m (both signs).
    pub fn l1_norm(&self) -> f64 {
        self.coeffs[0].norm() + 2.0 * self.coeffs[1..].iter().map(|c| c.norm()).sum::<f64>()
    }

    /// Bound on the sup norm of the discarded tail `Σ_{|m|>M} C e^{-τ|m|}`
    /// of an analytic function with the same decay certificate.
    pub fn truncation_bound(&self) -> f64 {
        let q = (-self.tau).exp();
        2.0 * self.decay_c * q.powi(self.m_max() as i32 + 1) / (1.0 - q)
    }

    fn is_sparse(&self) -> bool {
        self.support.len() * 8 < self.m_max()
    }

    /// h(x) = ĥ(0) + 2 Re Σ_{m>=1} ĥ(m) e(mx).
    pub fn evaluate(&self, x: Phase) -> f64 {
        if self.is_sparse() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &m in &self.support {
                acc += self.coeffs[m] * x.wrapping_mul(m as u128).e();
            }
            self.coeffs[0].re + 2.0 * acc.re
        } else {
            let w = x.e();
            let mut acc = Complex64::new(0.0, 0.0);
            for c in self.coeffs[1..].iter().rev() {
                acc = (acc + c) * w;
            }
            self.coeffs[0].re + 2.0 * acc.re
        }
    }

    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.evaluate(Phase::from_f64(x))
    }

    /// Same function, coefficients restricted to `keep(m)` for m >= 0.
    pub fn restrict<F: Fn(usize) -> bool>(&self, keep: F) -> Self {
        let coeffs =
            self.coeffs.iter().enumerate().map(|(m, &c)| if keep(m) { c } else { Complex64::new(0.0, 0.0) }).collect();
        AnalyticCircleFunction::new(coeffs, self.tau).expect("restriction of a valid table")
    }

    /// Writes `m,re,im` for m = -M..=M.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "m,re,im")?;
        let m_max = self.m_max() as i64;
        for m in -m_max..=m_max {
            let c = self.coefficient(m);
            writeln!(w, "{m},{},{}", c.re, c.im)?;
        }
        Ok(())
    }

    pub fn from_csv(text: &str, tau: f64) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("m,re,im") {
            return Err(Error::Format("expected header m,re,im".into()));
        }
        let mut entries = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Format(format!("bad coefficient row {}: {line:?}", i + 2));
            if f.len() != 3 {
                return Err(bad());
            }
            let m: i64 = f[0].parse().map_err(|_| bad())?;
            let re: f64 = f[1].parse().map_err(|_| bad())?;
            let im: f64 = f[2].parse().map_err(|_| bad())?;
            entries.push((m, Complex64::new(re, im)));
        }
        AnalyticCircleFunction::from_table(&entries, tau)
    }

    pub fn to_json(&self) -> String {
        let m_max = self.m_max() as i64;
        let j = TableJson {
            tau: self.tau,
            decay_c: self.decay_c,
            m_max: self.m_max(),
            coefficients: (-m_max..=m_max)
                .map(|m| {
                    let c = self.coefficient(m);
                    (m, c.re, c.im)
                })
                .collect(),
        };
        serde_json::to_string(&j).expect("numbers serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: TableJson = serde_json::from_str(text)?;
        let entries: Vec<(i64, Complex64)> =
            j.coefficients.iter().map(|&(m, re, im)| (m, Complex64::new(re, im))).collect();
        AnalyticCircleFunction::from_table(&entries, j.tau)
    }
}

/// `M_{b1,b2} ∩ [-M, M]`: the multiples of `q_k` in `q_k <= |m| < b2 q_{k+1}`
/// over resonant k (`q_{k+1} > e^{τ q_k / 2}`) with `q_k >= b1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonantSet {
    /// sorted, symmetric
    pub members: Vec<i64>,
    pub b1: u64,
    pub b2: u64,
    pub tau: f64,
    pub m_max: u64,
    /// resonant k that contributed
    pub indices: Vec<usize>,
}

impl ResonantSet {
    pub fn empty(tau: f64, m_max: u64) -> Self {
        ResonantSet { members: Vec::new(), b1: 1, b2: 1, tau, m_max, indices: Vec::new() }
    }

    pub fn contains(&self, m: i64) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

pub fn resonant_set(cf: &ContinuedFraction, tau: f64, b1: u64, b2: u64, m_max: u64) -> Result<ResonantSet> {
    if b1 < 1 || b2 < 1 {
        return Err(Error::InvalidArgument("b1 and b2 must be at least 1".into()));
    }
    if cf.q_u64(cf.len()).is_some_and(|q| q <= m_max) {
        return Err(Error::InvalidArgument(format!(
            "q_K = {} <= M = {m_max}: expand the continued fraction further",
            cf.q(cf.len())
        )));
    }
    let mut members = Vec::new();
    let mut indices = Vec::new();
    for k in resonant_indices(cf, tau, b1) {
        let Some(qk) = cf.q_u64(k) else { break };
        if qk > m_max {
            break;
        }
        indices.push(k);
        // b2·q_{k+1} may be huge; only m <= M matters
        let end = cf.q_u64(k + 1).and_then(|q| q.checked_mul(b2)).unwrap_or(u64::MAX);
        let mut m = qk;
        while m < end && m <= m_max {
            members.push(m as i64);
            members.push(-(m as i64));
            m += qk;
        }
    }
    members.sort_unstable();
    members.dedup();
    Ok(ResonantSet { members, b1, b2, tau, m_max, indices })
}

/// `(h1, h2)`: h1 keeps ĥ on `M ∪ {0}`, h2 keeps the rest.
pub fn split_resonant(
    h: &AnalyticCircleFunction,
    set: &ResonantSet,
) -> (AnalyticCircleFunction, AnalyticCircleFunction) {
    let h1 = h.restrict(|m| m == 0 || set.contains(m as i64));
    let h2 = h.restrict(|m| m != 0 && !set.contains(m as i64));
    (h1, h2)
}

/// φ with `φ(x + α) − φ(x) = h2(x)`: `φ̂(m) = ĥ2(m) / (e(mα) − 1)`, `φ̂(0) = 0`.
pub fn coboundary_phi(h2: &AnalyticCircleFunction, alpha: &CertifiedPhase) -> Result<AnalyticCircleFunction> {
    coboundary_phi_with_floor(h2, alpha, RESONANCE_FLOOR)
}

pub fn coboundary_phi_with_floor(
    h2: &AnalyticCircleFunction,
    alpha: &CertifiedPhase,
    floor: f64,
) -> Result<AnalyticCircleFunction> {
    if h2.mean() != 0.0 {
        return Err(Error::InvalidArgument("a coboundary has zero mean; split off h(0) first".into()));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); h2.m_max() + 1];
    for &m in h2.support() {
        let norm = alpha.certified_norm(m as i64);
        if norm < floor {
            return Err(Error::NearResonance { m: m as i64, norm, floor });
        }
        coeffs[m] = h2.coeffs[m] / alpha.phase.wrapping_mul(m as u128).e_minus_one();
    }
    AnalyticCircleFunction::new(coeffs, h2.tau)
}

/// `ĥ(±q_k) = e^{-τ q_k} u_k` for the distinct `q_k <= M`, `k >= 1`; all
/// other coefficients zero. `u_k = 1` unless a seed asks for random phases.
pub fn furstenberg_like(
    cf: &ContinuedFraction,
    tau: f64,
    m_max: usize,
    seed: Option<u64>,
) -> Result<AnalyticCircleFunction> {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m_max + 1];
    for k in 1..=cf.len() {
        let Some(q) = cf.q_u64(k) else { break };
        if q as usize > m_max {
            break;
        }
        let u = match rng.as_mut() {
            Some(r) => Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU)),
            None => Complex64::new(1.0, 0.0),
        };
        coeffs[q as usize] = u * (-tau * q as f64).exp();
    }
    AnalyticCircleFunction::new(coeffs, tau)
}

/// Checks `||mα|| >= 1/(2|m|)` for every `0 < m <= M` that lies in some
/// `[q_k, q_{k+1})` without being a multiple of `q_k`. Returns the number of
/// frequencies checked.
pub fn check_small_divisor_bound(cf: &ContinuedFraction, alpha: &CertifiedPhase, m_max: u64) -> Result<usize> {
    let mut checked = 0;
    for k in 0..cf.len() {
        let (Some(qk), q1) = (cf.q_u64(k), cf.q_u64(k + 1).unwrap_or(u64::MAX)) else { break };
        if qk > m_max {
            break;
        }
        for m in qk..q1.min(m_max + 1) {
            if m % qk == 0 {
                continue;
            }
            checked += 1;
            if alpha.certified_norm(m as i64) < 0.5 / m as f64 {
                return Err(Error::InvariantViolation(format!("||{m} alpha|| < 1/(2*{m})")));
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfrac::{construct_liouville, expand_cf, GrowthRule, IrrationalSpec};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_and_cosine() {
        let h = AnalyticCircleFunction::constant(0.7, 10, 1.0);
        assert_eq!(h.evaluate_f64(0.3), 0.7);
        let cosine = AnalyticCircleFunction::from_table(&[(1, c(0.5, 0.0)), (-1, c(0.5, 0.0))], 1.0).unwrap();
        assert_eq!(cosine.evaluate_f64(0.0), 1.0);
        assert!(cosine.evaluate_f64(0.25).abs() < 1e-16);
    }

    #[test]
    fn rejects_non_real_tables() {
        assert!(AnalyticCircleFunction::from_table(&[(1, c(0.5, 0.1)), (-1, c(0.5, 0.1))], 1.0).is_err());
        assert!(AnalyticCircleFunction::new(vec![c(0.0, 0.5)], 1.0).is_err());
        assert!(AnalyticCircleFunction::new(vec![c(1.0, 0.0)], 0.0).is_err());
    }

    #[test]
    fn random_table_matches_reference_sum() {
        let h = AnalyticCircleFunction::random_analytic(7, 1.0, 200).unwrap();
        assert!(h.decay_c() <= 1.0);
        let x = 0.3;
        // both signs, summed from the largest frequency down
        let mut reference = c(0.0, 0.0);
        for m in (-200i64..=200).rev() {
            reference += h.coefficient(m) * Complex64::from_polar(1.0, std::f64::consts::TAU * m as f64 * x);
        }
        assert!(reference.im.abs() < 1e-14);
        assert!((h.evaluate_f64(x) - reference.re).abs() < 1e-12);
    }

    #[test]
    fn csv_and_json_round_trip() {
        let h = AnalyticCircleFunction::random_analytic(3, 0.5, 12).unwrap();
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("m,re,im\n-12,"));
        assert_eq!(AnalyticCircleFunction::from_csv(&text, 0.5).unwrap(), h);
        assert_eq!(AnalyticCircleFunction::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn golden_resonant_set() {
        let cf = expand_cf(&IrrationalSpec::golden(), 25).unwrap();
        let s = resonant_set(&cf, 1.0, 4, 1, 200).unwrap();
        assert!(s.is_empty());
        let s = resonant_set(&cf, 1.0, 3, 1, 200).unwrap();
        assert_eq!(s.members, vec![-3, 3]);
        let short = expand_cf(&IrrationalSpec::golden(), 5).unwrap();
        assert!(resonant_set(&short, 1.0, 3, 1, 200).is_err());
    }

    #[test]
    fn liouville_resonant_set() {
        let (_, cf) = construct_liouville(1.0, 10, GrowthRule::Minimal).unwrap();
        let s1 = resonant_set(&cf, 1.0, 1, 1, 200).unwrap();
        // multiples of 1 below 4, of 4 below 13, of 13 up to 200
        let mut expect: Vec<i64> = vec![1, 2, 3, 4, 8, 12];
        expect.extend((13..=200).step_by(13));
        let mut both: Vec<i64> = expect.iter().flat_map(|&m| [m, -m]).collect();
        both.sort_unstable();
        assert_eq!(s1.members, both);
        let s2 = resonant_set(&cf, 1.0, 1, 2, 200).unwrap();
        assert!(s1.members.iter().all(|&m| s2.contains(m)));
        assert!(s2.contains(16) && !s1.contains(16));
    }

    #[test]
    fn split_is_exact_partition() {
        let (_, cf) = construct_liouville(1.0, 10, GrowthRule::Minimal).unwrap();
        let h = AnalyticCircleFunction::random_analytic(11, 1.0, 200).unwrap();
        let set = resonant_set(&cf, 1.0, 1, 1, 200).unwrap();
        let (h1, h2) = split_resonant(&h, &set);
        for m in 0..=200 {
            let (a, b) = (h1.coefficients()[m], h2.coefficients()[m]);
            assert!(a == c(0.0, 0.0) || b == c(0.0, 0.0));
            assert_eq!(a + b, h.coefficients()[m]);
        }
        assert_eq!(h1.mean(), h.mean());
        let empty = ResonantSet::empty(1.0, 200);
        let (h1, h2) = split_resonant(&h, &empty);
        assert_eq!(h1.support().len(), 0);
        assert_eq!(h2.mean(), 0.0);
    }

    #[test]
    fn coboundary_of_single_mode() {
        let alpha = IrrationalSpec::golden().to_phase().unwrap();
        let h2 = AnalyticCircleFunction::from_table(&[(1, c(0.3, -0.2)), (-1, c(0.3, 0.2))], 1.0).unwrap();
        let phi = coboundary_phi(&h2, &alpha).unwrap();
        let expect = c(0.3, -0.2) / (Complex64::from_polar(1.0, std::f64::consts::TAU * alpha.phase.to_f64()) - 1.0);
        assert!((phi.coefficient(1) - expect).norm() < 1e-15);
        let mut worst = 0.0f64;
        for i in 0..10_000 {
            let x = Phase::from_f64(i as f64 / 10_000.0);
            let r = phi.evaluate(x + alpha.phase) - phi.evaluate(x) - h2.evaluate(x);
            worst = worst.max(r.abs());
        }
        assert!(worst < 1e-10);
        let zero = coboundary_phi(&AnalyticCircleFunction::zero(5, 1.0), &alpha).unwrap();
        assert!(zero.support().is_empty());
    }

    #[test]
    fn coboundary_refuses_resonance() {
        let alpha = CertifiedPhase::exact(Phase::from_f64(0.25));
        let h2 = AnalyticCircleFunction::from_table(&[(4, c(1.0, 0.0)), (-4, c(1.0, 0.0))], 1.0).unwrap();
        assert!(matches!(coboundary_phi(&h2, &alpha), Err(Error::NearResonance { m: 4, .. })));
        let with_mean = AnalyticCircleFunction::constant(1.0, 3, 1.0);
        assert!(coboundary_phi(&with_mean, &alpha).is_err());
    }

    #[test]
    fn furstenberg_support() {
        let (_, cf) = construct_liouville(1.0, 10, GrowthRule::Minimal).unwrap();
        let h = furstenberg_like(&cf, 1.0, 200, None).unwrap();
        assert_eq!(h.support(), &[1, 4, 13]);
        assert_eq!(h.mean(), 0.0);
        assert!(h.decay_c() <= 1.0 + 1e-15);
        let set = resonant_set(&cf, 1.0, 1, 1, 200).unwrap();
        let (_, h2) = split_resonant(&h, &set);
        assert!(h2.support().is_empty());
        let random = furstenberg_like(&cf, 1.0, 200, Some(5)).unwrap();
        assert!((random.coefficient(4).norm() - (-4f64).exp()).abs() < 1e-18);
    }

    #[test]
    fn small_divisor_bound_holds() {
        for spec in [IrrationalSpec::golden(), IrrationalSpec::pi_minus_3(200).unwrap()] {
            let cf = expand_cf(&spec, 30).unwrap();
            let n = check_small_divisor_bound(&cf, &spec.to_phase().unwrap(), 200).unwrap();
            assert!(n > 0);
        }
    }

    proptest! {
        #[test]
        fn evaluation_routes_agree(seed in 0u64..1000, x in 0.0f64..1.0) {
            let h = AnalyticCircleFunction::random_analytic(seed, 0.8, 40).unwrap();
            let sparse = h.restrict(|m| m == 0 || m == 3 || m == 40);
            let dense_version = {
                let mut t = sparse.coefficients().to_vec();
                // force the dense route by adding negligible modes
                for c in t.iter_mut().skip(1) {
                    if *c == Complex64::new(0.0, 0.0) {
                        *c = Complex64::new(1e-300, 0.0);
                    }
                }
                AnalyticCircleFunction::new(t, 0.8).unwrap()
            };
            let p = Phase::from_f64(x);
            prop_assert!((sparse.evaluate(p) - dense_version.evaluate(p)).abs() < 1e-13);
        }
    }
}
