//! Möbius correlation experiments: Davenport sums, the Möbius–orbit average,
//! two-prime correlations, the block decomposition along almost periods, the
//! character decomposition of periodic weights and short-interval averages.
//!
//! # Character decomposition constant
//!
//! For F of period Q, grouping `n` by `d = (n, Q)` and writing `n = rd` gives
//!
//! ```text
//! Σ_{L<=n<L+AQ} μ(n)F(n) = Σ_{d|Q} μ(d) Σ_{(r,Q)=1} μ(r) F(rd).
//! ```
//!
//! `r ↦ F(rd)` is periodic mod Q/d, so on units it expands as
//! `Σ_{χ mod Q/d} w_χ χ(r)` with `Σ|w_χ|² <= 1`; the condition `(r, d) = 1`
//! is carried by the principal character mod d. Cauchy–Schwarz then gives
//!
//! ```text
//! |E μF|² <= (Σ_{d|Q} d^-2) · Σ_{(d,χ)} |E_r μχ|² <= (π²/6) · Q · E_{(d,χ)} |E_r μχ|²
//! ```
//!
//! since there are exactly `Σ_{d|Q} φ(Q/d) = Q` pairs.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    character_group, divisors, gcd, m_nonpretentious, ArithmeticFunction, DirichletCharacter, MobiusTable,
    PretentiousConfig,
};
use crate::error::{Error, Result};
use crate::estimates::mrt_bound;
use crate::phase::Phase;
use crate::skew::{observe, Observable, SkewProduct, TorusPoint};
use crate::sum::{par_blocks, par_sum_complex, ComplexNeumaier, BLOCK};

/// Σ_{d>=1} d^-2, the constant in the character decomposition bound.
pub const ZETA_TWO: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// Default log-spaced checkpoints.
pub const DEFAULT_CHECKPOINTS: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicObservable {
    values: Vec<Complex64>,
}

impl PeriodicObservable {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        if values.iter().any(|v| !(v.norm() <= 1.0 + 1e-12)) {
            return Err(Error::InvalidArgument("periodic weight exceeds 1 in modulus".into()));
        }
        Ok(PeriodicObservable { values })
    }

    /// Independent uniform phases.
    pub fn random_unimodular(period: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values =
            (0..period).map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))).collect();
        PeriodicObservable { values }
    }

    pub fn from_character(chi: &DirichletCharacter) -> Self {
        PeriodicObservable { values: chi.values().to_vec() }
    }

    pub fn period(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, n: u64) -> Complex64 {
        self.values[(n % self.period()) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSeries {
    /// (N, average)
    pub checkpoints: Vec<(u64, Complex64)>,
    pub system_hash: String,
    pub observable: Observable,
    pub seed_point: TorusPoint,
}

fn check_checkpoints(checkpoints: &[u64]) -> Result<u64> {
    if checkpoints.is_empty() || checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("checkpoints must be positive and strictly increasing".into()));
    }
    Ok(*checkpoints.last().unwrap())
}

/// Σ_{1<=n<=N} of block sums, reported at each checkpoint N. Blocks are cut at
/// multiples of [`BLOCK`] and after each checkpoint, evaluated in parallel and
/// merged in order, so the result does not depend on the thread count.
fn checkpoint_sums<F>(checkpoints: &[u64], block: F) -> Result<Vec<Complex64>>
where
    F: Fn(Range<u64>) -> ComplexNeumaier + Sync,
{
    let n_max = check_checkpoints(checkpoints)?;
    let mut cuts: Vec<u64> = (1..=n_max / BLOCK as u64).map(|b| b * BLOCK as u64).collect();
    cuts.extend(checkpoints.iter().map(|&c| c + 1));
    cuts.push(1);
    cuts.sort_unstable();
    cuts.dedup();
    let segments: Vec<Range<u64>> = cuts.windows(2).map(|w| w[0]..w[1]).collect();
    let parts: Vec<ComplexNeumaier> = segments.par_iter().map(|r| block(r.clone())).collect();
    let mut acc = ComplexNeumaier::new();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for (r, part) in segments.iter().zip(parts) {
        acc.merge(part);
        if next.peek().is_some_and(|&&c| c + 1 == r.end) {
            out.push(acc.value());
            next.next();
        }
    }
    Ok(out)
}

/// `(1/N) Σ_{n<=N} μ(n) e(nβ)`.
pub fn davenport_sum(beta: Phase, n: u64, mu: &MobiusTable) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    mu.check_range(n)?;
    let s = par_sum_complex(1..n + 1, |k| match mu.get(k) {
        0 => Complex64::new(0.0, 0.0),
        m => beta.wrapping_mul(k as u128).e() * m as f64,
    });
    Ok(s / n as f64)
}

/// [`davenport_sum`] at every checkpoint in one pass.
pub fn davenport_series(beta: Phase, checkpoints: &[u64], mu: &MobiusTable) -> Result<Vec<(u64, Complex64)>> {
    mu.check_range(check_checkpoints(checkpoints)?)?;
    let sums = checkpoint_sums(checkpoints, |r| {
        r.filter(|&k| mu.get(k) != 0).map(|k| beta.wrapping_mul(k as u128).e() * mu.get(k) as f64).collect()
    })?;
    Ok(checkpoints.iter().zip(sums).map(|(&n, s)| (n, s / n as f64)).collect())
}

/// Stable identifier of a system: α bits and coefficient bits.
pub fn system_hash(t: &SkewProduct) -> String {
    let mut s = DefaultHasher::new();
    t.alpha().phase.hash(&mut s);
    t.h().tau().to_bits().hash(&mut s);
    for c in t.h().coefficients() {
        c.re.to_bits().hash(&mut s);
        c.im.to_bits().hash(&mut s);
    }
    format!("{:016x}", s.finish())
}

/// `(1/N) Σ_{n<=N} μ(n) f(T^n p0)` at each checkpoint. Every block seeds its
/// fiber coordinate with the closed-form cocycle and then iterates.
pub fn mobius_orbit_average(
    t: &SkewProduct,
    f: Observable,
    p0: &TorusPoint,
    checkpoints: &[u64],
    mu: &MobiusTable,
) -> Result<CorrelationSeries> {
    mu.check_range(check_checkpoints(checkpoints)?)?;
    let sums = checkpoint_sums(checkpoints, |r| {
        let mut acc = ComplexNeumaier::new();
        if f.xi2 == 0 {
            for n in r.filter(|&n| mu.get(n) != 0) {
                let p = TorusPoint { x: t.rotate(p0.x, n), y: Phase::ZERO };
                acc.add(observe(f, &p) * mu.get(n) as f64);
            }
            return acc;
        }
        for q in t.orbit_segment(p0, r.start, r.end) {
            let m = mu.get(q.n);
            if m != 0 {
                acc.add(observe(f, &q.point()) * m as f64);
            }
        }
        acc
    })?;
    Ok(CorrelationSeries {
        checkpoints: checkpoints.iter().zip(sums).map(|(&n, s)| (n, s / n as f64)).collect(),
        system_hash: system_hash(t),
        observable: f,
        seed_point: *p0,
    })
}

/// `(1/N) Σ_{n=1}^N e(nθ)` in closed form.
pub fn geometric_average(theta: Phase, n: u64) -> Complex64 {
    if theta == Phase::ZERO {
        return Complex64::new(1.0, 0.0);
    }
    let num = theta.wrapping_mul(n as u128).e_minus_one();
    theta.e() * num / (theta.e_minus_one() * n as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BszReport {
    pub p1: u64,
    pub p2: u64,
    pub n: u64,
    /// `(1/N) Σ f(T^{p1 n} p0) conj f(T^{p2 n} p0)`
    pub direct: Complex64,
    /// `(1/N) Σ f̃(T̃^n(0, 0))`
    pub derived: Complex64,
    pub residual: f64,
}

/// Two-prime correlation, computed along the orbit of `T` and along the
/// derived system `T̃` with `f̃(x, y) = f((p1 − p2)x, y)`.
pub fn bsz_correlation(
    t: &SkewProduct,
    f: Observable,
    p0: &TorusPoint,
    p1: u64,
    p2: u64,
    n: u64,
    budget: u64,
) -> Result<BszReport> {
    if p1 == p2 {
        return Err(Error::InvalidArgument("p1 and p2 must differ".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let len = p1.max(p2).checked_mul(n).filter(|&l| l <= budget);
    let Some(len) = len else {
        return Err(Error::BudgetExceeded(format!("orbit of length max(p1, p2)·N with N = {n}")));
    };
    let values: Vec<Complex64> = t.orbit(p0, len + 1).map(|q| observe(f, &q.point())).collect();
    let direct: ComplexNeumaier =
        (1..=n).map(|k| values[(p1 * k) as usize] * values[(p2 * k) as usize].conj()).collect();

    let derived_system = t.derived_system(p1, p2, p0.x, 1)?;
    let shift = p1 as i64 - p2 as i64;
    let ft = Observable::new(f.xi1 * shift, f.xi2);
    let derived: ComplexNeumaier =
        derived_system.orbit(&TorusPoint::ORIGIN, n + 1).skip(1).map(|q| observe(ft, &q.point())).collect();

    let direct = direct.value() / n as f64;
    let derived = derived.value() / n as f64;
    Ok(BszReport { p1, p2, n, direct, derived, residual: (direct - derived).norm() })
}

/// `F_L(n) = f(T^l p0)` for the unique `l ∈ [L, L + P)` with `l ≡ n mod P`.
pub fn periodic_from_orbit(t: &SkewProduct, f: Observable, p0: &TorusPoint, l: u64, period: u64) -> PeriodicObservable {
    let mut values = vec![Complex64::new(0.0, 0.0); period as usize];
    for q in t.orbit_segment(p0, l, l + period) {
        values[(q.n % period) as usize] = observe(f, &q.point());
    }
    PeriodicObservable { values }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockReport {
    pub n: u64,
    pub n0: u64,
    pub period: u64,
    pub a: u64,
    /// `E_{n<N} μ(n) f(T^n p0)`
    pub full: Complex64,
    /// `E_{L=N0}^{N-1} E_{n=L}^{L+AP-1} μ(n) f(T^n p0)`
    pub windowed: Complex64,
    /// `E_{L=N0}^{N-1} E_{n=L}^{L+AP-1} μ(n) F_L(n)`
    pub periodic: Complex64,
    pub boundary_discrepancy: f64,
    /// `2(AP + N0)/N`
    pub boundary_bound: f64,
    pub period_discrepancy: f64,
    /// `max |f(T^{l+aP} p0) − f(T^l p0)|` over the terms used
    pub period_defect: f64,
    pub pass: bool,
}

/// Compares the Möbius–orbit average with its re-averaging over windows of
/// length `AP` and with the periodic model `F_L`.
#[allow(clippy::too_many_arguments)]
pub fn block_decompose(
    t: &SkewProduct,
    f: Observable,
    p0: &TorusPoint,
    mu: &MobiusTable,
    n: u64,
    n0: u64,
    period: u64,
    a: u64,
) -> Result<BlockReport> {
    if period == 0 || a == 0 || n0 >= n / 2 {
        return Err(Error::InvalidArgument("need P, A >= 1 and N0 < N/2".into()));
    }
    let window = a * period;
    let end = n + window;
    mu.check_range(end)?;
    if end > 200_000_000 || a.saturating_mul(end) > 2_000_000_000 {
        return Err(Error::BudgetExceeded(format!("orbit of length {end}")));
    }
    let vals: Vec<Complex64> = {
        let parts = par_blocks(0..end, BLOCK, |r| {
            t.orbit_segment(p0, r.start, r.end).map(|q| observe(f, &q.point())).collect::<Vec<_>>()
        });
        parts.concat()
    };
    let g = |k: u64| if k == 0 { Complex64::new(0.0, 0.0) } else { vals[k as usize] * mu.get(k) as f64 };

    let full: ComplexNeumaier = (1..n).map(g).collect();
    let full = full.value() / n as f64;

    // prefix sums of g for the windows
    let mut prefix = Vec::with_capacity(end as usize + 1);
    let mut acc = ComplexNeumaier::new();
    prefix.push(acc.value());
    for k in 0..end {
        acc.add(g(k));
        prefix.push(acc.value());
    }
    let windows = n - n0;
    let windowed: ComplexNeumaier = (n0..n).map(|l| prefix[(l + window) as usize] - prefix[l as usize]).collect();
    let windowed = windowed.value() / (windows as f64 * window as f64);

    // B(l) = Σ_{a<A} μ(l + aP), then window sums of f(T^l p0)·B(l) over P terms
    let b: Vec<i64> = (0..n + period).map(|l| (0..a).map(|j| mu.get(l + j * period) as i64).sum()).collect();
    let mut defect = 0.0f64;
    for l in n0..n + period {
        for j in 1..a {
            defect = defect.max((vals[(l + j * period) as usize] - vals[l as usize]).norm());
        }
    }
    let mut pre = Vec::with_capacity((n + period) as usize + 1);
    let mut acc = ComplexNeumaier::new();
    pre.push(acc.value());
    for l in 0..n + period {
        acc.add(vals[l as usize] * b[l as usize] as f64);
        pre.push(acc.value());
    }
    let periodic: ComplexNeumaier = (n0..n).map(|l| pre[(l + period) as usize] - pre[l as usize]).collect();
    let periodic = periodic.value() / (windows as f64 * window as f64);

    let boundary_discrepancy = (full - windowed).norm();
    let boundary_bound = 2.0 * (window + n0) as f64 / n as f64;
    let period_discrepancy = (windowed - periodic).norm();
    let slack = 1e-9;
    Ok(BlockReport {
        n,
        n0,
        period,
        a,
        full,
        windowed,
        periodic,
        boundary_discrepancy,
        boundary_bound,
        period_discrepancy,
        period_defect: defect,
        pass: boundary_discrepancy <= boundary_bound + slack && period_discrepancy <= defect + slack,
    })
}

#[derive(Clone, Debug)]
pub struct CharCoefficient {
    pub chi: DirichletCharacter,
    pub w: Complex64,
}

/// Coefficients `w_χ` of `r ↦ F(rd)` on `(Z/(Q/d))^×` in the basis of all
/// characters mod Q/d (uniform probability measure), and `Σ|w_χ|²`.
pub fn char_coefficients(f: &PeriodicObservable, d: u64) -> Result<(Vec<CharCoefficient>, f64)> {
    let q = f.period();
    if d == 0 || !q.is_multiple_of(d) {
        return Err(Error::InvalidArgument(format!("{d} does not divide the period {q}")));
    }
    let chars = character_group(q / d).characters();
    let w = coefficients_in(f, d, &chars);
    let coeffs: Vec<CharCoefficient> = chars.into_iter().zip(w).map(|(chi, w)| CharCoefficient { chi, w }).collect();
    let parseval = coeffs.iter().map(|c| c.w.norm_sqr()).sum();
    Ok((coeffs, parseval))
}

/// w_χ = E_{r mod Q/d, (r,Q/d)=1} F(rd) conj(χ(r)) for each χ in `chars`.
fn coefficients_in(f: &PeriodicObservable, d: u64, chars: &[DirichletCharacter]) -> Vec<Complex64> {
    let m = f.period() / d;
    let units: Vec<u64> = (0..m).filter(|&r| gcd(r, m) == 1).collect();
    let scale = 1.0 / units.len() as f64;
    chars
        .iter()
        .map(|chi| {
            units.iter().map(|&r| f.get(r * d) * chi.value(r).conj()).collect::<ComplexNeumaier>().value() * scale
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletReport {
    pub q: u64,
    pub l: u64,
    pub a: u64,
    /// `Σ_{L<=n<L+AQ} μ(n)F(n)`
    pub lhs: Complex64,
    /// `Σ_{d|Q} μ(d) Σ_{(r,Q)=1} μ(r)F(rd)`
    pub grouped: Complex64,
    /// `Σ_{d|Q} μ(d) Σ_χ w_χ Σ_r μ(r) χ(r) χ0_d(r)`
    pub expanded: Complex64,
    pub identity_residual: f64,
    /// `|E μF|²`
    pub mean_square: f64,
    /// `E_{(d,χ)} |E_r μχ|²` over all characters mod Q/d
    pub pair_average: f64,
    pub pairs: usize,
    /// `(π²/6) · Q · pair_average`
    pub bound: f64,
    pub inequality_holds: bool,
    /// the same average restricted to primitive χ mod Q/d
    pub primitive_pair_average: f64,
    pub primitive_pairs: usize,
    pub primitive_bound: f64,
    pub parseval_max: f64,
}

/// Per-divisor data shared by every F of the same period: character tables
/// mod Q/d and the sums `Σ_{r ∈ I_d} μ(r) χ(r) χ0_d(r)`.
pub struct DirichletBasis {
    q: u64,
    l: u64,
    a: u64,
    /// (d, μ(d), characters mod Q/d, sums)
    blocks: Vec<(u64, i8, Vec<DirichletCharacter>, Vec<Complex64>)>,
}

impl DirichletBasis {
    pub fn new(q: u64, l: u64, a: u64, mu: &MobiusTable) -> Result<Self> {
        if q == 0 || a == 0 {
            return Err(Error::InvalidArgument("Q and A must be positive".into()));
        }
        mu.check_range(l + a * q)?;
        let blocks = divisors(q)
            .into_iter()
            .map(|d| {
                let chars = character_group(q / d).characters();
                let (r0, r1) = (l.div_ceil(d), (l + a * q).div_ceil(d));
                let sums = chars
                    .iter()
                    .map(|chi| {
                        (r0..r1)
                            .filter(|&r| gcd(r, d) == 1 && mu.get(r) != 0)
                            .map(|r| chi.value(r) * mu.get(r) as f64)
                            .collect::<ComplexNeumaier>()
                            .value()
                    })
                    .collect();
                (d, crate::arith::mobius_of(d), chars, sums)
            })
            .collect();
        Ok(DirichletBasis { q, l, a, blocks })
    }
}

/// The grouping identity and the character bound for one periodic F.
pub fn dirichlet_decompose(f: &PeriodicObservable, l: u64, a: u64, mu: &MobiusTable) -> Result<DirichletReport> {
    let basis = DirichletBasis::new(f.period(), l, a, mu)?;
    dirichlet_decompose_with(f, &basis, mu)
}

pub fn dirichlet_decompose_with(
    f: &PeriodicObservable,
    basis: &DirichletBasis,
    mu: &MobiusTable,
) -> Result<DirichletReport> {
    let (q, l, a) = (basis.q, basis.l, basis.a);
    if f.period() != q {
        return Err(Error::InvalidArgument("period does not match the basis".into()));
    }
    let lhs: ComplexNeumaier =
        (l..l + a * q).filter(|&n| n > 0 && mu.get(n) != 0).map(|n| f.get(n) * mu.get(n) as f64).collect();
    let lhs = lhs.value();

    let mut grouped = ComplexNeumaier::new();
    let mut expanded = ComplexNeumaier::new();
    let (mut all_sq, mut prim_sq) = (ComplexNeumaier::new(), ComplexNeumaier::new());
    let (mut pairs, mut prim_pairs) = (0usize, 0usize);
    let mut parseval_max = 0.0f64;
    for (d, mu_d, chars, sums) in &basis.blocks {
        let d = *d;
        let len = (a * q / d) as f64;
        for (chi, s) in chars.iter().zip(sums) {
            let e = (s / len).norm_sqr();
            all_sq.add(Complex64::new(e, 0.0));
            pairs += 1;
            if chi.is_primitive() {
                prim_sq.add(Complex64::new(e, 0.0));
                prim_pairs += 1;
            }
        }
        if *mu_d == 0 {
            continue;
        }
        let (r0, r1) = (l.div_ceil(d), (l + a * q).div_ceil(d));
        let inner: ComplexNeumaier =
            (r0..r1).filter(|&r| gcd(r, q) == 1 && mu.get(r) != 0).map(|r| f.get(r * d) * mu.get(r) as f64).collect();
        grouped.add(inner.value() * *mu_d as f64);

        let w = coefficients_in(f, d, chars);
        parseval_max = parseval_max.max(w.iter().map(|w| w.norm_sqr()).sum());
        let via_chars: ComplexNeumaier = w.iter().zip(sums).map(|(w, s)| w * s).collect();
        expanded.add(via_chars.value() * *mu_d as f64);
    }
    let (grouped, expanded) = (grouped.value(), expanded.value());
    let mean_square = (lhs / (a * q) as f64).norm_sqr();
    let pair_average = all_sq.value().re / pairs as f64;
    let bound = ZETA_TWO * q as f64 * pair_average;
    let primitive_pair_average = if prim_pairs > 0 { prim_sq.value().re / prim_pairs as f64 } else { 0.0 };
    Ok(DirichletReport {
        q,
        l,
        a,
        lhs,
        grouped,
        expanded,
        identity_residual: (lhs - grouped).norm().max((lhs - expanded).norm()),
        mean_square,
        pair_average,
        pairs,
        bound,
        inequality_holds: mean_square <= bound * (1.0 + 1e-12) + 1e-300,
        primitive_pair_average,
        primitive_pairs: prim_pairs,
        primitive_bound: ZETA_TWO * q as f64 * primitive_pair_average,
        parseval_max,
    })
}

/// `E_{X<=L<2X} |Σ_{L<=n<L+l} μ(n)|² / l²` in exact integer arithmetic.
pub fn short_interval_lhs_mobius(mu: &MobiusTable, x: u64, l: u64) -> Result<f64> {
    check_short_interval(x, l)?;
    mu.check_range(2 * x + l - 1)?;
    let m = |n: u64| mu.get(n) as i64;
    let parts = par_blocks(x..2 * x, BLOCK, |r| {
        let mut s: i64 = (r.start..r.start + l).map(m).sum();
        let mut sq: u128 = 0;
        for start in r {
            sq += (s * s) as u128;
            s += m(start + l) - m(start);
        }
        sq
    });
    let total: u128 = parts.into_iter().sum();
    Ok(total as f64 / (x as f64 * (l * l) as f64))
}

/// `E_{X<=L<2X} |E_{L<=n<L+l} ν(n)|²` with sliding windows; each block of L
/// starts from a directly summed window.
pub fn short_interval_lhs<A: ArithmeticFunction + ?Sized>(nu: &A, x: u64, l: u64) -> Result<f64> {
    check_short_interval(x, l)?;
    let parts = par_blocks(x..2 * x, BLOCK, |r| {
        let mut s = Complex64::new(0.0, 0.0);
        for n in r.start..r.start + l {
            s += nu.eval(n);
        }
        let mut acc = crate::sum::Neumaier::new();
        for start in r {
            acc.add(s.norm_sqr());
            s += nu.eval(start + l) - nu.eval(start);
        }
        acc
    });
    let total = crate::sum::tree_reduce(parts, |mut a, b| {
        a.merge(b);
        a
    })
    .map_or(0.0, |a| a.value());
    Ok(total / (x as f64 * (l * l) as f64))
}

fn check_short_interval(x: u64, l: u64) -> Result<()> {
    if l < 10 || x < l {
        return Err(Error::InvalidArgument(format!("need X >= l >= 10, got X = {x}, l = {l}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortIntervalReport {
    pub x: u64,
    pub l: u64,
    pub lhs: f64,
    pub m_value: f64,
    pub t_star: f64,
    /// bound without its absolute constant
    pub rhs: f64,
    pub ratio: f64,
}

pub fn short_interval_avg<A: ArithmeticFunction + ?Sized>(
    nu: &A,
    x: u64,
    l: u64,
    cfg: &PretentiousConfig,
) -> Result<ShortIntervalReport> {
    let lhs = short_interval_lhs(nu, x, l)?;
    short_interval_report(nu, x, l, lhs, cfg)
}

/// As [`short_interval_avg`] for `ν = μ`, with the exact integer LHS.
pub fn short_interval_avg_mobius(
    mu: &MobiusTable,
    x: u64,
    l: u64,
    cfg: &PretentiousConfig,
) -> Result<ShortIntervalReport> {
    let lhs = short_interval_lhs_mobius(mu, x, l)?;
    short_interval_report(&crate::arith::Mobius(mu), x, l, lhs, cfg)
}

fn short_interval_report<A: ArithmeticFunction + ?Sized>(
    nu: &A,
    x: u64,
    l: u64,
    lhs: f64,
    cfg: &PretentiousConfig,
) -> Result<ShortIntervalReport> {
    let m = m_nonpretentious(nu, x, cfg)?;
    let rhs = mrt_bound(m.value, x, l)?;
    Ok(ShortIntervalReport { x, l, lhs, m_value: m.value, t_star: m.t_star, rhs, ratio: lhs / rhs })
}

/// `Σ_{n<=X} μ(n) χ(n)`.
pub fn mu_chi_sum(chi: &DirichletCharacter, x: u64, mu: &MobiusTable) -> Result<Complex64> {
    mu.check_range(x)?;
    Ok(par_sum_complex(1..x + 1, |n| match mu.get(n) {
        0 => Complex64::new(0.0, 0.0),
        m => chi.value(n) * m as f64,
    }))
}

/// [`mu_chi_sum`] at each checkpoint.
pub fn mu_chi_series(chi: &DirichletCharacter, checkpoints: &[u64], mu: &MobiusTable) -> Result<Vec<(u64, Complex64)>> {
    mu.check_range(check_checkpoints(checkpoints)?)?;
    let sums = checkpoint_sums(checkpoints, |r| {
        r.filter(|&n| mu.get(n) != 0).map(|n| chi.value(n) * mu.get(n) as f64).collect()
    })?;
    Ok(checkpoints.iter().copied().zip(sums).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{mobius_sieve, Mobius};
    use crate::cfrac::{construct_liouville, GrowthRule, IrrationalSpec};
    use crate::fourier::{furstenberg_like, AnalyticCircleFunction};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn golden(seed: Option<u64>) -> SkewProduct {
        let h = match seed {
            Some(s) => AnalyticCircleFunction::random_analytic(s, 1.0, 60).unwrap(),
            None => AnalyticCircleFunction::zero(4, 1.0),
        };
        SkewProduct::from_spec(&IrrationalSpec::golden(), h).unwrap()
    }

    #[test]
    fn davenport_small_cases() {
        let mu = mobius_sieve(1000).unwrap();
        let beta = Phase::from_f64(0.3);
        assert_eq!(davenport_sum(beta, 1, &mu).unwrap(), beta.e());
        assert_eq!(davenport_sum(Phase::ZERO, 10, &mu).unwrap(), c(-0.1, 0.0));
        assert!(davenport_sum(beta, 1001, &mu).is_err());
        let series = davenport_series(beta, &[10, 100, 1000], &mu).unwrap();
        for (n, v) in series {
            assert!((v - davenport_sum(beta, n, &mu).unwrap()).norm() < 1e-15);
        }
    }

    #[test]
    fn orbit_average_reductions() {
        let mu = mobius_sieve(20_000).unwrap();
        let t = golden(None);
        let p0 = TorusPoint::new(0.2, 0.0);
        let s = mobius_orbit_average(&t, Observable::new(0, 1), &p0, &[10, 1000, 20_000], &mu).unwrap();
        for (n, v) in &s.checkpoints {
            assert!((v - c(mu.mertens(*n).unwrap() as f64 / *n as f64, 0.0)).norm() < 1e-15);
        }
        let g = golden(Some(1));
        let s = mobius_orbit_average(&g, Observable::new(0, 0), &p0, &[17, 20_000], &mu).unwrap();
        assert_eq!(s.checkpoints[0].1, c(mu.mertens(17).unwrap() as f64 / 17.0, 0.0));
        // ξ2 = 0 reduces to a Davenport sum at ξ1·α
        let s = mobius_orbit_average(&g, Observable::new(3, 0), &p0, &[1000, 20_000], &mu).unwrap();
        for (n, v) in s.checkpoints {
            let d = p0.x.wrapping_mul(3).e() * davenport_sum(g.alpha().phase.wrapping_mul(3), n, &mu).unwrap();
            assert!((v - d).norm() < 1e-10);
        }
    }

    #[test]
    fn orbit_average_matches_sequential_orbit() {
        let mu = mobius_sieve(40_000).unwrap();
        let g = golden(Some(2));
        let p0 = TorusPoint::new(0.7, 0.4);
        let f = Observable::new(1, 2);
        let s = mobius_orbit_average(&g, f, &p0, &[40_000], &mu).unwrap();
        let seq: ComplexNeumaier =
            g.orbit(&p0, 40_001).skip(1).map(|q| observe(f, &q.point()) * mu.get(q.n) as f64).collect();
        assert!((s.checkpoints[0].1 - seq.value() / 40_000.0).norm() < 1e-10);
    }

    #[test]
    fn bsz_routes() {
        let p0 = TorusPoint::new(0.31, 0.77);
        let g = golden(Some(3));
        let one = bsz_correlation(&g, Observable::new(0, 0), &p0, 2, 3, 100, 1 << 20).unwrap();
        assert_eq!(one.direct, c(1.0, 0.0));
        assert!(bsz_correlation(&g, Observable::new(0, 1), &p0, 3, 3, 100, 1 << 20).is_err());
        for seed in 0..5 {
            let g = golden(Some(seed));
            let r = bsz_correlation(&g, Observable::new(1, 1), &p0, 2, 5, 1000, 1 << 20).unwrap();
            assert!(r.residual < 1e-8, "{r:?}");
        }
        let r = bsz_correlation(&g, Observable::new(2, 0), &p0, 3, 7, 1000, 1 << 20).unwrap();
        let theta = g.alpha().phase.mul_i64(2 * (3 - 7));
        assert!((r.direct - geometric_average(theta, 1000)).norm() < 1e-12);
    }

    #[test]
    fn block_decomposition() {
        let mu = mobius_sieve(30_000).unwrap();
        let p0 = TorusPoint::new(0.1, 0.2);
        let t = golden(None);
        // A = 1, P = 1: a reshuffling of the same terms
        let r = block_decompose(&t, Observable::new(0, 0), &p0, &mu, 10_000, 500, 1, 1).unwrap();
        assert!(r.boundary_discrepancy <= 2.0 * 501.0 / 10_000.0);
        assert_eq!(r.period_defect, 0.0);
        assert!(r.pass);
        let (spec, cf) = construct_liouville(1.0, 10, GrowthRule::Minimal).unwrap();
        let lt = SkewProduct::from_spec(&spec, furstenberg_like(&cf, 1.0, 200, None).unwrap()).unwrap();
        let r = block_decompose(&lt, Observable::new(0, 1), &p0, &mu, 20_000, 1000, 13, 5).unwrap();
        assert!(r.pass, "{r:?}");
        // the periodic model agrees with explicit F_L on one window
        let l = 5000;
        let fl = periodic_from_orbit(&lt, Observable::new(0, 1), &p0, l, 13);
        let direct = observe(Observable::new(0, 1), &lt.orbit_segment(&p0, l + 3, l + 4).next().unwrap().point());
        assert!((fl.get(l + 3) - direct).norm() < 1e-12);
    }

    #[test]
    fn character_coefficients() {
        let one = PeriodicObservable::new(vec![c(1.0, 0.0); 7]).unwrap();
        let (w, parseval) = char_coefficients(&one, 1).unwrap();
        for cw in &w {
            let expect = if cw.chi.is_principal() { 1.0 } else { 0.0 };
            assert!((cw.w - c(expect, 0.0)).norm() < 1e-15);
        }
        assert!((parseval - 1.0).abs() < 1e-15);
        let group = character_group(15);
        let chi = group.character(5);
        let (w, _) = char_coefficients(&PeriodicObservable::from_character(&chi), 1).unwrap();
        for (i, cw) in w.iter().enumerate() {
            let expect = if i == 5 { 1.0 } else { 0.0 };
            assert!((cw.w - c(expect, 0.0)).norm() < 1e-14);
        }
        assert!(char_coefficients(&one, 2).is_err());
        let f = PeriodicObservable::random_unimodular(12, 9);
        for d in divisors(12) {
            let (w, parseval) = char_coefficients(&f, d).unwrap();
            assert_eq!(w.len() as u64, crate::arith::euler_phi(12 / d));
            assert!(parseval <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn dirichlet_examples() {
        let mu = mobius_sieve(5000).unwrap();
        let r = dirichlet_decompose(&PeriodicObservable::new(vec![c(1.0, 0.0)]).unwrap(), 0, 100, &mu).unwrap();
        assert_eq!(r.pairs, 1);
        assert!((r.mean_square - r.pair_average).abs() < 1e-15);
        let chi = character_group(4).character(1);
        let r = dirichlet_decompose(&PeriodicObservable::from_character(&chi), 0, 25, &mu).unwrap();
        assert!(r.identity_residual < 1e-12);
        assert!(r.inequality_holds && r.mean_square < r.bound);
        // exhaustive check of the n < 100 sum
        let direct: f64 = (1..100).map(|n| mu.get(n) as f64 * chi.value(n).re).sum();
        assert_eq!(r.lhs.re, direct);
        let f = PeriodicObservable::random_unimodular(12, 4);
        let r = dirichlet_decompose(&f, 1000, 100, &mu).unwrap();
        assert!(r.identity_residual < 1e-10);
        assert_eq!(r.pairs, 12);
        assert_eq!(r.primitive_pairs as u64, crate::arith::euler_phi(12));
    }

    #[test]
    fn short_interval_basics() {
        let mu = mobius_sieve(50_000).unwrap();
        let one = |_: u64| c(1.0, 0.0);
        let zero = |_: u64| c(0.0, 0.0);
        assert_eq!(short_interval_lhs(&one, 1000, 10).unwrap(), 1.0);
        assert_eq!(short_interval_lhs(&zero, 1000, 10).unwrap(), 0.0);
        assert!(short_interval_lhs(&one, 100, 9).is_err());
        // naive double loop
        let (x, l) = (10_000u64, 100u64);
        let mut naive: u128 = 0;
        for start in x..2 * x {
            let s: i64 = (start..start + l).map(|n| mu.get(n) as i64).sum();
            naive += (s * s) as u128;
        }
        let naive = naive as f64 / (x as f64 * (l * l) as f64);
        assert_eq!(short_interval_lhs_mobius(&mu, x, l).unwrap(), naive);
        assert!((short_interval_lhs(&Mobius(&mu), x, l).unwrap() - naive).abs() < 1e-12);
    }

    #[test]
    fn mu_chi_examples() {
        let mu = mobius_sieve(100).unwrap();
        assert_eq!(mu_chi_sum(&DirichletCharacter::principal(1), 10, &mu).unwrap(), c(-1.0, 0.0));
        let chi = character_group(4).character(1);
        assert_eq!(mu_chi_sum(&chi, 10, &mu).unwrap(), c(2.0, 0.0));
        assert_eq!(mu_chi_sum(&chi, 1, &mu).unwrap(), c(1.0, 0.0));
        let s = mu_chi_series(&chi, &[1, 10, 100], &mu).unwrap();
        assert_eq!(s[1].1, c(2.0, 0.0));
    }

    proptest! {
        #[test]
        fn short_interval_scaling(seed in 0u64..50, cr in -1.0f64..1.0, ci in -1.0f64..1.0) {
            let mu = mobius_sieve(3000).unwrap();
            let g = PeriodicObservable::random_unimodular(7, seed);
            let nu = |n: u64| g.get(n) * mu.get(n) as f64;
            let conj = |n: u64| nu(n).conj();
            let k = c(cr, ci) / c(cr, ci).norm().max(1.0);
            let scaled = |n: u64| nu(n) * k;
            let base = short_interval_lhs(&nu, 1000, 20).unwrap();
            prop_assert!((short_interval_lhs(&conj, 1000, 20).unwrap() - base).abs() <= 1e-12 * base.max(1e-300));
            let s = short_interval_lhs(&scaled, 1000, 20).unwrap();
            prop_assert!((s - k.norm_sqr() * base).abs() <= 1e-12 * base.max(1e-300));
        }
    }
}
