//! Pretentious distance and the minimum of 𝔻(ν, n^{it}, X)² over |t| <= T.
//!
//! With `c_p = ν(p)/p` and `λ_p = ln p`,
//! `𝔻(ν, n^{it}, X)² = Σ_p 1/p − Re Σ_p c_p e^{-itλ_p}`. The second sum is
//! needed on a uniform t-grid, which is a type-1 non-uniform Fourier
//! transform of the points `step·λ_p`. Small problems are summed directly.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nufft::Type1Plan;
use super::{primes_up_to, ArithmeticFunction};
use crate::error::{Error, Result};
use crate::sum::Neumaier;

/// Modes per NUFFT chunk.
const CHUNK: usize = 1 << 16;
/// Grid size × prime count below which the grid is summed directly.
const DIRECT_WORK: f64 = 2e7;
/// Grid points whose approximate value is within this of the best one are
/// re-evaluated exactly before choosing the minimiser.
const CANDIDATE_SLACK: f64 = 1e-8;
const MAX_GRID: f64 = 4e9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PretentiousConfig {
    /// Search range |t| <= t_bound; `None` means t_bound = X.
    pub t_bound: Option<f64>,
    pub grid_step: f64,
    pub refine_iters: u32,
}

impl Default for PretentiousConfig {
    fn default() -> Self {
        PretentiousConfig { t_bound: None, grid_step: 0.01, refine_iters: 30 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PretentiousMinimum {
    /// min(grid minimum, refined minimum); an upper bound for the infimum
    pub value: f64,
    pub t_star: f64,
    /// best grid point and its exact value
    pub grid_t: f64,
    pub grid_value: f64,
    pub grid_points: u64,
}

/// 𝔻(ν, ν′, X) = (Σ_{p<=X} (1 − Re ν(p) conj ν′(p)) / p)^{1/2}.
pub fn pretentious_distance<A, B>(nu: &A, nu2: &B, x: u64) -> f64
where
    A: ArithmeticFunction + ?Sized,
    B: ArithmeticFunction + ?Sized,
{
    let mut acc = Neumaier::new();
    for p in primes_up_to(x) {
        let z = nu.eval(p) * nu2.eval(p).conj();
        acc.add((1.0 - z.re) / p as f64);
    }
    acc.value().max(0.0).sqrt()
}

struct PrimeData {
    log_p: Vec<f64>,
    inv_p: Vec<f64>,
    coef: Vec<Complex64>,
}

impl PrimeData {
    fn new<A: ArithmeticFunction + ?Sized>(nu: &A, x: u64) -> Result<Self> {
        let primes = primes_up_to(x);
        let mut coef = Vec::with_capacity(primes.len());
        for &p in &primes {
            let v = nu.eval(p);
            if v.norm() > 1.0 + 1e-12 {
                return Err(Error::InvalidArgument(format!("|nu({p})| = {} exceeds 1", v.norm())));
            }
            coef.push(v / p as f64);
        }
        Ok(PrimeData {
            log_p: primes.iter().map(|&p| (p as f64).ln()).collect(),
            inv_p: primes.iter().map(|&p| 1.0 / p as f64).collect(),
            coef,
        })
    }

    /// 𝔻(ν, n^{it}, X)², summed term by term.
    fn distance_sq(&self, t: f64) -> f64 {
        let mut acc = Neumaier::new();
        for ((&l, &ip), &c) in self.log_p.iter().zip(&self.inv_p).zip(&self.coef) {
            let (s, co) = (t * l).sin_cos();
            // Re(c_p e^{-itλ}) with c_p = ν(p)/p
            let re = c.re * co + c.im * s;
            acc.add(ip - re);
        }
        acc.value().max(0.0)
    }
}

/// Upper approximation of `inf_{|t|<=T} 𝔻(ν, n^{it}, X)²`: the exact value
/// at the best point of a uniform grid, improved by golden-section search on
/// the two neighbouring grid cells.
pub fn m_nonpretentious<A: ArithmeticFunction + ?Sized>(
    nu: &A,
    x: u64,
    cfg: &PretentiousConfig,
) -> Result<PretentiousMinimum> {
    let bound = cfg.t_bound.unwrap_or(x as f64);
    let step = cfg.grid_step;
    if !(step > 0.0 && step.is_finite()) || !(bound >= 0.0 && bound.is_finite()) {
        return Err(Error::InvalidArgument("empty t-grid: need grid_step > 0 and t_bound >= 0".into()));
    }
    let count = (2.0 * bound / step).floor() + 1.0;
    if count > MAX_GRID {
        return Err(Error::BudgetExceeded(format!("{count} grid points")));
    }
    let count = count as u64;
    let data = PrimeData::new(nu, x)?;
    let t_at = |j: u64| -bound + j as f64 * step;

    let candidates = if (count as f64) * (data.coef.len() as f64) <= DIRECT_WORK {
        direct_candidates(&data, count, &t_at)
    } else {
        nufft_candidates(&data, count, step, &t_at)
    };

    let (mut grid_j, mut grid_value) = (0, f64::INFINITY);
    for j in candidates {
        let v = data.distance_sq(t_at(j));
        if v < grid_value || (v == grid_value && j < grid_j) {
            grid_j = j;
            grid_value = v;
        }
    }
    let grid_t = t_at(grid_j);

    let (t_star, value) = golden_section(
        |t| data.distance_sq(t),
        (grid_t - step).max(-bound),
        (grid_t + step).min(bound),
        cfg.refine_iters,
        (grid_t, grid_value),
    );
    Ok(PretentiousMinimum { value, t_star, grid_t, grid_value, grid_points: count })
}

fn direct_candidates(data: &PrimeData, count: u64, t_at: &(dyn Fn(u64) -> f64 + Sync)) -> Vec<u64> {
    let values: Vec<f64> = (0..count).into_par_iter().map(|j| data.distance_sq(t_at(j))).collect();
    let best = values.iter().cloned().fold(f64::INFINITY, f64::min);
    (0..count).filter(|&j| values[j as usize] <= best + CANDIDATE_SLACK).take(64).collect()
}

fn nufft_candidates(data: &PrimeData, count: u64, step: f64, t_at: &(dyn Fn(u64) -> f64 + Sync)) -> Vec<u64> {
    let points: Vec<f64> = data.log_p.iter().map(|&l| step * l).collect();
    let plan = Type1Plan::new(&points, CHUNK);
    let sum_inv: f64 = data.inv_p.iter().sum();
    let half = (CHUNK / 2) as u64;
    let nchunks = count.div_ceil(CHUNK as u64);
    // per chunk: grid indices within the slack of the chunk's best value
    let per_chunk: Vec<(f64, Vec<(u64, f64)>)> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let first = c * CHUNK as u64;
            let centre = first + half;
            let tc = t_at(centre);
            let strengths: Vec<Complex64> =
                data.coef.iter().zip(&data.log_p).map(|(&cp, &l)| cp * Complex64::from_polar(1.0, -tc * l)).collect();
            let f = plan.execute(&strengths);
            let last = (first + CHUNK as u64).min(count);
            let vals: Vec<(u64, f64)> = (first..last).map(|j| (j, sum_inv - f[(j - first) as usize].re)).collect();
            let best = vals.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
            let near = vals.into_iter().filter(|v| v.1 <= best + CANDIDATE_SLACK).take(16).collect();
            (best, near)
        })
        .collect();
    let best = per_chunk.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    per_chunk
        .into_iter()
        .flat_map(|(_, near)| near)
        .filter(|&(_, v)| v <= best + CANDIDATE_SLACK)
        .map(|(j, _)| j)
        .take(64)
        .collect()
}

/// Minimises `f` on `[a, b]`; returns the best point seen, including `start`.
fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: u32, start: (f64, f64)) -> (f64, f64) {
    let mut best = start;
    let consider = |t: f64, v: f64, best: &mut (f64, f64)| {
        if v < best.1 {
            *best = (t, v);
        }
    };
    if iters == 0 || b <= a {
        return best;
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
            consider(c, fc, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
            consider(d, fd, &mut best);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{character_group, mobius_sieve, MobiusTwist};

    fn one(_: u64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn distance_examples() {
        let mu = mobius_sieve(100).unwrap();
        let mu_fn = |n: u64| Complex64::new(mu.get(n) as f64, 0.0);
        assert_eq!(pretentious_distance(&one, &one, 100), 0.0);
        assert_eq!(pretentious_distance(&mu_fn, &mu_fn, 10), 0.0);
        let expect = (494.0f64 / 210.0).sqrt();
        assert!((pretentious_distance(&mu_fn, &one, 10) - expect).abs() < 1e-14);
        assert_eq!(pretentious_distance(&mu_fn, &one, 1), 0.0);
    }

    #[test]
    fn constant_one_pretends_to_t_zero() {
        let m = m_nonpretentious(&one, 1000, &PretentiousConfig::default()).unwrap();
        assert_eq!(m.value, 0.0);
        assert!(m.t_star.abs() < 1e-9);
    }

    #[test]
    fn archimedean_character_is_found() {
        let nu = |n: u64| Complex64::from_polar(1.0, 0.5 * (n as f64).ln());
        let cfg = PretentiousConfig { t_bound: Some(100.0), ..Default::default() };
        let m = m_nonpretentious(&nu, 100, &cfg).unwrap();
        assert!(m.value < 1e-12, "{}", m.value);
        assert!((m.t_star - 0.5).abs() < 1e-5);
    }

    #[test]
    fn empty_grid_rejected() {
        let cfg = PretentiousConfig { grid_step: 0.0, ..Default::default() };
        assert!(m_nonpretentious(&one, 100, &cfg).is_err());
        let cfg = PretentiousConfig { t_bound: Some(-1.0), ..Default::default() };
        assert!(m_nonpretentious(&one, 100, &cfg).is_err());
    }

    #[test]
    fn nufft_and_direct_agree() {
        let mu = mobius_sieve(3000).unwrap();
        let chi = character_group(4).character(1);
        let nu = MobiusTwist { mu: &mu, chi: &chi };
        let data = PrimeData::new(&nu, 3000).unwrap();
        let step = 0.01;
        let bound = 800.0;
        let count = (2.0 * bound / step) as u64 + 1;
        let t_at = |j: u64| -bound + j as f64 * step;
        let fast = nufft_candidates(&data, count, step, &t_at);
        let slow = direct_candidates(&data, count, &t_at);
        assert_eq!(fast.first(), slow.first());
    }

    #[test]
    fn never_exceeds_grid_values() {
        let mu = mobius_sieve(2000).unwrap();
        let chi = character_group(3).character(1);
        let nu = MobiusTwist { mu: &mu, chi: &chi };
        let cfg = PretentiousConfig { t_bound: Some(50.0), grid_step: 0.05, refine_iters: 20 };
        let m = m_nonpretentious(&nu, 2000, &cfg).unwrap();
        let data = PrimeData::new(&nu, 2000).unwrap();
        for j in 0..m.grid_points {
            assert!(m.value <= data.distance_sq(-50.0 + j as f64 * 0.05));
        }
        assert!(m.value <= m.grid_value);
    }
}
