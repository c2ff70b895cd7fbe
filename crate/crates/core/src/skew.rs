//! The skew product `T(x, y) = (x + α, y + h(x))` on the 2-torus.
//!
//! x-coordinates are always computed as `x0 + n·α` in [`Phase`] arithmetic,
//! so they carry no accumulated error. Fiber coordinates are kept as
//! unreduced reals (compensated sums) and reduced mod 1 only when observed.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cfrac::IrrationalSpec;
use crate::error::{Error, Result};
use crate::fourier::{coboundary_phi, split_resonant, AnalyticCircleFunction, ResonantSet, RESONANCE_FLOOR};
use crate::phase::{CertifiedPhase, Phase};
use crate::sum::{par_blocks, tree_reduce, ComplexNeumaier, Neumaier, BLOCK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusPoint {
    pub x: Phase,
    pub y: Phase,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        TorusPoint { x: Phase::from_f64(x), y: Phase::from_f64(y) }
    }

    pub const ORIGIN: TorusPoint = TorusPoint { x: Phase::ZERO, y: Phase::ZERO };

    /// max of the two circle distances
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        (self.x - other.x).norm().max((self.y - other.y).norm())
    }
}

/// `f(x, y) = e(ξ1 x + ξ2 y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observable {
    pub xi1: i64,
    pub xi2: i64,
}

impl Observable {
    pub fn new(xi1: i64, xi2: i64) -> Self {
        Observable { xi1, xi2 }
    }
}

pub fn observe(f: Observable, p: &TorusPoint) -> Complex64 {
    (p.x.mul_i64(f.xi1) + p.y.mul_i64(f.xi2)).e()
}

/// One orbit point with its unreduced fiber coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitPoint {
    pub n: u64,
    pub x: Phase,
    pub y_lift: f64,
}

impl OrbitPoint {
    pub fn point(&self) -> TorusPoint {
        TorusPoint { x: self.x, y: Phase::from_f64(self.y_lift) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkewProduct {
    alpha: CertifiedPhase,
    h: AnalyticCircleFunction,
}

impl SkewProduct {
    pub fn new(alpha: CertifiedPhase, h: AnalyticCircleFunction) -> Result<Self> {
        if alpha.phase == Phase::ZERO {
            return Err(Error::InvalidArgument("rotation number must lie in (0, 1)".into()));
        }
        Ok(SkewProduct { alpha, h })
    }

    pub fn from_spec(alpha: &IrrationalSpec, h: AnalyticCircleFunction) -> Result<Self> {
        SkewProduct::new(alpha.to_phase()?, h)
    }

    pub fn alpha(&self) -> &CertifiedPhase {
        &self.alpha
    }

    pub fn h(&self) -> &AnalyticCircleFunction {
        &self.h
    }

    /// `x + n·α`
    #[inline]
    pub fn rotate(&self, x: Phase, n: u64) -> Phase {
        x + self.alpha.phase.wrapping_mul(n as u128)
    }

    pub fn step(&self, p: &TorusPoint) -> TorusPoint {
        let dy = self.h.evaluate(p.x);
        TorusPoint { x: p.x + self.alpha.phase, y: p.y + Phase::from_f64(dy) }
    }

    /// `T^n(p0)` for n = 0..N-1.
    pub fn orbit(&self, p0: &TorusPoint, n: u64) -> Orbit<'_> {
        Orbit { system: self, x0: p0.x, next: 0, end: n, y: Neumaier::from_iter([p0.y.to_f64()]) }
    }

    /// `T^n(p0)` for `n1 <= n < n2`; the fiber coordinate is seeded with
    /// `H(n1, x0)` from the closed form (direct sum if a small divisor
    /// blocks it).
    pub fn orbit_segment(&self, p0: &TorusPoint, n1: u64, n2: u64) -> Orbit<'_> {
        let seed = self.cocycle_fourier(n1, p0.x).unwrap_or_else(|_| self.cocycle_direct(n1, p0.x));
        let mut y = Neumaier::new();
        y.add(p0.y.to_f64());
        y.add(seed);
        Orbit { system: self, x0: p0.x, next: n1, end: n2, y }
    }

    /// `H(n, x) = Σ_{l<n} h(x + lα)`, compensated, unreduced.
    pub fn cocycle_direct(&self, n: u64, x: Phase) -> f64 {
        let term = |l: u64| self.h.evaluate(self.rotate(x, l));
        if n as usize <= BLOCK {
            return (0..n).map(term).collect::<Neumaier>().value();
        }
        let parts = par_blocks(0..n, BLOCK, |r| r.map(term).collect::<Neumaier>());
        tree_reduce(parts, |mut a, b| {
            a.merge(b);
            a
        })
        .map_or(0.0, |a| a.value())
    }

    /// `H(n, x) − n ĥ(0)` from the closed form, without the drift term.
    pub fn cocycle_fluctuation(&self, n: u64, x: Phase) -> Result<f64> {
        let mut acc = ComplexNeumaier::new();
        for &m in self.h.support() {
            let ratio = self.geometric_ratio(m as u64, n)?;
            acc.add(self.h.coefficients()[m] * ratio * x.wrapping_mul(m as u128).e());
        }
        Ok(2.0 * acc.value().re)
    }

    /// `n ĥ(0) + Σ_{m≠0} ĥ(m) (e(nmα) − 1)/(e(mα) − 1) e(mx)`, O(M).
    pub fn cocycle_fourier(&self, n: u64, x: Phase) -> Result<f64> {
        Ok(n as f64 * self.h.mean() + self.cocycle_fluctuation(n, x)?)
    }

    /// `(e(nmα) − 1)/(e(mα) − 1)` through `sin(πψ)/sin(πφ)·e((ψ−φ)/2)` with
    /// centred representatives, stable for small `||mα||`.
    pub(crate) fn geometric_ratio(&self, m: u64, n: u64) -> Result<Complex64> {
        let norm = self.alpha.certified_norm(m as i64);
        if norm < RESONANCE_FLOOR {
            return Err(Error::NearResonance { m: m as i64, norm, floor: RESONANCE_FLOOR });
        }
        let ma = self.alpha.phase.wrapping_mul(m as u128);
        let phi = ma.centered();
        let psi = ma.wrapping_mul(n as u128).centered();
        let pi = std::f64::consts::PI;
        let r = (pi * psi).sin() / (pi * phi).sin();
        Ok(Complex64::from_polar(r, pi * (psi - phi)))
    }

    /// `|H(n1 n2, x) − Σ_{l<n1} H(n2, x + l n2 α)|`, both sides summed directly.
    pub fn cocycle_compose_check(&self, n1: u64, n2: u64, x: Phase) -> f64 {
        let lhs = self.cocycle_direct(n1 * n2, x);
        let rhs: Neumaier = (0..n1).map(|l| self.cocycle_direct(n2, self.rotate(x, l * n2))).collect();
        (lhs - rhs.value()).abs()
    }

    /// The fiber map `ψ(x) = s(H(p1, x0 + p1 x) − H(p2, x0 + p2 x))` as a
    /// coefficient table:
    /// `ψ̂(pm) += s ĥ(m) e(m x0) Σ_{l<p} e(lmα)` for `p ∈ {p1, p2}` with sign.
    pub fn derived_system(&self, p1: u64, p2: u64, x0: Phase, s: u64) -> Result<SkewProduct> {
        if p1 == p2 || p1 == 0 || p2 == 0 {
            return Err(Error::InvalidArgument("derived system needs two distinct primes".into()));
        }
        if s == 0 {
            return Err(Error::InvalidArgument("scale s must be at least 1".into()));
        }
        let m_max = self.h.m_max();
        let pmax = p1.max(p2) as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); pmax * m_max + 1];
        let sf = s as f64;
        for (p, sign) in [(p1, 1.0), (p2, -1.0)] {
            for &m in self.h.support() {
                let g: ComplexNeumaier =
                    (0..p).map(|l| self.alpha.phase.wrapping_mul(l as u128 * m as u128).e()).collect();
                let c = self.h.coefficients()[m] * x0.wrapping_mul(m as u128).e() * g.value();
                coeffs[p as usize * m] += c * (sign * sf);
            }
        }
        // G_p(0) = p exactly
        coeffs[0] = Complex64::new(sf * (p1 as f64 - p2 as f64) * self.h.mean(), 0.0);
        let psi = AnalyticCircleFunction::new(coeffs, self.h.tau() / pmax as f64)?;
        SkewProduct::new(self.alpha, psi)
    }

    /// Torus distance between `T̃^n(0, 0)` and
    /// `(nα, H(p1 n, x0) − H(p2 n, x0))`.
    pub fn derived_orbit_check(&self, p1: u64, p2: u64, x0: Phase, n: u64) -> Result<f64> {
        let derived = self.derived_system(p1, p2, x0, 1)?;
        let lhs = derived.cocycle_direct(n, Phase::ZERO);
        let rhs = self.cocycle_direct(p1 * n, x0) - self.cocycle_direct(p2 * n, x0);
        Ok(Phase::from_f64(lhs - rhs).norm())
    }

    /// Largest [`derived_orbit_check`](Self::derived_orbit_check) over
    /// `1 <= n <= n_max`, with all three sums advanced incrementally.
    pub fn derived_orbit_sweep(&self, p1: u64, p2: u64, x0: Phase, n_max: u64) -> Result<f64> {
        let derived = self.derived_system(p1, p2, x0, 1)?;
        let (mut lhs, mut h1, mut h2) = (Neumaier::new(), Neumaier::new(), Neumaier::new());
        let mut worst = 0.0f64;
        for n in 0..n_max {
            lhs.add(derived.h.evaluate(self.rotate(Phase::ZERO, n)));
            for l in p1 * n..p1 * (n + 1) {
                h1.add(self.h.evaluate(self.rotate(x0, l)));
            }
            for l in p2 * n..p2 * (n + 1) {
                h2.add(self.h.evaluate(self.rotate(x0, l)));
            }
            worst = worst.max(Phase::from_f64(lhs.value() - (h1.value() - h2.value())).norm());
        }
        Ok(worst)
    }

    /// The conjugacy removing the non-resonant part: with `h = h1 + h2` split
    /// on `set` and `φ(x + α) − φ(x) = h2(x)`, `Φ(x, y) = (x, y − φ(x))`
    /// satisfies `Φ^{-1} ∘ T1 ∘ Φ = T`.
    pub fn conjugation(&self, set: &ResonantSet) -> Result<Conjugation> {
        let (h1, h2) = split_resonant(&self.h, set);
        let phi = coboundary_phi(&h2, &self.alpha)?;
        Ok(Conjugation { t: self.clone(), t1: SkewProduct::new(self.alpha, h1)?, phi })
    }

    pub fn conjugation_check(&self, set: &ResonantSet, p0: &TorusPoint, n: u64) -> Result<f64> {
        let c = self.conjugation(set)?;
        Ok(c.deviation(p0, n))
    }
}

#[derive(Clone, Debug)]
pub struct Conjugation {
    pub t: SkewProduct,
    pub t1: SkewProduct,
    pub phi: AnalyticCircleFunction,
}

impl Conjugation {
    /// Torus distance between `T^n(p0)` and `Φ^{-1}(T1^n(Φ(p0)))`.
    pub fn deviation(&self, p0: &TorusPoint, n: u64) -> f64 {
        let y0 = p0.y.to_f64();
        let direct = y0 + self.t.cocycle_direct(n, p0.x);
        let xn = self.t.rotate(p0.x, n);
        let conj = y0 - self.phi.evaluate(p0.x) + self.t1.cocycle_direct(n, p0.x) + self.phi.evaluate(xn);
        Phase::from_f64(direct - conj).norm()
    }

    /// Largest deviation over `0 <= n <= n_max`, advancing both orbits.
    pub fn sweep(&self, p0: &TorusPoint, n_max: u64) -> f64 {
        let y0 = p0.y.to_f64();
        let phi0 = self.phi.evaluate(p0.x);
        let (mut h, mut h1) = (Neumaier::new(), Neumaier::new());
        let mut worst = 0.0f64;
        for n in 0..=n_max {
            let xn = self.t.rotate(p0.x, n);
            let phin = self.phi.evaluate(xn);
            let d = (y0 + h.value()) - (y0 - phi0 + h1.value() + phin);
            worst = worst.max(Phase::from_f64(d).norm());
            h.add(self.t.h.evaluate(xn));
            h1.add(self.t1.h.evaluate(xn));
        }
        worst
    }
}

pub struct Orbit<'a> {
    system: &'a SkewProduct,
    x0: Phase,
    next: u64,
    end: u64,
    y: Neumaier,
}

impl Iterator for Orbit<'_> {
    type Item = OrbitPoint;

    fn next(&mut self) -> Option<OrbitPoint> {
        if self.next >= self.end {
            return None;
        }
        let n = self.next;
        let x = self.system.rotate(self.x0, n);
        let out = OrbitPoint { n, x, y_lift: self.y.value() };
        self.y.add(self.system.h.evaluate(x));
        self.next += 1;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.end - self.next) as usize;
        (r, Some(r))
    }
}

/// `h(x + lα)` for `l < len`, for checking many cocycle identities along one
/// orbit without re-evaluating h.
pub struct CocycleTable {
    values: Vec<f64>,
}

impl CocycleTable {
    pub fn new(t: &SkewProduct, x: Phase, len: u64) -> Self {
        let parts = par_blocks(0..len, BLOCK, |r| r.map(|l| t.h.evaluate(t.rotate(x, l))).collect::<Vec<f64>>());
        CocycleTable { values: parts.concat() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `H(len, x + start·α)` summed directly.
    pub fn direct(&self, start: usize, len: usize) -> f64 {
        self.values[start..start + len].iter().copied().collect::<Neumaier>().value()
    }

    /// `|H(n1 n2, x) − Σ_{l<n1} H(n2, x + l n2 α)|`.
    pub fn compose_residual(&self, n1: usize, n2: usize) -> f64 {
        let lhs = self.direct(0, n1 * n2);
        let rhs: Neumaier = (0..n1).map(|l| self.direct(l * n2, n2)).collect();
        (lhs - rhs.value()).abs()
    }

    /// Largest composition residual over every factorisation `n = n1·n2` with
    /// `n <= n_max`, and the number of pairs checked.
    pub fn max_compose_residual(&self, n_max: usize) -> (f64, usize) {
        assert!(n_max <= self.len());
        (1..=n_max)
            .into_par_iter()
            .map(|n| {
                let mut worst = 0.0f64;
                let mut pairs = 0;
                for n1 in (1..=n).filter(|d| n % d == 0) {
                    worst = worst.max(self.compose_residual(n1, n / n1));
                    pairs += 1;
                }
                (worst, pairs)
            })
            .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1))
    }
}
