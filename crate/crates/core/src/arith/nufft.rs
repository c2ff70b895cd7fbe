//! Type-1 non-uniform FFT by Gaussian gridding.
//!
//! Computes `f(k) = Σ_j c_j e^{-i k x_j}` for `-J/2 <= k < J/2` with the
//! points `x_j` fixed and the strengths `c_j` supplied per call. Each point
//! is spread onto an `R·J` periodic grid with a Gaussian of variance
//! parameter `τ = π·Msp / (J² R (R - 1/2))`, the grid is transformed with an
//! FFT, and the Gaussian is divided out in frequency.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

const OVERSAMPLE: usize = 2;
const SPREAD: usize = 12;

pub(crate) struct Type1Plan {
    modes: usize,
    grid: usize,
    /// first grid index touched by each point
    start: Vec<usize>,
    /// `2·SPREAD` Gaussian weights per point
    weights: Vec<f64>,
    deconv: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl Type1Plan {
    /// `modes` must be even.
    pub(crate) fn new(points: &[f64], modes: usize) -> Self {
        assert!(modes >= 2 && modes.is_multiple_of(2));
        let grid = OVERSAMPLE * modes;
        let r = OVERSAMPLE as f64;
        let tau = PI * SPREAD as f64 / ((modes * modes) as f64 * r * (r - 0.5));
        let h = TAU / grid as f64;
        let mut start = Vec::with_capacity(points.len());
        let mut weights = Vec::with_capacity(points.len() * 2 * SPREAD);
        for &x in points {
            let x = x.rem_euclid(TAU);
            let m0 = (x / h).floor() as i64;
            let first = m0 - SPREAD as i64 + 1;
            start.push(first.rem_euclid(grid as i64) as usize);
            for l in 0..2 * SPREAD as i64 {
                let d = x - (first + l) as f64 * h;
                weights.push((-d * d / (4.0 * tau)).exp());
            }
        }
        let scale = (PI / tau).sqrt() / grid as f64;
        let half = (modes / 2) as i64;
        let deconv = (-half..half).map(|k| scale * ((k * k) as f64 * tau).exp()).collect();
        let fft = FftPlanner::new().plan_fft_forward(grid);
        Type1Plan { modes, grid, start, weights, deconv, fft }
    }

    /// `f(k)` for `k = -J/2 .. J/2 - 1`, in that order.
    pub(crate) fn execute(&self, strengths: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(strengths.len(), self.start.len());
        let mut buf = vec![Complex64::new(0.0, 0.0); self.grid];
        let w = 2 * SPREAD;
        for (j, &c) in strengths.iter().enumerate() {
            let s = self.start[j];
            let ws = &self.weights[j * w..(j + 1) * w];
            if s + w <= self.grid {
                for (slot, &g) in buf[s..s + w].iter_mut().zip(ws) {
                    *slot += c * g;
                }
            } else {
                for (l, &g) in ws.iter().enumerate() {
                    buf[(s + l) % self.grid] += c * g;
                }
            }
        }
        self.fft.process(&mut buf);
        let half = (self.modes / 2) as i64;
        (-half..half).zip(&self.deconv).map(|(k, &d)| buf[k.rem_euclid(self.grid as i64) as usize] * d).collect()
    }
}
