//! Compensated summation and a thread-count-independent parallel reduction.
//!
//! Parallel sums split the index range into fixed-size blocks, evaluate the
//! blocks with rayon, collect the partial results in block order and combine
//! them with a fixed pairwise tree. The block boundaries and the tree shape
//! depend only on the input length, so the floating-point result is the same
//! for every pool size.

use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: Neumaier) {
        self.add(other.sum);
        self.comp += other.comp;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Componentwise [`Neumaier`] accumulator for complex values.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: ComplexNeumaier) {
        self.re.merge(other.re);
        self.im.merge(other.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexNeumaier {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexNeumaier::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Default block length for [`par_blocks`].
pub const BLOCK: usize = 1 << 14;

/// Combines `items` with a balanced binary tree whose shape depends only on
/// `items.len()`. Returns `None` for an empty vector.
pub fn tree_reduce<T, F>(mut items: Vec<T>, combine: F) -> Option<T>
where
    F: Fn(T, T) -> T,
{
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(combine(a, b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop()
}

/// Evaluates `f` on consecutive blocks of `range` in parallel and returns the
/// per-block results in block order.
pub fn par_blocks<T, F>(range: Range<u64>, block: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync,
{
    assert!(block > 0);
    let len = range.end.saturating_sub(range.start);
    let nblocks = len.div_ceil(block as u64);
    (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = range.start + b * block as u64;
            let hi = (lo + block as u64).min(range.end);
            f(lo..hi)
        })
        .collect()
}

/// Deterministic parallel compensated sum of `term(n)` over `range`.
pub fn par_sum<F>(range: Range<u64>, term: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    let parts = par_blocks(range, BLOCK, |r| r.map(&term).collect::<Neumaier>());
    tree_reduce(parts, |mut a, b| {
        a.merge(b);
        a
    })
    .map_or(0.0, |acc| acc.value())
}

/// Complex counterpart of [`par_sum`].
pub fn par_sum_complex<F>(range: Range<u64>, term: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    let parts = par_blocks(range, BLOCK, |r| r.map(&term).collect::<ComplexNeumaier>());
    tree_reduce(parts, |mut a, b| {
        a.merge(b);
        a
    })
    .map_or(Complex64::new(0.0, 0.0), |acc| acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let acc: Neumaier = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.value(), 2.0);
        let naive: f64 = [1.0, 1e100, 1.0, -1e100].iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn tree_reduce_shapes() {
        assert_eq!(tree_reduce(Vec::<u32>::new(), |a, b| a + b), None);
        assert_eq!(tree_reduce(vec![5], |a, b| a + b), Some(5));
        let order = tree_reduce((0..5).map(|i| i.to_string()).collect(), |a, b| format!("({a}{b})"));
        assert_eq!(order.unwrap(), "(((01)(23))4)");
    }

    #[test]
    fn par_sum_is_independent_of_pool_size() {
        let term = |n: u64| ((n as f64) * 0.618_033_988_749_895).sin() / (1.0 + n as f64);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| par_sum(0..200_000, term))
        };
        let one = run(1);
        assert_eq!(one.to_bits(), run(3).to_bits());
        assert_eq!(one.to_bits(), run(8).to_bits());
    }

    #[test]
    fn par_sum_matches_sequential() {
        let term = |n: u64| 1.0 / ((n + 1) as f64).powi(2);
        let seq: Neumaier = (0..100_000u64).map(term).collect();
        assert!((par_sum(0..100_000, term) - seq.value()).abs() < 1e-15);
        assert_eq!(par_sum(5..5, term), 0.0);
    }
}
