//! Number-theoretic kernel: Möbius sieve, factorization, Dirichlet
//! characters and pretentious distances.

mod characters;
mod factor;
mod nufft;
mod pretentious;
mod sieve;

use num_complex::Complex64;

pub use characters::{character_group, conductor, CharacterGroup, CyclicComponent, DirichletCharacter};
pub use factor::{divisors, euler_phi, factorize, gcd, mobius_of, primes_up_to};
pub use pretentious::{m_nonpretentious, pretentious_distance, PretentiousConfig, PretentiousMinimum};
pub use sieve::{
    linear_sieve, mobius_sieve, mobius_sieve_segmented, MobiusSegments, MobiusTable, DEFAULT_SEGMENT, LINEAR_LIMIT,
};

/// A complex-valued function on the positive integers.
pub trait ArithmeticFunction: Sync {
    fn eval(&self, n: u64) -> Complex64;
}

impl<F> ArithmeticFunction for F
where
    F: Fn(u64) -> Complex64 + Sync,
{
    fn eval(&self, n: u64) -> Complex64 {
        self(n)
    }
}

/// n ↦ μ(n)χ(n), backed by a sieved table and a character table.
#[derive(Clone, Copy)]
pub struct MobiusTwist<'a> {
    pub mu: &'a MobiusTable,
    pub chi: &'a DirichletCharacter,
}

impl ArithmeticFunction for MobiusTwist<'_> {
    fn eval(&self, n: u64) -> Complex64 {
        self.chi.value(n) * self.mu.get(n) as f64
    }
}

/// n ↦ μ(n).
#[derive(Clone, Copy)]
pub struct Mobius<'a>(pub &'a MobiusTable);

impl ArithmeticFunction for Mobius<'_> {
    fn eval(&self, n: u64) -> Complex64 {
        Complex64::new(self.0.get(n) as f64, 0.0)
    }
}

/// n ↦ n^{it}.
#[derive(Clone, Copy, Debug)]
pub struct Archimedean(pub f64);

impl ArithmeticFunction for Archimedean {
    fn eval(&self, n: u64) -> Complex64 {
        Complex64::from_polar(1.0, self.0 * (n as f64).ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn twist_values() {
        let mu = mobius_sieve(20).unwrap();
        let chi = character_group(4).character(1);
        let nu = MobiusTwist { mu: &mu, chi: &chi };
        let vals: Vec<f64> = (1..=10).map(|n| nu.eval(n).re).collect();
        assert_eq!(vals, vec![1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(Archimedean(0.0).eval(7), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn distance_to_one_is_monotone_in_x() {
        let mu = mobius_sieve(5000).unwrap();
        let chi = character_group(4).character(1);
        let nu = MobiusTwist { mu: &mu, chi: &chi };
        let one = |_: u64| Complex64::new(1.0, 0.0);
        let mut last = 0.0;
        for x in (0..=5000).step_by(97) {
            let d = pretentious_distance(&nu, &one, x);
            assert!(d >= last);
            last = d;
        }
    }

    proptest! {
        #[test]
        fn sieve_is_multiplicative(m in 1u64..300, n in 1u64..300) {
            let mu = mobius_sieve(90_000).unwrap();
            if gcd(m, n) == 1 {
                prop_assert_eq!(mu.get(m * n), mu.get(m) * mu.get(n));
            }
            prop_assert_eq!(mu.get(m * n), mobius_of(m * n));
        }
    }
}
