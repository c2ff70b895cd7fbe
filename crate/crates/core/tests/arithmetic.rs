use num_complex::Complex64;
use proptest::prelude::*;

use skewlab_core::arith::{gcd, linear_sieve, mobius_of};
use skewlab_core::{character_group, divisors, euler_phi, factorize, mobius_sieve, MobiusTable};

fn table() -> &'static MobiusTable {
    static T: std::sync::OnceLock<MobiusTable> = std::sync::OnceLock::new();
    T.get_or_init(|| mobius_sieve(200_000).unwrap())
}

#[test]
fn mobius_inversion_of_one() {
    let mu = table();
    for n in 1..=5000u64 {
        let s: i64 = divisors(n).iter().map(|&d| mu.get(d) as i64).sum();
        assert_eq!(s, i64::from(n == 1), "n = {n}");
    }
}

#[test]
fn sieves_agree() {
    assert_eq!(linear_sieve(200_000).as_slice(), table().as_slice());
}

#[test]
fn known_mertens_values() {
    let mu = table();
    for (n, m) in [(1u64, 1i64), (10, -1), (100, 1), (1000, 2), (10_000, -23), (100_000, -48)] {
        assert_eq!(mu.mertens(n).unwrap(), m, "M({n})");
    }
}

#[test]
fn phi_sums_over_divisors() {
    for q in 1..=2000u64 {
        assert_eq!(divisors(q).iter().map(|&d| euler_phi(d)).sum::<u64>(), q);
    }
}

proptest! {
    #[test]
    fn mobius_multiplicative(a in 1u64..400, b in 1u64..400) {
        let mu = table();
        if gcd(a, b) == 1 {
            prop_assert_eq!(mu.get(a * b), mu.get(a) * mu.get(b));
        }
        prop_assert_eq!(mu.get(a * b), mobius_of(a * b));
    }

    #[test]
    fn factorisation_reconstructs(n in 1u64..1_000_000_000_000) {
        let f = factorize(n);
        prop_assert_eq!(f.iter().fold(1u64, |acc, &(p, e)| acc * p.pow(e)), n);
        prop_assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn characters_completely_multiplicative(q in 1u64..120, i in 0usize..64, a in 0u64..500, b in 0u64..500) {
        let g = character_group(q);
        let chi = g.character(i % g.len());
        let lhs = chi.value(a * b);
        let rhs = chi.value(a) * chi.value(b);
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((chi.value(a) - chi.value(a + q)).norm() == 0.0);
        let unit = gcd(a, q) == 1;
        prop_assert_eq!(chi.value(a) == Complex64::new(0.0, 0.0), !unit);
    }

    #[test]
    fn row_orthogonality(q in 1u64..100, a in 1u64..100) {
        // sum over the group of chi(a) is phi(q) when a = 1 mod q, else 0
        let g = character_group(q);
        let s: Complex64 = g.iter().map(|c| c.value(a)).sum();
        let target = if a % q == 1 % q { euler_phi(q) as f64 } else { 0.0 };
        prop_assert!((s - target).norm() < 1e-9, "q = {q}, a = {a}: {s}");
    }
}
