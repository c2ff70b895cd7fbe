//! Dirichlet characters modulo Q.
//!
//! `(Z/QZ)^×` is split by the Chinese remainder theorem into prime-power
//! parts. An odd prime power is cyclic, generated by a primitive root;
//! `(Z/4Z)^×` is generated by 3 and `(Z/2^eZ)^×` for `e >= 3` is
//! `{±1} × <5>`. A character is then a vector of exponents, one per cyclic
//! component, and χ(r) = e(Σ k_j log_j(r) / o_j).

use std::io::Write;

use num_complex::Complex64;

use super::factor::{divisors, euler_phi, factorize, gcd};
use crate::error::{Error, Result};

/// Tolerance used when comparing character values for equality.
const VALUE_EQ_TOL: f64 = 1e-9;

/// One cyclic factor of `(Z/QZ)^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicComponent {
    pub prime: u64,
    pub prime_power: u64,
    /// Generator as a residue mod Q: it is the local generator mod
    /// `prime_power` and 1 modulo the other prime-power parts.
    pub generator: u64,
    pub order: u64,
    part: usize,
    slot: usize,
}

#[derive(Clone, Debug)]
struct PrimePowerPart {
    prime: u64,
    exponent: u32,
    modulus: u64,
    /// discrete logs of each residue mod `modulus`, per local component;
    /// `u32::MAX` for non-units
    logs: Vec<[u32; 2]>,
}

/// The dual group of `(Z/QZ)^×`. Characters are generated on demand, indexed
/// `0..phi(Q)` in mixed radix over the components; index 0 is principal.
#[derive(Clone, Debug)]
pub struct CharacterGroup {
    modulus: u64,
    parts: Vec<PrimePowerPart>,
    components: Vec<CyclicComponent>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<Complex64>,
    conductor: u64,
    primitive: bool,
    principal: bool,
}

pub fn character_group(modulus: u64) -> CharacterGroup {
    CharacterGroup::new(modulus)
}

impl CharacterGroup {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        assert!(modulus <= u32::MAX as u64, "modulus too large for a character table");
        let mut parts = Vec::new();
        let mut components = Vec::new();
        for (p, e) in factorize(modulus) {
            let m = p.pow(e);
            let part = parts.len();
            let (gens, logs) = local_structure(p, e);
            for (slot, (g, order)) in gens.into_iter().enumerate() {
                components.push(CyclicComponent {
                    prime: p,
                    prime_power: m,
                    generator: crt_lift(g, m, modulus),
                    order,
                    part,
                    slot,
                });
            }
            parts.push(PrimePowerPart { prime: p, exponent: e, modulus: m, logs });
        }
        CharacterGroup { modulus, parts, components }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn components(&self) -> &[CyclicComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.iter().map(|c| c.order as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exponent vector of character `index`.
    pub fn exponents(&self, index: usize) -> Vec<u64> {
        assert!(index < self.len(), "character index out of range");
        let mut rest = index as u64;
        self.components
            .iter()
            .map(|c| {
                let k = rest % c.order;
                rest /= c.order;
                k
            })
            .collect()
    }

    /// Discrete logs of `r` along each component, or `None` for non-units.
    pub fn logs(&self, r: u64) -> Option<Vec<u64>> {
        let r = r % self.modulus;
        let mut out = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let part = &self.parts[c.part];
            let l = part.logs[(r % part.modulus) as usize][c.slot];
            if l == u32::MAX {
                return None;
            }
            out.push(l as u64);
        }
        if self.modulus > 1 && gcd(r, self.modulus) != 1 {
            return None;
        }
        Some(out)
    }

    pub fn character(&self, index: usize) -> DirichletCharacter {
        let ks = self.exponents(index);
        let q = self.modulus;
        let lambda = self.components.iter().fold(1u64, |acc, c| lcm(acc, c.order));
        let roots: Vec<Complex64> = (0..lambda).map(|t| root_of_unity(t, lambda)).collect();
        let mut values = vec![Complex64::new(0.0, 0.0); q as usize];
        for (r, v) in values.iter_mut().enumerate() {
            if let Some(logs) = self.logs(r as u64) {
                let mut t = 0u64;
                for ((c, k), l) in self.components.iter().zip(&ks).zip(&logs) {
                    let step = (k * l % c.order) * (lambda / c.order);
                    t = (t + step) % lambda;
                }
                *v = roots[t as usize];
            }
        }
        let conductor = self.local_conductor(&ks);
        DirichletCharacter { modulus: q, values, conductor, primitive: conductor == q, principal: index == 0 }
    }

    pub fn characters(&self) -> Vec<DirichletCharacter> {
        (0..self.len()).map(|i| self.character(i)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = DirichletCharacter> + '_ {
        (0..self.len()).map(|i| self.character(i))
    }

    /// Conductor from the local structure of the exponent vector.
    fn local_conductor(&self, ks: &[u64]) -> u64 {
        let mut f = 1u64;
        for (pi, part) in self.parts.iter().enumerate() {
            let local: Vec<(&CyclicComponent, u64)> =
                self.components.iter().zip(ks).filter(|(c, _)| c.part == pi).map(|(c, &k)| (c, k)).collect();
            let p = part.prime;
            if p != 2 {
                let (c, k) = local[0];
                if k != 0 {
                    let ord = c.order / gcd(k, c.order);
                    f *= p.pow(1 + valuation(ord, p));
                }
            } else if part.exponent == 2 {
                if local[0].1 != 0 {
                    f *= 4;
                }
            } else if part.exponent >= 3 {
                let (_, a) = local[0];
                let (cb, b) = local[1];
                let ord_b = cb.order / gcd(b, cb.order);
                if ord_b > 1 {
                    f *= 4 * ord_b;
                } else if a != 0 {
                    f *= 4;
                }
            }
        }
        f
    }

    /// Number of characters of each conductor, as `(conductor, count)` over
    /// the divisors of Q.
    pub fn conductor_counts(&self) -> Vec<(u64, usize)> {
        let ds = divisors(self.modulus);
        let mut counts = vec![0usize; ds.len()];
        for i in 0..self.len() {
            let f = self.local_conductor(&self.exponents(i));
            let j = ds.binary_search(&f).expect("conductor divides the modulus");
            counts[j] += 1;
        }
        ds.into_iter().zip(counts).collect()
    }

    /// Number of primitive characters modulo Q.
    pub fn primitive_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.local_conductor(&self.exponents(i)) == self.modulus).count()
    }

    /// Largest deviation of `Σ_r χ(r) conj(χ'(r))` from `φ(Q)·[χ = χ']`.
    pub fn orthogonality_error(&self) -> f64 {
        let chars = self.characters();
        let phi = euler_phi(self.modulus) as f64;
        let mut worst = 0.0f64;
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate().skip(i) {
                let s: Complex64 = a.values.iter().zip(&b.values).map(|(x, y)| x * y.conj()).sum();
                let target = if i == j { phi } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

impl DirichletCharacter {
    /// The principal character mod Q.
    pub fn principal(modulus: u64) -> Self {
        CharacterGroup::new(modulus).character(0)
    }

    /// Wraps an arbitrary value table; the conductor is found by the
    /// factor-through test. No invariant is checked here, see
    /// [`DirichletCharacter::check_invariants`].
    pub fn from_values(values: Vec<Complex64>) -> Self {
        let modulus = values.len() as u64;
        assert!(modulus >= 1);
        let principal = (0..modulus).all(|r| {
            let expect = if gcd(r, modulus) == 1 { 1.0 } else { 0.0 };
            (values[r as usize] - expect).norm() < VALUE_EQ_TOL
        });
        let mut chi = DirichletCharacter { modulus, values, conductor: modulus, primitive: true, principal };
        chi.conductor = conductor(&chi);
        chi.primitive = chi.conductor == modulus;
        chi
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    pub fn conj(&self) -> DirichletCharacter {
        DirichletCharacter { values: self.values.iter().map(|v| v.conj()).collect(), ..self.clone() }
    }

    /// Checks the zero pattern, unit modulus and complete multiplicativity.
    pub fn check_invariants(&self) -> Result<()> {
        let q = self.modulus;
        for r in 0..q {
            let v = self.values[r as usize];
            let unit = gcd(r, q) == 1;
            if unit && (v.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvariantViolation(format!("|chi({r})| = {} mod {q}", v.norm())));
            }
            if !unit && v.norm() != 0.0 {
                return Err(Error::InvariantViolation(format!("chi({r}) != 0 although gcd({r},{q}) > 1")));
            }
        }
        if (self.values[(1 % q) as usize] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvariantViolation(format!("chi(1) != 1 mod {q}")));
        }
        for m in 1..q {
            for n in m..q {
                let lhs = self.values[(m * n % q) as usize];
                let rhs = self.values[m as usize] * self.values[n as usize];
                if (lhs - rhs).norm() > 1e-10 {
                    return Err(Error::InvariantViolation(format!("chi({m}*{n}) != chi({m})chi({n}) mod {q}")));
                }
            }
        }
        Ok(())
    }

    /// Writes `n,re,im` rows for `0 <= n < Q`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n,re,im")?;
        for (n, v) in self.values.iter().enumerate() {
            writeln!(w, "{n},{},{}", v.re, v.im)?;
        }
        Ok(())
    }
}

/// Smallest `c | Q` such that χ(a) = 1 for every unit `a ≡ 1 (mod c)`, which
/// is the same as χ factoring through `(Z/cZ)^×`.
pub fn conductor(chi: &DirichletCharacter) -> u64 {
    let q = chi.modulus;
    let one = Complex64::new(1.0, 0.0);
    for c in divisors(q) {
        let trivial =
            (1..=q).step_by(c as usize).filter(|&a| gcd(a, q) == 1).all(|a| (chi.value(a) - one).norm() < VALUE_EQ_TOL);
        if trivial {
            return c;
        }
    }
    q
}

/// Local generators `(g, order)` mod p^e and the discrete-log table.
fn local_structure(p: u64, e: u32) -> (Vec<(u64, u64)>, Vec<[u32; 2]>) {
    let m = p.pow(e);
    let mut logs = vec![[u32::MAX; 2]; m as usize];
    if p == 2 {
        match e {
            1 => {
                logs[1] = [0, 0];
                (Vec::new(), logs)
            }
            2 => {
                logs[1] = [0, 0];
                logs[3] = [1, 0];
                (vec![(3, 2)], logs)
            }
            _ => {
                let ob = m / 4;
                for a in 0..2u64 {
                    let mut r = if a == 0 { 1 } else { m - 1 };
                    for b in 0..ob {
                        logs[r as usize] = [a as u32, b as u32];
                        r = r * 5 % m;
                    }
                }
                (vec![(m - 1, 2), (5, ob)], logs)
            }
        }
    } else {
        let g = primitive_root(p, e);
        let order = m / p * (p - 1);
        let mut r = 1u64;
        for i in 0..order {
            logs[r as usize] = [i as u32, 0];
            r = r * g % m;
        }
        (vec![(g, order)], logs)
    }
}

/// A primitive root mod p^e for odd p.
fn primitive_root(p: u64, e: u32) -> u64 {
    let fs: Vec<u64> = factorize(p - 1).into_iter().map(|(f, _)| f).collect();
    let g = (2..p)
        .find(|&g| fs.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("every odd prime has a primitive root");
    if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// x ≡ g (mod m), x ≡ 1 (mod Q/m).
fn crt_lift(g: u64, m: u64, q: u64) -> u64 {
    let rest = q / m;
    if rest == 1 {
        return g % q;
    }
    let inv = mod_inverse(rest % m, m);
    let y = ((g + m - 1) % m) as u128 * inv as u128 % m as u128;
    ((1 + rest as u128 * y) % q as u128) as u64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m as i128) as u64
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn root_of_unity(t: u64, n: u64) -> Complex64 {
    match (4 * t / n, 4 * t % n) {
        (0, 0) => return Complex64::new(1.0, 0.0),
        (1, 0) => return Complex64::new(0.0, 1.0),
        (2, 0) => return Complex64::new(-1.0, 0.0),
        (3, 0) => return Complex64::new(0.0, -1.0),
        _ => {}
    }
    // use the representative in (-n/2, n/2] for symmetric rounding
    let t = t as f64 - if 2 * t > n { n as f64 } else { 0.0 };
    let (s, c) = (std::f64::consts::TAU * t / n as f64).sin_cos();
    Complex64::new(c, s)
}
