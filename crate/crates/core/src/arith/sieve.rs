//! Möbius sieves.
//!
//! Up to [`LINEAR_LIMIT`] the whole table is built by a linear sieve. Above
//! that the range is cut into segments that are sieved independently by the
//! primes up to `sqrt(N)`; [`MobiusSegments`] streams those segments so a
//! caller can walk the range in O(segment) memory.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const LINEAR_LIMIT: u64 = 100_000_000;
pub const DEFAULT_SEGMENT: usize = 1 << 22;

const MAGIC: &[u8; 4] = b"MOBS";
const FORMAT_VERSION: u8 = 1;

/// μ(n) for `0 <= n <= limit`, with the convention μ(0) = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    values: Vec<i8>,
}

impl MobiusTable {
    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// μ(n). Panics when `n > limit`.
    #[inline]
    pub fn get(&self, n: u64) -> i8 {
        self.values[n as usize]
    }

    pub fn try_get(&self, n: u64) -> Option<i8> {
        self.values.get(n as usize).copied()
    }

    /// Slice indexed by n, including the unused slot 0.
    pub fn as_slice(&self) -> &[i8] {
        &self.values
    }

    pub fn check_range(&self, n: u64) -> Result<()> {
        if n > self.limit() {
            return Err(Error::OutOfRange { needed: n, limit: self.limit() });
        }
        Ok(())
    }

    /// Mertens function M(n) = Σ_{k<=n} μ(k).
    pub fn mertens(&self, n: u64) -> Result<i64> {
        self.check_range(n)?;
        Ok(self.values[..=n as usize].iter().map(|&v| v as i64).sum())
    }

    /// Writes the raw table: `MOBS`, a version byte, the low 24 bits of the
    /// limit (little-endian), then μ(1..=N) as signed bytes.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let limit = self.limit().to_le_bytes();
        w.write_all(MAGIC)?;
        w.write_all(&[FORMAT_VERSION])?;
        w.write_all(&limit[..3])?;
        let payload: Vec<u8> = self.values[1..].iter().map(|&v| v as u8).collect();
        w.write_all(&payload)?;
        Ok(())
    }

    /// Reads a table written by [`MobiusTable::write_to`]. The limit is
    /// taken from the payload length and checked against the header field.
    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; 8];
        r.read_exact(&mut header)?;
        if &header[..4] != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        if header[4] != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {}", header[4])));
        }
        let low = u64::from(header[5]) | u64::from(header[6]) << 8 | u64::from(header[7]) << 16;
        let mut payload = Vec::new();
        r.read_to_end(&mut payload)?;
        if payload.is_empty() {
            return Err(Error::Format("empty table".into()));
        }
        let limit = payload.len() as u64;
        if limit & 0xff_ffff != low {
            return Err(Error::Format(format!("header limit {low} does not match payload length {limit}")));
        }
        let mut values = Vec::with_capacity(payload.len() + 1);
        values.push(0);
        for b in payload {
            let v = b as i8;
            if !(-1..=1).contains(&v) {
                return Err(Error::Format(format!("value {v} is not a Möbius value")));
            }
            values.push(v);
        }
        Ok(MobiusTable { values })
    }
}

/// μ(n) for all n <= N.
pub fn mobius_sieve(limit: u64) -> Result<MobiusTable> {
    if limit == 0 {
        return Err(Error::InvalidBound("sieve limit must be at least 1".into()));
    }
    if limit <= LINEAR_LIMIT {
        Ok(linear_sieve(limit))
    } else {
        mobius_sieve_segmented(limit, DEFAULT_SEGMENT)
    }
}

/// Linear sieve: every composite is crossed off exactly once, by its smallest
/// prime factor.
pub fn linear_sieve(limit: u64) -> MobiusTable {
    let n = limit as usize;
    // 2 marks "not yet visited", i.e. prime
    let mut mu = vec![2i8; n + 1];
    mu[0] = 0;
    if n >= 1 {
        mu[1] = 1;
    }
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if mu[i] == 2 {
            mu[i] = -1;
            primes.push(i as u32);
        }
        let mi = mu[i];
        for &p in &primes {
            let p = p as usize;
            let ip = i * p;
            if ip > n {
                break;
            }
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mi;
        }
    }
    MobiusTable { values: mu }
}

/// Segmented sieve over the whole range, parallel over segments.
pub fn mobius_sieve_segmented(limit: u64, segment: usize) -> Result<MobiusTable> {
    if limit == 0 {
        return Err(Error::InvalidBound("sieve limit must be at least 1".into()));
    }
    if segment == 0 {
        return Err(Error::InvalidBound("segment length must be positive".into()));
    }
    let base = base_primes(limit);
    let nseg = limit.div_ceil(segment as u64);
    let parts: Vec<Vec<i8>> = (0..nseg)
        .into_par_iter()
        .map(|s| {
            let lo = 1 + s * segment as u64;
            let hi = (lo + segment as u64).min(limit + 1);
            sieve_segment(lo, hi, &base)
        })
        .collect();
    let mut values = Vec::with_capacity(limit as usize + 1);
    values.push(0);
    for part in parts {
        values.extend_from_slice(&part);
    }
    Ok(MobiusTable { values })
}

/// Streams μ over `1..=limit` in consecutive segments.
pub struct MobiusSegments {
    base: Vec<u64>,
    next: u64,
    limit: u64,
    segment: usize,
}

impl MobiusSegments {
    pub fn new(limit: u64, segment: usize) -> Result<Self> {
        if limit == 0 || segment == 0 {
            return Err(Error::InvalidBound("limit and segment length must be positive".into()));
        }
        Ok(MobiusSegments { base: base_primes(limit), next: 1, limit, segment })
    }
}

impl Iterator for MobiusSegments {
    /// First n of the segment and μ(n), μ(n+1), …
    type Item = (u64, Vec<i8>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next > self.limit {
            return None;
        }
        let lo = self.next;
        let hi = (lo + self.segment as u64).min(self.limit + 1);
        self.next = hi;
        Some((lo, sieve_segment(lo, hi, &self.base)))
    }
}

fn base_primes(limit: u64) -> Vec<u64> {
    let r = isqrt(limit);
    super::primes_up_to(r)
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// μ on `[lo, hi)` from the primes up to `sqrt(hi - 1)`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<i8> {
    let len = (hi - lo) as usize;
    let mut sign = vec![1i8; len];
    let mut prod = vec![1u64; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            sign[i] = -sign[i];
            prod[i] *= p;
            m += p;
        }
        let pp = p * p;
        let mut m = lo.div_ceil(pp) * pp;
        while m < hi {
            sign[(m - lo) as usize] = 0;
            m += pp;
        }
    }
    for i in 0..len {
        // at most one prime factor exceeds sqrt(n)
        if sign[i] != 0 && prod[i] != lo + i as u64 {
            sign[i] = -sign[i];
        }
    }
    sign
}
