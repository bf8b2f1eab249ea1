//! Prime generation and counting.
//!
//! [`PrimeTable`] is built by a segmented, odd-only sieve of Eratosthenes.
//! Segments are sieved independently (in parallel when rayon has workers)
//! and concatenated in order, so the table is identical for any thread
//! count.
//!
//! Every prime count used by the verification routines starts at 3: the sieve keeps 2 in
//! the table and the progression/spectrum helpers skip it.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::numeric::integrate;

/// Default segment length, in integers (not odd integers).
pub const DEFAULT_SEGMENT: u64 = 1 << 20;

/// Largest limit the table accepts. Primes are stored as `u32`.
pub const HARD_CAP: u64 = u32::MAX as u64;

/// Requested absolute accuracy of [`li`] and [`exceptional_integral`].
pub const LI_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    pub segment: u64,
    pub hard_cap: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self { segment: DEFAULT_SEGMENT, hard_cap: HARD_CAP }
    }
}

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
}

/// Counts of primes `3 <= p <= x` in each residue class modulo `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSpectrum {
    modulus: u64,
    upper: u64,
    counts: Vec<u64>,
}

pub fn sieve(limit: u64) -> Result<PrimeTable> {
    sieve_with(limit, SieveConfig::default())
}

pub fn sieve_with(limit: u64, config: SieveConfig) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(domain(format!("sieve limit must be >= 2, got {limit}")));
    }
    if limit > config.hard_cap.min(HARD_CAP) {
        return Err(Error::Resource(format!(
            "sieve limit {limit} exceeds the cap {}",
            config.hard_cap.min(HARD_CAP)
        )));
    }
    if config.segment < 64 {
        return Err(domain("segment length must be at least 64"));
    }

    let root = isqrt(limit);
    let base = small_odd_primes(root);

    // Segments cover [lo, hi) with lo odd; the final one is clipped to limit+1.
    let segment = config.segment & !1;
    let starts: Vec<u64> = (0..)
        .map(|i| 1 + i * segment)
        .take_while(|&lo| lo <= limit)
        .collect();
    let chunks: Vec<Vec<u32>> = starts
        .par_iter()
        .map(|&lo| {
            let hi = (lo + segment).min(limit + 1);
            sieve_segment(lo, hi, &base)
        })
        .collect();

    let mut primes = Vec::with_capacity(chunks.iter().map(Vec::len).sum::<usize>() + 1);
    primes.push(2);
    for chunk in chunks {
        primes.extend(chunk);
    }
    Ok(PrimeTable { limit, primes })
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Odd primes up to `n` by a plain sieve; used as the base set.
fn small_odd_primes(n: u64) -> Vec<u32> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut p = 3;
    while p <= n {
        if !composite[p] {
            out.push(p as u32);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    out
}

/// Odd primes in `[lo, hi)`, `lo` odd. Bit `i` stands for `lo + 2i`.
fn sieve_segment(lo: u64, hi: u64, base: &[u32]) -> Vec<u32> {
    if hi <= lo {
        return Vec::new();
    }
    let len = (hi - lo).div_ceil(2) as usize;
    let mut bits = vec![0u64; len.div_ceil(64)];
    for &p in base {
        let p = u64::from(p);
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(lo.div_ceil(p) * p);
        if start % 2 == 0 {
            start += p;
        }
        let mut i = ((start - lo) / 2) as usize;
        let step = p as usize;
        while i < len {
            bits[i / 64] |= 1 << (i % 64);
            i += step;
        }
    }
    let mut out = Vec::new();
    for i in 0..len {
        if bits[i / 64] & (1 << (i % 64)) == 0 {
            let n = lo + 2 * i as u64;
            if n > 1 {
                out.push(n as u32);
            }
        }
    }
    out
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Primes `3 <= p <= x`.
    pub fn odd_primes_upto(&self, x: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| u64::from(p) <= x);
        &self.primes[1.min(end)..end]
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.limit && n <= u64::from(u32::MAX) && self.primes.binary_search(&(n as u32)).is_ok()
    }

    fn check_range(&self, x: f64) -> Result<u64> {
        if !x.is_finite() || x > self.limit as f64 {
            return Err(Error::OutOfRange { what: "x", value: x, limit: self.limit });
        }
        Ok(if x < 0.0 { 0 } else { x.floor() as u64 })
    }

    /// Number of primes `p <= x`.
    pub fn pi(&self, x: f64) -> Result<u64> {
        let x = self.check_range(x)?;
        Ok(self.primes.partition_point(|&p| u64::from(p) <= x) as u64)
    }

    /// Number of primes `3 <= p <= x` with `p ≡ a (mod q)`.
    pub fn pi_progression(&self, x: f64, q: u64, a: i64) -> Result<u64> {
        if q == 0 {
            return Err(domain("modulus must be positive"));
        }
        let x = self.check_range(x)?;
        let a = a.rem_euclid(q as i64) as u64;
        Ok(self
            .odd_primes_upto(x)
            .iter()
            .filter(|&&p| u64::from(p) % q == a)
            .count() as u64)
    }

    pub fn residue_spectrum(&self, x: f64, q: u64) -> Result<ResidueSpectrum> {
        if q == 0 {
            return Err(domain("modulus must be positive"));
        }
        let upper = self.check_range(x)?;
        let mut counts = vec![0u64; q as usize];
        for &p in self.odd_primes_upto(upper) {
            counts[(u64::from(p) % q) as usize] += 1;
        }
        Ok(ResidueSpectrum { modulus: q, upper, counts })
    }
}

impl ResidueSpectrum {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Upper end `x` of the prime range (the lower end is always 3).
    pub fn upper(&self) -> u64 {
        self.upper
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Offset logarithmic integral `∫_2^x du / log u`.
pub fn li(x: f64) -> Result<f64> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(domain(format!("li requires x >= 2, got {x}")));
    }
    Ok(log_integral(x, |u| 1.0 / u.ln()))
}

/// `∫_2^x u^(β−1) / log u du`, the exceptional-zero term of the prime
/// number theorem in progressions. At `β = 1` this is exactly [`li`].
pub fn exceptional_integral(x: f64, beta: f64) -> Result<f64> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(domain(format!("exceptional integral requires x >= 2, got {x}")));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain(format!("beta must lie in (0, 1], got {beta}")));
    }
    if beta == 1.0 {
        return li(x);
    }
    let shift = beta - 1.0;
    Ok(log_integral(x, move |u| (shift * u.ln()).exp() / u.ln()))
}

fn log_integral<F: Fn(f64) -> f64>(x: f64, f: F) -> f64 {
    if x == 2.0 {
        return 0.0;
    }
    // Split at 4 and then geometrically, so no interval spans more than a
    // factor of 4 in u.
    let mut breaks = vec![2.0];
    let mut b = 4.0;
    while b < x {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(x);
    integrate(f, &breaks, LI_TOLERANCE).value
}
