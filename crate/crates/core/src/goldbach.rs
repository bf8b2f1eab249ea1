//! Goldbach representation counts and the Hardy–Littlewood prediction.
//!
//! `r(N)` always counts ordered pairs `(p₁, p₂)` of primes `>= 3` with
//! `p₁ + p₂ = N`. Two routes are provided: a per-`N` scan of the prime
//! table, and an FFT self-convolution of the odd-prime indicator that
//! yields every `r(N)` up to a bound at once.

use std::sync::OnceLock;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::characters::totient;
use crate::error::{domain, Error, Result};
use crate::numeric::pairwise_sum;
use crate::primes::{sieve, PrimeTable};

/// Prime cutoff of the process-wide cached twin-prime constant.
pub const DEFAULT_CUTOFF: u64 = 10_000_000;
pub const MIN_CUTOFF: u64 = 1_000;

/// Largest FFT length used by [`GoldbachCounts::build`].
pub const MAX_FFT_LEN: usize = 1 << 25;

fn check_even(n: u64) -> Result<()> {
    if n % 2 == 1 {
        return Err(domain(format!("N must be even, got {n}")));
    }
    if n < 6 {
        return Err(domain(format!("N must be at least 6, got {n}")));
    }
    Ok(())
}

/// `r(N)` by scanning primes `p <= N − 3` and testing `N − p`.
pub fn goldbach_count(n: u64, table: &PrimeTable) -> Result<u64> {
    check_even(n)?;
    if n > table.limit() {
        return Err(Error::OutOfRange { what: "N", value: n as f64, limit: table.limit() });
    }
    Ok(table
        .odd_primes_upto(n - 3)
        .iter()
        .filter(|&&p| table.contains(n - u64::from(p)))
        .count() as u64)
}

/// `r(N)` for every `N <= max_n`, from one FFT convolution.
#[derive(Debug, Clone)]
pub struct GoldbachCounts {
    counts: Vec<u32>,
}

impl GoldbachCounts {
    pub fn build(table: &PrimeTable, max_n: u64) -> Result<Self> {
        if max_n > table.limit() {
            return Err(Error::OutOfRange { what: "N", value: max_n as f64, limit: table.limit() });
        }
        let len = (2 * (max_n as usize + 1)).next_power_of_two();
        if len > MAX_FFT_LEN {
            return Err(Error::Resource(format!(
                "convolution up to {max_n} needs an FFT of length {len} (> {MAX_FFT_LEN})"
            )));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for &p in table.odd_primes_upto(max_n) {
            buf[p as usize] = Complex64::new(1.0, 0.0);
        }
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(len).process(&mut buf);
        for v in buf.iter_mut() {
            *v = *v * *v;
        }
        planner.plan_fft_inverse(len).process(&mut buf);

        let scale = 1.0 / len as f64;
        let mut counts = Vec::with_capacity(max_n as usize + 1);
        for (n, v) in buf.iter().take(max_n as usize + 1).enumerate() {
            let x = v.re * scale;
            let rounded = x.round();
            if (x - rounded).abs() > 0.25 {
                return Err(Error::IdentityViolation(format!(
                    "convolution value {x} at N = {n} is not near an integer"
                )));
            }
            counts.push(rounded as u32);
        }
        Ok(Self { counts })
    }

    pub fn max_n(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    /// `r(N)`; zero for odd `N` and `N < 6`.
    pub fn get(&self, n: u64) -> Option<u64> {
        self.counts.get(n as usize).map(|&c| u64::from(c))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.counts
    }
}

/// `d = Π_{p≥3} (1 − 1/(p−1)²)` truncated at `cutoff`, with a tail estimate
/// and a rigorous error radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinPrimeConstant {
    pub value: f64,
    /// `Π_{3≤p≤cutoff} (1 − 1/(p−1)²)` without tail correction.
    pub partial: f64,
    pub radius: f64,
    pub cutoff: u64,
}

pub fn twin_prime_constant(cutoff: u64) -> Result<TwinPrimeConstant> {
    if cutoff < MIN_CUTOFF {
        return Err(domain(format!("cutoff must be at least {MIN_CUTOFF}, got {cutoff}")));
    }
    twin_prime_constant_from(&sieve(cutoff)?, cutoff)
}

pub fn twin_prime_constant_from(table: &PrimeTable, cutoff: u64) -> Result<TwinPrimeConstant> {
    if cutoff < MIN_CUTOFF {
        return Err(domain(format!("cutoff must be at least {MIN_CUTOFF}, got {cutoff}")));
    }
    if cutoff > table.limit() {
        return Err(Error::OutOfRange { what: "cutoff", value: cutoff as f64, limit: table.limit() });
    }
    let logs: Vec<f64> = table
        .odd_primes_upto(cutoff)
        .iter()
        .map(|&p| log_factor(u64::from(p)))
        .collect();
    let log_partial = pairwise_sum(&logs);
    let (tail, radius) = tail_bounds(cutoff);
    Ok(TwinPrimeConstant {
        value: (log_partial - tail).exp(),
        partial: log_partial.exp(),
        radius,
        cutoff,
    })
}

fn log_factor(p: u64) -> f64 {
    let pm = (p - 1) as f64;
    (-1.0 / (pm * pm)).ln_1p()
}

/// Estimate `T` of `Σ_{p>P} 1/(p−1)²` and the error radius of `exp(−T)`
/// as a correction factor.
///
/// Partial summation with `π(t) <= 1.25506 t / log t` gives
/// `0 <= Σ_{p>P} 1/(p−1)² <= U = 2.51012·(P/(P−1))³ / (P log P)`, and the
/// prime-density heuristic gives the estimate `T = 1/(P log P)`. Replacing
/// `Σ log(1 − y)` by `−Σ y` costs at most `Σ_{n>P} 2/(n−1)⁴ <= 1/(P−1)³`,
/// and a partial product below 1 cannot amplify an error in the exponent.
fn tail_bounds(cutoff: u64) -> (f64, f64) {
    let p = cutoff as f64;
    let plogp = p * p.ln();
    let estimate = 1.0 / plogp;
    let upper = 2.51012 * (p / (p - 1.0)).powi(3) / plogp;
    let quadratic = 1.0 / (p - 1.0).powi(3);
    let rounding = 64.0 * f64::EPSILON;
    let radius = estimate.max(upper - estimate) + quadratic + rounding;
    (estimate, radius)
}

/// The twin-prime constant at [`DEFAULT_CUTOFF`], computed once per process.
pub fn default_twin_prime_constant() -> TwinPrimeConstant {
    default_series().constant()
}

/// `(N/φ(N))·Π_{p∤N, p≥3}(1 − 1/(p−1)²)` evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSeriesValue {
    pub n: u64,
    /// `(N/φ(N))·d·Π_{p|N, p≥3}(1 − 1/(p−1)²)⁻¹`.
    pub value: f64,
    /// `(N/φ(N))·Π_{p∤N, 3≤p≤cutoff}(1 − 1/(p−1)²)` with the same tail factor.
    pub direct: f64,
    pub cutoff: u64,
}

impl SingularSeriesValue {
    pub fn relative_gap(&self) -> f64 {
        ((self.value - self.direct) / self.value).abs()
    }
}

/// Odd primes and `d` at one cutoff, for repeated singular-series queries.
#[derive(Debug, Clone)]
pub struct SingularSeries {
    primes: Vec<u32>,
    constant: TwinPrimeConstant,
}

impl SingularSeries {
    pub fn new(cutoff: u64) -> Result<Self> {
        if cutoff < MIN_CUTOFF {
            return Err(domain(format!("cutoff must be at least {MIN_CUTOFF}, got {cutoff}")));
        }
        let table = sieve(cutoff)?;
        let constant = twin_prime_constant_from(&table, cutoff)?;
        Ok(Self { primes: table.odd_primes_upto(cutoff).to_vec(), constant })
    }

    pub fn constant(&self) -> TwinPrimeConstant {
        self.constant
    }

    pub fn cutoff(&self) -> u64 {
        self.constant.cutoff
    }

    pub fn evaluate(&self, n: u64) -> Result<SingularSeriesValue> {
        check_even(n)?;
        let ratio = n as f64 / totient(n)? as f64;
        let cutoff = self.cutoff();
        let (tail, _) = tail_bounds(cutoff);

        let logs: Vec<f64> = self
            .primes
            .iter()
            .filter(|&&p| n % u64::from(p) != 0)
            .map(|&p| log_factor(u64::from(p)))
            .collect();
        let direct = ratio * (pairwise_sum(&logs) - tail).exp();

        let mut value = ratio * self.constant.value;
        for (p, _) in crate::characters::factorize(n) {
            if p > 2 && p <= cutoff {
                value /= 1.0 - 1.0 / ((p - 1) as f64).powi(2);
            }
        }
        Ok(SingularSeriesValue { n, value, direct, cutoff })
    }
}

pub fn singular_series(n: u64, cutoff: u64) -> Result<SingularSeriesValue> {
    if cutoff == DEFAULT_CUTOFF {
        return default_series().evaluate(n);
    }
    SingularSeries::new(cutoff)?.evaluate(n)
}

fn default_series() -> &'static SingularSeries {
    static SERIES: OnceLock<SingularSeries> = OnceLock::new();
    SERIES.get_or_init(|| SingularSeries::new(DEFAULT_CUTOFF).expect("default cutoff is valid"))
}

/// Hardy–Littlewood main term `𝔖(N)·N/log²N`.
pub fn hl_prediction(n: u64) -> Result<f64> {
    hl_prediction_with(default_series(), n)
}

pub fn hl_prediction_with(series: &SingularSeries, n: u64) -> Result<f64> {
    let s = series.evaluate(n)?;
    let log_n = (n as f64).ln();
    Ok(s.value * n as f64 / (log_n * log_n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldbachRecord {
    pub n: u64,
    pub r: u64,
    pub singular_series: f64,
    pub prediction: f64,
    pub ratio: f64,
}

pub fn goldbach_record(series: &SingularSeries, n: u64, r: u64) -> Result<GoldbachRecord> {
    let s = series.evaluate(n)?;
    let log_n = (n as f64).ln();
    let prediction = s.value * n as f64 / (log_n * log_n);
    Ok(GoldbachRecord { n, r, singular_series: s.value, prediction, ratio: r as f64 / prediction })
}

/// Comparison of `r(2nq)` with `(q/φ(q))·2nq·d/log²(2nq)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Record {
    pub n: u64,
    pub q: u64,
    pub big_n: u64,
    pub lhs: u64,
    pub rhs: f64,
    pub holds: bool,
}

fn pair_bound_rhs(n: u64, q: u64, d: f64) -> Result<f64> {
    let big_n = (2 * n * q) as f64;
    let log_n = big_n.ln();
    Ok(q as f64 / totient(q)? as f64 * big_n * d / (log_n * log_n))
}

fn pair_bound_gate(n: u64, q: u64) -> Result<u64> {
    if q < 3 || q % 2 == 0 {
        return Err(domain(format!("q must be an odd modulus >= 3, got {q}")));
    }
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    Ok(2 * n * q)
}

/// Reports, never asserts: the inequality is conditional and asymptotic.
pub fn lemma1_check(n: u64, q: u64, table: &PrimeTable) -> Result<Lemma1Record> {
    let big_n = pair_bound_gate(n, q)?;
    let lhs = goldbach_count(big_n, table)?;
    let rhs = pair_bound_rhs(n, q, default_twin_prime_constant().value)?;
    Ok(Lemma1Record { n, q, big_n, lhs, rhs, holds: lhs as f64 >= rhs })
}

/// Pair-bound records for every `N = 2nq` in `[lo, hi]`.
pub fn lemma1_sweep(q: u64, lo: u64, hi: u64, counts: &GoldbachCounts, d: f64) -> Result<Vec<Lemma1Record>> {
    pair_bound_gate(1, q)?;
    if hi > counts.max_n() {
        return Err(Error::OutOfRange { what: "N", value: hi as f64, limit: counts.max_n() });
    }
    let step = 2 * q;
    let first = lo.div_ceil(step).max(1);
    (first..=hi / step)
        .map(|n| {
            let big_n = n * step;
            let lhs = counts.get(big_n).expect("within range");
            let rhs = pair_bound_rhs(n, q, d)?;
            Ok(Lemma1Record { n, q, big_n, lhs, rhs, holds: lhs as f64 >= rhs })
        })
        .collect()
}
