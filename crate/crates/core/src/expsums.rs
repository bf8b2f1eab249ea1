//! Exponential sums: complete geometric sums, Ramanujan sums, twisted Gauss
//! sums, and the prime sums `S(k) = Σ_{3≤p≤x} e(kp/q)`.
//!
//! Every phase `e(r/q)` is evaluated from the exact residue `r mod q`, so no
//! large angle is ever formed in floating point.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::{gauss_sum, gcd, mobius, totient, RealCharacter};
use crate::error::{domain, precondition, Error, Result};
use crate::numeric::pairwise_sum_complex;
use crate::primes::ResidueSpectrum;

pub type ComplexValue = Complex64;

/// `e(num/den) = exp(2πi·num/den)`.
///
/// The argument is reduced to a quarter turn in integer arithmetic, and the
/// upper half of each quadrant is evaluated by its complement, so the angle
/// passed to `sin`/`cos` never exceeds π/4. Multiples of a quarter turn are
/// exact.
pub fn unit(num: i64, den: u64) -> Complex64 {
    assert!(den > 0, "e(x) needs a positive denominator");
    let den = u128::from(den);
    let r = i128::from(num).rem_euclid(den as i128) as u128;
    let quadrant = 4 * r / den;
    let rem = 4 * r - quadrant * den;
    let (c, s) = if 2 * rem <= den {
        let phi = std::f64::consts::FRAC_PI_2 * (rem as f64 / den as f64);
        (phi.cos(), phi.sin())
    } else {
        let phi = std::f64::consts::FRAC_PI_2 * ((den - rem) as f64 / den as f64);
        (phi.sin(), phi.cos())
    };
    match quadrant {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

/// Table of the `q`-th roots of unity `e(r/q)`, `r = 0..q`.
#[derive(Debug, Clone)]
pub struct RootTable {
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(q: u64) -> Self {
        Self { roots: (0..q).map(|r| unit(r as i64, q)).collect() }
    }

    pub fn modulus(&self) -> u64 {
        self.roots.len() as u64
    }

    /// `e(n/q)` for any integer `n`.
    pub fn get(&self, n: i64) -> Complex64 {
        self.roots[n.rem_euclid(self.roots.len() as i64) as usize]
    }

    /// `e(a·b/q)` with the product reduced in integers.
    pub fn product(&self, a: u64, b: u64) -> Complex64 {
        let q = self.roots.len() as u128;
        self.roots[(u128::from(a) * u128::from(b) % q) as usize]
    }
}

/// `Σ_{k=1}^{m} e(kn/m)`: `m` when `m | n`, else 0.
pub fn geometric_sum(m: u64, n: i64) -> Result<i64> {
    if m == 0 {
        return Err(domain("geometric sum needs m >= 1"));
    }
    Ok(if i128::from(n).rem_euclid(i128::from(m)) == 0 { m as i64 } else { 0 })
}

/// Direct complex evaluation of [`geometric_sum`].
pub fn geometric_sum_direct(m: u64, n: i64) -> Result<Complex64> {
    if m == 0 {
        return Err(domain("geometric sum needs m >= 1"));
    }
    let n = i128::from(n).rem_euclid(i128::from(m)) as u64;
    let roots = RootTable::new(m);
    Ok((1..=m).map(|k| roots.product(k, n)).sum())
}

/// Ramanujan sum `c_q(n) = Σ_{1≤a≤q, (a,q)=1} e(an/q)` via
/// `μ(q/g)·φ(q)/φ(q/g)` with `g = gcd(n, q)`.
pub fn ramanujan_sum(q: u64, n: i64) -> Result<i64> {
    if q < 2 {
        return Err(domain(format!("Ramanujan sum needs q >= 2, got {q}")));
    }
    let r = i128::from(n).rem_euclid(i128::from(q)) as u64;
    let g = gcd(r, q);
    let quotient = q / g;
    Ok(mobius(quotient)? * (totient(q)? / totient(quotient)?) as i64)
}

/// Direct complex evaluation of [`ramanujan_sum`].
pub fn ramanujan_sum_direct(q: u64, n: i64) -> Result<Complex64> {
    if q < 2 {
        return Err(domain(format!("Ramanujan sum needs q >= 2, got {q}")));
    }
    Ok(ramanujan_direct_with(&RootTable::new(q), n))
}

fn ramanujan_direct_with(roots: &RootTable, n: i64) -> Complex64 {
    let q = roots.modulus();
    let n = n.rem_euclid(q as i64) as u64;
    (1..q).filter(|&a| gcd(a, q) == 1).map(|a| roots.product(a, n)).sum()
}

/// Left side of `Σ_{k=1}^{q} χ(k) e(nk/q) = χ(n) τ(χ)`, summed directly.
pub fn twisted_gauss(chi: &RealCharacter, n: i64) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(precondition("twisted Gauss sum needs a primitive character"));
    }
    let q = chi.modulus();
    let n = i128::from(n).rem_euclid(i128::from(q)) as u64;
    let roots = RootTable::new(q);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=q {
        match chi.value(k as i64) {
            1 => acc += roots.product(n, k),
            -1 => acc -= roots.product(n, k),
            _ => {}
        }
    }
    Ok(acc)
}

/// `|Σ_k χ(k)e(nk/q) − χ(n)τ(χ)|`.
pub fn twisted_gauss_residual(chi: &RealCharacter, n: i64) -> Result<f64> {
    let lhs = twisted_gauss(chi, n)?;
    let rhs = gauss_sum(chi)? * f64::from(chi.value(n));
    Ok((lhs - rhs).norm())
}

/// `Σ_{k=1}^{q} c_q(k)²`, exact. Fails if it differs from `q·φ(q)`.
pub fn lemma6_moment(q: u64) -> Result<i64> {
    if q < 2 {
        return Err(domain(format!("moment of Ramanujan sums needs q >= 2, got {q}")));
    }
    let mut sum = 0i64;
    for k in 1..=q {
        let c = ramanujan_sum(q, k as i64)?;
        sum += c * c;
    }
    let expected = (q * totient(q)?) as i64;
    if sum != expected {
        return Err(Error::IdentityViolation(format!(
            "Σ c_q(k)² = {sum} but q·φ(q) = {expected} for q = {q}"
        )));
    }
    Ok(sum)
}

/// `Σ_{k=1}^{q} χ(k)·c_q(k)` with each `c_q(k)` summed as a complex
/// exponential sum. Fails if the magnitude exceeds `1e-6·q`.
pub fn lemma6_twisted(q: u64) -> Result<Complex64> {
    let chi = crate::characters::real_character(q)?;
    if q % 2 == 0 {
        return Err(Error::UnsupportedModulus { modulus: q, reason: "needs odd square-free q" });
    }
    let roots = RootTable::new(q);
    let terms: Vec<Complex64> = (1..=q)
        .filter(|&k| chi.value(k as i64) != 0)
        .map(|k| ramanujan_direct_with(&roots, k as i64) * f64::from(chi.value(k as i64)))
        .collect();
    let total = pairwise_sum_complex(&terms);
    if total.norm() > 1e-6 * q as f64 {
        return Err(Error::IdentityViolation(format!(
            "|Σ χ(k) c_q(k)| = {} exceeds 1e-6·q for q = {q}",
            total.norm()
        )));
    }
    Ok(total)
}

/// The same sum in exact integers using the closed form of `c_q(k)`.
pub fn lemma6_twisted_exact(q: u64) -> Result<i64> {
    let chi = crate::characters::real_character(q)?;
    let mut sum = 0i64;
    for k in 1..=q {
        let v = chi.value(k as i64);
        if v != 0 {
            sum += i64::from(v) * ramanujan_sum(q, k as i64)?;
        }
    }
    Ok(sum)
}

/// `S(k) = Σ_{3≤p≤x} e(kp/q) = Σ_r c_r e(rk/q)` from the residue spectrum.
pub fn prime_exp_sum(spectrum: &ResidueSpectrum, k: i64) -> Result<Complex64> {
    let q = spectrum.modulus();
    if k < 0 || k as u64 > q {
        return Err(precondition(format!("k = {k} outside 0..={q} for modulus {q}")));
    }
    Ok(prime_exp_sum_with(spectrum, &RootTable::new(q), k as u64))
}

fn prime_exp_sum_with(spectrum: &ResidueSpectrum, roots: &RootTable, k: u64) -> Complex64 {
    debug_assert_eq!(roots.modulus(), spectrum.modulus());
    let terms: Vec<Complex64> = spectrum
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(r, &c)| roots.product(r as u64, k) * c as f64)
        .collect();
    pairwise_sum_complex(&terms)
}

/// All `S(k)` for `k = 1..=q`, in order.
pub fn prime_exp_sums(spectrum: &ResidueSpectrum) -> Vec<Complex64> {
    let q = spectrum.modulus();
    let roots = RootTable::new(q);
    (1..=q)
        .into_par_iter()
        .map(|k| prime_exp_sum_with(spectrum, &roots, k))
        .collect()
}

/// Ordered pairs `(p₁, p₂)` of primes in `[3, x]` with `p₁ + p₂ ≡ 0 (mod q)`.
pub fn pair_count_mod(spectrum: &ResidueSpectrum) -> u64 {
    let q = spectrum.modulus() as usize;
    let c = spectrum.counts();
    (0..q).map(|r| c[r] * c[(q - r) % q]).sum()
}

/// Second moment of the prime exponential sums against the exact pair count.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub q: u64,
    pub x: u64,
    /// Real part of `Σ_{k=1}^{q} S(k)²` (analytic square).
    pub moment: f64,
    pub imag_residual: f64,
    pub pair_count: u64,
    /// `|moment − q·pair_count|`.
    pub gap: f64,
}

impl MomentReport {
    pub fn q_times_pairs(&self) -> u128 {
        u128::from(self.q) * u128::from(self.pair_count)
    }

    pub fn gap_tolerance(&self) -> f64 {
        1e-4 * (self.q_times_pairs() as f64).max(1.0)
    }

    pub fn imag_tolerance(&self) -> f64 {
        1e-6 * self.moment.abs().max(1.0)
    }

    pub fn holds(&self) -> bool {
        self.moment.is_finite()
            && self.gap <= self.gap_tolerance()
            && self.imag_residual <= self.imag_tolerance()
    }
}

pub fn moment_sum(spectrum: &ResidueSpectrum) -> Result<MomentReport> {
    let q = spectrum.modulus();
    if q < 2 {
        return Err(domain("moment sum needs q >= 2"));
    }
    let squares: Vec<Complex64> = prime_exp_sums(spectrum).into_iter().map(|s| s * s).collect();
    let total = pairwise_sum_complex(&squares);
    let pair_count = pair_count_mod(spectrum);
    let exact = u128::from(q) * u128::from(pair_count);
    Ok(MomentReport {
        q,
        x: spectrum.upper(),
        moment: total.re,
        imag_residual: total.im.abs(),
        pair_count,
        gap: (total.re - exact as f64).abs(),
    })
}
