//! Real-argument evaluation of `L(s, χ)` for real primitive characters and a
//! sign-change scan for real zeros on `(0, 1)`.
//!
//! `L(s, χ) = q^{−s} Σ_{a=1}^{q} χ(a) ζ(s, a/q)`. Since `Σ_a χ(a) = 0` the
//! pole of every Hurwitz term cancels, so the sum is taken over the
//! regularised values `ζ(s, a) − 1/(s − 1)`, which stay finite at `s = 1`.

use rayon::prelude::*;

use crate::characters::RealCharacter;
use crate::error::{domain, Error, Result};
use crate::numeric::pairwise_sum;

pub const S_MIN: f64 = 0.05;
pub const S_MAX: f64 = 10.0;
pub const DEFAULT_TERMS: usize = 50;
pub const DEFAULT_CORRECTIONS: usize = 10;
pub const MAX_CORRECTIONS: usize = 20;
pub const BISECTION_TOL: f64 = 1e-12;

/// `B_{2j} / (2j)!` for `j = 1..=20`.
const BERNOULLI_OVER_FACTORIAL: [f64; MAX_CORRECTIONS] = bernoulli_table();

const fn bernoulli_table() -> [f64; MAX_CORRECTIONS] {
    // (numerator, denominator) of B_2 .. B_40.
    const B: [(f64, f64); MAX_CORRECTIONS] = [
        (1.0, 6.0),
        (-1.0, 30.0),
        (1.0, 42.0),
        (-1.0, 30.0),
        (5.0, 66.0),
        (-691.0, 2730.0),
        (7.0, 6.0),
        (-3617.0, 510.0),
        (43867.0, 798.0),
        (-174611.0, 330.0),
        (854513.0, 138.0),
        (-236364091.0, 2730.0),
        (8553103.0, 6.0),
        (-23749461029.0, 870.0),
        (8615841276005.0, 14322.0),
        (-7709321041217.0, 510.0),
        (2577687858367.0, 6.0),
        (-26315271553053477373.0, 1919190.0),
        (2929993913841559.0, 6.0),
        (-261082718496449122051.0, 13530.0),
    ];
    let mut out = [0.0; MAX_CORRECTIONS];
    let mut factorial = 1.0;
    let mut j = 0;
    while j < MAX_CORRECTIONS {
        let k = 2.0 * (j as f64 + 1.0);
        factorial *= (k - 1.0) * k;
        out[j] = B[j].0 / B[j].1 / factorial;
        j += 1;
    }
    out
}

fn check_band(s: f64) -> Result<()> {
    if !(S_MIN..=S_MAX).contains(&s) {
        return Err(Error::Unsupported(format!("s = {s} outside the supported band [{S_MIN}, {S_MAX}]")));
    }
    Ok(())
}

/// Hurwitz zeta `ζ(s, a)` by Euler–Maclaurin with the default number of
/// explicit terms and Bernoulli corrections.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    hurwitz_zeta_with(s, a, DEFAULT_TERMS, DEFAULT_CORRECTIONS)
}

pub fn hurwitz_zeta_with(s: f64, a: f64, terms: usize, corrections: usize) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole);
    }
    Ok(hurwitz_regular_with(s, a, terms, corrections)? + 1.0 / (s - 1.0))
}

/// `ζ(s, a) − 1/(s − 1)`, finite on the whole band including `s = 1`.
pub fn hurwitz_regular(s: f64, a: f64) -> Result<f64> {
    hurwitz_regular_with(s, a, DEFAULT_TERMS, DEFAULT_CORRECTIONS)
}

pub fn hurwitz_regular_with(s: f64, a: f64, terms: usize, corrections: usize) -> Result<f64> {
    check_band(s)?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(domain(format!("Hurwitz shift must lie in (0, 1], got {a}")));
    }
    if corrections > MAX_CORRECTIONS || terms == 0 {
        return Err(domain("Euler–Maclaurin parameters out of range"));
    }
    let head: Vec<f64> = (0..terms).map(|n| (n as f64 + a).powf(-s)).collect();
    let w = terms as f64 + a;
    let log_w = w.ln();
    // (w^{1−s} − 1)/(s − 1), continuous through s = 1.
    let t = 1.0 - s;
    let integral = if t == 0.0 { -log_w } else { -(t * log_w).exp_m1() / t };
    let mut tail = integral + 0.5 * w.powf(-s);
    let mut rising = s;
    let mut power = w.powf(-s - 1.0);
    let w2 = w * w;
    for (j, coef) in BERNOULLI_OVER_FACTORIAL.iter().take(corrections).enumerate() {
        tail += coef * rising * power;
        let k = 2.0 * j as f64 + 1.0;
        rising *= (s + k) * (s + k + 1.0);
        power /= w2;
    }
    Ok(pairwise_sum(&head) + tail)
}

/// `L(s, χ)` for a real primitive character.
pub fn l_value(s: f64, chi: &RealCharacter) -> Result<f64> {
    if !chi.is_primitive() || chi.value_sum() != 0 {
        return Err(Error::Unsupported("L-values need a primitive nonprincipal character".into()));
    }
    check_band(s)?;
    let q = chi.modulus();
    let terms = (1..=q)
        .filter_map(|a| {
            let v = chi.value(a as i64);
            (v != 0).then(|| hurwitz_regular(s, a as f64 / q as f64).map(|z| f64::from(v) * z))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((q as f64).powf(-s) * pairwise_sum(&terms))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignScan {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub samples: usize,
    /// Grid intervals `[a, b]` across which the function changes sign, or
    /// `[a, a]` when it vanishes exactly at a grid point.
    pub brackets: Vec<(f64, f64)>,
    pub zeros: Vec<f64>,
}

/// Sample `f` on `lo, lo + step, …, hi`, bracket sign changes and bisect each
/// to [`BISECTION_TOL`].
pub fn scan_sign_changes<F>(f: F, lo: f64, hi: f64, step: f64) -> Result<SignScan>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(lo < hi) || !(step > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(domain(format!("bad scan grid lo = {lo}, hi = {hi}, step = {step}")));
    }
    let intervals = ((hi - lo) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=intervals)
        .map(|i| if i == intervals { hi } else { lo + i as f64 * step })
        .collect();
    let values = grid.par_iter().map(|&s| f(s)).collect::<Result<Vec<f64>>>()?;

    let mut brackets = Vec::new();
    let mut zeros = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            brackets.push((grid[i], grid[i]));
            zeros.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0) {
            let (mut a, mut b) = (grid[i], grid[i + 1]);
            let mut fa = values[i];
            brackets.push((a, b));
            while b - a > BISECTION_TOL {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = f(mid)?;
                if fm == 0.0 {
                    (a, b) = (mid, mid);
                    break;
                }
                if (fm < 0.0) == (fa < 0.0) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            zeros.push(0.5 * (a + b));
        }
    }
    Ok(SignScan { lo, hi, step, samples: grid.len(), brackets, zeros })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroScanResult {
    pub q: u64,
    pub scan: SignScan,
    /// Largest refined zero, if any.
    pub beta: Option<f64>,
}

pub fn scan_real_zeros(chi: &RealCharacter, lo: f64, hi: f64, step: f64) -> Result<ZeroScanResult> {
    if !(lo >= S_MIN && lo < hi && hi <= 1.0) {
        return Err(domain(format!("scan interval must satisfy {S_MIN} <= lo < hi <= 1, got ({lo}, {hi})")));
    }
    if !(step > 0.0 && step <= 1e-2) {
        return Err(domain(format!("scan step must lie in (0, 0.01], got {step}")));
    }
    let scan = scan_sign_changes(|s| l_value(s, chi), lo, hi, step)?;
    let beta = scan.zeros.iter().copied().reduce(f64::max);
    Ok(ZeroScanResult { q: chi.modulus(), scan, beta })
}

/// `1 − c / log² q`.
pub fn theorem_bound(q: u64, c: f64) -> Result<f64> {
    if q < 3 {
        return Err(domain(format!("q must be at least 3, got {q}")));
    }
    if !(c > 0.0) {
        return Err(domain(format!("c must be positive, got {c}")));
    }
    let l = (q as f64).ln();
    Ok(1.0 - c / (l * l))
}

/// The constant produced by the synthesis step: `log(8/(8 − d))/2 · (c₃/4)²`.
pub fn bound_constant(d: f64, c3: f64) -> f64 {
    (8.0 / (8.0 - d)).ln() / 2.0 * (c3 / 4.0).powi(2)
}
