//! The inequality chain bounding an exceptional zero, assembled as a
//! numerical pipeline.
//!
//! * First part: `Σ_k S(k)² = q·P >= q·G`, where `P` counts prime pairs with
//!   `p₁ + p₂ ≡ 0 (mod q)` and `G = Σ_{n≤x/2q} r(2nq)`, compared with the
//!   Hardy–Littlewood lower bound `L₁`.
//! * Second part: each `S(k)` against its model
//!   `(Li x/φ(q))·c_q(k) − (τ(χ)χ(k)/φ(q))·E(x, β)`.
//! * Synthesis: `d/4 <= 1 − x^{2β−2}/β² + budget`, and the resulting bound
//!   `β <= 1 − c/log²q`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::{gauss_sum, is_odd_squarefree, real_character, totient};
use crate::error::{domain, Error, Result};
use crate::expsums::{moment_sum, prime_exp_sums, ramanujan_sum, MomentReport};
use crate::lfunc::bound_constant;
use crate::numeric::pairwise_sum;
use crate::primes::{exceptional_integral, li, PrimeTable};

/// Equality tolerance for the synthesis comparisons.
pub const EQUALITY_TOL: f64 = 1e-9;
/// Slack multiplier on `x q²/(φ(q) log²x)` when comparing the two `L₁` forms.
pub const L1_SLACK: f64 = 10.0;

/// Unspecified constants of the argument, made explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c1: f64,
    pub c3: f64,
    pub c4: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self { c1: 1.0, c3: 1.0, c4: 1.0 }
    }
}

fn gate_modulus(q: u64) -> Result<()> {
    if q < 3 || !is_odd_squarefree(q) {
        return Err(Error::UnsupportedModulus { modulus: q, reason: "needs odd square-free q >= 3" });
    }
    Ok(())
}

fn gate_x(x: u64, table: &PrimeTable) -> Result<()> {
    if x > table.limit() {
        return Err(Error::OutOfRange { what: "x", value: x as f64, limit: table.limit() });
    }
    Ok(())
}

/// `G`: ordered pairs of primes in `[3, x]` with `p₁ + p₂ <= x` and
/// `q | p₁ + p₂`. For odd `q` the sum of two odd primes is divisible by `q`
/// iff it is a multiple of `2q`, so this equals `Σ_{n≤x/2q} r(2nq)`.
pub fn goldbach_subset_count(table: &PrimeTable, q: u64, x: u64) -> Result<u64> {
    gate_x(x, table)?;
    if q == 0 || q % 2 == 0 {
        return Err(domain(format!("q must be odd, got {q}")));
    }
    let mut classes = vec![Vec::new(); q as usize];
    for &p in table.odd_primes_upto(x) {
        classes[(u64::from(p) % q) as usize].push(u64::from(p));
    }
    let mut total = 0u64;
    for r in 0..q as usize {
        let left = &classes[r];
        let right = &classes[(q as usize - r) % q as usize];
        // Two pointers: for ascending a, the admissible prefix of `right` shrinks.
        let mut j = right.len();
        for &a in left {
            while j > 0 && a + right[j - 1] > x {
                j -= 1;
            }
            if j == 0 {
                break;
            }
            total += j as u64;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstPart {
    pub q: u64,
    pub x: u64,
    pub d: f64,
    pub phi: u64,
    pub moment: MomentReport,
    /// `P`.
    pub pair_count: u64,
    /// `G`.
    pub goldbach_subset: u64,
    /// Pairs with `p₁ + p₂ ≡ 0 (mod q)` and `p₁ + p₂ > x`: `P − G`.
    pub discarded_pairs: u64,
    /// `(q²/φ(q))·Σ_n 2nqd/log²(2nq)`.
    pub l1_terms: f64,
    /// `q d x²/(4 φ(q) log²x)`.
    pub l1_closed: f64,
    /// `x q²/(φ(q) log²x)`.
    pub l1_slack_unit: f64,
}

impl FirstPart {
    /// `M = qP` within the moment tolerance and `qP >= qG` exactly.
    pub fn exact_chain_holds(&self) -> bool {
        self.moment.holds() && self.pair_count >= self.goldbach_subset
    }

    /// Whether `qG >= L₁` (a consequence of the conjecture, reported only).
    pub fn hl_bound_holds(&self) -> bool {
        (self.q * self.goldbach_subset) as f64 >= self.l1_terms
    }

    /// `L₁(terms) >= L₁(closed) − 10·slack`. Only meaningful for `x >= q³`.
    pub fn l1_forms_consistent(&self) -> bool {
        self.l1_terms >= self.l1_closed - L1_SLACK * self.l1_slack_unit
    }

    /// `x < q⁴`: outside the regime the argument is written for.
    pub fn sub_regime(&self) -> bool {
        is_sub_regime(self.q, self.x)
    }
}

pub fn is_sub_regime(q: u64, x: u64) -> bool {
    (x as u128) < (q as u128).pow(4)
}

pub fn first_part(q: u64, x: u64, table: &PrimeTable, d: f64) -> Result<FirstPart> {
    gate_modulus(q)?;
    gate_x(x, table)?;
    if x < 2 * q {
        return Err(domain(format!("x = {x} must be at least 2q = {}", 2 * q)));
    }
    let spectrum = table.residue_spectrum(x as f64, q)?;
    let moment = moment_sum(&spectrum)?;
    let goldbach_subset = goldbach_subset_count(table, q, x)?;
    let phi = totient(q)?;

    let qf = q as f64;
    let terms: Vec<f64> = (1..=x / (2 * q))
        .map(|n| {
            let m = (2 * n * q) as f64;
            m * d / m.ln().powi(2)
        })
        .collect();
    let l1_terms = qf * qf / phi as f64 * pairwise_sum(&terms);
    let xf = x as f64;
    let log2x = xf.ln().powi(2);
    Ok(FirstPart {
        q,
        x,
        d,
        phi,
        pair_count: moment.pair_count,
        discarded_pairs: moment.pair_count - goldbach_subset,
        moment,
        goldbach_subset,
        l1_terms,
        l1_closed: qf * d * xf * xf / (4.0 * phi as f64 * log2x),
        l1_slack_unit: xf * qf * qf / (phi as f64 * log2x),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondPartRow {
    pub k: u64,
    pub s: Complex64,
    pub model: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondPart {
    pub q: u64,
    pub x: u64,
    pub beta: Option<f64>,
    pub li_x: f64,
    /// `E(x, β)`, zero when no `β` is supplied.
    pub exceptional: f64,
    pub tau: Complex64,
    pub rows: Vec<SecondPartRow>,
    pub max_residual: f64,
    pub rms_residual: f64,
    /// `x·exp(−c₁ √log x)`, for scale.
    pub error_scale: f64,
    /// Primes `3 <= p <= x` dividing `q`; these are the terms the model omits.
    pub dropped_primes: u64,
}

pub fn second_part(q: u64, x: u64, beta: Option<f64>, table: &PrimeTable, c1: f64) -> Result<SecondPart> {
    gate_modulus(q)?;
    gate_x(x, table)?;
    if x < 3 {
        return Err(domain("x must be at least 3"));
    }
    let chi = real_character(q)?;
    let tau = gauss_sum(&chi)?;
    let phi = totient(q)? as f64;
    let xf = x as f64;
    let li_x = li(xf)?;
    let exceptional = match beta {
        Some(b) => exceptional_integral(xf, b)?,
        None => 0.0,
    };
    let spectrum = table.residue_spectrum(xf, q)?;
    let sums = prime_exp_sums(&spectrum);

    let rows = (1..=q)
        .into_par_iter()
        .map(|k| {
            let ratio = ramanujan_sum(q, k as i64)? as f64 / phi;
            let mut model = Complex64::new(li_x * ratio, 0.0);
            if beta.is_some() {
                model -= tau * (f64::from(chi.value(k as i64)) / phi * exceptional);
            }
            let s = sums[(k - 1) as usize];
            Ok(SecondPartRow { k, s, model, residual: (s - model).norm() })
        })
        .collect::<Result<Vec<_>>>()?;

    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let squares: Vec<f64> = rows.iter().map(|r| r.residual * r.residual).collect();
    let rms_residual = (pairwise_sum(&squares) / q as f64).sqrt();
    let dropped_primes = crate::characters::factorize(q)
        .iter()
        .filter(|&&(p, _)| p >= 3 && p <= x)
        .count() as u64;
    Ok(SecondPart {
        q,
        x,
        beta,
        li_x,
        exceptional,
        tau,
        rows,
        max_residual,
        rms_residual,
        error_scale: xf * (-c1 * xf.ln().sqrt()).exp(),
        dropped_primes,
    })
}

/// Both sides of the synthesized inequality at one `β`.
///
/// `lhs`/`rhs` are the literal form `d/4 <= 1 − x^{2β−2}/β² + budget`.
/// The `final_*` fields are the form the bound is read off from, after
/// dropping `1/β² >= 1`: `x^{2β−2} <= 1 − d/4 + budget`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Synthesis {
    pub log_x: f64,
    pub beta: f64,
    pub budget: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub final_lhs: f64,
    pub final_rhs: f64,
    pub final_holds: bool,
}

/// `x` enters only through `log x`, so astronomically large `x` are fine.
pub fn synthesize(log_x: f64, d: f64, beta: f64, budget: f64) -> Result<Synthesis> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain(format!("beta must lie in (0, 1], got {beta}")));
    }
    if !(log_x >= std::f64::consts::LN_2) || !log_x.is_finite() {
        return Err(domain(format!("x must be at least 2 (log x = {log_x})")));
    }
    if !(d > 0.0 && d < 1.0) {
        return Err(domain(format!("d must lie in (0, 1), got {d}")));
    }
    if !budget.is_finite() {
        return Err(domain("error budget must be finite"));
    }
    let power = ((2.0 * beta - 2.0) * log_x).exp();
    let lhs = d / 4.0;
    let rhs = 1.0 - power / (beta * beta) + budget;
    let final_rhs = 1.0 - d / 4.0 + budget;
    Ok(Synthesis {
        log_x,
        beta,
        budget,
        lhs,
        rhs,
        holds: lhs <= rhs + EQUALITY_TOL,
        final_lhs: power,
        final_rhs,
        final_holds: power <= final_rhs + EQUALITY_TOL,
    })
}

/// The `β` at which `x^{2β−2} = 1 − d/4 + budget`.
pub fn threshold_beta(log_x: f64, d: f64, budget: f64) -> Result<f64> {
    let target = 1.0 - d / 4.0 + budget;
    if !(target > 0.0) {
        return Err(domain("1 − d/4 + budget must be positive"));
    }
    Ok(1.0 + target.ln() / (2.0 * log_x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaBound {
    pub q: u64,
    pub c3: f64,
    pub d: f64,
    /// `(4/c₃ · log q)²`.
    pub log_x: f64,
    pub beta_max: f64,
    /// `−log(1 − d/8)·c₃²/32`, so that `beta_max = 1 − c/log²q`.
    pub c: f64,
    /// `√(8 c₄ / d)`: the argument needs `log q` at least this large.
    pub log_q_threshold: f64,
    pub precondition_met: bool,
}

impl BetaBound {
    /// The budget `d/8`: the largest `c₄/log²q` admitted by the precondition,
    /// at which `beta_max` is exactly the synthesis threshold.
    pub fn extremal_budget(&self) -> f64 {
        self.d / 8.0
    }
}

pub fn beta_bound(q: u64, c3: f64, d: f64, c4: f64) -> Result<BetaBound> {
    if q < 3 {
        return Err(domain(format!("q must be at least 3, got {q}")));
    }
    if !(c3 > 0.0) || !(c4 > 0.0) {
        return Err(domain("c3 and c4 must be positive"));
    }
    if !(d > 0.0 && d < 1.0) {
        return Err(domain(format!("d must lie in (0, 1), got {d}")));
    }
    let log_q = (q as f64).ln();
    let log_x = (4.0 / c3 * log_q).powi(2);
    let shrink = (1.0 - d / 8.0).ln();
    let log_q_threshold = (8.0 * c4 / d).sqrt();
    Ok(BetaBound {
        q,
        c3,
        d,
        log_x,
        beta_max: 1.0 + shrink / (2.0 * log_x),
        c: -shrink * c3 * c3 / 32.0,
        log_q_threshold,
        precondition_met: log_q >= log_q_threshold,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub constants: Constants,
    /// Final constant `c`; defaults to the value the synthesis produces.
    pub c: Option<f64>,
    pub d: f64,
    pub beta: Option<f64>,
    pub what_if: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub constants: Constants,
    pub c: f64,
    pub first: FirstPart,
    pub second: SecondPart,
    pub what_if: Vec<Synthesis>,
    pub bound: BetaBound,
}

impl ChainReport {
    pub fn invariants_hold(&self) -> bool {
        let finite = [self.first.l1_terms, self.first.l1_closed, self.first.moment.moment, self.second.max_residual]
            .iter()
            .all(|v| v.is_finite());
        finite
            && self.first.exact_chain_holds()
            && self.first.moment.q_times_pairs() >= u128::from(self.first.q) * u128::from(self.first.goldbach_subset)
    }
}

pub fn run_chain(q: u64, x: u64, table: &PrimeTable, config: &ChainConfig) -> Result<ChainReport> {
    let first = first_part(q, x, table, config.d)?;
    let second = second_part(q, x, config.beta, table, config.constants.c1)?;
    let log_x = (x as f64).ln();
    let what_if = config
        .what_if
        .iter()
        .map(|&b| synthesize(log_x, config.d, b, 0.0))
        .collect::<Result<Vec<_>>>()?;
    let bound = beta_bound(q, config.constants.c3, config.d, config.constants.c4)?;
    Ok(ChainReport {
        constants: config.constants,
        c: config.c.unwrap_or_else(|| bound_constant(config.d, config.constants.c3)),
        first,
        second,
        what_if,
        bound,
    })
}
