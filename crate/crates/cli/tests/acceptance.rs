//! Acceptance suite: twelve numbered criteria, each with a pinned tolerance
//! and a wall-clock limit. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fail.

use std::process::Command;
use std::time::{Duration, Instant};

use exzero_core::chain::{beta_bound, goldbach_subset_count, synthesize};
use exzero_core::characters::{gauss_sum, gauss_sum_closed_form, is_odd_squarefree, real_character};
use exzero_core::expsums::{
    geometric_sum, geometric_sum_direct, lemma6_moment, lemma6_twisted, moment_sum,
    twisted_gauss_residual,
};
use exzero_core::goldbach::{twin_prime_constant, GoldbachCounts};
use exzero_core::lfunc::{l_value, scan_real_zeros};
use exzero_core::primes::sieve;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn odd_squarefree(hi: u64) -> impl Iterator<Item = u64> {
    (3..=hi).filter(|&q| is_odd_squarefree(q))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_geometric() -> Check {
    let mut cases = 0;
    for m in 1..=50u64 {
        for n in -200..=200i64 {
            let exact = geometric_sum(m, n).map_err(|e| e.to_string())?;
            let direct = geometric_sum_direct(m, n).map_err(|e| e.to_string())?;
            ensure(direct.re.round() as i64 == exact && direct.im.round() == 0.0, || {
                format!("m={m} n={n}: direct {direct} vs {exact}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases exact"))
}

fn c2_ramanujan_moment() -> Check {
    for q in 2..=1000u64 {
        lemma6_moment(q).map_err(|e| e.to_string())?;
    }
    Ok("sum c_q(k)^2 = q phi(q) for q = 2..1000".into())
}

fn c3_ramanujan_twisted() -> Check {
    let mut worst = 0.0f64;
    for q in odd_squarefree(500) {
        let v = lemma6_twisted(q).map_err(|e| e.to_string())?;
        ensure(v.norm() <= 1e-6 * q as f64, || format!("q={q}: |sum| = {}", v.norm()))?;
        worst = worst.max(v.norm() / q as f64);
    }
    Ok(format!("max |sum|/q = {worst:.3e}"))
}

fn c4_gauss_sums() -> Check {
    let mut worst = 0.0f64;
    for q in odd_squarefree(500) {
        let chi = real_character(q).map_err(|e| e.to_string())?;
        let r = (gauss_sum(&chi).map_err(|e| e.to_string())? - gauss_sum_closed_form(&chi)).norm();
        let tol = 1e-9 * (q as f64).sqrt();
        ensure(r <= tol, || format!("q={q}: residual {r:e}"))?;
        worst = worst.max(r / tol);
    }
    for q in [4u64, 8] {
        let chi = real_character(q).map_err(|e| e.to_string())?;
        let r = (gauss_sum(&chi).map_err(|e| e.to_string())? - gauss_sum_closed_form(&chi)).norm();
        ensure(r <= 1e-12, || format!("q={q}: residual {r:e}"))?;
    }
    Ok(format!("worst residual {worst:.3e} of tolerance; chi_4, chi_8 within 1e-12"))
}

fn c5_twisted_gauss() -> Check {
    let mut worst = 0.0f64;
    for q in odd_squarefree(200) {
        let chi = real_character(q).map_err(|e| e.to_string())?;
        let tol = 1e-6 * (q as f64).sqrt();
        for n in 0..q as i64 {
            let r = twisted_gauss_residual(&chi, n).map_err(|e| e.to_string())?;
            ensure(r <= tol, || format!("q={q} n={n}: residual {r:e}"))?;
            worst = worst.max(r);
        }
    }
    Ok(format!("max residual {worst:.3e}"))
}

fn c6_moments() -> Check {
    let x = 1_000_000u64;
    let table = sieve(x).map_err(|e| e.to_string())?;
    let mut count = 0;
    let mut worst = 0.0f64;
    for q in odd_squarefree(211) {
        let spec = table.residue_spectrum(x as f64, q).map_err(|e| e.to_string())?;
        let m = moment_sum(&spec).map_err(|e| e.to_string())?;
        let qp = m.q_times_pairs();
        let tol = 1e-4 * (qp as f64).max(1.0);
        ensure(m.gap <= tol, || format!("q={q}: gap {} > {tol}", m.gap))?;
        let g = goldbach_subset_count(&table, q, x).map_err(|e| e.to_string())?;
        ensure(qp >= u128::from(q) * u128::from(g), || format!("q={q}: qP < qG"))?;
        worst = worst.max(m.gap / tol);
        count += 1;
    }
    Ok(format!("{count} moduli at x = 1e6; worst gap {worst:.3e} of tolerance"))
}

fn c7_convolution() -> Check {
    let limit = 10_000u64;
    let table = sieve(limit).map_err(|e| e.to_string())?;
    let counts = GoldbachCounts::build(&table, limit).map_err(|e| e.to_string())?;
    let ps = table.odd_primes_upto(limit);
    let mut brute = vec![0u64; limit as usize + 1];
    for &a in ps {
        for &b in ps {
            let s = u64::from(a) + u64::from(b);
            if s <= limit {
                brute[s as usize] += 1;
            }
        }
    }
    for n in (0..=limit).step_by(2) {
        let got = counts.get(n);
        ensure(got == Some(brute[n as usize]), || format!("N={n}: {got:?} vs {}", brute[n as usize]))?;
    }
    Ok("all even N <= 1e4 agree".into())
}

fn c8_twin_prime_constant() -> Check {
    let a = twin_prime_constant(10_000_000).map_err(|e| e.to_string())?;
    let b = twin_prime_constant(100_000_000).map_err(|e| e.to_string())?;
    ensure((a.value - 0.660_161_8).abs() <= 1e-6, || format!("d = {}", a.value))?;
    let gap = (a.value - b.value).abs();
    ensure(gap <= a.radius + b.radius, || format!("cutoffs disagree by {gap:e} > {:e}", a.radius + b.radius))?;
    Ok(format!("d = {:.12} (radius {:.1e}); 1e7 vs 1e8 gap {gap:.1e}", a.value, a.radius))
}

/// Catalan's constant from `π/8·log(2+√3) + 3/8·Σ 1/((2k+1)² C(2k,k))`.
fn catalan_series() -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0f64;
    for k in 0..60u32 {
        if k > 0 {
            binom *= f64::from(2 * k) * f64::from(2 * k - 1) / f64::from(k * k);
        }
        sum += 1.0 / (f64::from(2 * k + 1).powi(2) * binom);
    }
    std::f64::consts::PI / 8.0 * (2.0 + 3f64.sqrt()).ln() + 3.0 / 8.0 * sum
}

/// `L(1, χ₃) = Σ_m 1/((3m+1)(3m+2))` with an integral tail correction.
fn l1_chi3_series() -> f64 {
    let terms = 200_000u32;
    let head: f64 = (0..terms).rev().map(|m| 1.0 / ((3.0 * f64::from(m) + 1.0) * (3.0 * f64::from(m) + 2.0))).sum();
    // Σ_{m>=M} f(m) ≈ ∫_M^∞ f + f(M)/2 with f(t) = 1/((3t+1)(3t+2)).
    let m = f64::from(terms);
    let integral = ((3.0 * m + 2.0) / (3.0 * m + 1.0)).ln() / 3.0;
    head + integral + 0.5 / ((3.0 * m + 1.0) * (3.0 * m + 2.0))
}

fn c9_l_values() -> Check {
    let l3 = l_value(1.0, &real_character(3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let l4 = l_value(2.0, &real_character(4).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let (o3, o4) = (l1_chi3_series(), catalan_series());
    ensure((l3 - 0.604_599_788).abs() <= 1e-8 && (l3 - o3).abs() <= 1e-8, || format!("L(1,chi_3) = {l3}, oracle {o3}"))?;
    ensure((l4 - 0.915_965_594).abs() <= 1e-8 && (l4 - o4).abs() <= 1e-8, || format!("L(2,chi_4) = {l4}, oracle {o4}"))?;
    Ok(format!("L(1,chi_3) = {l3:.12}, L(2,chi_4) = {l4:.12}"))
}

fn c10_no_real_zeros() -> Check {
    for q in [3u64, 7, 11, 15, 19, 23, 31, 35] {
        let chi = real_character(q).map_err(|e| e.to_string())?;
        for step in [1e-3, 5e-4] {
            let scan = scan_real_zeros(&chi, 0.05, 1.0, step).map_err(|e| e.to_string())?;
            ensure(scan.scan.brackets.is_empty() && scan.beta.is_none(), || {
                format!("q={q} step={step}: brackets {:?}", scan.scan.brackets)
            })?;
        }
    }
    Ok("no sign change on [0.05, 1] for 8 moduli at steps 1e-3 and 5e-4".into())
}

fn c11_round_trip() -> Check {
    let d = twin_prime_constant(10_000_000).map_err(|e| e.to_string())?.value;
    for log_q in [5.0f64, 10.0, 20.0] {
        let q = log_q.exp().round() as u64;
        let b = beta_bound(q, 1.0, d, 1.0).map_err(|e| e.to_string())?;
        let budget = b.extremal_budget();
        let at = synthesize(b.log_x, d, b.beta_max, budget).map_err(|e| e.to_string())?;
        ensure(at.final_holds && (at.final_lhs - at.final_rhs).abs() <= 1e-9, || {
            format!("log q = {log_q}: {} vs {}", at.final_lhs, at.final_rhs)
        })?;
        let above = synthesize(b.log_x, d, (b.beta_max + 1e-8).min(1.0), budget).map_err(|e| e.to_string())?;
        ensure(!above.final_holds, || format!("log q = {log_q}: beta above beta_max still holds"))?;
    }
    Ok("beta_max is tight for log q in {5, 10, 20}".into())
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_exzero")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn c12_reproducible() -> Check {
    for args in [
        &["chain", "--q", "15,21", "--x", "200000"][..],
        &["moments", "--q", "3,15,105", "--x", "100000", "--format", "json"][..],
        &["zeros", "--q", "3,7", "--step", "0.01"][..],
    ] {
        let a = run_cli(args)?;
        let b = run_cli(args)?;
        ensure(a == b && !a.is_empty(), || format!("{args:?}: outputs differ"))?;
    }
    Ok("chain, moments and zeros byte-identical across runs".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("geometric sums exact", Duration::from_secs(1), c1_geometric),
        ("Ramanujan second moment", Duration::from_secs(5), c2_ramanujan_moment),
        ("character-twisted Ramanujan sum", Duration::from_secs(10), c3_ramanujan_twisted),
        ("Gauss sums", Duration::from_secs(10), c4_gauss_sums),
        ("twisted Gauss sums", Duration::from_secs(30), c5_twisted_gauss),
        ("prime exponential-sum moments", Duration::from_secs(120), c6_moments),
        ("Goldbach convolution", Duration::from_secs(30), c7_convolution),
        ("twin-prime constant", Duration::from_secs(60), c8_twin_prime_constant),
        ("L-function values", Duration::from_secs(5), c9_l_values),
        ("no real zeros", Duration::from_secs(60), c10_no_real_zeros),
        ("exceptional-zero bound round trip", Duration::from_secs(1), c11_round_trip),
        ("reproducible output", Duration::from_secs(60), c12_reproducible),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= *limit => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over time limit {limit:?}; {detail}"),
            Err(why) => format!("FAIL  {why}"),
        };
        failed += usize::from(verdict.starts_with("FAIL"));
        println!("criterion {:>2} [{name}] {:.2}s  {verdict}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
