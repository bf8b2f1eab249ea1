//! Run configuration: command-line flags merged over an optional
//! `key = value` file. Flags win.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use exzero_core::characters::is_odd_squarefree;
use exzero_core::goldbach::DEFAULT_CUTOFF;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// Accepts plain integers and integral scientific notation such as `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("expected a non-negative integer, got {s:?}")),
    }
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(item).collect()
}

fn parse_real(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("expected a number, got {s:?}"))
}

/// Flags shared by every subcommand. All optional so that a config file can
/// fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Comma-separated moduli.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_count)]
    pub q: Vec<u64>,
    /// Upper end of the prime range.
    #[arg(long, global = true, value_parser = parse_count)]
    pub x: Option<u64>,
    /// Sieve limit (defaults to what the command needs).
    #[arg(long, global = true, value_parser = parse_count)]
    pub limit: Option<u64>,
    #[arg(long, global = true)]
    pub c1: Option<f64>,
    #[arg(long, global = true)]
    pub c3: Option<f64>,
    #[arg(long, global = true)]
    pub c4: Option<f64>,
    /// Constant of the final bound 1 − c/log²q.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Prime cutoff for the twin-prime constant.
    #[arg(long, global = true, value_parser = parse_count)]
    pub d_cutoff: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// key = value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_parser = parse_count)]
    pub n_min: Option<u64>,
    #[arg(long, global = true, value_parser = parse_count)]
    pub n_max: Option<u64>,
    #[arg(long, global = true, value_parser = parse_count)]
    pub n_step: Option<u64>,
    #[arg(long, global = true, value_parser = parse_count)]
    pub bound_min: Option<u64>,
    #[arg(long, global = true, value_parser = parse_count)]
    pub bound_max: Option<u64>,

    #[arg(long, global = true)]
    pub lo: Option<f64>,
    #[arg(long, global = true)]
    pub hi: Option<f64>,
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Add a planted-root row to the zero scan.
    #[arg(long, global = true)]
    pub self_test: bool,

    /// Exceptional zero for the second-part model.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Comma-separated β values for the synthesis sweep.
    #[arg(long, global = true, value_delimiter = ',')]
    pub what_if: Vec<f64>,

    #[arg(long, global = true)]
    pub tol_twisted_gauss: Option<f64>,
    #[arg(long, global = true)]
    pub tol_gauss: Option<f64>,
    #[arg(long, global = true)]
    pub tol_ramanujan: Option<f64>,
    #[arg(long, global = true)]
    pub tol_moment: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Twisted Gauss sum residual, relative to √q.
    pub twisted_gauss: f64,
    /// Gauss-sum value, relative to √q.
    pub gauss: f64,
    /// Twisted Ramanujan sum, relative to q.
    pub ramanujan: f64,
    /// Moment identity gap, relative to max(1, qP).
    pub moment: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { twisted_gauss: 1e-6, gauss: 1e-9, ramanujan: 1e-6, moment: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q: Option<Vec<u64>>,
    pub x: Option<u64>,
    pub limit: Option<u64>,
    pub c1: f64,
    pub c3: f64,
    pub c4: f64,
    pub c: Option<f64>,
    pub d_cutoff: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub n_min: Option<u64>,
    pub n_max: Option<u64>,
    pub n_step: Option<u64>,
    pub bound_min: Option<u64>,
    pub bound_max: Option<u64>,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub self_test: bool,
    pub beta: Option<f64>,
    pub what_if: Option<Vec<f64>>,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            q: None,
            x: None,
            limit: None,
            c1: 1.0,
            c3: 1.0,
            c4: 1.0,
            c: None,
            d_cutoff: DEFAULT_CUTOFF,
            format: Format::Csv,
            out: None,
            threads: None,
            n_min: None,
            n_max: None,
            n_step: None,
            bound_min: None,
            bound_max: None,
            lo: 0.05,
            hi: 1.0,
            step: 1e-3,
            self_test: false,
            beta: None,
            what_if: None,
            tolerances: Tolerances::default(),
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "q", "x", "limit", "c1", "c3", "c4", "c", "d-cutoff", "format", "out", "threads", "n-min",
    "n-max", "n-step", "bound-min", "bound-max", "lo", "hi", "step", "self-test", "beta",
    "what-if", "tol-twisted-gauss", "tol-gauss", "tol-ramanujan", "tol-moment",
];

/// Parses `key = value` lines; `#` starts a comment. Underscores in keys are
/// accepted as dashes.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key = value", lineno + 1)));
        };
        let key = key.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", lineno + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

fn from_file<T>(
    file: &BTreeMap<String, String>,
    key: &str,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Option<T>, CliError> {
    file.get(key)
        .map(|v| parse(v).map_err(|e| CliError::Usage(format!("config key {key}: {e}"))))
        .transpose()
}

impl RunConfig {
    pub fn from_flags(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => load_file(path)?,
            None => BTreeMap::new(),
        };
        Self::merge(flags, &file)
    }

    pub fn merge(flags: &Flags, file: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let d = RunConfig::default();
        let real = |key: &str, flag: Option<f64>| -> Result<Option<f64>, CliError> {
            Ok(flag.or(from_file(file, key, parse_real)?))
        };
        let count = |key: &str, flag: Option<u64>| -> Result<Option<u64>, CliError> {
            Ok(flag.or(from_file(file, key, parse_count)?))
        };
        let q = if flags.q.is_empty() {
            from_file(file, "q", |s| parse_list(s, parse_count))?
        } else {
            Some(flags.q.clone())
        };
        let what_if = if flags.what_if.is_empty() {
            from_file(file, "what-if", |s| parse_list(s, parse_real))?
        } else {
            Some(flags.what_if.clone())
        };
        let threads = match flags.threads {
            Some(t) => Some(t),
            None => from_file(file, "threads", parse_count)?.map(|t| t as usize),
        };
        let self_test = flags.self_test
            || from_file(file, "self-test", |s| s.parse::<bool>().map_err(|e| e.to_string()))?.unwrap_or(false);
        let cfg = RunConfig {
            q,
            x: count("x", flags.x)?,
            limit: count("limit", flags.limit)?,
            c1: real("c1", flags.c1)?.unwrap_or(d.c1),
            c3: real("c3", flags.c3)?.unwrap_or(d.c3),
            c4: real("c4", flags.c4)?.unwrap_or(d.c4),
            c: real("c", flags.c)?,
            d_cutoff: count("d-cutoff", flags.d_cutoff)?.unwrap_or(d.d_cutoff),
            format: match flags.format {
                Some(f) => f,
                None => from_file(file, "format", str::parse)?.unwrap_or(d.format),
            },
            out: flags.out.clone().or(from_file(file, "out", |s| Ok(PathBuf::from(s)))?),
            threads,
            n_min: count("n-min", flags.n_min)?,
            n_max: count("n-max", flags.n_max)?,
            n_step: count("n-step", flags.n_step)?,
            bound_min: count("bound-min", flags.bound_min)?,
            bound_max: count("bound-max", flags.bound_max)?,
            lo: real("lo", flags.lo)?.unwrap_or(d.lo),
            hi: real("hi", flags.hi)?.unwrap_or(d.hi),
            step: real("step", flags.step)?.unwrap_or(d.step),
            self_test,
            beta: real("beta", flags.beta)?,
            what_if,
            tolerances: Tolerances {
                twisted_gauss: real("tol-twisted-gauss", flags.tol_twisted_gauss)?.unwrap_or(d.tolerances.twisted_gauss),
                gauss: real("tol-gauss", flags.tol_gauss)?.unwrap_or(d.tolerances.gauss),
                ramanujan: real("tol-ramanujan", flags.tol_ramanujan)?.unwrap_or(d.tolerances.ramanujan),
                moment: real("tol-moment", flags.tol_moment)?.unwrap_or(d.tolerances.moment),
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that hold for every command.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.threads == Some(0) {
            return Err(CliError::Usage("thread count must be at least 1".into()));
        }
        if let (Some(x), Some(limit)) = (self.x, self.limit) {
            if x > limit {
                return Err(CliError::Usage(format!("x = {x} exceeds the sieve limit {limit}")));
            }
        }
        for (name, v) in [("c1", self.c1), ("c3", self.c3), ("c4", self.c4)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(CliError::Usage(format!("c must be positive, got {c}")));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [("tol-twisted-gauss", t.twisted_gauss), ("tol-gauss", t.gauss), ("tol-ramanujan", t.ramanujan), ("tol-moment", t.moment)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// The configured moduli, each required to be odd square-free `>= 3`
    /// (or 4 / 8 when `allow_even_special`).
    pub fn moduli(&self, default: Vec<u64>, allow_even_special: bool) -> Result<Vec<u64>, CliError> {
        let qs = self.q.clone().unwrap_or(default);
        if qs.is_empty() {
            return Err(CliError::Usage("empty q list".into()));
        }
        for &q in &qs {
            if allow_even_special && (q == 4 || q == 8) {
                continue;
            }
            if q < 3 {
                return Err(CliError::Usage(format!("q = {q}: modulus must be at least 3")));
            }
            if q % 2 == 0 {
                return Err(CliError::Usage(format!("q = {q}: modulus must be odd")));
            }
            if !is_odd_squarefree(q) {
                return Err(CliError::Usage(format!("q = {q}: not square-free")));
            }
        }
        Ok(qs)
    }
}

fn load_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_file(&text)
}
