//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment. Unknown keys, malformed
//! values and duplicates are errors carrying the line number. Command-line
//! overrides go through [`ConfigEntries::set`] with the same keys and value
//! syntax, so both routes describe a run identically.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::experiments::{dyadic_taus, IcKind, InitialCondition, Norm, ReferenceKind};
use crate::schemes::{AlphaPolicy, SchemeConfig, Variant};
use crate::spectral::{Grid, NyquistPolicy};

pub const KEYS: &[&str] = &[
    "k_modes",
    "torus_scale",
    "scheme",
    "tau",
    "alpha_policy",
    "nyquist",
    "dealias",
    "ic",
    "t_final",
    "snapshots",
    "snapshot_times",
    "out",
    "plot",
    "tau_list",
    "reference",
    "norm",
    "seed",
];

/// Raw assignments with the line each came from (0 for the command line).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigEntries {
    entries: BTreeMap<String, (String, usize)>,
    last_line: usize,
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

impl ConfigEntries {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ConfigEntries::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            out.last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, format!("expected 'key = value', got '{content}'")))?;
            let key = key.trim();
            let value = value.trim();
            check_key(key, line)?;
            if value.is_empty() {
                return Err(config_err(line, format!("missing value for '{key}'")));
            }
            if let Some((_, first)) = out.entries.get(key) {
                return Err(config_err(line, format!("duplicate key '{key}' (first set on line {first})")));
            }
            out.entries.insert(key.to_string(), (value.to_string(), line));
        }
        Ok(out)
    }

    /// Command-line override; replaces any value from the file.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        check_key(key, 0)?;
        self.entries.insert(key.to_string(), (value.trim().to_string(), 0));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    fn parsed<T>(&self, key: &str, parse: impl Fn(&str) -> std::result::Result<T, String>) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some((value, line)) => parse(value)
                .map(Some)
                .map_err(|m| config_err(line, format!("{key}: {m}"))),
        }
    }

    fn required<T>(&self, key: &str, parse: impl Fn(&str) -> std::result::Result<T, String>) -> Result<T> {
        self.parsed(key, parse)?
            .ok_or_else(|| config_err(self.last_line, format!("missing required key '{key}'")))
    }

    fn line(&self, key: &str) -> usize {
        self.get(key).map_or(self.last_line, |(_, l)| l)
    }
}

fn check_key(key: &str, line: usize) -> Result<()> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(config_err(line, format!("unknown key '{key}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeChoice {
    Single(Variant),
    Both,
}

impl SchemeChoice {
    pub fn variants(self) -> Vec<Variant> {
        match self {
            SchemeChoice::Single(v) => vec![v],
            SchemeChoice::Both => vec![Variant::ExpInt1, Variant::ExpInt2],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Snapshots {
    /// Equally spaced times from 0 to `t_final` (just `t_final` for 1).
    Count(usize),
    Times(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub scheme: SchemeChoice,
    pub tau: Option<f64>,
    pub alpha_policy: AlphaPolicy,
    pub ic: IcKind,
    pub t_final: f64,
    pub snapshots: Snapshots,
    pub out: Option<PathBuf>,
    pub plot: bool,
    pub tau_list: Option<Vec<f64>>,
    pub reference: Option<ReferenceKind>,
    pub norms: Vec<Norm>,
    pub seed: u64,
    lines: BTreeMap<&'static str, usize>,
    last_line: usize,
}

pub const DEFAULT_SNAPSHOTS: usize = 11;
pub const DEFAULT_SEED: u64 = 20_250_101;

pub fn parse_config(text: &str) -> Result<RunConfig> {
    RunConfig::from_entries(&ConfigEntries::parse(text)?)
}

impl RunConfig {
    pub fn from_entries(e: &ConfigEntries) -> Result<Self> {
        let k_modes = e.required("k_modes", parse_modes)?;
        let torus_scale = e.parsed("torus_scale", parse_positive)?.unwrap_or(1.0);
        let nyquist = e.parsed("nyquist", parse_nyquist)?.unwrap_or_default();
        let dealias = e.parsed("dealias", parse_bool)?.unwrap_or(false);
        let grid = Grid::new(k_modes, torus_scale)
            .map_err(|err| config_err(e.line("k_modes"), err.to_string()))?
            .with_nyquist(nyquist)
            .with_dealias(dealias);

        let ic = e.required("ic", parse_ic)?;
        InitialCondition::new(ic.clone(), grid).map_err(|err| config_err(e.line("ic"), err.to_string()))?;
        let t_final = e.required("t_final", parse_nonnegative)?;

        let snapshots = match (e.parsed("snapshots", parse_count)?, e.parsed("snapshot_times", parse_list)?) {
            (Some(_), Some(_)) => {
                let line = e.line("snapshots").max(e.line("snapshot_times"));
                return Err(config_err(line, "give either 'snapshots' or 'snapshot_times', not both"));
            }
            (Some(n), None) => Snapshots::Count(n),
            (None, Some(times)) => {
                let ok = times.windows(2).all(|w| w[0] < w[1]) && times.iter().all(|&t| (0.0..=t_final).contains(&t));
                if !ok {
                    return Err(config_err(
                        e.line("snapshot_times"),
                        format!("snapshot_times must increase strictly and lie in [0, {t_final}]"),
                    ));
                }
                Snapshots::Times(times)
            }
            (None, None) => Snapshots::Count(DEFAULT_SNAPSHOTS),
        };

        let mut lines = BTreeMap::new();
        for key in KEYS {
            if let Some((_, l)) = e.get(key) {
                lines.insert(*key, l);
            }
        }
        Ok(RunConfig {
            grid,
            scheme: e.parsed("scheme", parse_scheme)?.unwrap_or(SchemeChoice::Single(Variant::ExpInt2)),
            tau: e.parsed("tau", parse_positive)?,
            alpha_policy: e.parsed("alpha_policy", parse_alpha_policy)?.unwrap_or_default(),
            ic,
            t_final,
            snapshots,
            out: e.parsed("out", |s| Ok(PathBuf::from(s)))?,
            plot: e.parsed("plot", parse_bool)?.unwrap_or(true),
            tau_list: e.parsed("tau_list", parse_tau_list)?,
            reference: e.parsed("reference", parse_reference)?,
            norms: e.parsed("norm", parse_norms)?.unwrap_or_else(|| vec![Norm::H1]),
            seed: e.parsed("seed", |s| s.parse::<u64>().map_err(|err| err.to_string()))?.unwrap_or(DEFAULT_SEED),
            lines,
            last_line: e.last_line,
        })
    }

    fn line(&self, key: &str) -> usize {
        self.lines.get(key).copied().unwrap_or(self.last_line)
    }

    pub fn initial_condition(&self) -> InitialCondition {
        InitialCondition::new(self.ic.clone(), self.grid).expect("validated on construction")
    }

    /// Settings needed by a single evolution.
    pub fn require_simulation(&self) -> Result<(Variant, SchemeConfig)> {
        let variant = match self.scheme {
            SchemeChoice::Single(v) => v,
            SchemeChoice::Both => {
                return Err(config_err(self.line("scheme"), "simulate runs one scheme; choose expint1 or expint2"))
            }
        };
        let tau = self
            .tau
            .ok_or_else(|| config_err(self.last_line, "missing required key 'tau'"))?;
        let mut cfg = SchemeConfig::new(variant, tau).map_err(|err| config_err(self.line("tau"), err.to_string()))?;
        cfg.alpha_policy = self.alpha_policy;
        cfg.nyquist_policy = self.grid.nyquist();
        cfg.dealias = self.grid.dealias();
        Ok((variant, cfg))
    }

    /// Settings needed by a convergence study: schemes, step list, reference.
    pub fn require_study(&self) -> Result<(Vec<Variant>, Vec<f64>, ReferenceKind)> {
        let taus = self
            .tau_list
            .clone()
            .ok_or_else(|| config_err(self.last_line, "missing required key 'tau_list'"))?;
        if taus.len() < 3 {
            return Err(config_err(self.line("tau_list"), "a convergence study needs at least 3 step sizes"));
        }
        let reference = self
            .reference
            .ok_or_else(|| config_err(self.last_line, "missing required key 'reference'"))?;
        match (reference, &self.ic) {
            (ReferenceKind::ExactSoliton, IcKind::Soliton { .. }) => {}
            (ReferenceKind::ExactSoliton, _) => {
                return Err(config_err(self.line("reference"), "the exact reference needs soliton initial data"))
            }
            (ReferenceKind::FineTau { tau_ref }, _) => {
                let smallest = taus.iter().copied().fold(f64::INFINITY, f64::min);
                if tau_ref * crate::experiments::REFERENCE_RATIO > smallest * (1.0 + 1e-12) {
                    return Err(config_err(
                        self.line("reference"),
                        format!(
                            "reference step {tau_ref:e} must be at most the smallest study step {smallest:e} / {}",
                            crate::experiments::REFERENCE_RATIO
                        ),
                    ));
                }
            }
        }
        if self.t_final.is_nan() || self.t_final <= 0.0 {
            return Err(config_err(self.line("t_final"), "a convergence study needs t_final > 0"));
        }
        Ok((self.scheme.variants(), taus, reference))
    }

    /// Snapshot times in `[0, t_final]`, ending at `t_final`.
    pub fn snapshot_times(&self) -> Vec<f64> {
        match &self.snapshots {
            Snapshots::Times(t) => t.clone(),
            Snapshots::Count(1) => vec![self.t_final],
            Snapshots::Count(n) => {
                let m = (*n - 1) as f64;
                let mut times: Vec<f64> = (0..*n).map(|i| self.t_final * i as f64 / m).collect();
                *times.last_mut().unwrap() = self.t_final;
                times.dedup();
                times
            }
        }
    }
}

type Parsed<T> = std::result::Result<T, String>;

/// Real number, also accepting powers written `b^e` (e.g. `2^-7`).
pub fn parse_number(s: &str) -> Parsed<f64> {
    let s = s.trim();
    let value = match s.split_once('^') {
        Some((b, e)) => {
            let b: f64 = b.trim().parse().map_err(|_| format!("bad base in '{s}'"))?;
            let e: f64 = e.trim().parse().map_err(|_| format!("bad exponent in '{s}'"))?;
            b.powf(e)
        }
        None => s.parse::<f64>().map_err(|_| format!("'{s}' is not a number"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// A number, or a multiple of pi written like `-5pi`.
fn parse_multiple_of_pi(s: &str) -> Parsed<f64> {
    match s.trim().strip_suffix("pi") {
        Some("") | Some("+") => Ok(std::f64::consts::PI),
        Some("-") => Ok(-std::f64::consts::PI),
        Some(m) => Ok(parse_number(m)? * std::f64::consts::PI),
        None => parse_number(s),
    }
}

fn parse_positive(s: &str) -> Parsed<f64> {
    let v = parse_number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn parse_nonnegative(s: &str) -> Parsed<f64> {
    let v = parse_number(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be non-negative, got {v}"))
    }
}

fn parse_modes(s: &str) -> Parsed<usize> {
    let k: usize = s.trim().parse().map_err(|_| format!("'{s}' is not a mode count"))?;
    if !k.is_multiple_of(2) {
        return Err(format!("must be even, got {k}"));
    }
    Ok(k)
}

fn parse_count(s: &str) -> Parsed<usize> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got '{s}'")),
    }
}

fn parse_bool(s: &str) -> Parsed<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(format!("expected true or false, got '{other}'")),
    }
}

fn parse_scheme(s: &str) -> Parsed<SchemeChoice> {
    match s.trim().to_ascii_lowercase().as_str() {
        "both" => Ok(SchemeChoice::Both),
        other => other.parse::<Variant>().map(SchemeChoice::Single).map_err(|e| e.to_string()),
    }
}

fn parse_alpha_policy(s: &str) -> Parsed<AlphaPolicy> {
    match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
        "auto" | "auto-shift" | "autoshift" => Ok(AlphaPolicy::AutoShift),
        "require-zero-mean" | "zero-mean" => Ok(AlphaPolicy::RequireZeroMean),
        other => Err(format!("expected auto or require-zero-mean, got '{other}'")),
    }
}

fn parse_nyquist(s: &str) -> Parsed<NyquistPolicy> {
    match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
        "zero" | "zero-nyquist" => Ok(NyquistPolicy::ZeroNyquist),
        "exact" | "paper-exact" => Ok(NyquistPolicy::PaperExact),
        other => Err(format!("expected zero or exact, got '{other}'")),
    }
}

fn parse_list(s: &str) -> Parsed<Vec<f64>> {
    s.split(',').map(parse_number).collect()
}

/// `sech2sin`, `soliton c=<c> a=<a>` or `custom <k>:<re>:<im> ...`.
pub fn parse_ic(s: &str) -> Parsed<IcKind> {
    let mut words = s.split_whitespace();
    match words.next().map(str::to_ascii_lowercase).as_deref() {
        Some("sech2sin") => match words.next() {
            None => Ok(IcKind::Sech2Sin),
            Some(w) => Err(format!("sech2sin takes no parameters, got '{w}'")),
        },
        Some("soliton") => {
            let (mut c, mut a) = (None, 0.0);
            for w in words {
                match w.split_once('=') {
                    Some(("c", v)) => c = Some(parse_number(v)?),
                    Some(("a", v)) => a = parse_multiple_of_pi(v)?,
                    _ => return Err(format!("unexpected soliton parameter '{w}'")),
                }
            }
            let c = c.ok_or("soliton needs c=<speed>")?;
            Ok(IcKind::Soliton { c, a })
        }
        Some("custom") => {
            let mut modes = Vec::new();
            for w in words {
                let parts: Vec<&str> = w.split(':').collect();
                let [k, re, im] = parts[..] else {
                    return Err(format!("custom modes are written k:re:im, got '{w}'"));
                };
                let k: i64 = k.parse().map_err(|_| format!("bad mode '{k}'"))?;
                modes.push((k, Complex64::new(parse_number(re)?, parse_number(im)?)));
            }
            Ok(IcKind::CustomSpectrum(modes))
        }
        _ => Err(format!("unknown initial condition '{s}' (sech2sin, soliton, custom)")),
    }
}

/// `dyadic:2^A..2^B[:xF]` (the steps `F 2^j` for `j = A, A-1, ..., B`) or a
/// comma-separated list.
pub fn parse_tau_list(s: &str) -> Parsed<Vec<f64>> {
    let s = s.trim();
    let Some(rest) = s.strip_prefix("dyadic:") else {
        let taus = parse_list(s)?;
        if taus.iter().any(|&t| t.is_nan() || t <= 0.0) {
            return Err("step sizes must be positive".into());
        }
        return Ok(taus);
    };
    let (range, factor) = match rest.split_once(":x") {
        Some((r, f)) => (r, parse_positive(f)?),
        None => (rest, 1.0),
    };
    let (hi, lo) = range
        .split_once("..")
        .ok_or_else(|| format!("expected dyadic:2^A..2^B[:xF], got '{s}'"))?;
    let exponent = |p: &str| -> Parsed<i32> {
        p.trim()
            .strip_prefix("2^")
            .and_then(|e| e.parse().ok())
            .ok_or_else(|| format!("expected a power of two like 2^-7, got '{p}'"))
    };
    let (a, b) = (exponent(hi)?, exponent(lo)?);
    if a < b {
        return Err(format!("dyadic range must decrease, got 2^{a}..2^{b}"));
    }
    dyadic_taus(factor * 2f64.powi(a), factor * 2f64.powi(b)).map_err(|e| e.to_string())
}

/// `exact` or `fine:<tau_ref>`.
pub fn parse_reference(s: &str) -> Parsed<ReferenceKind> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("exact") {
        return Ok(ReferenceKind::ExactSoliton);
    }
    match s.split_once(':') {
        Some((kind, v)) if kind.eq_ignore_ascii_case("fine") => Ok(ReferenceKind::FineTau {
            tau_ref: parse_positive(v)?,
        }),
        _ => Err(format!("expected 'exact' or 'fine:<tau_ref>', got '{s}'")),
    }
}

fn parse_norms(s: &str) -> Parsed<Vec<Norm>> {
    let mut norms = Vec::new();
    for part in s.split(',') {
        let n: Norm = part.parse().map_err(|e: Error| e.to_string())?;
        if !norms.contains(&n) {
            norms.push(n);
        }
    }
    Ok(norms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(err: Error) -> usize {
        match err {
            Error::Config { line, .. } => line,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn soliton_run_parses() {
        let cfg = parse_config(
            "k_modes = 1024\nscheme = expint1\ntau = 1e-3\nt_final = 1.0\nic = soliton c=1 a=0\ntorus_scale = 0.1",
        )
        .unwrap();
        assert_eq!(cfg.grid.num_modes(), 1024);
        assert_eq!(cfg.grid.torus_scale(), 0.1);
        assert_eq!(cfg.scheme, SchemeChoice::Single(Variant::ExpInt1));
        assert_eq!(cfg.ic, IcKind::Soliton { c: 1.0, a: 0.0 });
        let (variant, sc) = cfg.require_simulation().unwrap();
        assert_eq!((variant, sc.tau), (Variant::ExpInt1, 1e-3));
    }

    #[test]
    fn odd_mode_count_is_rejected() {
        let err = parse_config("k_modes = 1023").unwrap_err();
        assert_eq!(line_of(err), 1);
    }

    #[test]
    fn unknown_key_names_its_line() {
        let err = parse_config("schem = expint1").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(err.to_string().contains("schem"));
        let err = parse_config("# comment\n\nk_modes = 64\nfoo = 1\n").unwrap_err();
        assert_eq!(line_of(err), 4);
    }

    #[test]
    fn malformed_and_missing_values() {
        assert_eq!(line_of(parse_config("k_modes = 64\ntau = abc").unwrap_err()), 2);
        assert_eq!(line_of(parse_config("k_modes = 64\nt_final = 1\nic = wave").unwrap_err()), 3);
        assert_eq!(line_of(parse_config("k_modes = 64\nt_final = 1\nic = soliton c=-1").unwrap_err()), 3);
        let err = parse_config("k_modes = 64\nic = sech2sin").unwrap_err();
        assert!(err.to_string().contains("t_final"));
        assert_eq!(line_of(parse_config("k_modes = 64\nk_modes = 32").unwrap_err()), 2);
        assert_eq!(line_of(parse_config("k_modes 64").unwrap_err()), 1);
        let cfg = parse_config("k_modes = 64\nt_final = 1\nic = sech2sin").unwrap();
        assert!(cfg.require_simulation().unwrap_err().to_string().contains("tau"));
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut e = ConfigEntries::parse("k_modes = 64\nt_final = 1\nic = sech2sin\ntau = 0.1").unwrap();
        e.set("tau", "0.05").unwrap();
        let cfg = RunConfig::from_entries(&e).unwrap();
        assert_eq!(cfg.tau, Some(0.05));
        assert!(e.set("tua", "1").unwrap_err().to_string().contains("command line"));
    }

    #[test]
    fn dyadic_lists() {
        let taus = parse_tau_list("dyadic:2^-7..2^-13:x0.5").unwrap();
        assert_eq!(taus.len(), 7);
        assert_eq!(taus[0], 0.5 * 2f64.powi(-7));
        assert_eq!(taus[6], 0.5 * 2f64.powi(-13));
        assert_eq!(parse_tau_list("dyadic:2^-1..2^-3").unwrap(), vec![0.5, 0.25, 0.125]);
        assert_eq!(parse_tau_list("0.1, 0.05,0.025").unwrap(), vec![0.1, 0.05, 0.025]);
        assert!(parse_tau_list("dyadic:2^-3..2^-1").is_err());
        assert!(parse_tau_list("dyadic:4..2").is_err());
    }

    #[test]
    fn references_and_norms() {
        assert_eq!(parse_reference("exact").unwrap(), ReferenceKind::ExactSoliton);
        assert_eq!(parse_reference("fine:1e-6").unwrap(), ReferenceKind::FineTau { tau_ref: 1e-6 });
        assert!(parse_reference("coarse").is_err());
        assert_eq!(parse_norms("h1,l2,h1").unwrap(), vec![Norm::H1, Norm::L2]);
    }

    #[test]
    fn study_requirements() {
        let base = "k_modes = 64\nt_final = 1\nic = sech2sin\ntau_list = dyadic:2^-4..2^-6\n";
        let cfg = parse_config(&format!("{base}reference = exact")).unwrap();
        assert_eq!(line_of(cfg.require_study().unwrap_err()), 5);
        let cfg = parse_config(&format!("{base}reference = fine:1e-3")).unwrap();
        assert!(cfg.require_study().is_err());
        let cfg = parse_config(&format!("{base}reference = fine:1e-4\nscheme = both")).unwrap();
        let (schemes, taus, _) = cfg.require_study().unwrap();
        assert_eq!(schemes.len(), 2);
        assert_eq!(taus, vec![0.0625, 0.03125, 0.015625]);
    }

    #[test]
    fn snapshot_schedules() {
        let cfg = parse_config("k_modes = 16\nt_final = 1\nic = sech2sin\nsnapshots = 5").unwrap();
        assert_eq!(cfg.snapshot_times(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let cfg = parse_config("k_modes = 16\nt_final = 0.3\nic = sech2sin\nsnapshots = 1").unwrap();
        assert_eq!(cfg.snapshot_times(), vec![0.3]);
        let cfg = parse_config("k_modes = 16\nt_final = 1\nic = sech2sin\nsnapshot_times = 0.5, 1").unwrap();
        assert_eq!(cfg.snapshot_times(), vec![0.5, 1.0]);
        assert!(parse_config("k_modes = 16\nt_final = 1\nic = sech2sin\nsnapshot_times = 0.5, 2").is_err());
        assert!(parse_config("k_modes = 16\nt_final = 1\nic = sech2sin\nsnapshots = 3\nsnapshot_times = 1").is_err());
    }

    #[test]
    fn initial_condition_syntax() {
        let pi = std::f64::consts::PI;
        assert_eq!(parse_ic("soliton c=1.2 a=-5pi").unwrap(), IcKind::Soliton { c: 1.2, a: -5.0 * pi });
        assert!(parse_ic("soliton a=1").is_err());
        assert_eq!(parse_ic("soliton c=1.2 a=-15.7").unwrap(), IcKind::Soliton { c: 1.2, a: -15.7 });
        let custom = parse_ic("custom 1:0.5:0 -1:0.5:0").unwrap();
        assert_eq!(custom, IcKind::CustomSpectrum(vec![(1, Complex64::new(0.5, 0.0)), (-1, Complex64::new(0.5, 0.0))]));
        assert!(parse_ic("custom 1:0.5").is_err());
    }
}
