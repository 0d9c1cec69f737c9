//! Command line front end: `simulate`, `converge` and `selftest`.
//!
//! Every flag maps onto a configuration key and is applied on top of the
//! optional `--config` file. Exit codes: 0 success, 1 invalid input, 2
//! numerical failure. All messages go to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kdvexp::experiments::{convergence_study, make_initial};
use kdvexp::io::{emit_plot_script, write_errors_csv, write_trajectory_csv, ConfigEntries, PlotSource, RunConfig};
use kdvexp::schemes::{run_evolution, StepperState};
use kdvexp::selftest::run_selftest;
use kdvexp::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "kdvexp", version, about = "Exponential-type integrators for the periodic KdV equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve one initial value and write the snapshots as CSV.
    Simulate(RunArgs),
    /// Measure errors over a list of step sizes and fit convergence slopes.
    Converge(RunArgs),
    /// Run the built-in correctness suites.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Flags of `simulate` and `converge`; each one overrides the config key of
/// the same name (dashes become underscores).
#[derive(Args, Debug)]
struct RunArgs {
    /// Configuration file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of Fourier modes K (k_modes).
    #[arg(long = "k")]
    k_modes: Option<String>,
    #[arg(long)]
    torus_scale: Option<String>,
    /// expint1, expint2 or both.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    /// auto or require-zero-mean.
    #[arg(long)]
    alpha_policy: Option<String>,
    /// zero or exact.
    #[arg(long)]
    nyquist: Option<String>,
    #[arg(long)]
    dealias: Option<String>,
    /// sech2sin, soliton c=<c> a=<a>, or custom k:re:im ...; the words up to
    /// the next `--flag` form the specification, so quoting is optional.
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    ic: Option<String>,
    #[arg(long)]
    t_final: Option<String>,
    #[arg(long)]
    snapshots: Option<String>,
    #[arg(long)]
    snapshot_times: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    plot: Option<String>,
    /// dyadic:2^A..2^B[:xF] or a comma-separated list.
    #[arg(long)]
    tau_list: Option<String>,
    /// exact or fine:<tau_ref>.
    #[arg(long)]
    reference: Option<String>,
    /// Comma-separated subset of l2, h1, h2.
    #[arg(long)]
    norm: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

impl RunArgs {
    fn entries(&self) -> Result<ConfigEntries, Error> {
        let mut e = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                ConfigEntries::parse(&text)?
            }
            None => ConfigEntries::default(),
        };
        let flags = [
            ("k_modes", &self.k_modes),
            ("torus_scale", &self.torus_scale),
            ("scheme", &self.scheme),
            ("tau", &self.tau),
            ("alpha_policy", &self.alpha_policy),
            ("nyquist", &self.nyquist),
            ("dealias", &self.dealias),
            ("ic", &self.ic),
            ("t_final", &self.t_final),
            ("snapshots", &self.snapshots),
            ("snapshot_times", &self.snapshot_times),
            ("out", &self.out),
            ("plot", &self.plot),
            ("tau_list", &self.tau_list),
            ("reference", &self.reference),
            ("norm", &self.norm),
            ("seed", &self.seed),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                e.set(key, v)?;
            }
        }
        Ok(e)
    }
}

fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INVALID
    }
}

/// Parse `argv` (program name first), run the command and return the exit code.
pub fn cli_main<I, T>(argv: I, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(join_ic_words(argv.into_iter().map(Into::into).collect())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => simulate(&args, stderr),
        Command::Converge(args) => converge(&args, stderr),
        Command::Selftest { seed } => Ok(selftest(seed.unwrap_or(kdvexp::io::config::DEFAULT_SEED), stderr)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Merge the words following `--ic` (up to the next `--flag`) into one value,
/// so that `--ic soliton c=1 a=0` needs no quotes. Mode lists such as
/// `custom -1:0.5:0` start with a single dash and stay part of the value.
fn join_ic_words(argv: Vec<OsString>) -> Vec<OsString> {
    let mut out = Vec::with_capacity(argv.len());
    let mut iter = argv.into_iter().peekable();
    while let Some(arg) = iter.next() {
        if arg != "--ic" {
            out.push(arg);
            continue;
        }
        out.push(arg);
        let mut words: Vec<String> = Vec::new();
        while let Some(next) = iter.peek() {
            if next.to_string_lossy().starts_with("--") {
                break;
            }
            words.push(iter.next().unwrap().to_string_lossy().into_owned());
        }
        if !words.is_empty() {
            out.push(words.join(" ").into());
        }
    }
    out
}

fn script_path(csv: &Path) -> PathBuf {
    csv.with_extension("gp")
}

fn simulate(args: &RunArgs, log: &mut dyn Write) -> Result<i32, Error> {
    let cfg = RunConfig::from_entries(&args.entries()?)?;
    let (variant, scheme) = cfg.require_simulation()?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("trajectory.csv"));
    let u0 = make_initial(&cfg.initial_condition());
    let traj = run_evolution(&StepperState::new(u0), &scheme, cfg.t_final, &cfg.snapshot_times())?;
    write_trajectory_csv(&traj, &out)?;
    let _ = writeln!(
        log,
        "simulate: {variant}, tau = {:e}, {} steps ({} shortened), mean {:e}; wrote {}",
        scheme.tau,
        traj.meta.steps,
        traj.meta.partial_steps,
        traj.meta.alpha,
        out.display()
    );
    if cfg.plot {
        let script = script_path(&out);
        emit_plot_script(PlotSource::Trajectory(&traj), &out, &script)?;
        let _ = writeln!(log, "simulate: wrote {}", script.display());
    }
    Ok(EXIT_OK)
}

fn converge(args: &RunArgs, log: &mut dyn Write) -> Result<i32, Error> {
    let cfg = RunConfig::from_entries(&args.entries()?)?;
    let (schemes, taus, reference) = cfg.require_study()?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("errors.csv"));
    let study = convergence_study(&cfg.initial_condition(), &schemes, &taus, cfg.t_final, reference, &cfg.norms)?;
    write_errors_csv(&study, &out)?;
    let _ = writeln!(log, "converge: {} rows against the {reference} reference; wrote {}", study.records.len(), out.display());
    for s in &study.slopes {
        let _ = writeln!(log, "converge: {} {} slope {:.4}", s.scheme, s.norm, s.slope);
    }
    for w in &study.warnings {
        let _ = writeln!(log, "warning: {w}");
    }
    if cfg.plot {
        let script = script_path(&out);
        emit_plot_script(PlotSource::Study(&study), &out, &script)?;
        let _ = writeln!(log, "converge: wrote {}", script.display());
    }
    Ok(if study.records.iter().any(|r| r.diverged) {
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    })
}

fn selftest(seed: u64, log: &mut dyn Write) -> i32 {
    let results = run_selftest(seed);
    let _ = writeln!(log, "{:<20} {:<6} {:>12} {:>12}  notes", "suite", "result", "worst", "tolerance");
    for r in &results {
        let _ = writeln!(
            log,
            "{:<20} {:<6} {:>12.3e} {:>12.1e}  {}",
            r.name,
            if r.passed { "pass" } else { "FAIL" },
            r.worst,
            r.tolerance,
            r.detail
        );
    }
    if results.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    }
}
