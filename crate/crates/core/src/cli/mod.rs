//! Command-line front end: `sweep`, `adapt`, `complexity` and `solve`.

mod matrix;
mod output;

pub use matrix::{parse_complex, parse_matrix, read_matrix};
pub use output::{
    aggregate_path, emit_csv, format_number, write_aggregate_table, write_complexity_table, AGGREGATE_HEADER,
    RECORD_HEADER,
};

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::fpsearch::{fp_search_binary, FpConfig, RadiusInit, SearchStats};
use crate::model::SinrForm;
use crate::quaternary::{fp_search_quaternary, stacked_c};
use crate::signature::{parse_signature, Signature};
use crate::sim::{self, Algorithm, Alphabet, ExperimentConfig, Scenario};

pub const THREADS_ENV: &str = "SIGFORGE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliErrorKind {
    /// `--help` or `--version`; the message is the text to print.
    Help,
    Usage,
    Numerical,
    Io,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: CliErrorKind,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: CliErrorKind::Usage,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            CliErrorKind::Help => 0,
            CliErrorKind::Usage => 2,
            CliErrorKind::Numerical => 3,
            CliErrorKind::Io => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::InvalidConfig(_) => CliErrorKind::Usage,
            Error::Io(_) | Error::Parse(_) => CliErrorKind::Io,
            Error::NotPositiveDefinite { .. }
            | Error::NoConvergence { .. }
            | Error::DimensionMismatch(_)
            | Error::TooLarge { .. }
            | Error::NotHermitian { .. }
            | Error::InternalInvariantViolation(_) => CliErrorKind::Numerical,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sigforge",
    version,
    about = "SINR-optimal binary and quaternary spreading signatures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// SINR loss of one user against the number of interferers.
    Sweep(ExperimentArgs),
    /// Sequential multiuser signature adaptation.
    Adapt(ExperimentArgs),
    /// Average number of search candidates per user count (binary).
    Complexity(ExperimentArgs),
    /// Optimize a single user-provided SINR matrix.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// `rank1` or `file:<path>` holding a comma-separated signature.
    #[arg(long, default_value = "rank1")]
    init: String,
    /// Multiplier on the largest eigenvalue when forming alpha.
    #[arg(long = "alpha-beta")]
    alpha_beta: Option<f64>,
    /// Absolute shift added to alpha.
    #[arg(long = "alpha-delta")]
    alpha_delta: Option<f64>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Signature length.
    #[arg(long = "L")]
    len: Option<usize>,
    /// Channel paths.
    #[arg(long = "N")]
    paths: Option<usize>,
    /// Active users (adapt).
    #[arg(long = "K")]
    users: Option<usize>,
    /// First interferer count (sweep) or user count (complexity).
    #[arg(long)]
    kmin: Option<usize>,
    /// Last interferer count (sweep) or user count (complexity).
    #[arg(long)]
    kmax: Option<usize>,
    /// Step between counts (complexity).
    #[arg(long)]
    kstep: Option<usize>,
    /// Adaptation cycles (adapt).
    #[arg(long)]
    cycles: Option<usize>,
    /// Monte Carlo trials per point.
    #[arg(long)]
    trials: Option<usize>,
    /// Base RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// `binary` or `quaternary`.
    #[arg(long)]
    alphabet: Option<String>,
    /// Comma list of real-max-ev, complex-max-ev, exhaustive, quantized, fp.
    #[arg(long)]
    algorithms: Option<String>,
    /// Noise variance.
    #[arg(long)]
    sigma2: Option<f64>,
    /// Evaluate SINR with the user's own inter-symbol interference.
    #[arg(long = "include-isi")]
    include_isi: bool,
    /// CSV destination; the aggregate file is written alongside.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// CSV file with a Hermitian matrix, entries like `a+bi`.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value = "binary")]
    alphabet: String,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Experiment(ExperimentConfig),
    Solve {
        matrix: PathBuf,
        alphabet: Alphabet,
        fp: FpConfig,
    },
}

/// A fully validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct CliInvocation {
    pub task: Task,
    pub out: Option<PathBuf>,
}

fn parse_alphabet(text: Option<&str>) -> Result<Alphabet, CliError> {
    match text {
        None => Ok(Alphabet::Binary),
        Some(t) => t
            .parse()
            .map_err(|_| CliError::usage(format!("--alphabet: expected binary or quaternary, got '{t}'"))),
    }
}

/// Builds the search configuration. A `file:` initializer is read here and
/// checked against the signature length `len`.
fn search_config(args: &SearchArgs, alphabet: Alphabet, len: Option<usize>) -> Result<FpConfig, CliError> {
    let mut fp = FpConfig::default();
    if let Some(b) = args.alpha_beta {
        fp.alpha_beta = b;
    }
    fp.alpha_delta = args.alpha_delta;
    if fp.validate().is_err() {
        return Err(CliError::usage(format!(
            "--alpha-beta must be >= 1 and --alpha-delta >= 0, got {} and {:?}",
            fp.alpha_beta, fp.alpha_delta
        )));
    }
    fp.radius_init = match args.init.as_str() {
        "rank1" => RadiusInit::Rank1Quantized,
        other => {
            let Some(path) = other.strip_prefix("file:") else {
                return Err(CliError::usage(format!(
                    "--init: expected rank1 or file:<path>, got '{other}'"
                )));
            };
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::from(Error::Io(e)).with_context(&format!("--init {path}")))?;
            let sig = parse_signature(&text).map_err(|e| CliError::from(e).with_context(&format!("--init {path}")))?;
            let binary = match (alphabet, sig) {
                (Alphabet::Binary, Signature::Binary(b)) => b,
                (Alphabet::Binary, _) => return Err(CliError::usage("--init: binary search needs a ±1 signature")),
                (Alphabet::Quaternary, Signature::Quaternary(q)) => stacked_c(&q),
                (Alphabet::Quaternary, Signature::Binary(b)) => {
                    if len.is_some_and(|l| b.len() == l) {
                        stacked_c(&(&b).into())
                    } else {
                        b
                    }
                }
                (_, Signature::Continuous(_)) => unreachable!("parser yields finite alphabets"),
            };
            let expected = len.map(|l| match alphabet {
                Alphabet::Binary => l,
                Alphabet::Quaternary => 2 * l,
            });
            if let Some(e) = expected {
                if binary.len() != e {
                    return Err(CliError::usage(format!(
                        "--init: signature has {} entries, expected {e}",
                        binary.len()
                    )));
                }
            }
            RadiusInit::Provided(binary)
        }
    };
    Ok(fp)
}

impl CliError {
    fn with_context(mut self, context: &str) -> Self {
        self.message = format!("{context}: {}", self.message);
        self
    }
}

fn reject(flag: &str, present: bool, command: &str) -> Result<(), CliError> {
    if present {
        Err(CliError::usage(format!("{flag} is not accepted by '{command}'")))
    } else {
        Ok(())
    }
}

fn positive(flag: &str, v: Option<usize>) -> Result<(), CliError> {
    if v == Some(0) {
        Err(CliError::usage(format!("{flag} must be at least 1")))
    } else {
        Ok(())
    }
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::usage(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
    }
}

fn experiment(scenario: Scenario, command: &str, a: ExperimentArgs) -> Result<CliInvocation, CliError> {
    let alphabet = parse_alphabet(a.alphabet.as_deref())?;
    for (flag, v) in [
        ("--L", a.len),
        ("--N", a.paths),
        ("--K", a.users),
        ("--kstep", a.kstep),
        ("--cycles", a.cycles),
        ("--trials", a.trials),
    ] {
        positive(flag, v)?;
    }
    match scenario {
        Scenario::SingleUserSweep => {
            reject("--K", a.users.is_some(), command)?;
            reject("--cycles", a.cycles.is_some(), command)?;
        }
        Scenario::MultiuserAdaptation => {
            reject("--kmin", a.kmin.is_some(), command)?;
            reject("--kmax", a.kmax.is_some(), command)?;
            reject("--kstep", a.kstep.is_some(), command)?;
        }
        Scenario::ComplexityTable => {
            reject("--K", a.users.is_some(), command)?;
            reject("--cycles", a.cycles.is_some(), command)?;
            if alphabet != Alphabet::Binary {
                return Err(CliError::usage("--alphabet: complexity supports binary only"));
            }
        }
    }

    let mut cfg = ExperimentConfig::new(scenario, alphabet);
    let len = a.len.unwrap_or(cfg.system.signature_len);
    let paths = a.paths.unwrap_or(cfg.system.paths);
    let users = a.users.unwrap_or(cfg.system.users);
    if let Some(s2) = a.sigma2 {
        if !s2.is_finite() || s2 <= 0.0 {
            return Err(CliError::usage(format!("--sigma2 must be positive, got {s2}")));
        }
        cfg.system.noise_variance = s2;
    }
    cfg = cfg.with_dimensions(len, paths, users);

    if scenario != Scenario::MultiuserAdaptation {
        let (lo, hi) = (cfg.sweep[0], *cfg.sweep.last().expect("default sweep"));
        let kmin = a.kmin.unwrap_or(lo);
        let kmax = a.kmax.unwrap_or(hi);
        let step = a
            .kstep
            .unwrap_or(if scenario == Scenario::ComplexityTable { 2 } else { 1 });
        if kmin > kmax {
            return Err(CliError::usage(format!("--kmin {kmin} exceeds --kmax {kmax}")));
        }
        if scenario == Scenario::ComplexityTable && kmin == 0 {
            return Err(CliError::usage("--kmin: user count must be at least 1"));
        }
        cfg.sweep = (kmin..=kmax).step_by(step).collect();
    }
    if let Some(c) = a.cycles {
        cfg.cycles = c;
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    cfg.include_isi = a.include_isi;
    cfg.algorithms = match a.algorithms.as_deref() {
        Some(list) => Algorithm::parse_list(list).map_err(|e| CliError::usage(format!("--algorithms: {e}")))?,
        None => default_algorithms(scenario, alphabet, len),
    };
    if scenario == Scenario::ComplexityTable && !cfg.algorithms.contains(&Algorithm::FpSearch) {
        return Err(CliError::usage("--algorithms: complexity needs fp"));
    }
    if cfg.algorithms.contains(&Algorithm::Exhaustive) && len > alphabet.exhaustive_max_len() {
        return Err(CliError::usage(format!(
            "--algorithms: exhaustive {} search is limited to --L {}",
            alphabet.label(),
            alphabet.exhaustive_max_len()
        )));
    }
    cfg.fp = search_config(&a.search, alphabet, Some(len))?;
    cfg.threads = threads_from_env()?;
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(CliInvocation {
        task: Task::Experiment(cfg),
        out: a.out,
    })
}

fn default_algorithms(scenario: Scenario, alphabet: Alphabet, len: usize) -> Vec<Algorithm> {
    if scenario == Scenario::ComplexityTable {
        return vec![Algorithm::FpSearch];
    }
    let mut algs = vec![
        Algorithm::benchmark_for(alphabet),
        Algorithm::Quantized,
        Algorithm::FpSearch,
    ];
    if len <= alphabet.exhaustive_max_len() {
        algs.push(Algorithm::Exhaustive);
    }
    algs
}

/// Parses and validates `argv` (program name first). Nothing is computed.
pub fn parse_args<I, T>(argv: I) -> Result<CliInvocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        let kind = match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliErrorKind::Help,
            ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => CliErrorKind::Usage,
            _ => CliErrorKind::Usage,
        };
        CliError {
            kind,
            message: e.render().to_string(),
        }
    })?;
    match cli.command {
        Command::Sweep(a) => experiment(Scenario::SingleUserSweep, "sweep", a),
        Command::Adapt(a) => experiment(Scenario::MultiuserAdaptation, "adapt", a),
        Command::Complexity(a) => experiment(Scenario::ComplexityTable, "complexity", a),
        Command::Solve(a) => {
            let alphabet = parse_alphabet(Some(&a.alphabet))?;
            let fp = search_config(&a.search, alphabet, None)?;
            Ok(CliInvocation {
                task: Task::Solve {
                    matrix: a.matrix,
                    alphabet,
                    fp,
                },
                out: None,
            })
        }
    }
}

/// Outcome of a one-shot optimization.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub signature: Signature,
    /// `sᴴ Q s`
    pub objective: f64,
    pub stats: SearchStats,
}

pub fn solve_single(matrix: &Path, alphabet: Alphabet, fp: &FpConfig) -> crate::error::Result<SolveReport> {
    let form = SinrForm::from_hermitian(read_matrix(matrix)?)?;
    let mut fp = fp.clone();
    if let RadiusInit::Provided(init) = &mut fp.radius_init {
        // a ±1 vector of length L is also a quaternary signature
        if alphabet == Alphabet::Quaternary && init.len() == form.len() {
            *init = stacked_c(&(&*init).into());
        }
        let expected = match alphabet {
            Alphabet::Binary => form.len(),
            Alphabet::Quaternary => 2 * form.len(),
        };
        if init.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "initializer has {} entries, expected {expected}",
                init.len()
            )));
        }
    }
    let (signature, stats) = match alphabet {
        Alphabet::Binary => {
            let (s, stats) = fp_search_binary(&form, &fp)?;
            (Signature::Binary(s), stats)
        }
        Alphabet::Quaternary => {
            let (s, stats) = fp_search_quaternary(&form, &fp)?;
            (Signature::Quaternary(s), stats)
        }
    };
    let objective = form.objective(&signature)?;
    Ok(SolveReport {
        signature,
        objective,
        stats,
    })
}

fn execute(inv: &CliInvocation, out: &mut dyn Write) -> Result<(), CliError> {
    match &inv.task {
        Task::Solve { matrix, alphabet, fp } => {
            let report = solve_single(matrix, *alphabet, fp)?;
            writeln!(out, "signature: {}", report.signature)?;
            writeln!(out, "objective: {}", format_number(report.objective))?;
            writeln!(out, "candidates: {}", report.stats.candidates_found)?;
        }
        Task::Experiment(cfg) => {
            let result = sim::run(cfg)?;
            writeln!(
                out,
                "{} {} L={} N={} trials={} seed={}",
                cfg.scenario.label(),
                cfg.alphabet.label(),
                cfg.system.signature_len,
                cfg.system.paths,
                cfg.trials,
                cfg.seed
            )?;
            if cfg.scenario == Scenario::ComplexityTable {
                write_complexity_table(out, &result.complexity)?;
            } else {
                write_aggregate_table(out, &result.aggregates)?;
            }
            if let Some(path) = &inv.out {
                let agg = emit_csv(&result.records, path)?;
                writeln!(out, "wrote {} and {}", path.display(), agg.display())?;
            }
        }
    }
    Ok(())
}

/// Entry point: parses, runs and reports. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_args(argv).and_then(|inv| execute(&inv, out));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let sink: &mut dyn Write = if e.kind == CliErrorKind::Help { out } else { err };
            let msg = e.message.trim_end();
            let _ = if e.kind == CliErrorKind::Help || msg.starts_with("error:") {
                writeln!(sink, "{msg}")
            } else {
                writeln!(sink, "error: {msg}")
            };
            e.exit_code()
        }
    }
}
