//! Command-line front end: `intensities | transfer | relaxation | verify`.
//!
//! Flags may also come from a flat `key = value` file given with `--config`;
//! flags on the command line win. Keys are the long flag names without the
//! leading dashes.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::Error;
use crate::fermion::{
    best_transfer, mq_intensities_finite, mq_intensities_infinite, transfer_profile, CoherenceSpectrum,
};
use crate::model::{build_couplings, Boundary, ChainSpec, CouplingMode, CouplingModel};
use crate::oracle::{relaxation_profile_mixed, MqExperiment, RelaxKind, TransferOracle, TransferRoute};
use crate::relaxation::{gaussian_envelope, second_moment, stationary_f0, stationary_f0_finite, F2Kernel};
use crate::table::CurveTable;
use crate::verify;

/// Tolerance of the `--verify` oracle cross-checks.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-10;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mqchain", version, about = "MQ NMR dynamics of one-dimensional spin-1/2 chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandLine,
}

#[derive(Debug, Subcommand)]
pub enum CommandLine {
    /// MQ coherence intensities G0, G2 over a tau grid.
    Intensities(Flags),
    /// Polarization transfer ratio over a t grid.
    Transfer(Flags),
    /// ZZ-model relaxation: stationary F0, F2 decay or relaxation times.
    Relaxation(Flags),
    /// Oracle-equivalence suite; exits 3 if any check misses its tolerance.
    Verify(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat key = value file mirroring these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n_spins: Option<usize>,
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
    #[arg(long, value_enum)]
    pub coupling: Option<CouplingArg>,
    /// Nearest-neighbor coupling, rad/s.
    #[arg(long)]
    pub d_nn: Option<f64>,
    /// Infinite-chain or finite-ring formulas (intensities, stationary).
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// start:stop:count[:log], seconds.
    #[arg(long)]
    pub tau_grid: Option<Grid>,
    /// start:stop:count[:log], seconds.
    #[arg(long)]
    pub t_grid: Option<Grid>,
    /// Preparation time for decay mode, seconds.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub source: Option<usize>,
    #[arg(long)]
    pub target: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<RelaxMode>,
    /// Cross-check against exact diagonalization.
    #[arg(long)]
    pub verify: bool,
    /// Comma-separated check-name prefixes for `verify`.
    #[arg(long)]
    pub subset: Option<String>,
    /// Replace every tolerance of `verify`.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CouplingArg {
    Nn,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Infinite,
    Finite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RelaxMode {
    Stationary,
    Decay,
    Times,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Intensities,
    Transfer,
    Relaxation,
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Intensities => "intensities",
            Command::Transfer => "transfer",
            Command::Relaxation => "relaxation",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Inclusive sampling grid `start:stop:count[:log]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn linear(start: f64, stop: f64, count: usize) -> Result<Self, String> {
        Self { start, stop, count, spacing: Spacing::Linear }.checked()
    }

    fn checked(self) -> Result<Self, String> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err("grid endpoints must be finite".into());
        }
        if self.count == 0 {
            return Err("grid count must be at least 1".into());
        }
        if self.start > self.stop {
            return Err(format!("grid start {} exceeds stop {}", self.start, self.stop));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err("log spacing needs a positive start".into());
        }
        Ok(self)
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == self.count - 1 {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("expected start:stop:count[:log], got `{s}`"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number `{p}`: {e}"));
        let count = parts[2].trim().parse::<usize>().map_err(|e| format!("bad count `{}`: {e}", parts[2]))?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(other) => return Err(format!("unknown spacing `{other}`")),
        };
        Self { start: num(parts[0])?, stop: num(parts[1])?, count, spacing }.checked()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}:{}", self.start, self.stop, self.count)?;
        if self.spacing == Spacing::Log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n_spins: usize,
    pub boundary: Boundary,
    pub coupling: CouplingMode,
    pub d_nn: f64,
    pub model: ModelArg,
    pub tau_grid: Grid,
    pub t_grid: Grid,
    pub tau: f64,
    pub source: usize,
    pub target: usize,
    pub mode: RelaxMode,
    pub verify: bool,
    pub subset: Vec<String>,
    pub tolerance: Option<f64>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn spec(&self) -> ChainSpec {
        let coupling = match self.coupling {
            CouplingMode::NearestNeighbor => CouplingModel::nearest_neighbor(self.d_nn),
            CouplingMode::FullDipolar => CouplingModel::full_dipolar(self.d_nn),
        };
        ChainSpec::new(self.n_spins, self.boundary, coupling)
    }

    /// `key=value` pairs in config-file syntax; enough to rerun the command.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut v = vec![("command".to_string(), self.command.name().to_string())];
        let mut put = |k: &str, val: String| v.push((k.to_string(), val));
        let enum_name = |e: &dyn ValueEnumName| e.value_name();
        put("n-spins", self.n_spins.to_string());
        put("boundary", if self.boundary == Boundary::Open { "open" } else { "cyclic" }.into());
        put("coupling", if self.coupling == CouplingMode::NearestNeighbor { "nn" } else { "full" }.into());
        put("d-nn", format!("{:?}", self.d_nn));
        put("model", enum_name(&self.model));
        put("tau-grid", self.tau_grid.to_string());
        put("t-grid", self.t_grid.to_string());
        put("tau", format!("{:?}", self.tau));
        put("source", self.source.to_string());
        put("target", self.target.to_string());
        put("mode", enum_name(&self.mode));
        put("verify", self.verify.to_string());
        if !self.subset.is_empty() {
            put("subset", self.subset.join(","));
        }
        if let Some(t) = self.tolerance {
            put("tolerance", format!("{t:?}"));
        }
        v
    }
}

trait ValueEnumName {
    fn value_name(&self) -> String;
}

impl<T: ValueEnum> ValueEnumName for T {
    fn value_name(&self) -> String {
        self.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFICATION,
            CliError::Compute(Error::Capacity { .. }) => EXIT_CAPACITY,
            CliError::Compute(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Reads a flat `key = value` file. Blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<Flags, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<Flags, CliError> {
    let mut f = Flags::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        let bad = |e: String| usage(format!("config line {}: {key}: {e}", lineno + 1));
        fn num<T: FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            v.parse::<T>().map_err(|e| e.to_string())
        }
        fn choice<T: ValueEnum>(v: &str) -> Result<T, String> {
            T::from_str(v, true)
        }
        match key.as_str() {
            "n-spins" => f.n_spins = Some(num(value).map_err(bad)?),
            "boundary" => f.boundary = Some(choice(value).map_err(bad)?),
            "coupling" => f.coupling = Some(choice(value).map_err(bad)?),
            "d-nn" => f.d_nn = Some(num(value).map_err(bad)?),
            "model" => f.model = Some(choice(value).map_err(bad)?),
            "tau-grid" => f.tau_grid = Some(value.parse().map_err(bad)?),
            "t-grid" => f.t_grid = Some(value.parse().map_err(bad)?),
            "tau" => f.tau = Some(num(value).map_err(bad)?),
            "source" => f.source = Some(num(value).map_err(bad)?),
            "target" => f.target = Some(num(value).map_err(bad)?),
            "mode" => f.mode = Some(choice(value).map_err(bad)?),
            "verify" => f.verify = num(value).map_err(bad)?,
            "subset" => f.subset = Some(value.to_string()),
            "tolerance" => f.tolerance = Some(num(value).map_err(bad)?),
            "output" => f.output = Some(PathBuf::from(value)),
            "threads" => f.threads = Some(num(value).map_err(bad)?),
            // the echo header names the subcommand; it is chosen on the command line
            "command" => {}
            _ => return Err(usage(format!("config line {}: unknown key `{key}`", lineno + 1))),
        }
    }
    Ok(f)
}

fn merge(flags: Flags, file: Flags) -> Flags {
    Flags {
        config: flags.config,
        n_spins: flags.n_spins.or(file.n_spins),
        boundary: flags.boundary.or(file.boundary),
        coupling: flags.coupling.or(file.coupling),
        d_nn: flags.d_nn.or(file.d_nn),
        model: flags.model.or(file.model),
        tau_grid: flags.tau_grid.or(file.tau_grid),
        t_grid: flags.t_grid.or(file.t_grid),
        tau: flags.tau.or(file.tau),
        source: flags.source.or(file.source),
        target: flags.target.or(file.target),
        mode: flags.mode.or(file.mode),
        verify: flags.verify || file.verify,
        subset: flags.subset.or(file.subset),
        tolerance: flags.tolerance.or(file.tolerance),
        output: flags.output.or(file.output),
        threads: flags.threads.or(file.threads),
    }
}

/// Applies command-specific defaults. All times scale with `1/d_nn`.
pub fn resolve(command: Command, flags: Flags) -> Result<ExperimentConfig, CliError> {
    let flags = match &flags.config {
        Some(path) => {
            let file = read_config_file(path)?;
            merge(flags, file)
        }
        None => flags,
    };
    let d_nn = flags.d_nn.unwrap_or(crate::FLUORAPATITE_D_NN);
    if !(d_nn.is_finite() && d_nn > 0.0) {
        return Err(usage(format!("--d-nn must be positive, got {d_nn}")));
    }
    let mode = flags.mode.unwrap_or(RelaxMode::Stationary);
    let (n, boundary, coupling) = match (command, mode) {
        (Command::Transfer, _) => (21, BoundaryArg::Open, CouplingArg::Nn),
        (Command::Relaxation, RelaxMode::Times) => (150, BoundaryArg::Open, CouplingArg::Full),
        _ => (8, BoundaryArg::Cyclic, CouplingArg::Nn),
    };
    let n_spins = flags.n_spins.unwrap_or(n);
    let grid = |start: f64, stop: f64, count: usize| Grid::linear(start / d_nn, stop / d_nn, count).map_err(usage);
    let t_default = match command {
        Command::Transfer => grid(0.0, 40.0, 4001)?,
        _ => grid(0.0, 10.0, 201)?,
    };
    let boundary = match flags.boundary.unwrap_or(boundary) {
        BoundaryArg::Open => Boundary::Open,
        BoundaryArg::Cyclic => Boundary::Cyclic,
    };
    let coupling = match flags.coupling.unwrap_or(coupling) {
        CouplingArg::Nn => CouplingMode::NearestNeighbor,
        CouplingArg::Full => CouplingMode::FullDipolar,
    };
    if flags.threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }
    let subset = flags
        .subset
        .map(|s| s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect())
        .unwrap_or_default();
    let cfg = ExperimentConfig {
        command,
        n_spins,
        boundary,
        coupling,
        d_nn,
        model: flags.model.unwrap_or(ModelArg::Infinite),
        tau_grid: flags.tau_grid.map_or_else(|| grid(0.0, 5.0, 101), Ok)?,
        t_grid: flags.t_grid.unwrap_or(t_default),
        tau: flags.tau.unwrap_or(1.0 / d_nn),
        source: flags.source.unwrap_or(1),
        target: flags.target.unwrap_or(n_spins),
        mode,
        verify: flags.verify,
        subset,
        tolerance: flags.tolerance,
        output: flags.output,
        threads: flags.threads,
    };
    cfg.spec().validate()?;
    Ok(cfg)
}

/// Result of one command: metadata, CSV body and exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub metadata: Vec<(String, String)>,
    pub body: String,
    pub exit_code: i32,
}

impl Outcome {
    fn from_table(table: CurveTable) -> Result<Self, CliError> {
        table.validate().map_err(|e| Error::Domain(e.to_string()))?;
        Ok(Self { metadata: table.metadata.clone(), body: table.body(), exit_code: EXIT_OK })
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            s += &format!("# {k}: {v}\n");
        }
        s + &self.body
    }
}

fn header(cfg: &ExperimentConfig) -> Vec<(String, String)> {
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut meta = vec![
        ("engine".to_string(), format!("mqchain {}", env!("CARGO_PKG_VERSION"))),
        ("timestamp".to_string(), format!("unix {stamp}")),
    ];
    meta.extend(cfg.echo().into_iter().map(|(k, v)| ("config".to_string(), format!("{k} = {v}"))));
    meta
}

/// Runs the resolved command, on a dedicated pool when `threads` is set.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| usage(e.to_string()))?
            .install(|| dispatch(cfg)),
        None => dispatch(cfg),
    }
}

fn dispatch(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Intensities => cmd_intensities(cfg),
        Command::Transfer => cmd_transfer(cfg),
        Command::Relaxation => cmd_relaxation(cfg),
        Command::Verify => cmd_verify(cfg),
    }
}

fn cross_check(table: &mut CurveTable, deviation: f64) -> Result<(), CliError> {
    table.push_meta("verify", format!("max deviation {deviation:?}, tolerance {CROSS_CHECK_TOLERANCE:?}"));
    if deviation.is_finite() && deviation <= CROSS_CHECK_TOLERANCE {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "oracle deviation {deviation:e} exceeds {CROSS_CHECK_TOLERANCE:e}\n{}",
            table.render()
        )))
    }
}

/// Columns `tau, G0, G2, sum`.
pub fn cmd_intensities(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spec = cfg.spec();
    let taus = cfg.tau_grid.points();
    let spectra: Vec<CoherenceSpectrum> = taus
        .par_iter()
        .map(|&tau| match cfg.model {
            ModelArg::Infinite => mq_intensities_infinite(tau, cfg.d_nn),
            ModelArg::Finite => mq_intensities_finite(tau, &spec),
        })
        .collect::<Result<_, _>>()?;
    let mut table = CurveTable::new(["tau", "G0", "G2", "sum"]);
    table.metadata = header(cfg);
    for g in &spectra {
        table.push_row(vec![g.tau, g.get(0), g.get(2), g.total()]);
    }
    if cfg.model == ModelArg::Finite {
        let mut gap = 0.0f64;
        for g in &spectra {
            gap = gap.max((g.get(0) - mq_intensities_infinite(g.tau, cfg.d_nn)?.get(0)).abs());
        }
        table.push_meta("summary", format!("max |G0(N) - G0(infinite)| = {gap:?}"));
        if cfg.verify {
            let exp = MqExperiment::new(&spec)?;
            let mut dev = 0.0f64;
            for g in &spectra {
                let ed = exp.intensities(g.tau)?;
                for (order, v) in &ed.intensities {
                    dev = dev.max((v - g.get(*order)).abs());
                }
            }
            cross_check(&mut table, dev)?;
        }
    } else if cfg.verify {
        return Err(usage("--verify needs --model finite"));
    }
    Outcome::from_table(table)
}

/// Columns `t, ratio`, with the best grid point in the header.
pub fn cmd_transfer(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spec = cfg.spec();
    let times = cfg.t_grid.points();
    let profile = transfer_profile(&spec, cfg.source, cfg.target, &times)?;
    let mut table = CurveTable::new(["t", "ratio"]);
    table.metadata = header(cfg);
    for r in &profile {
        table.push_row(vec![r.time, r.ratio]);
    }
    if let Some(best) = best_transfer(&profile) {
        table.push_meta("summary", format!("max ratio {:?} at t = {:?}", best.ratio, best.time));
    }
    if cfg.verify {
        let ed = TransferOracle::new(&spec, TransferRoute::FlipFlop)?.profile(cfg.source, cfg.target, &times)?;
        let dev = profile.iter().zip(&ed).map(|(a, b)| (a.ratio - b.ratio).abs()).fold(0.0, f64::max);
        cross_check(&mut table, dev)?;
    }
    Outcome::from_table(table)
}

pub fn cmd_relaxation(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spec = cfg.spec();
    let mut table = match cfg.mode {
        RelaxMode::Stationary => {
            if cfg.verify {
                return Err(usage("--verify is available for decay mode only"));
            }
            let mut table = CurveTable::new(["tau", "F0st"]);
            let values: Vec<f64> = cfg
                .tau_grid
                .points()
                .par_iter()
                .map(|&tau| match cfg.model {
                    ModelArg::Infinite => stationary_f0(tau, cfg.d_nn),
                    ModelArg::Finite => stationary_f0_finite(tau, &spec),
                })
                .collect::<Result<_, _>>()?;
            for (tau, f) in cfg.tau_grid.points().into_iter().zip(values) {
                table.push_row(vec![tau, f]);
            }
            table
        }
        RelaxMode::Decay => decay_table(cfg, &spec)?,
        RelaxMode::Times => {
            if cfg.verify {
                return Err(usage("--verify is available for decay mode only"));
            }
            let couplings = build_couplings(&spec)?;
            let rows: Vec<Option<Vec<f64>>> = cfg
                .tau_grid
                .points()
                .par_iter()
                .map(|&tau| match second_moment(tau, &couplings) {
                    Ok(r) => Ok(Some(vec![tau, r.m2, r.t_e])),
                    // no ±2 coherence to relax, e.g. τ = 0
                    Err(Error::Degenerate(_)) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<_, _>>()?;
            let mut table = CurveTable::new(["tau", "M2", "t_e"]);
            let skipped = rows.iter().filter(|r| r.is_none()).count();
            if skipped > 0 {
                table.push_meta("skipped", format!("{skipped} tau points without second-order coherence"));
            }
            rows.into_iter().flatten().for_each(|r| table.push_row(r));
            table
        }
    };
    let mut meta = header(cfg);
    meta.append(&mut table.metadata);
    table.metadata = meta;
    if cfg.mode == RelaxMode::Decay && cfg.verify {
        let deviation = decay_cross_check(cfg, &spec, &table)?;
        cross_check(&mut table, deviation)?;
    }
    Outcome::from_table(table)
}

/// Columns `t, F2, gaussian`; the Gaussian shares `F2(0)` and `M₂`.
fn decay_table(cfg: &ExperimentConfig, spec: &ChainSpec) -> Result<CurveTable, CliError> {
    let couplings = build_couplings(spec)?;
    let kernel = F2Kernel::new(cfg.tau, &couplings)?;
    let f_zero = kernel.initial();
    let m2 = match second_moment(cfg.tau, &couplings) {
        Ok(r) => Some(r.m2),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut table = CurveTable::new(["t", "F2", "gaussian"]);
    for t in cfg.t_grid.points() {
        if !(t.is_finite() && t >= 0.0) {
            return Err(usage(format!("t must be non-negative, got {t}")));
        }
        let gaussian = m2.map_or(0.0, |m2| f_zero * gaussian_envelope(m2, t));
        table.push_row(vec![t, kernel.value(t), gaussian]);
    }
    if let Some(m2) = m2 {
        table.push_meta("summary", format!("M2 = {m2:?}, t_e = {:?}", (2.0 / m2).sqrt()));
    }
    Ok(table)
}

/// Nearest-neighbor preparation and the configured couplings for relaxation.
fn decay_cross_check(cfg: &ExperimentConfig, spec: &ChainSpec, table: &CurveTable) -> Result<f64, CliError> {
    let relax = build_couplings(spec)?;
    let prep_spec = ChainSpec::new(spec.n_spins, spec.boundary, CouplingModel::nearest_neighbor(cfg.d_nn));
    let prep = build_couplings(&prep_spec)?;
    let times = cfg.t_grid.points();
    let curves = relaxation_profile_mixed(&prep, &relax, cfg.tau, RelaxKind::Zz, &times)?;
    let ed = curves.iter().find(|c| c.order == 2).expect("order 2 is always returned");
    let f2 = table.column("F2").expect("decay table has an F2 column");
    Ok(f2.iter().zip(&ed.f_values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Report `check, tolerance, observed, status`; exit 3 on any failure.
pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let outcomes = verify::run_suite(&cfg.subset, cfg.tolerance)?;
    if outcomes.is_empty() {
        return Err(usage(format!("--subset {:?} matches no check", cfg.subset.join(","))));
    }
    let failed = outcomes.iter().filter(|c| !c.passed()).count();
    let mut metadata = header(cfg);
    metadata.push(("summary".into(), format!("{} checks, {failed} failed", outcomes.len())));
    Ok(Outcome {
        metadata,
        body: verify::report(&outcomes),
        exit_code: if failed == 0 { EXIT_OK } else { EXIT_VERIFICATION },
    })
}

/// Parses `args`, runs the command and writes to `--output` or `out`.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    let (command, flags) = match cli.command {
        CommandLine::Intensities(f) => (Command::Intensities, f),
        CommandLine::Transfer(f) => (Command::Transfer, f),
        CommandLine::Relaxation(f) => (Command::Relaxation, f),
        CommandLine::Verify(f) => (Command::Verify, f),
    };
    let result = resolve(command, flags).and_then(|cfg| {
        let outcome = execute(&cfg)?;
        let text = outcome.render();
        match &cfg.output {
            Some(path) => fs::write(path, text)?,
            None => out.write_all(text.as_bytes())?,
        }
        Ok(outcome.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "mqchain: {e}");
            e.exit_code()
        }
    }
}
