//! Command-line front end: `gk-secrecy {eval|curve|mc|validate}`.
//!
//! Settings are resolved per key with the precedence
//! command-line flag > config file > figure preset > built-in default.
//! The config file is flat `key = value` text using the long flag names as
//! keys; `#` starts a comment and unknown keys are rejected.
//!
//! Exit codes: 0 success, 1 validation failure, 2 invalid parameters or
//! usage, 3 numerical non-convergence.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::Error;
use crate::gk_model::{gk_variance, GkParams};
use crate::montecarlo::{sop_mc, McConfig, McResult, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::sop::{asop, sop_approx, sop_exact, SecrecyScenario, SopEstimate};
use crate::validation::{run_all, ValidateOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// SOP values below this are reported as 0 with the warning flag set.
pub const SOP_FLOOR: f64 = 1e-12;
pub const MAX_GRID_POINTS: usize = 10_000;
pub const DEFAULT_RS: f64 = 1.0;
pub const DEFAULT_STEP_DB: f64 = 1.0;

pub const CSV_HEADER: &str = "snr_d_db,sop_approx,sop_exact,sop_asymptotic,sop_mc,mc_stderr,sigma_e_sq,validity_warning";

#[derive(Debug, Parser)]
#[command(name = "gk-secrecy", version, about = "Secrecy outage probability over generalized-K fading")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the SOP at one operating point.
    Eval(ScenarioArgs),
    /// Sweep the main-link mean SNR and write CSV.
    Curve(ScenarioArgs),
    /// Monte-Carlo estimate at one operating point.
    Mc(ScenarioArgs),
    /// Run the self-validation suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Preset as ValueEnum>::from_str(s, true)
    }
}

/// One layer of settings; every field is optional so layers can be stacked.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Main link shadowing shape k_d.
    #[arg(long)]
    pub kd: Option<f64>,
    /// Main link fading shape m_d.
    #[arg(long)]
    pub md: Option<f64>,
    /// Eavesdropper link shadowing shape k_e.
    #[arg(long)]
    pub ke: Option<f64>,
    /// Eavesdropper link fading shape m_e.
    #[arg(long)]
    pub me: Option<f64>,
    /// Main link mean SNR in dB.
    #[arg(long, allow_negative_numbers = true)]
    pub snr_d_db: Option<f64>,
    /// Eavesdropper link mean SNR in dB.
    #[arg(long, allow_negative_numbers = true)]
    pub snr_e_db: Option<f64>,
    /// Target secrecy rate in bits/s/Hz (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub rs: Option<f64>,
    /// Comma-separated subset of approx, exact, asymptotic, mc; or `all`.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, allow_negative_numbers = true)]
    pub start_db: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub stop_db: Option<f64>,
    #[arg(long)]
    pub step_db: Option<f64>,
    #[arg(long)]
    pub mc_samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Flat `key = value` file with the long flag names as keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file for `curve` (standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ValidateArgs {
    /// Skip the Monte-Carlo oracle triangle.
    #[arg(long)]
    pub quick: bool,
    /// Report check N as failed (harness self-test).
    #[arg(long, hide = true)]
    pub force_fail: Vec<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
}

/// A failure carrying the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INVALID },
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

macro_rules! overlay {
    ($hi:expr, $lo:expr; $($f:ident),*) => {
        ScenarioArgs { $($f: $hi.$f.or($lo.$f),)* }
    };
}

impl ScenarioArgs {
    /// Fields of `self` win over those of `lower`.
    pub fn over(self, lower: ScenarioArgs) -> ScenarioArgs {
        overlay!(self, lower; kd, md, ke, me, snr_d_db, snr_e_db, rs, method, preset, start_db, stop_db,
                 step_db, mc_samples, seed, workers, config, out)
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::invalid(format!("config line {line}: invalid value `{value}` for `{key}`")))
}

/// Parses the flat config format.
pub fn parse_config(text: &str) -> CliResult<ScenarioArgs> {
    let mut out = ScenarioArgs::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::invalid(format!("config line {line}: expected `key = value`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "kd" => out.kd = Some(parse_value(key, value, line)?),
            "md" => out.md = Some(parse_value(key, value, line)?),
            "ke" => out.ke = Some(parse_value(key, value, line)?),
            "me" => out.me = Some(parse_value(key, value, line)?),
            "snr-d-db" => out.snr_d_db = Some(parse_value(key, value, line)?),
            "snr-e-db" => out.snr_e_db = Some(parse_value(key, value, line)?),
            "rs" => out.rs = Some(parse_value(key, value, line)?),
            "method" => out.method = Some(value.to_string()),
            "preset" => out.preset = Some(parse_value(key, value, line)?),
            "start-db" => out.start_db = Some(parse_value(key, value, line)?),
            "stop-db" => out.stop_db = Some(parse_value(key, value, line)?),
            "step-db" => out.step_db = Some(parse_value(key, value, line)?),
            "mc-samples" => out.mc_samples = Some(parse_value(key, value, line)?),
            "seed" => out.seed = Some(parse_value(key, value, line)?),
            "workers" => out.workers = Some(parse_value(key, value, line)?),
            "out" => out.out = Some(PathBuf::from(value)),
            "config" => return Err(CliError::invalid(format!("config line {line}: nested `config` is not allowed"))),
            _ => return Err(CliError::invalid(format!("config line {line}: unknown key `{key}`"))),
        }
    }
    Ok(out)
}

/// Parameters baked into the figure presets.
pub fn preset_layer(p: Preset) -> ScenarioArgs {
    let common = ScenarioArgs {
        rs: Some(1.0),
        ..Default::default()
    };
    match p {
        // γ̄_e stays a required flag: the figure shows several values.
        Preset::Fig1 => ScenarioArgs {
            kd: Some(2.0),
            md: Some(2.5),
            ke: Some(2.0),
            me: Some(2.5),
            start_db: Some(0.0),
            stop_db: Some(30.0),
            step_db: Some(1.0),
            ..common
        },
        // m_d is the swept legend parameter and must be given.
        Preset::Fig2 => ScenarioArgs {
            kd: Some(1.5),
            ke: Some(1.5),
            me: Some(1.5),
            snr_e_db: Some(0.0),
            start_db: Some(0.0),
            stop_db: Some(60.0),
            step_db: Some(2.0),
            ..common
        },
        // k_d = m_d is the legend parameter and must be given.
        Preset::Fig3 => ScenarioArgs {
            ke: Some(2.0),
            me: Some(2.0),
            snr_e_db: Some(5.0),
            start_db: Some(0.0),
            stop_db: Some(60.0),
            step_db: Some(2.0),
            ..common
        },
    }
}

fn default_layer() -> ScenarioArgs {
    ScenarioArgs {
        rs: Some(DEFAULT_RS),
        step_db: Some(DEFAULT_STEP_DB),
        mc_samples: Some(DEFAULT_SAMPLES),
        seed: Some(DEFAULT_SEED),
        ..Default::default()
    }
}

/// Stacks flag > config > preset > default.
pub fn resolve_layers(flags: ScenarioArgs) -> CliResult<ScenarioArgs> {
    let config = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => ScenarioArgs::default(),
    };
    let preset = flags.preset.or(config.preset);
    let preset_values = preset.map(preset_layer).unwrap_or_default();
    Ok(flags.over(config).over(preset_values).over(default_layer()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSel {
    Approx,
    Exact,
    Asymptotic,
    Mc,
}

/// Parses `approx,exact,...` or `all`.
pub fn parse_methods(spec: &str) -> CliResult<Vec<MethodSel>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let sel: &[MethodSel] = match part {
            "all" => &[MethodSel::Approx, MethodSel::Exact, MethodSel::Asymptotic, MethodSel::Mc],
            "approx" => &[MethodSel::Approx],
            "exact" => &[MethodSel::Exact],
            "asymptotic" => &[MethodSel::Asymptotic],
            "mc" => &[MethodSel::Mc],
            other => return Err(CliError::invalid(format!("--method: unknown method `{other}`"))),
        };
        for s in sel {
            if !out.contains(s) {
                out.push(*s);
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::invalid("--method: no method given"));
    }
    Ok(out)
}

fn require<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::invalid(format!("missing --{flag}")))
}

fn positive(v: f64, flag: &str) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("{flag} must be > 0 (got {v})")))
    }
}

fn finite(v: f64, flag: &str) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("{flag} must be finite")))
    }
}

/// Fully resolved inputs shared by the subcommands.
#[derive(Debug, Clone)]
pub struct Settings {
    pub kd: f64,
    pub md: f64,
    pub ke: f64,
    pub me: f64,
    pub snr_e_db: f64,
    pub rs: f64,
    pub mc: McConfig,
    pub workers: usize,
}

impl Settings {
    fn from_layers(a: &ScenarioArgs) -> CliResult<Self> {
        let workers = match a.workers {
            Some(0) => return Err(CliError::invalid("workers must be >= 1")),
            Some(w) => w,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        let samples = require(a.mc_samples, "mc-samples")?;
        let mc = McConfig::new(samples, require(a.seed, "seed")?, workers)
            .map_err(|_| CliError::invalid(format!("mc-samples must be >= 10000 (got {samples})")))?;
        Ok(Settings {
            kd: positive(require(a.kd, "kd")?, "kd")?,
            md: positive(require(a.md, "md")?, "md")?,
            ke: positive(require(a.ke, "ke")?, "ke")?,
            me: positive(require(a.me, "me")?, "me")?,
            snr_e_db: finite(require(a.snr_e_db, "snr-e-db")?, "snr-e-db")?,
            rs: positive(require(a.rs, "rs")?, "rs")?,
            mc,
            workers,
        })
    }

    pub fn scenario(&self, snr_d_db: f64) -> CliResult<SecrecyScenario> {
        let snr_d_db = finite(snr_d_db, "snr-d-db")?;
        Ok(SecrecyScenario::new(
            GkParams::from_db(self.kd, self.md, snr_d_db)?,
            GkParams::from_db(self.ke, self.me, self.snr_e_db)?,
            self.rs,
        )?)
    }
}

/// Nine significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.8e}")
}

/// Applies the reporting floor: values below [`SOP_FLOOR`] become 0 and raise the warning.
pub fn floor_sop(v: f64) -> (f64, bool) {
    if v < SOP_FLOOR {
        (0.0, true)
    } else {
        (v, false)
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub snr_d_db: f64,
    pub approx: Option<f64>,
    pub exact: Option<f64>,
    pub asymptotic: Option<f64>,
    pub mc: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub sigma_e_sq: f64,
    pub validity_warning: bool,
}

impl CurvePoint {
    pub fn to_csv(&self) -> String {
        let cell = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            format_float(self.snr_d_db),
            cell(self.approx),
            cell(self.exact),
            cell(self.asymptotic),
            cell(self.mc),
            cell(self.mc_stderr),
            format_float(self.sigma_e_sq),
            self.validity_warning
        )
    }
}

/// Analytic columns of one grid point (Monte-Carlo is added separately).
pub fn evaluate_point(settings: &Settings, methods: &[MethodSel], snr_d_db: f64) -> CliResult<CurvePoint> {
    let s = settings.scenario(snr_d_db)?;
    let mut warning = false;
    let mut take = |e: SopEstimate| {
        let (v, floored) = floor_sop(e.value);
        warning |= e.validity_warning || floored;
        v
    };
    let approx = methods.contains(&MethodSel::Approx).then(|| sop_approx(&s)).transpose()?.map(&mut take);
    let exact = methods.contains(&MethodSel::Exact).then(|| sop_exact(&s)).transpose()?.map(&mut take);
    let asymptotic = methods.contains(&MethodSel::Asymptotic).then(|| asop(&s)).transpose()?.map(&mut take);
    Ok(CurvePoint {
        snr_d_db,
        approx,
        exact,
        asymptotic,
        mc: None,
        mc_stderr: None,
        sigma_e_sq: gk_variance(&s.eve),
        validity_warning: warning,
    })
}

fn add_mc(point: &mut CurvePoint, r: &McResult) {
    let (v, floored) = floor_sop(r.estimate);
    point.mc = Some(v);
    point.mc_stderr = Some(r.stderr);
    point.validity_warning |= floored;
}

/// The sweep grid start, start + step, ... ≤ stop.
pub fn grid(start: f64, stop: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(CliError::invalid(format!("step-db must be > 0 (got {step})")));
    }
    if !(start < stop) || !start.is_finite() || !stop.is_finite() {
        return Err(CliError::invalid(format!("start-db ({start}) must be below stop-db ({stop})")));
    }
    let span = (stop - start) / step;
    if span > MAX_GRID_POINTS as f64 {
        return Err(CliError::invalid(format!("grid has more than {MAX_GRID_POINTS} points")));
    }
    let n = (span + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

/// Produces the whole CSV document; nothing is returned unless every row succeeded.
pub fn curve_csv(settings: &Settings, methods: &[MethodSel], points: &[f64]) -> CliResult<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.workers)
        .build()
        .map_err(|e| CliError::invalid(format!("cannot start worker threads: {e}")))?;
    let mut rows: Vec<CurvePoint> = pool.install(|| {
        points
            .par_iter()
            .map(|&db| evaluate_point(settings, methods, db))
            .collect::<CliResult<Vec<_>>>()
    })?;
    if methods.contains(&MethodSel::Mc) {
        // Monte-Carlo parallelizes internally; rows run one after another.
        for row in &mut rows {
            let r = sop_mc(&settings.scenario(row.snr_d_db)?, &settings.mc)?;
            add_mc(row, &r);
        }
    }
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    Ok(out)
}

fn estimate_line(label: &str, e: &SopEstimate) -> String {
    let (v, floored) = floor_sop(e.value);
    format!(
        "{label:<20} method={} value={} raw={} sigma_e_sq={} validity_warning={}",
        e.method,
        format_float(v),
        format_float(e.raw_value),
        format_float(e.sigma_e_sq),
        e.validity_warning || floored
    )
}

fn mc_line(r: &McResult) -> String {
    let (v, floored) = floor_sop(r.estimate);
    format!(
        "{:<20} method=monte-carlo value={} stderr={} samples={} seed={} mean_gamma_d={} mean_gamma_e={} validity_warning={}",
        "mc",
        format_float(v),
        format_float(r.stderr),
        r.samples,
        r.seed,
        format_float(r.mean_gamma_d),
        format_float(r.mean_gamma_e),
        floored
    )
}

/// Report printed by `eval`.
pub fn eval_report(settings: &Settings, methods: &[MethodSel], snr_d_db: f64) -> CliResult<String> {
    let s = settings.scenario(snr_d_db)?;
    let mut out = String::new();
    for m in methods {
        let line = match m {
            MethodSel::Approx => estimate_line("approx", &sop_approx(&s)?),
            MethodSel::Exact => estimate_line("exact", &sop_exact(&s)?),
            MethodSel::Asymptotic => estimate_line("asymptotic", &asop(&s)?),
            MethodSel::Mc => mc_line(&sop_mc(&s, &settings.mc)?),
        };
        let _ = writeln!(out, "{line}");
    }
    Ok(out)
}

fn write_output(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| CliError::invalid(format!("cannot write to standard output: {e}")))
        }
    }
}

fn cmd_eval(flags: ScenarioArgs, default_methods: &str) -> CliResult<String> {
    let layers = resolve_layers(flags)?;
    let settings = Settings::from_layers(&layers)?;
    let methods = parse_methods(layers.method.as_deref().unwrap_or(default_methods))?;
    let snr_d_db = require(layers.snr_d_db, "snr-d-db")?;
    eval_report(&settings, &methods, snr_d_db)
}

fn cmd_curve(flags: ScenarioArgs) -> CliResult<()> {
    let layers = resolve_layers(flags)?;
    let settings = Settings::from_layers(&layers)?;
    let methods = parse_methods(layers.method.as_deref().unwrap_or("approx,exact,asymptotic"))?;
    let points = grid(
        require(layers.start_db, "start-db")?,
        require(layers.stop_db, "stop-db")?,
        require(layers.step_db, "step-db")?,
    )?;
    let csv = curve_csv(&settings, &methods, &points)?;
    write_output(&csv, layers.out.as_deref())
}

fn cmd_validate(args: ValidateArgs) -> i32 {
    let opts = ValidateOptions {
        quick: args.quick,
        force_fail: args.force_fail,
        workers: args.workers,
    };
    let outcomes = run_all(&opts);
    let mut text = String::new();
    for o in &outcomes {
        let _ = writeln!(text, "{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    let _ = writeln!(text, "{} checks, {} failed", outcomes.len(), failed);
    if let Err(e) = write_output(&text, None) {
        eprintln!("error: {}", e.message);
        return e.code;
    }
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    }
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a, "approx").and_then(|t| write_output(&t, None)),
        Command::Mc(a) => cmd_eval(a, "mc").and_then(|t| write_output(&t, None)),
        Command::Curve(a) => cmd_curve(a),
        Command::Validate(a) => return cmd_validate(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Entry point used by the binary: parses `std::env::args`, maps clap's own
/// failures and panics onto the documented exit codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        // A panic is an internal failure; keep the exit code inside the documented set.
        Ok(cli) => std::panic::catch_unwind(|| run(cli)).unwrap_or(EXIT_NUMERICAL),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let text = "# comment\nkd = 2\nmd=2.5 # trailing\n\nsnr-e-db = -5\nmethod = approx,exact\npreset = fig2\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.kd, Some(2.0));
        assert_eq!(c.md, Some(2.5));
        assert_eq!(c.snr_e_db, Some(-5.0));
        assert_eq!(c.method.as_deref(), Some("approx,exact"));
        assert_eq!(c.preset, Some(Preset::Fig2));
        assert_eq!(parse_config("bogus = 1").unwrap_err().code, EXIT_INVALID);
        assert_eq!(parse_config("kd 2").unwrap_err().code, EXIT_INVALID);
        assert_eq!(parse_config("kd = two").unwrap_err().code, EXIT_INVALID);
    }

    #[test]
    fn layer_precedence() {
        let flag = ScenarioArgs {
            kd: Some(1.0),
            ..Default::default()
        };
        let config = ScenarioArgs {
            kd: Some(2.0),
            md: Some(3.0),
            ..Default::default()
        };
        let merged = flag.over(config).over(preset_layer(Preset::Fig1)).over(default_layer());
        assert_eq!(merged.kd, Some(1.0));
        assert_eq!(merged.md, Some(3.0));
        assert_eq!(merged.ke, Some(2.0));
        assert_eq!(merged.rs, Some(1.0));
        assert_eq!(merged.step_db, Some(1.0));
        assert_eq!(merged.seed, Some(DEFAULT_SEED));
    }

    #[test]
    fn methods() {
        assert_eq!(parse_methods("all").unwrap().len(), 4);
        assert_eq!(parse_methods("exact, approx,exact").unwrap(), vec![MethodSel::Exact, MethodSel::Approx]);
        assert!(parse_methods("fast").is_err());
        assert!(parse_methods("").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(grid(0.0, 30.0, 1.0).unwrap().len(), 31);
        assert_eq!(grid(0.0, 60.0, 2.0).unwrap().len(), 31);
        assert_eq!(grid(0.0, 1.0, 0.3).unwrap().len(), 4);
        assert!(grid(1.0, 1.0, 1.0).is_err());
        assert!(grid(0.0, 1.0, 0.0).is_err());
        assert!(grid(0.0, 1e5, 1.0).is_err());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_float(1100.0), "1.10000000e3");
        assert_eq!(format_float(0.0), "0.00000000e0");
        assert_eq!(floor_sop(5e-13), (0.0, true));
        assert_eq!(floor_sop(0.3), (0.3, false));
        let p = CurvePoint {
            snr_d_db: 2.0,
            approx: Some(0.25),
            exact: None,
            asymptotic: None,
            mc: None,
            mc_stderr: None,
            sigma_e_sq: 3.0,
            validity_warning: true,
        };
        assert_eq!(p.to_csv(), "2.00000000e0,2.50000000e-1,,,,,3.00000000e0,true");
    }

    #[test]
    fn error_codes() {
        let numerical: CliError = Error::NonConvergence {
            method: "x",
            detail: String::new(),
        }
        .into();
        assert_eq!(numerical.code, EXIT_NUMERICAL);
        let invalid: CliError = Error::Regime("x".into()).into();
        assert_eq!(invalid.code, EXIT_INVALID);
    }
}
