//! Command-line surface: configuration, subcommands and report files.
//!
//! Exit codes: 0 success, 1 acceptance failure, 2 configuration, usage or
//! I/O error, 3 numerical failure.

mod config;
mod report;

pub use config::{
    parse_config, ConfigError, ModelKind, ModelSection, OutputSection, PerturbationSection, RunConfig,
    SweepSection,
};
pub use report::{format_float, records_csv, report_json, write_atomic, Conventions, EmitError, Report, CSV_HEADER};

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::classical::ssb_verdict;
use crate::error::Error;
use crate::experiments::{
    acceptance_suite, extrapolate, flea_scan_cw, flea_schrodinger, ground_state, records_for, run_limit_sweep,
    AcceptanceConfig, SweepModel, SweepSpec,
};
use crate::models::{build_bh, build_cw_dicke, build_double_well, BoseHubbardConfig, CurieWeissConfig, DoubleWellConfig, Perturbation};
use crate::par::Execution;
use crate::quantize::{measure_sphere_convention, quantization_diagnostics, reconstruct_table};
use crate::tensor::{measure_ball_convention, verify_qnh, Poly3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ACCEPTANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ssblab", version, about = "Classical limits and spontaneous symmetry breaking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct Paths {
    /// Configuration file; defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; overrides `[output] dir`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ground pair and expectations at one parameter value.
    Solve(Paths),
    /// Convergence sweep towards the classical limit.
    Sweep(Paths),
    /// Classical minima and the symmetry-breaking verdict.
    Classical(Paths),
    /// Quantization diagnostics and the exact small-N oracle.
    Diagnose(Paths),
    /// Order-of-limits scans for both perturbations.
    Flea(Paths),
    /// The acceptance criteria.
    Accept(Paths),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::Sweep(_) => "sweep",
            Command::Classical(_) => "classical",
            Command::Diagnose(_) => "diagnose",
            Command::Flea(_) => "flea",
            Command::Accept(_) => "accept",
        }
    }

    fn paths(&self) -> &Paths {
        match self {
            Command::Solve(p)
            | Command::Sweep(p)
            | Command::Classical(p)
            | Command::Diagnose(p)
            | Command::Flea(p)
            | Command::Accept(p) => p,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Config { path: PathBuf, source: ConfigError },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error(transparent)]
    Numerical(#[from] Error),
}

fn is_input_error(e: &Error) -> bool {
    match e {
        Error::AtParameter { source, .. } => is_input_error(source),
        Error::InvalidInput(_)
        | Error::SizeExceeded { .. }
        | Error::UnsupportedParameters(_)
        | Error::KindMismatch
        | Error::DomainMismatch
        | Error::ResolutionGuard { .. } => true,
        _ => false,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(e) if !is_input_error(e) => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit status. Progress goes to `stdout`, errors to `stderr`.
pub fn run_command<S: AsRef<str>>(argv: &[S], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(AsRef::as_ref)) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "ssblab {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

/// Loaded configuration with every path resolved.
struct Session {
    cfg: RunConfig,
    hash: String,
    out: PathBuf,
    exec: Execution,
}

impl Session {
    fn load(paths: &Paths) -> Result<Self, CliError> {
        let cfg = match &paths.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| CliError::Read {
                    path: p.clone(),
                    source,
                })?;
                parse_config(&text).map_err(|source| CliError::Config {
                    path: p.clone(),
                    source,
                })?
            }
            None => RunConfig::default(),
        };
        let hash = cfg.hash();
        let out = absolute(paths.out.clone().unwrap_or_else(|| cfg.output.dir.clone()));
        let exec = if cfg.sweep.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        };
        Ok(Session { cfg, hash, out, exec })
    }

    fn report(&self, command: &str) -> Report {
        let timestamp = self.cfg.output.timestamp.then(|| {
            time::OffsetDateTime::now_utc()
                .format(&time::format_description::well_known::Rfc3339)
                .unwrap_or_default()
        });
        let convention = Conventions {
            ball: measure_ball_convention(4).ok(),
            sphere: measure_sphere_convention(self.exec).ok(),
        };
        Report::new(command, &self.hash, timestamp, convention)
    }

    fn write(&self, name: &str, contents: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
        let path = self.out.join(name);
        write_atomic(&path, contents)?;
        let _ = writeln!(stdout, "wrote {}", path.display());
        Ok(())
    }

    fn write_report(&self, report: &Report, stdout: &mut dyn Write) -> Result<(), CliError> {
        self.write(&format!("{}.json", report.command), &report_json(report)?, stdout)
    }

    fn sweep_spec(&self, params: Vec<f64>) -> SweepSpec {
        let obs = self.cfg.observables();
        let names: Vec<&str> = obs.iter().map(String::as_str).collect();
        SweepSpec::new(self.cfg.sweep_model(), params, &names).with_exec(self.exec)
    }
}

fn absolute(p: PathBuf) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        std::env::current_dir().map(|d| d.join(&p)).unwrap_or(p)
    }
}

fn execute(command: &Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let session = Session::load(command.paths())?;
    let _ = writeln!(stdout, "config hash {}", session.hash);
    match command {
        Command::Solve(_) => solve(&session, stdout),
        Command::Sweep(_) => sweep(&session, stdout),
        Command::Classical(_) => classical(&session, stdout),
        Command::Diagnose(_) => diagnose(&session, stdout),
        Command::Flea(_) => flea(&session, stdout),
        Command::Accept(_) => accept(&session, stdout),
    }
}

#[derive(Serialize)]
struct GroundSummary {
    model: &'static str,
    param_name: &'static str,
    param_value: f64,
    dimension: usize,
    energy: f64,
    residual: f64,
}

fn solve(s: &Session, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let m = &s.cfg.model;
    let model = s.cfg.sweep_model();
    let (h, param) = match model {
        SweepModel::CurieWeiss { j, b } => (build_cw_dicke(&CurieWeissConfig { n: m.n, b, j })?, m.n as f64),
        SweepModel::BoseHubbard { form } => (build_bh(&BoseHubbardConfig::new(m.n).with_form(form))?, m.n as f64),
        SweepModel::DoubleWell { grid_points } => {
            let cfg = DoubleWellConfig {
                grid_points,
                ..DoubleWellConfig::new(m.hbar)
            };
            (build_double_well(&cfg)?.0, m.hbar)
        }
    };
    let gs = ground_state(&h).map_err(|e| e.at(model.param_name(), param))?;
    let summary = GroundSummary {
        model: model.name(),
        param_name: model.param_name(),
        param_value: param,
        dimension: h.dim(),
        energy: gs.value,
        residual: gs.residual,
    };
    let _ = writeln!(
        stdout,
        "{} {} = {}: E0 = {:.15e} (residual {:.3e})",
        summary.model, summary.param_name, param, gs.value, gs.residual
    );
    let records = run_limit_sweep(&s.sweep_spec(vec![param]))?;
    let mut report = s.report("solve");
    report.table("ground", &summary)?;
    report.table("records", &records)?;
    s.write("solve.csv", &records_csv(&records, &s.hash), stdout)?;
    s.write_report(&report, stdout)?;
    Ok(EXIT_OK)
}

fn sweep(s: &Session, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let params = match s.cfg.model.kind {
        ModelKind::DoubleWell => s.cfg.sweep.hbar.clone(),
        _ => s.cfg.sweep.n.iter().map(|&n| n as f64).collect(),
    };
    let records = run_limit_sweep(&s.sweep_spec(params))?;
    let mut limits = BTreeMap::new();
    for obs in s.cfg.observables() {
        let rs = records_for(&records, &obs);
        let classical = rs.first().map_or(f64::NAN, |r| r.classical);
        match extrapolate(&rs) {
            Ok(e) => {
                let _ = writeln!(
                    stdout,
                    "{obs}: extrapolated {:.10} (classical {:.10}, rate {}, residual {:.3e}, {:?})",
                    e.value,
                    classical,
                    e.rate.map_or("-".to_string(), |r| format!("{r:.4}")),
                    e.residual,
                    e.method
                );
                limits.insert(obs, serde_json::to_value(e).map_err(EmitError::from)?);
            }
            Err(err) => {
                let _ = writeln!(stdout, "{obs}: no extrapolation ({err})");
                limits.insert(obs, serde_json::Value::String(err.to_string()));
            }
        }
    }
    let mut report = s.report("sweep");
    report.table("records", &records)?;
    report.table("extrapolation", &limits)?;
    s.write("sweep.csv", &records_csv(&records, &s.hash), stdout)?;
    s.write_report(&report, stdout)?;
    Ok(EXIT_OK)
}

fn classical(s: &Session, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let model = s.cfg.sweep_model().classical();
    let r = ssb_verdict(&model)?;
    let _ = writeln!(
        stdout,
        "{}: {} minima at value {:.12}, verdict {:?}",
        model.name(),
        r.minima.len(),
        r.min_value,
        r.verdict
    );
    let mut report = s.report("classical");
    report.table("ssb", &r)?;
    s.write_report(&report, stdout)?;
    Ok(EXIT_OK)
}

fn diagnose(s: &Session, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let ns = &s.cfg.sweep.diagnose_n;
    let pairs = [(Poly3::z(), Poly3::z()), (Poly3::z(), Poly3::x())];
    let d = quantization_diagnostics(ns, &pairs, s.exec)?;
    for row in &d.rows {
        let _ = writeln!(
            stdout,
            "N = {:>4} pair {}: ||Q(f)|| = {:.12}, von Neumann {:.6e}, DGR {:.6e}",
            row.n, row.pair, row.norm_f, row.von_neumann, row.dgr
        );
    }
    let m = &s.cfg.model;
    let qnh: Vec<(usize, f64)> = (2..=10)
        .map(|n| verify_qnh(n, m.j, m.b).map(|v| (n, v)))
        .collect::<Result<_, _>>()?;
    let table = reconstruct_table(&[1, 2, 5, 10, 20], false, s.exec)?;
    let squared = reconstruct_table(&[1, 2, 5, 10, 20], true, s.exec)?;
    let mut report = s.report("diagnose");
    report.table("diagnostics", &d)?;
    if ns.len() >= 2 {
        report.table("von_neumann_rate", &d.von_neumann_rate(0)?)?;
    }
    report.table("qnh_defect", &qnh)?;
    report.table("symbol_table", &table)?;
    report.table("symbol_table_squared", &squared)?;
    s.write_report(&report, stdout)?;
    Ok(EXIT_OK)
}

fn flea(s: &Session, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let p = &s.cfg.perturbation;
    let m = &s.cfg.model;
    let cw = flea_scan_cw(m.b, m.j, &p.epsilon, &p.n, s.exec)?;
    for (e, row) in cw.epsilons.iter().zip(&cw.m3) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:+.6}")).collect();
        let _ = writeln!(stdout, "epsilon = {e:+.1e}: m3 = {}", cells.join("  "));
    }
    let _ = writeln!(
        stdout,
        "large N: {}; small field: {} (m3 = {:.4}); crossover epsilon ~ {:.3e}{}",
        pass_word(cw.verdict.large_n_pass),
        pass_word(cw.verdict.small_field_pass),
        cw.verdict.small_field_m3,
        cw.verdict.crossover_epsilon,
        if cw.verdict.splitting_resolved { "" } else { " (splitting unresolved)" }
    );
    let bump = Perturbation::SchrodingerFlea {
        amplitude: p.amplitude,
        center: p.center,
        width: p.width,
    };
    let sch = flea_schrodinger(&p.hbar, &bump, s.exec)?;
    for (h, q) in sch.hbar.iter().zip(&sch.mean_q) {
        let _ = writeln!(stdout, "hbar = {h}: <q> = {q:+.6}");
    }
    let mut report = s.report("flea");
    report.table("curie_weiss", &cw)?;
    report.table("double_well", &sch)?;
    s.write_report(&report, stdout)?;
    Ok(EXIT_OK)
}

fn pass_word(p: bool) -> &'static str {
    if p {
        "PASS"
    } else {
        "FAIL"
    }
}

fn accept(s: &Session, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = AcceptanceConfig {
        exec: s.exec,
        ..AcceptanceConfig::default()
    };
    let result = acceptance_suite(&cfg);
    for c in &result.criteria {
        let _ = writeln!(stdout, "{}", c.summary());
    }
    let mut report = s.report("accept");
    report.criteria = result.criteria.clone();
    report.table("overall_pass", &result.pass)?;
    s.write_report(&report, stdout)?;
    let _ = writeln!(stdout, "acceptance {}", pass_word(result.pass));
    Ok(if result.pass { EXIT_OK } else { EXIT_ACCEPTANCE })
}

/// Entry point for the binary.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let out = std::io::stdout();
    let err = std::io::stderr();
    run_command(&args, &mut out.lock(), &mut err.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_command(args, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        let (code, _, err) = run(&["ssblab", "frobnicate"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("Usage"), "{err}");
        assert_eq!(run(&["ssblab"]).0, EXIT_CONFIG);
        assert_eq!(run(&["ssblab", "--help"]).0, EXIT_OK);
    }

    #[test]
    fn config_errors_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.cfg");
        std::fs::write(&cfg, "[model]\nB = x\n").unwrap();
        let (code, _, err) = run(&["ssblab", "solve", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("line 2"), "{err}");
        let missing = dir.path().join("missing.cfg");
        assert_eq!(run(&["ssblab", "solve", "--config", missing.to_str().unwrap()]).0, EXIT_CONFIG);
    }

    #[test]
    fn exit_code_classes() {
        assert_eq!(CliError::from(Error::FitDegenerate).exit_code(), EXIT_NUMERICAL);
        assert_eq!(
            CliError::from(Error::InvalidInput("x".into()).at("N", 1.0)).exit_code(),
            EXIT_CONFIG
        );
        let near = Error::NearDegenerate { lower: 0.0, upper: 0.0 }.at("N", 3.0);
        assert_eq!(CliError::from(near).exit_code(), EXIT_NUMERICAL);
    }
}
