//! Command-line front end: flag and config-file parsing, subcommand
//! dispatch, CSV/JSON emission, exit-code mapping.
//!
//! Exit codes: 0 success, 1 usage error, 2 invariant failure,
//! 3 convergence failure. Errors are also written as structured JSON
//! records to the diagnostic stream.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use serde_json::json;

use crate::error::Error;
use crate::gaussian::{
    alien_number_distribution, equivalence_verdict, family_equivalence_verdict, FockVacuumState,
};
use crate::linalg::{RMatrix, RVector};
use crate::models::{
    fit_inverse_temperature, minkowski_generator, refinement_family, unruh_spectrum, LatticeKGModel,
};
use crate::phase_space::{
    frequency_splitting, j_from_dynamics, validate_complex_structure, ComplexStructure,
    DynamicsGenerator, PhaseSpace, VALIDATION_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Quantize,
    Compare,
    Numdist,
    Unruh,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Quantize => "quantize",
            Command::Compare => "compare",
            Command::Numdist => "numdist",
            Command::Unruh => "unruh",
        }
    }

    fn parse(s: &str) -> Option<Command> {
        match s {
            "validate" => Some(Command::Validate),
            "quantize" => Some(Command::Quantize),
            "compare" => Some(Command::Compare),
            "numdist" => Some(Command::Numdist),
            "unruh" => Some(Command::Unruh),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Parsed configuration of one run. Flags override config-file values.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub sites: Option<usize>,
    pub spacing: f64,
    pub mass: Option<f64>,
    pub wedge_origin: Option<usize>,
    pub omega1: Vec<f64>,
    pub omega2: Vec<f64>,
    pub cutoff: Option<usize>,
    pub nmax: usize,
    pub tol: f64,
    pub structure: Option<String>,
    pub modes: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    fn new(command: Command) -> Self {
        RunConfig {
            command,
            sites: None,
            spacing: 1.0,
            mass: None,
            wedge_origin: None,
            omega1: Vec::new(),
            omega2: Vec::new(),
            cutoff: None,
            nmax: 8,
            tol: VALIDATION_TOL,
            structure: None,
            modes: None,
            out: None,
            format: OutputFormat::Json,
        }
    }
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

const GENERAL_HELP: &str = "symfock: quantization of finite-dimensional symplectic systems

USAGE: symfock <command> [flags]

COMMANDS:
  validate   check the axioms of a complex structure
  quantize   derive the positive-energy structure of a flow and report its
             normal-mode frequencies
  compare    alien-quanta content between two quantizations (single pair or
             lattice refinement family)
  numdist    occupation distribution of one quantization's number operator
             in the other's vacuum
  unruh      lattice wedge spectrum: boost-mode occupations of the
             restricted inertial vacuum versus the thermal law

Run `symfock <command> --help` for per-command flags.";

fn command_help(cmd: Command) -> String {
    let common = "  --out <path>          output file (default: stdout)
  --format <csv|json>   output format (default: json)
  --config <path>       config file with [command] sections of key = value
  --tol <float>         validation tolerance, dimensionless (default 1e-10)";
    let body = match cmd {
        Command::Validate => {
            "symfock validate: check the three complex-structure axioms

  --J <standard>        candidate structure by name (standard multiplication
                        by i on a standard space)
  --n <int>             number of modes for --J (dimensionless count)
  --omega1 <float>      oscillator frequency (1/time); repeatable, validates
                        the structure derived from that flow
  --sites <int>         lattice sites; validates the derived inertial
                        structure (needs --mass)
  --spacing <float>     lattice spacing (length, default 1)
  --mass <float>        field mass (1/length)"
        }
        Command::Quantize => {
            "symfock quantize: frequency-splitting of a positive-energy flow

  --omega1 <float>      oscillator frequency (1/time); repeatable
  --sites <int>         lattice sites (needs --mass); splits the inertial flow
  --spacing <float>     lattice spacing (length, default 1)
  --mass <float>        field mass (1/length)
  --wedge-origin <int>  boost center: cut after this site (default L/2 - 1)"
        }
        Command::Compare => {
            "symfock compare: alien-quanta content between two quantizations

  --omega1 <float>      per-mode frequency of the first structure (1/time);
                        repeatable
  --omega2 <float>      per-mode frequency of the second structure (1/time);
                        repeatable, same count as --omega1
  --sites <int>         lattice mode: run the refinement family at
                        {L/8, L/4, L/2, L} with fixed physical geometry
  --spacing <float>     lattice spacing (length, default 1)
  --mass <float>        field mass (1/length)
  --wedge-origin <int>  boost center: cut after this site (default L/2 - 1)"
        }
        Command::Numdist => {
            "symfock numdist: occupation distribution of an alien number operator

  --omega1 <float>      frequency defining the vacuum's structure (1/time)
  --omega2 <float>      frequency defining the counted quanta (1/time)
  --nmax <int>          highest occupation reported (default 8)
  --cutoff <int>        per-mode truncation override (dimensionless)"
        }
        Command::Unruh => {
            "symfock unruh: thermal spectrum of the restricted inertial vacuum

  --sites <int>         lattice sites
  --spacing <float>     lattice spacing (length, default 1)
  --mass <float>        field mass (1/length)
  --wedge-origin <int>  boost center: cut after this site (default L/2 - 1)"
        }
    };
    format!("{body}\n\nCOMMON FLAGS:\n{common}\n")
}

/// Parse a command line (without the binary name). Returns the config, or a
/// help text to print, or a usage error.
pub fn parse_args(args: &[String]) -> Result<Result<RunConfig, String>, UsageError> {
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        return Ok(Err(GENERAL_HELP.to_string()));
    }
    let command = Command::parse(&args[0])
        .ok_or_else(|| UsageError(format!("unknown command `{}`", args[0])))?;
    // first pass: find --config and load file values
    let mut config_path: Option<PathBuf> = None;
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--config" {
            let v = args
                .get(i + 1)
                .ok_or_else(|| UsageError("--config needs a path".into()))?;
            config_path = Some(PathBuf::from(v));
            i += 2;
        } else {
            i += 1;
        }
    }
    let mut cfg = RunConfig::new(command);
    if let Some(path) = &config_path {
        let text = fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        apply_config_file(&mut cfg, &text)?;
    }
    // second pass: flags override
    let mut i = 1;
    while i < args.len() {
        let flag = &args[i];
        if flag == "--help" || flag == "-h" {
            return Ok(Err(command_help(command)));
        }
        if flag == "--config" {
            i += 2;
            continue;
        }
        let value = args
            .get(i + 1)
            .ok_or_else(|| UsageError(format!("flag {flag} needs a value")))?;
        apply_key(&mut cfg, flag.trim_start_matches("--"), value, true)?;
        i += 2;
    }
    Ok(Ok(cfg))
}

fn apply_config_file(cfg: &mut RunConfig, text: &str) -> Result<(), UsageError> {
    let mut in_section = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            let name = &line[1..line.len() - 1];
            if Command::parse(name).is_none() {
                return Err(UsageError(format!(
                    "config line {}: unknown section [{name}]",
                    lineno + 1
                )));
            }
            in_section = name == cfg.command.name();
            continue;
        }
        if !in_section {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            UsageError(format!("config line {}: expected key = value", lineno + 1))
        })?;
        // comma-separated lists are allowed for the repeatable keys
        let key = key.trim();
        if key == "omega1" || key == "omega2" {
            for part in value.split(',') {
                apply_key(cfg, key, part.trim(), false)?;
            }
        } else {
            apply_key(cfg, key, value.trim(), false)?;
        }
    }
    Ok(())
}

fn apply_key(
    cfg: &mut RunConfig,
    key: &str,
    value: &str,
    from_flag: bool,
) -> Result<(), UsageError> {
    let parse_f64 = |v: &str| -> Result<f64, UsageError> {
        v.parse::<f64>()
            .map_err(|_| UsageError(format!("invalid number `{v}` for {key}")))
    };
    let parse_usize = |v: &str| -> Result<usize, UsageError> {
        v.parse::<usize>()
            .map_err(|_| UsageError(format!("invalid integer `{v}` for {key}")))
    };
    match key {
        "sites" => cfg.sites = Some(parse_usize(value)?),
        "spacing" => cfg.spacing = parse_f64(value)?,
        "mass" => cfg.mass = Some(parse_f64(value)?),
        "wedge-origin" | "wedge_origin" => cfg.wedge_origin = Some(parse_usize(value)?),
        "omega1" => {
            if from_flag && cfg.omega1.len() > 16 {
                return Err(UsageError("too many --omega1 values".into()));
            }
            cfg.omega1.push(parse_f64(value)?);
        }
        "omega2" => cfg.omega2.push(parse_f64(value)?),
        "cutoff" => cfg.cutoff = Some(parse_usize(value)?),
        "nmax" => cfg.nmax = parse_usize(value)?,
        "tol" => cfg.tol = parse_f64(value)?,
        "J" | "j" => cfg.structure = Some(value.to_string()),
        "n" => cfg.modes = Some(parse_usize(value)?),
        "out" => cfg.out = Some(PathBuf::from(value)),
        "format" => {
            cfg.format = match value {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                other => return Err(UsageError(format!("unknown format `{other}`"))),
            }
        }
        other => return Err(UsageError(format!("unknown key `{other}`"))),
    }
    Ok(())
}

/// A rectangular table of f64 records plus a verdict-style summary; the
/// common shape of every output.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    /// Optional leading text column (e.g. check names).
    labels: Option<(&'static str, Vec<String>)>,
    summary: Vec<(String, serde_json::Value)>,
}

impl Table {
    fn numeric(columns: Vec<&'static str>, summary: Vec<(String, serde_json::Value)>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            labels: None,
            summary,
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.labels {
            Some((name, _)) => {
                let _ = writeln!(out, "{},{}", name, self.columns.join(","));
            }
            None => {
                let _ = writeln!(out, "{}", self.columns.join(","));
            }
        }
        for (k, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            match &self.labels {
                Some((_, labels)) => {
                    let _ = writeln!(out, "{},{}", labels[k], cells.join(","));
                }
                None => {
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
        }
        out
    }

    fn to_json(&self, command: &str) -> String {
        let records: Vec<serde_json::Value> = self
            .rows
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let mut obj = serde_json::Map::new();
                if let Some((name, labels)) = &self.labels {
                    obj.insert(name.to_string(), json!(labels[k]));
                }
                for (name, value) in self.columns.iter().zip(row.iter()) {
                    obj.insert(name.to_string(), json!(value));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut top = serde_json::Map::new();
        top.insert("command".into(), json!(command));
        for (k, v) in &self.summary {
            top.insert(k.clone(), v.clone());
        }
        top.insert("records".into(), serde_json::Value::Array(records));
        serde_json::to_string_pretty(&serde_json::Value::Object(top)).unwrap_or_default()
    }
}

/// Shape-level requirements per command; violations are usage errors, not
/// invariant failures.
fn usage_precheck(cfg: &RunConfig) -> Result<(), UsageError> {
    let need = |ok: bool, msg: &str| {
        if ok {
            Ok(())
        } else {
            Err(UsageError(msg.to_string()))
        }
    };
    match cfg.command {
        Command::Validate => need(
            cfg.structure.is_some() || !cfg.omega1.is_empty() || cfg.sites.is_some(),
            "validate needs --J standard, --omega1, or --sites/--mass",
        ),
        Command::Quantize => need(
            !cfg.omega1.is_empty() || cfg.sites.is_some(),
            "quantize needs --omega1 or --sites/--mass",
        ),
        Command::Compare => need(
            cfg.sites.is_some() || (!cfg.omega1.is_empty() && cfg.omega1.len() == cfg.omega2.len()),
            "compare needs matching --omega1/--omega2 lists or --sites/--mass",
        ),
        Command::Numdist => need(
            cfg.omega1.len() == 1 && cfg.omega2.len() == 1,
            "numdist needs exactly one --omega1 and one --omega2",
        ),
        Command::Unruh => need(
            cfg.sites.is_some() && cfg.mass.is_some(),
            "unruh needs --sites and --mass",
        ),
    }
}

/// Run a parsed configuration, returning the process exit code. Output goes
/// to `--out` or stdout; diagnostics to stderr.
pub fn run(cfg: &RunConfig) -> i32 {
    if let Err(usage) = usage_precheck(cfg) {
        diagnostic("usage", &usage.0);
        return EXIT_USAGE;
    }
    match execute(cfg) {
        Ok(table) => {
            let text = match cfg.format {
                OutputFormat::Csv => table.to_csv(),
                OutputFormat::Json => table.to_json(cfg.command.name()),
            };
            match &cfg.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        diagnostic("io", &format!("cannot write {}: {e}", path.display()));
                        return EXIT_USAGE;
                    }
                }
                None => {
                    let stdout = std::io::stdout();
                    let _ = stdout.lock().write_all(text.as_bytes());
                }
            }
            EXIT_OK
        }
        Err(err) => {
            let code = exit_code_for(&err);
            diagnostic(error_kind(&err), &err.to_string());
            code
        }
    }
}

fn diagnostic(kind: &str, message: &str) {
    let record = json!({ "error": kind, "message": message });
    eprintln!("{record}");
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::InvariantViolation { .. } => "invariant_violation",
        Error::NoPositiveEnergyStructure { .. } => "no_positive_energy_structure",
        Error::PositivitySignUnresolved { .. } => "positivity_sign_unresolved",
        Error::ConvergenceFailure { .. } => "convergence_failure",
        Error::DependentSpanningSet { .. } => "dependent_spanning_set",
        Error::SizeLimit { .. } => "size_limit",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::CrossCheckFailed { .. } => "cross_check_failed",
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::ConvergenceFailure { .. } | Error::CrossCheckFailed { .. } => EXIT_CONVERGENCE,
        _ => EXIT_INVARIANT,
    }
}

fn oscillator_structure(omegas: &[f64]) -> Result<ComplexStructure, Error> {
    if omegas.is_empty() {
        return Err(Error::InvalidArgument("no frequencies given".into()));
    }
    let n = omegas.len();
    let space = PhaseSpace::standard(n)?;
    let mut a = RMatrix::zeros(2 * n, 2 * n);
    for (k, &omega) in omegas.iter().enumerate() {
        if omega <= 0.0 || !omega.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "frequency {omega} must be positive"
            )));
        }
        a[(2 * k, 2 * k + 1)] = 1.0;
        a[(2 * k + 1, 2 * k)] = -omega * omega;
    }
    let gen = DynamicsGenerator::new(space, a, format!("oscillators {omegas:?}"))?;
    j_from_dynamics(&gen)
}

fn lattice_model(cfg: &RunConfig) -> Result<LatticeKGModel, Error> {
    let sites = cfg
        .sites
        .ok_or_else(|| Error::InvalidArgument("--sites is required for lattice runs".into()))?;
    let mass = cfg
        .mass
        .ok_or_else(|| Error::InvalidArgument("--mass is required for lattice runs".into()))?;
    LatticeKGModel::new(sites, cfg.spacing, mass, cfg.wedge_origin)
}

fn execute(cfg: &RunConfig) -> Result<Table, Error> {
    match cfg.command {
        Command::Validate => run_validate(cfg),
        Command::Quantize => run_quantize(cfg),
        Command::Compare => run_compare(cfg),
        Command::Numdist => run_numdist(cfg),
        Command::Unruh => run_unruh(cfg),
    }
}

fn run_validate(cfg: &RunConfig) -> Result<Table, Error> {
    let (space, op): (Arc<PhaseSpace>, RMatrix) = if let Some(kind) = &cfg.structure {
        if kind != "standard" {
            return Err(Error::InvalidArgument(format!(
                "unknown structure `{kind}` (supported: standard)"
            )));
        }
        let n = cfg.modes.unwrap_or(1);
        let space = PhaseSpace::standard(n)?;
        let j = ComplexStructure::standard(space.clone())?;
        (space, j.op().clone())
    } else if !cfg.omega1.is_empty() {
        let j = oscillator_structure(&cfg.omega1)?;
        (j.space().clone(), j.op().clone())
    } else if cfg.sites.is_some() {
        let model = lattice_model(cfg)?;
        let j = j_from_dynamics(&minkowski_generator(&model)?)?;
        (j.space().clone(), j.op().clone())
    } else {
        return Err(Error::InvalidArgument(
            "validate needs --J standard, --omega1, or --sites/--mass".into(),
        ));
    };
    let report = validate_complex_structure(&space, &op, cfg.tol)?;
    let mut table = Table::numeric(
        vec!["residual", "tolerance", "pass"],
        vec![("passed".into(), json!(report.passed()))],
    );
    let mut labels = Vec::new();
    for check in report.checks.iter() {
        labels.push(check.name.to_string());
        table.rows.push(vec![
            check.residual,
            check.tolerance,
            if check.pass() { 1.0 } else { 0.0 },
        ]);
    }
    table.labels = Some(("check", labels));
    if !report.passed() {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass())
            .map(|c| c.name)
            .collect();
        return Err(Error::InvariantViolation {
            check: match failing.first() {
                Some(&"symplectomorphism") => "complex structure: symplectomorphism",
                Some(&"square_is_minus_identity") => "complex structure: J^2 = -I",
                Some(&"positivity_min_eigenvalue") => "complex structure: positivity",
                _ => "complex structure",
            },
            residual: report.worst(),
            tolerance: 1.0,
        });
    }
    Ok(table)
}

fn run_quantize(cfg: &RunConfig) -> Result<Table, Error> {
    let split = if !cfg.omega1.is_empty() {
        let n = cfg.omega1.len();
        let space = PhaseSpace::standard(n)?;
        let mut a = RMatrix::zeros(2 * n, 2 * n);
        for (k, &omega) in cfg.omega1.iter().enumerate() {
            a[(2 * k, 2 * k + 1)] = 1.0;
            a[(2 * k + 1, 2 * k)] = -omega * omega;
        }
        let gen = DynamicsGenerator::new(space, a, "oscillators")?;
        frequency_splitting(&gen)?
    } else {
        let model = lattice_model(cfg)?;
        frequency_splitting(&minkowski_generator(&model)?)?
    };
    let mut table = Table::numeric(
        vec!["mode", "frequency"],
        vec![
            ("condition".into(), json!(split.condition)),
            ("condition_warning".into(), json!(split.condition_warning)),
            (
                "commutator_residual".into(),
                json!(split.commutator_residual),
            ),
        ],
    );
    for (k, freq) in split.frequencies.iter().enumerate() {
        table.rows.push(vec![k as f64, *freq]);
    }
    Ok(table)
}

fn run_compare(cfg: &RunConfig) -> Result<Table, Error> {
    if cfg.sites.is_some() {
        // lattice refinement family with fixed physical geometry
        let model = lattice_model(cfg)?;
        let l = model.sites();
        let sizes: Vec<usize> = [l / 8, l / 4, l / 2, l]
            .iter()
            .cloned()
            .filter(|&s| s >= 8)
            .collect();
        let members = refinement_family(&model, &sizes)?;
        let report = family_equivalence_verdict(&members)?;
        let mut table = Table::numeric(
            vec!["sites", "dim", "total_mean"],
            vec![
                ("verdict".into(), json!(report.verdict)),
                ("total_mean".into(), json!(report.total_mean)),
            ],
        );
        for (s, m) in sizes.iter().zip(members.iter()) {
            table.rows.push(vec![*s as f64, m.dim as f64, m.total_mean]);
        }
        return Ok(table);
    }
    if cfg.omega1.len() != cfg.omega2.len() || cfg.omega1.is_empty() {
        return Err(Error::InvalidArgument(
            "compare needs matching --omega1/--omega2 lists or --sites".into(),
        ));
    }
    let j1 = oscillator_structure(&cfg.omega1)?;
    let j2 = ComplexStructure::new(
        j1.space().clone(),
        oscillator_structure(&cfg.omega2)?.op().clone(),
    )?;
    let report = equivalence_verdict(&j1, &j2)?;
    let mut table = Table::numeric(
        vec!["mode", "per_mode_mean"],
        vec![
            ("verdict".into(), json!(report.verdict)),
            ("total_mean".into(), json!(report.total_mean)),
            ("trace_mu2".into(), json!(report.trace_mu2)),
        ],
    );
    for (k, mean) in report.per_mode_means.iter().enumerate() {
        table.rows.push(vec![k as f64, *mean]);
    }
    Ok(table)
}

fn run_numdist(cfg: &RunConfig) -> Result<Table, Error> {
    if cfg.omega1.len() != 1 || cfg.omega2.len() != 1 {
        return Err(Error::InvalidArgument(
            "numdist needs exactly one --omega1 and one --omega2".into(),
        ));
    }
    let j1 = oscillator_structure(&cfg.omega1)?;
    let j2 = ComplexStructure::new(
        j1.space().clone(),
        oscillator_structure(&cfg.omega2)?.op().clone(),
    )?;
    let state = FockVacuumState::new(j1);
    let f = RVector::from_vec(vec![1.0, 0.0]);
    let dist = alien_number_distribution(&state, &j2, &f, cfg.nmax)?;
    let mut table = Table::numeric(
        vec!["k", "probability", "cumulative"],
        vec![
            ("tail".into(), json!(dist.tail)),
            ("cutoff".into(), json!(dist.cutoff)),
            ("rep_discrepancy".into(), json!(dist.rep_discrepancy)),
        ],
    );
    let mut cumulative = 0.0;
    for (k, p) in dist.probabilities.iter().enumerate() {
        cumulative += p;
        table.rows.push(vec![k as f64, *p, cumulative]);
    }
    Ok(table)
}

fn run_unruh(cfg: &RunConfig) -> Result<Table, Error> {
    let model = lattice_model(cfg)?;
    let spectrum = unruh_spectrum(&model)?;
    let beta = fit_inverse_temperature(&spectrum, 0.2, 1.5);
    let mut table = Table::numeric(
        vec![
            "mode",
            "kappa",
            "mean_occupation",
            "bose_einstein",
            "abs_rel_err",
        ],
        vec![
            ("total_mean".into(), json!(spectrum.total_mean)),
            ("beta_fit".into(), json!(beta)),
        ],
    );
    for m in &spectrum.modes {
        table.rows.push(vec![
            m.mode as f64,
            m.kappa,
            m.mean_occupation,
            m.bose_einstein,
            m.abs_rel_err,
        ]);
    }
    Ok(table)
}

/// Entry point used by the binary: parse, run, map errors to exit codes.
pub fn main_with_args(args: &[String]) -> i32 {
    match parse_args(args) {
        Ok(Ok(cfg)) => run(&cfg),
        Ok(Err(help)) => {
            println!("{help}");
            EXIT_OK
        }
        Err(usage) => {
            diagnostic("usage", &usage.0);
            eprintln!("{GENERAL_HELP}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_compare_flags() {
        let cfg = parse_args(&args(&[
            "compare", "--omega1", "1", "--omega2", "2", "--format", "json",
        ]))
        .unwrap()
        .unwrap();
        assert_eq!(cfg.command, Command::Compare);
        assert_eq!(cfg.omega1, vec![1.0]);
        assert_eq!(cfg.omega2, vec![2.0]);
        assert_eq!(cfg.format, OutputFormat::Json);
    }

    #[test]
    fn unknown_flag_rejected() {
        assert!(parse_args(&args(&["compare", "--bogus", "1"])).is_err());
        assert!(parse_args(&args(&["no-such-command"])).is_err());
    }

    #[test]
    fn config_file_sections_apply_and_flags_override() {
        let dir = std::env::temp_dir().join("symfock-test-config");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        fs::write(
            &path,
            "[compare]\nomega1 = 1.0, 3.0\nomega2 = 2.0, 4.0\nformat = csv\n\n[unruh]\nsites = 64\n",
        )
        .unwrap();
        let cfg = parse_args(&args(&[
            "compare",
            "--config",
            path.to_str().unwrap(),
            "--format",
            "json",
        ]))
        .unwrap()
        .unwrap();
        assert_eq!(cfg.omega1, vec![1.0, 3.0]);
        assert_eq!(cfg.omega2, vec![2.0, 4.0]);
        assert_eq!(cfg.format, OutputFormat::Json); // flag wins
    }

    #[test]
    fn config_file_unknown_key_rejected() {
        let dir = std::env::temp_dir().join("symfock-test-config2");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.cfg");
        fs::write(&path, "[compare]\nbogus = 1\n").unwrap();
        assert!(parse_args(&args(&["compare", "--config", path.to_str().unwrap()])).is_err());
    }

    #[test]
    fn compare_reports_one_eighth() {
        let cfg = parse_args(&args(&["compare", "--omega1", "1", "--omega2", "2"]))
            .unwrap()
            .unwrap();
        let table = execute(&cfg).unwrap();
        let total = table
            .summary
            .iter()
            .find(|(k, _)| k == "total_mean")
            .unwrap()
            .1
            .as_f64()
            .unwrap();
        assert!((total - 0.125).abs() < 1e-12);
    }

    #[test]
    fn validate_standard_passes() {
        let cfg = parse_args(&args(&["validate", "--J", "standard", "--n", "1"]))
            .unwrap()
            .unwrap();
        assert_eq!(run(&cfg), EXIT_OK);
    }

    #[test]
    fn unruh_csv_header_is_pinned() {
        let mut table = Table::numeric(
            vec![
                "mode",
                "kappa",
                "mean_occupation",
                "bose_einstein",
                "abs_rel_err",
            ],
            vec![],
        );
        table.rows.push(vec![0.0, 0.5, 0.1, 0.1, 0.0]);
        let csv = table.to_csv();
        assert!(csv.starts_with("mode,kappa,mean_occupation,bose_einstein,abs_rel_err\n"));
    }

    #[test]
    fn csv_floats_round_trip() {
        let x = 0.123_456_789_012_345_68_f64;
        let printed = format!("{x:.16e}");
        let back: f64 = printed.parse().unwrap();
        assert_eq!(x, back);
    }
}
