//! The `comax` command line: JSON files in, a JSON report out.
//!
//! Exit status is 0 when every check passes, 1 when a mathematical check
//! fails (the report is still written) and 2 on unreadable or invalid input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::capacity::{Capacity, PossibilityDensity, SpaceMap};
use crate::category::{
    monad_law_harness, mu_oracle_exact, mu_possibility, naturality_check, naturality_sweep, FiniteSupportOuter,
};
use crate::error::Error;
use crate::functional::{property_report, Functional, FunctionalSpec};
use crate::integral::{choquet_integral, maxplus_integral, sugeno_integral};
use crate::representation::{
    integral_functional, maxitivity_gap, maxitivity_witness, reconstruct_capacity, roundtrip_check,
};
use crate::rng::trial_rng;
use crate::space::{FiniteSpace, RealFunction};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Integrate,
    Reconstruct,
    Roundtrip,
    Properties,
    Witness,
    Naturality,
    MonadLaws,
    CompareIntegrals,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Integrate => "integrate",
            Command::Reconstruct => "reconstruct",
            Command::Roundtrip => "roundtrip",
            Command::Properties => "properties",
            Command::Witness => "witness",
            Command::Naturality => "naturality",
            Command::MonadLaws => "monad-laws",
            Command::CompareIntegrals => "compare-integrals",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "comax",
    version,
    about = "Capacities, max-plus integrals and comonotonically maxitive functionals"
)]
pub struct Args {
    /// Operation to run.
    #[arg(long, value_enum)]
    pub command: Command,
    /// Input JSON files, in the order the command expects them.
    #[arg(long = "in", value_name = "PATH")]
    pub inputs: Vec<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for every randomized command; required by those commands.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Space size for generated inputs; by default a range of small sizes is swept.
    #[arg(long)]
    pub size: Option<usize>,
}

/// Validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: u64,
    pub tol: f64,
    pub size: Option<usize>,
}

impl TryFrom<Args> for RunConfig {
    type Error = CliError;

    fn try_from(args: Args) -> Result<Self, CliError> {
        if args.tol.is_nan() || args.tol <= 0.0 {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", args.tol)));
        }
        if args.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if let Some(size) = args.size {
            FiniteSpace::new(size)?;
        }
        Ok(RunConfig {
            command: args.command,
            inputs: args.inputs,
            out: args.out,
            seed: args.seed,
            trials: args.trials,
            tol: args.tol,
            size: args.size,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("malformed JSON in {path}: {message}")]
    Json { path: PathBuf, message: String },
    #[error(transparent)]
    Library(#[from] Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "malformed_json",
            CliError::Library(Error::DomainMismatch { .. }) => "space_size_mismatch",
            CliError::Library(_) => "validation",
        }
    }
}

/// Exit status and the JSON document to emit.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: u8,
    pub report: Value,
}

pub fn run(config: &RunConfig) -> Outcome {
    match dispatch(config) {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            exit_code: EXIT_INPUT,
            report: json!({
                "command": config.command.name(),
                "error": { "kind": e.kind(), "message": e.to_string() },
            }),
        },
    }
}

/// Writes the report to `--out` or standard output.
pub fn emit(config: &RunConfig, outcome: &Outcome) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(&outcome.report).expect("reports are plain JSON") + "\n";
    match &config.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

struct Report {
    command: Command,
    seed: Option<u64>,
    verdicts: Vec<Value>,
    witnesses: Vec<Value>,
    max_deviation: Option<f64>,
    extra: serde_json::Map<String, Value>,
    failed: bool,
}

impl Report {
    fn new(config: &RunConfig) -> Self {
        Self {
            command: config.command,
            seed: config.seed,
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            max_deviation: None,
            extra: serde_json::Map::new(),
            failed: false,
        }
    }

    fn verdict(&mut self, name: &str, passed: bool, detail: Value) {
        self.record(name, passed, true, detail);
    }

    /// Non-gating verdicts are reported but never change the exit status.
    fn record(&mut self, name: &str, passed: bool, gating: bool, detail: Value) {
        self.failed |= gating && !passed;
        let mut entry = json!({ "name": name, "passed": passed });
        if let (Value::Object(map), Value::Object(more)) = (&mut entry, detail) {
            map.extend(more);
        }
        self.verdicts.push(entry);
    }

    fn deviation(&mut self, value: f64) {
        self.max_deviation = Some(self.max_deviation.map_or(value, |d| d.max(value)));
    }

    fn set(&mut self, key: &str, value: Value) {
        self.extra.insert(key.to_string(), value);
    }

    fn finish(self) -> Outcome {
        let mut report = json!({
            "command": self.command.name(),
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "max_deviation": self.max_deviation,
            "seed": self.seed,
        });
        report.as_object_mut().unwrap().extend(self.extra);
        Outcome {
            exit_code: if self.failed { EXIT_FAIL } else { EXIT_PASS },
            report,
        }
    }
}

fn dispatch(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut report = Report::new(config);
    match config.command {
        Command::Integrate => integrate(config, &mut report)?,
        Command::CompareIntegrals => compare(config, &mut report)?,
        Command::Reconstruct => reconstruct(config, &mut report)?,
        Command::Roundtrip => roundtrip(config, &mut report)?,
        Command::Properties => properties(config, &mut report)?,
        Command::Witness => witness(config, &mut report)?,
        Command::Naturality => naturality(config, &mut report)?,
        Command::MonadLaws => monad_laws(config, &mut report)?,
    }
    Ok(report.finish())
}

fn input(config: &RunConfig, index: usize, what: &str) -> Result<Value, CliError> {
    let path = config.inputs.get(index).ok_or_else(|| {
        CliError::Usage(format!(
            "{} needs {what} as input #{} (--in PATH)",
            config.command.name(),
            index + 1
        ))
    })?;
    read_json(path)
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn decode<T: serde::de::DeserializeOwned>(value: Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Library(Error::Parse(e.to_string())))
}

fn require_seed(config: &RunConfig) -> Result<u64, CliError> {
    config.seed.ok_or_else(|| {
        CliError::Usage(format!(
            "{} draws random inputs and requires --seed",
            config.command.name()
        ))
    })
}

/// Accepts a capacity file or a possibility density file.
pub fn capacity_from_json(value: Value) -> Result<Capacity, CliError> {
    if value.get("values").is_some() {
        decode(value)
    } else if value.get("weights").is_some() {
        Ok(decode::<PossibilityDensity>(value)?.capacity())
    } else {
        Err(CliError::Library(Error::Parse(
            "expected a capacity {\"size\", \"values\"} or a density {\"weights\"}".into(),
        )))
    }
}

/// Accepts a functional description, or a capacity or density to integrate against.
pub fn functional_from_json(value: Value) -> Result<Functional, CliError> {
    if value.get("type").is_some() {
        Ok(decode::<FunctionalSpec>(value)?.build()?)
    } else {
        Ok(integral_functional(&capacity_from_json(value)?))
    }
}

fn load_pair(config: &RunConfig) -> Result<(Capacity, RealFunction), CliError> {
    let c = capacity_from_json(input(config, 0, "a capacity")?)?;
    let phi: RealFunction = decode(input(config, 1, "a function")?)?;
    c.space().ensure_size(phi.size())?;
    Ok((c, phi))
}

fn integrate(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let (c, phi) = load_pair(config)?;
    report.set("value", json!(maxplus_integral(&c, &phi)?));
    Ok(())
}

fn compare(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let (c, phi) = load_pair(config)?;
    let sugeno = match sugeno_integral(&c, &phi) {
        Ok(v) => json!(v),
        Err(Error::RangeViolation { .. }) => {
            report.set("note", json!("sugeno omitted: function values leave [0, 1]"));
            Value::Null
        }
        Err(e) => return Err(e.into()),
    };
    report.set(
        "values",
        json!({
            "max_plus": maxplus_integral(&c, &phi)?,
            "choquet": choquet_integral(&c, &phi)?,
            "sugeno": sugeno,
        }),
    );
    Ok(())
}

fn reconstruct(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let functional = functional_from_json(input(config, 0, "a functional")?)?;
    match reconstruct_capacity(&functional, config.tol) {
        Ok(c) => {
            report.verdict("reconstructed", true, json!({}));
            report.set("capacity", json!(c));
        }
        Err(Error::NotStabilized { failures }) => {
            report.verdict("reconstructed", false, json!({ "reason": "not_stabilized" }));
            report.witnesses.extend(failures.iter().map(|f| json!(f)));
        }
        Err(Error::InvalidFunctional {
            smaller,
            larger,
            smaller_value,
            larger_value,
        }) => {
            report.verdict("reconstructed", false, json!({ "reason": "not_monotone" }));
            report.witnesses.push(json!({
                "smaller": smaller, "larger": larger,
                "smaller_value": smaller_value, "larger_value": larger_value,
            }));
        }
        Err(Error::NonFiniteFunctional { subset, value }) => {
            report.verdict("reconstructed", false, json!({ "reason": "non_finite" }));
            report
                .witnesses
                .push(json!({ "subset": subset, "value": value.to_string() }));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn sizes(config: &RunConfig, default: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    match config.size {
        Some(n) => vec![n],
        None => default.collect(),
    }
}

fn roundtrip(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    if !config.inputs.is_empty() {
        let c = capacity_from_json(input(config, 0, "a capacity")?)?;
        let deviation = roundtrip_check(&c, config.tol)?;
        report.deviation(deviation);
        report.verdict(
            "roundtrip",
            deviation < config.tol,
            json!({ "max_deviation": deviation }),
        );
        return Ok(());
    }
    let seed = require_seed(config)?;
    for size in sizes(config, 2..=6) {
        let space = FiniteSpace::new(size)?;
        let mut worst = 0.0f64;
        let mut worst_trial = 0;
        for trial in 0..config.trials {
            let c = Capacity::random(&space, &mut trial_rng(seed ^ size as u64, trial));
            let deviation = roundtrip_check(&c, config.tol)?;
            if deviation > worst {
                worst = deviation;
                worst_trial = trial;
            }
        }
        report.deviation(worst);
        let passed = worst < config.tol;
        if !passed {
            let c = Capacity::random(&space, &mut trial_rng(seed ^ size as u64, worst_trial));
            report
                .witnesses
                .push(json!({ "size": size, "trial": worst_trial, "capacity": c }));
        }
        report.verdict(
            &format!("roundtrip_size_{size}"),
            passed,
            json!({ "samples": config.trials, "max_deviation": worst }),
        );
    }
    Ok(())
}

fn properties(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let functional = functional_from_json(input(config, 0, "a functional")?)?;
    let seed = require_seed(config)?;
    let result = property_report(&functional, config.trials, seed, config.tol);
    for verdict in &result.verdicts {
        report.deviation(verdict.max_deviation);
        // Full maxitivity is informational; only the four axioms gate the exit code.
        let gating = verdict.property.is_axiom();
        let mut detail = json!({
            "axiom": gating,
            "samples": verdict.samples,
            "max_deviation": verdict.max_deviation,
        });
        if let Some(w) = &verdict.witness {
            report.witnesses.push(json!(w));
            detail["witness_trial"] = json!(w.trial);
        }
        report.record(verdict.property.name(), verdict.passed, gating, detail);
    }
    report.set("tol", json!(config.tol));
    report.set("kind", json!(functional.kind()));
    Ok(())
}

fn witness(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let c = capacity_from_json(input(config, 0, "a capacity")?)?;
    report.set("is_possibility", json!(c.is_possibility()));
    match maxitivity_witness(&c) {
        Some((phi, psi)) => {
            let gap = maxitivity_gap(&c, &phi, &psi)?;
            let (a, b) = c.possibility_violation().expect("witness implies a violating pair");
            report.verdict("witness_verified", gap > config.tol, json!({ "gap": gap }));
            report
                .witnesses
                .push(json!({ "phi": phi, "psi": psi, "gap": gap, "sets": [a, b] }));
        }
        None => report.set("witness", Value::Null),
    }
    Ok(())
}

fn naturality(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let seed = require_seed(config)?;
    if !config.inputs.is_empty() {
        let c = capacity_from_json(input(config, 0, "a capacity")?)?;
        let map: SpaceMap = decode(input(config, 1, "a map")?)?;
        let deviation = naturality_check(&c, &map, config.trials, seed)?;
        report.deviation(deviation);
        report.verdict(
            "naturality",
            deviation < config.tol,
            json!({ "samples": config.trials }),
        );
        return Ok(());
    }
    for domain in sizes(config, 2..=5) {
        for codomain in 2..=5 {
            let deviation = naturality_sweep(domain, codomain, config.trials, seed)?;
            report.deviation(deviation);
            report.verdict(
                &format!("naturality_{domain}_to_{codomain}"),
                deviation < config.tol,
                json!({ "samples": config.trials, "max_deviation": deviation }),
            );
        }
    }
    Ok(())
}

fn monad_laws(config: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    if !config.inputs.is_empty() {
        let outer: FiniteSupportOuter = decode(input(config, 0, "an outer capacity")?)?;
        if outer.depth() == 1 {
            let mu = mu_possibility(&outer)?;
            let space = mu.space().clone();
            let deviation = space
                .subsets()
                .map(|f| mu_oracle_exact(&outer, f).map(|v| (v - mu.value(f)).abs()))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .fold(0.0, f64::max);
            report.deviation(deviation);
            report.verdict("closed_form", deviation == 0.0, json!({}));
            report.set("capacity", json!(mu));
        } else {
            let lhs = mu_possibility(&outer.flatten_inner()?)?;
            let rhs = mu_possibility(&outer.flatten_outer()?)?;
            let deviation = lhs.distance(&rhs)?;
            report.deviation(deviation);
            report.verdict("associativity", deviation <= crate::category::MONAD_TOL, json!({}));
            report.set("capacity", json!(lhs));
        }
        return Ok(());
    }
    let seed = require_seed(config)?;
    for size in sizes(config, 2..=5) {
        let result = monad_law_harness(&FiniteSpace::new(size)?, seed, config.trials)?;
        for v in &result.verdicts {
            report.deviation(v.max_deviation);
            if let Some(w) = &v.witness {
                report
                    .witnesses
                    .push(json!({ "size": size, "law": v.law, "witness": w }));
            }
            report.verdict(
                &format!("{}_size_{size}", json!(v.law).as_str().unwrap()),
                v.passed,
                json!({ "samples": v.samples, "max_deviation": v.max_deviation }),
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(command: Command) -> RunConfig {
        RunConfig {
            command,
            inputs: vec![],
            out: None,
            seed: None,
            trials: 10,
            tol: 1e-9,
            size: Some(3),
        }
    }

    #[test]
    fn randomized_commands_need_a_seed() {
        for command in [
            Command::Properties,
            Command::Naturality,
            Command::MonadLaws,
            Command::Roundtrip,
        ] {
            let outcome = run(&config(command));
            assert_eq!(outcome.exit_code, EXIT_INPUT, "{command:?}");
        }
    }

    #[test]
    fn rejects_bad_flags() {
        let args = Args::try_parse_from(["comax", "--command", "roundtrip", "--tol", "0"]).unwrap();
        assert!(RunConfig::try_from(args).is_err());
        let args = Args::try_parse_from(["comax", "--command", "roundtrip", "--trials", "0"]).unwrap();
        assert!(RunConfig::try_from(args).is_err());
        assert!(Args::try_parse_from(["comax", "--command", "bogus"]).is_err());
    }

    #[test]
    fn seeded_monad_laws_pass() {
        let mut c = config(Command::MonadLaws);
        c.seed = Some(1);
        let outcome = run(&c);
        assert_eq!(outcome.exit_code, EXIT_PASS, "{}", outcome.report);
        assert_eq!(outcome.report["verdicts"].as_array().unwrap().len(), 4);
    }
}
