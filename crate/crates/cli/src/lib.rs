use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use nileta_core::catalog;
use nileta_core::report;
use nileta_core::{Error as CoreError, EvenLattice, DEFAULT_ENUM_CAP};

pub const ENUM_CAP_VAR: &str = "NILETA_ENUM_CAP";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Core(e) => e.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Info,
    Eta,
    Spectrum,
    FInvariant,
    Classify,
    Congruence,
}

fn parse_k_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let a: i64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

/// Exact η-invariants, spectra and f-invariants of nilmanifold bundles
/// attached to even lattices.
#[derive(Debug, Clone, Parser)]
#[command(name = "nileta", version, allow_negative_numbers = true)]
pub struct Cli {
    pub command: Command,
    /// Catalog name (A1, A2, 2A1, diag(2,4), Q7, 3A1, A3, D4, E8), a JSON
    /// file {"gram": [[...]]}, or an inline gram matrix such as [[2,1],[1,2]].
    pub lattice: String,
    #[arg(long, default_value_t = 1)]
    pub twist: i64,
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    #[arg(long, default_value_t = 20)]
    pub order: usize,
    /// Cap on Σ n_k for the vertical spectrum.
    #[arg(long = "levels", default_value_t = 2)]
    pub n_cap: u32,
    /// Winding range a:b for the base spectrum.
    #[arg(long, default_value = "-3:3", value_parser = parse_k_range, allow_hyphen_values = true)]
    pub k_range: (i64, i64),
    /// Recompute with brute-force enumeration and fail on mismatch.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lattice: String,
    pub twist: i64,
    pub level: u32,
    pub order: usize,
    pub n_cap: u32,
    pub k_range: (i64, i64),
    pub oracle: bool,
    pub out: Option<PathBuf>,
    pub enum_cap: u64,
}

impl RunConfig {
    pub fn new(command: Command, lattice: &str) -> Self {
        RunConfig {
            command,
            lattice: lattice.to_string(),
            twist: 1,
            level: 3,
            order: 20,
            n_cap: 2,
            k_range: (-3, 3),
            oracle: false,
            out: None,
            enum_cap: DEFAULT_ENUM_CAP,
        }
    }

    pub fn from_cli(cli: Cli, enum_cap: u64) -> Self {
        RunConfig {
            command: cli.command,
            lattice: cli.lattice,
            twist: cli.twist,
            level: cli.level,
            order: cli.order,
            n_cap: cli.n_cap,
            k_range: cli.k_range,
            oracle: cli.oracle,
            out: cli.out,
            enum_cap,
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.twist == 0 {
            return Err(CoreError::ZeroTwist);
        }
        if self.level < 2 {
            return Err(CoreError::DomainError(format!("level must be >= 2, got {}", self.level)));
        }
        if self.order < 1 {
            return Err(CoreError::DomainError("order must be >= 1".into()));
        }
        Ok(())
    }
}

/// Reads `NILETA_ENUM_CAP`, falling back to the default cap.
pub fn enum_cap_from_env() -> Result<u64, CliError> {
    match std::env::var(ENUM_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CoreError::Parse(format!("{ENUM_CAP_VAR}={v} is not a non-negative integer")).into()),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

#[derive(Deserialize)]
struct LatticeFile {
    gram: Vec<Vec<i64>>,
}

fn parse_gram_json(text: &str, origin: &str) -> Result<EvenLattice, CoreError> {
    let file: LatticeFile =
        serde_json::from_str(text).map_err(|e| CoreError::Parse(format!("{origin}: {e}")))?;
    parse_gram(file.gram, origin)
}

fn parse_gram(gram: Vec<Vec<i64>>, origin: &str) -> Result<EvenLattice, CoreError> {
    let n = gram.len();
    if n == 0 {
        return Err(CoreError::Parse(format!("{origin}: field 'gram' is empty")));
    }
    if let Some((i, row)) = gram.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(CoreError::Parse(format!(
            "{origin}: field 'gram' is non-square: row {} has {} entries, expected {n}",
            i + 1,
            row.len()
        )));
    }
    EvenLattice::new(gram)
}

pub fn parse_lattice_file(path: &Path) -> Result<EvenLattice, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(parse_gram_json(&text, &path.display().to_string())?)
}

/// A source is a catalog name, an existing JSON file, or an inline gram matrix.
pub fn resolve_lattice(source: &str) -> Result<EvenLattice, CliError> {
    if catalog::canonical_name(source).is_some() {
        return Ok(catalog::lookup(source)?);
    }
    let path = Path::new(source);
    if path.exists() {
        return parse_lattice_file(path);
    }
    if source.trim_start().starts_with('[') {
        let gram: Vec<Vec<i64>> =
            serde_json::from_str(source).map_err(|e| CoreError::Parse(format!("inline gram: {e}")))?;
        return Ok(parse_gram(gram, "inline gram")?);
    }
    Err(CliError::Io {
        path: source.to_string(),
        message: format!("not a file or catalog name (catalog: {})", catalog::names().join(", ")),
    })
}

pub fn build_report(config: &RunConfig) -> Result<Value, CliError> {
    config.validate()?;
    let l = resolve_lattice(&config.lattice)?;
    let cap = config.enum_cap;
    let mut report = match config.command {
        Command::Info => report::info_report(&l, config.twist, cap)?,
        Command::Eta => report::eta_report(&l, config.twist, config.oracle, cap)?,
        Command::Spectrum => report::spectrum_report(&l, config.twist, config.n_cap, config.k_range, cap)?,
        Command::FInvariant => report::f_invariant_report(&l, config.level, config.order, config.oracle, cap)?,
        Command::Classify => report::classify_report(&l, cap)?,
        Command::Congruence => report::congruence_report(&l, config.level, config.order, cap)?,
    };
    report["source"] = json!(config.lattice);
    Ok(report)
}

/// Rendered report (or error document) and the process exit code.
pub fn run(config: &RunConfig) -> (String, i32) {
    match build_report(config) {
        Ok(report) => (report::render(&report), 0),
        Err(e) => (report::render(&e.to_json()), e.exit_code()),
    }
}
