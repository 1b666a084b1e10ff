//! Batch driver: one subcommand per computation, each writing a JSON
//! artifact under the output directory and a short summary to stdout.
//!
//! Exit status is 0 when the computation verifies, 2 when it produces a
//! negative verdict and 1 on errors.

mod commands;
pub mod session;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
pub use commands::*;
pub use session::{Caps, FieldDecl, SessionConfig};

pub const SCHEMA: &str = "nonarch-artifact/1";

#[derive(Parser, Debug)]
#[command(name = "nonarch", version, about = "Exact computation in non-archimedean Banach rings")]
pub struct Cli {
    /// Session configuration (JSON); built-in defaults otherwise.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for artifacts, overriding the configuration.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Precision cap (significant digits), overriding the configuration.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Replay a stored artifact and compare its result.
    #[arg(long, value_name = "ARTIFACT")]
    pub check: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Gauss norm of a series.
    GaussNorm(GaussNormArgs),
    /// Spectral radius of a Laurent series against gauss_norm(f^l)^(1/l).
    SpectralRadius(SpectralArgs),
    /// p-th root by iteration, with the per-step trace.
    PthRoot(PthRootArgs),
    /// Tower of iterated p-th roots.
    Tower(TowerArgs),
    /// Lacunary series and its exponents.
    SparseSeries(SparseArgs),
    /// Bounded-degree non-integrality certificate.
    NonintegralCert(NonintegralArgs),
    /// Divergence table of the square-zero homomorphism.
    UnboundedDemo(UnboundedArgs),
    /// p-independence certificate for a p-basis series.
    PbasisCert(PbasisArgs),
    /// Decomposition of a series along the p-basis of F_q((t)).
    FfiniteDecompose(FfiniteArgs),
    /// Ring axioms and norm properties of dual numbers.
    SzCheck(SzArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GaussNorm(_) => "gauss-norm",
            Command::SpectralRadius(_) => "spectral-radius",
            Command::PthRoot(_) => "pth-root",
            Command::Tower(_) => "tower",
            Command::SparseSeries(_) => "sparse-series",
            Command::NonintegralCert(_) => "nonintegral-cert",
            Command::UnboundedDemo(_) => "unbounded-demo",
            Command::PbasisCert(_) => "pbasis-cert",
            Command::FfiniteDecompose(_) => "ffinite-decompose",
            Command::SzCheck(_) => "sz-check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Negative,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Negative => 2,
        }
    }
}

/// What a subcommand computed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    /// The statement the computation exercises.
    pub lemma: &'static str,
    pub result: Value,
    pub summary: String,
}

/// Stored form of a run, sufficient to replay it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Artifact {
    pub schema: String,
    pub command: String,
    pub lemma: String,
    pub invocation: Command,
    pub session: SessionConfig,
    pub precision: Option<u32>,
    pub status: Status,
    pub result: Value,
}

pub fn execute(cmd: &Command, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    match cmd {
        Command::GaussNorm(a) => gauss_norm(a, cfg, precision),
        Command::SpectralRadius(a) => spectral_radius(a, cfg, precision),
        Command::PthRoot(a) => pth_root(a, cfg, precision),
        Command::Tower(a) => tower(a, cfg, precision),
        Command::SparseSeries(a) => sparse(a, cfg, precision),
        Command::NonintegralCert(a) => nonintegral(a, cfg, precision),
        Command::UnboundedDemo(a) => unbounded(a, cfg, precision),
        Command::PbasisCert(a) => pbasis(a, cfg, precision),
        Command::FfiniteDecompose(a) => ffinite(a, cfg, precision),
        Command::SzCheck(a) => sz_check(a, cfg, precision),
    }
}

fn artifact_json(a: &Artifact) -> Result<String> {
    let mut s = serde_json::to_string_pretty(a)?;
    s.push('\n');
    Ok(s)
}

/// Runs one subcommand and writes its artifact; returns the artifact path.
pub fn run_and_store(cmd: &Command, cfg: &SessionConfig, precision: Option<u32>) -> Result<(Outcome, PathBuf)> {
    let out = execute(cmd, cfg, precision)?;
    let art = Artifact {
        schema: SCHEMA.into(),
        command: cmd.name().into(),
        lemma: out.lemma.into(),
        invocation: cmd.clone(),
        session: cfg.clone(),
        precision,
        status: out.status,
        result: out.result.clone(),
    };
    std::fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join(format!("{}.json", cmd.name()));
    std::fs::write(&path, artifact_json(&art)?)?;
    Ok((out, path))
}

/// Recomputes a stored artifact from its own parameters.
pub fn replay(path: &Path) -> Result<(bool, Artifact)> {
    let text = std::fs::read_to_string(path)?;
    let art: Artifact = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("artifact: {e}")))?;
    if art.schema != SCHEMA {
        return Err(Error::Parse(format!("unknown artifact schema `{}`", art.schema)));
    }
    art.session.validate()?;
    let out = execute(&art.invocation, &art.session, art.precision)?;
    let same = out.status == art.status && out.result == art.result && out.lemma == art.lemma;
    Ok((same, art))
}

fn dispatch(cli: Cli) -> Result<i32> {
    if let Some(path) = &cli.check {
        let (same, art) = replay(path)?;
        if same {
            println!("check {}: {} reproduces ({:?})", path.display(), art.command, art.status);
            return Ok(art.status.exit_code());
        }
        println!("check {}: {} does NOT reproduce", path.display(), art.command);
        return Ok(2);
    }
    let cmd = cli.command.ok_or_else(|| Error::Config("no subcommand given (see --help)".into()))?;
    let mut cfg = match &cli.config {
        Some(p) => SessionConfig::load(p)?,
        None => SessionConfig::default(),
    };
    if let Some(o) = cli.out {
        cfg.out = o;
    }
    let (out, path) = run_and_store(&cmd, &cfg, cli.precision)?;
    println!("{}", out.summary);
    println!("artifact: {}", path.display());
    Ok(out.status.exit_code())
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub(crate) fn norm_json(n: &crate::lognorm::LogNorm) -> Value {
    if n.is_zero() {
        json!({ "value": n, "display": "ZERO" })
    } else {
        json!({ "value": n, "display": n.to_string() })
    }
}
