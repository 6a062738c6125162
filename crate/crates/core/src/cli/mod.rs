//! The `plw` command line.
//!
//! Every subcommand is a [`RunConfig`]; `--save-config` writes it as JSON
//! and `plw run --config FILE` replays it.

mod commands;
mod config;
pub mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::padic::PrecisionMode;

pub use commands::{execute, Outcome};
pub use config::*;

#[derive(Parser, Debug)]
#[command(name = "plw", version, about = "p-adic Littlewood products, cone orbits and dimension estimates")]
#[command(after_help = "CSV goes to stdout unless --csv is given; summaries go to stderr.\n\
Exit codes: 0 success, 2 usage, 3 precision, 4 budget exhausted or uncertified.")]
pub struct Cli {
    /// binary64 or extended
    #[arg(long, global = true, env = "PLW_PRECISION")]
    pub precision: Option<PrecisionMode>,
    /// Worker threads; 0 or unset uses every core.
    #[arg(long, global = true, env = "PLW_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// JSON summary with the embedded config, schema 1.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Write the run config here before running.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: TopLevel,
}

#[derive(Subcommand, Debug)]
pub enum TopLevel {
    #[command(flatten)]
    Op(Command),
    /// Replay a saved config; --csv and --json override its output paths.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match self.command {
            TopLevel::Op(command) => RunConfig {
                schema: SCHEMA,
                command,
                precision: self.precision.unwrap_or_default(),
                threads: self.threads,
                seed: self.seed.unwrap_or(0),
                output: OutputPaths::default(),
            },
            TopLevel::Run { config } => RunConfig::load(&config)?,
        };
        if self.csv.is_some() {
            cfg.output.csv = self.csv;
        }
        if self.json.is_some() {
            cfg.output.json = self.json;
        }
        if let Some(path) = &self.save_config {
            cfg.save(path)?;
        }
        Ok(cfg)
    }
}

/// Runs a config inside its own thread pool and writes its outputs.
pub fn run(cfg: &RunConfig) -> Result<i32> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let start = Instant::now();
    let out = pool.install(|| execute(cfg))?;
    let secs = start.elapsed().as_secs_f64();
    match &cfg.output.csv {
        Some(path) => std::fs::write(path, &out.csv)?,
        None => std::io::stdout().write_all(&out.csv)?,
    }
    if let Some(path) = &cfg.output.json {
        let doc = json!({
            "schema": SCHEMA,
            "command": cfg.command.name(),
            "config": cfg,
            "result": out.summary,
            "runtime_seconds": secs,
        });
        std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    eprintln!("{}", out.text);
    Ok(out.code)
}

/// Entry point of the `plw` binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.into_config().and_then(|cfg| run(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("plw: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        Cli::try_parse_from(args).unwrap().into_config().unwrap()
    }

    #[test]
    fn flags_land_in_config() {
        let c = parse(&["plw", "mt-scan", "--u", "sqrt:2", "--p", "3", "--qmax", "100", "--seed", "9"]);
        assert_eq!(c.seed, 9);
        assert_eq!(c.command, Command::MtScan(MtScanArgs { u: "sqrt:2".into(), p: 3, qmax: 100, stop_below: None }));
    }

    #[test]
    fn config_round_trips() {
        let c = parse(&["plw", "orbit", "--u", "sqrt:2", "--cone", "Cprime", "--tmax", "5", "--check", "--delta", "0.25"]);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"command\":\"orbit\""));
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn usage_errors() {
        assert!(Cli::try_parse_from(["plw", "mt-scan", "--u", "sqrt:2"]).is_err());
        assert!(Cli::try_parse_from(["plw", "orbit", "--u", "sqrt:2", "--tmax", "3", "--check"]).is_err());
        assert!(Cli::try_parse_from(["plw", "furstenberg", "--qmax", "10"]).is_err());
        assert_eq!(main_with_args(["plw", "mt-scan", "--u", "nope", "--qmax", "10"]), 2);
    }

    #[test]
    fn replay_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let d = |f: &str| dir.path().join(f).to_str().unwrap().to_string();
        let code = main_with_args([
            "plw", "gmt-scan", "--u", "sqrt:2", "--qmax", "3000", "--csv", &d("a.csv"), "--json", &d("a.json"),
            "--save-config", &d("cfg.json"),
        ]);
        assert_eq!(code, 0);
        assert_eq!(main_with_args(["plw", "run", "--config", &d("cfg.json"), "--csv", &d("b.csv")]), 0);
        assert_eq!(std::fs::read(d("a.csv")).unwrap(), std::fs::read(d("b.csv")).unwrap());
        let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(d("a.json")).unwrap()).unwrap();
        assert_eq!(summary["schema"], json!(1));
        assert_eq!(summary["config"]["command"], json!("gmt-scan"));
    }
}
