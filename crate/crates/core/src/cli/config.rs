use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::PrecisionMode;

pub const SCHEMA: u32 = 1;

/// Everything needed to replay a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(flatten)]
    pub command: Command,
    pub precision: PrecisionMode,
    pub threads: Option<usize>,
    pub seed: u64,
    pub output: OutputPaths,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if cfg.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported config schema {}", cfg.schema)));
        }
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

#[derive(clap::Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Record minima of q |q|_p <qu>.
    ///
    /// CSV columns: q, q0 (empty), value, log10_value.
    MtScan(MtScanArgs),
    /// Record minima of min over q0 of |q| |qu - q0| |qv - q0|_p.
    ///
    /// CSV columns: q, q0, value, log10_value.
    GmtScan(GmtScanArgs),
    /// Record minima of q |q|_D <qu> for a divisibility chain D.
    ///
    /// CSV columns: q, q0 (empty), value, log10_value.
    Dadic(DadicArgs),
    /// Record minima of q |q|_p1 |q|_p2 <qu>, for one u or a seeded batch.
    ///
    /// CSV columns: q, q0, value, log10_value for one u;
    /// index, u, q, value, found with --random.
    Furstenberg(FurstenbergArgs),
    /// Continued fractions of p^k u and the products at their convergents.
    ///
    /// CSV columns: q, k, n, product (quadratic u);
    /// index, quotient (rational u).
    Cf(CfArgs),
    /// Shortest-vector height over a cone of the diagonal orbit of x_{u,v}.
    ///
    /// CSV columns: t, n, height, certified, witness_q, witness_q0.
    /// Exit 3 if some cell ran out of precision, 4 if some cell is
    /// uncertified.
    Orbit(OrbitArgs),
    /// Grid scan of the set of u with min product >= delta up to qmax.
    ///
    /// CSV columns: u, min_product, survives.
    Exceptional(ExceptionalArgs),
    /// Box-counting slope of a point set over a scale ladder.
    ///
    /// CSV columns: delta, count.
    Boxdim(BoxdimArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::MtScan(_) => "mt-scan",
            Command::GmtScan(_) => "gmt-scan",
            Command::Dadic(_) => "dadic",
            Command::Furstenberg(_) => "furstenberg",
            Command::Cf(_) => "cf",
            Command::Orbit(_) => "orbit",
            Command::Exceptional(_) => "exceptional",
            Command::Boxdim(_) => "boxdim",
        }
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MtScanArgs {
    /// rat:a/b, sqrt:n, quad:a,b,c,d or dec:x
    #[arg(long)]
    pub u: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long)]
    pub qmax: u64,
    /// Stop at the first record below this value.
    #[arg(long)]
    pub stop_below: Option<f64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GmtScanArgs {
    #[arg(long)]
    pub u: String,
    /// 0, int:K or padic:d0,d1,...
    #[arg(long, default_value = "0")]
    pub v: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long)]
    pub qmax: u64,
    #[arg(long, default_value_t = 2)]
    pub q0_min: u64,
    /// Fixed upper end for |q0|; by default it follows 2|qu| + 4.
    #[arg(long)]
    pub q0_max: Option<u64>,
    /// Only q0 > 0.
    #[arg(long)]
    pub positive_only: bool,
    #[arg(long)]
    pub stop_below: Option<f64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DadicArgs {
    #[arg(long)]
    pub u: String,
    /// Chain ratios: `6` for powers of 6, `2,3;5` for 2, 3, then 5 forever.
    #[arg(long)]
    pub d: String,
    #[arg(long)]
    pub qmax: u64,
    #[arg(long)]
    pub stop_below: Option<f64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FurstenbergArgs {
    #[arg(long, required_unless_present = "random", conflicts_with = "random")]
    pub u: Option<String>,
    /// Draw this many u uniformly from [0, 1) with the global seed.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub p1: u64,
    #[arg(long, default_value_t = 3)]
    pub p2: u64,
    #[arg(long)]
    pub qmax: u64,
    /// Stop each scan below this value; with --random it is also the
    /// success threshold (default 0.01).
    #[arg(long)]
    pub stop_below: Option<f64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CfArgs {
    /// An exact literal: rat:, sqrt: or quad:
    #[arg(long)]
    pub u: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 12)]
    pub kmax: u32,
    #[arg(long, default_value_t = 200)]
    pub len: usize,
    /// Keep convergent products below this value.
    #[arg(long, default_value_t = 0.05)]
    pub below: f64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitArgs {
    #[arg(long)]
    pub u: String,
    #[arg(long, default_value = "0")]
    pub v: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    /// C or Cprime
    #[arg(long, default_value = "C")]
    pub cone: String,
    #[arg(long)]
    pub tmax: f64,
    #[arg(long, default_value_t = 10)]
    pub nmax: i64,
    #[arg(long, default_value_t = 0.25)]
    pub tstep: f64,
    #[arg(long, default_value_t = 1)]
    pub nstep: i64,
    /// Enumeration budget per cell.
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: u64,
    /// Extract a Diophantine witness from the first cell with norm < delta.
    #[arg(long, requires = "delta")]
    pub check: bool,
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalArgs {
    #[arg(long, default_value = "0")]
    pub v: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub qmax: u64,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Use exact rationals lo + i (hi - lo) / (n - 1) instead of binary64.
    #[arg(long)]
    pub exact: bool,
    /// Brute-force q0 ladder instead of the convergent search.
    #[arg(long)]
    pub ladder: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxdimArgs {
    /// CSV with a `u` column; rows with survives=false are skipped.
    #[arg(long, conflicts_with = "set", required_unless_present = "set")]
    pub from: Option<PathBuf>,
    /// cantor:DEPTH, grid:LO,HI,N or point:X
    #[arg(long)]
    pub set: Option<String>,
    /// geo:A..B[/r] or an explicit list
    #[arg(long, default_value = "geo:2^-4..2^-12")]
    pub ladder: String,
}
