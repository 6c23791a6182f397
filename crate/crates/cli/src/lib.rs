//! `holocap` command line: capacity, relative-entropy maps, critical points,
//! additivity scans and the reproduction driver.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand};

mod channel;
mod commands;
pub mod output;
pub mod reproduce;

pub use channel::parse_channel_file;

#[derive(Parser, Debug)]
#[command(name = "holocap", version, about = "Holevo capacity of qubit channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal input ensemble, capacity and its certificate.
    Capacity(CapacityArgs),
    /// Relative entropy to the average output over a (phi, theta) grid, as CSV.
    RelentMap(RelentMapArgs),
    /// Critical points of the relative-entropy landscape, as JSON.
    Census(CensusArgs),
    /// Scan of the two-use relative entropy against twice the capacity.
    Additivity(AdditivityArgs),
    /// Two-use relative entropy along p at fixed Schmidt angles, as CSV.
    Gslice(GsliceArgs),
    /// Output entropy of the mu-channel on sqrt(p)|00> + sqrt(1-p)|11>, as CSV.
    Concavity(ConcavityArgs),
    /// Recompute the published tables and figures and check them.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ChannelArgs {
    /// Channel file (`lambda = l1 l2 l3`, `t = t1 t2 t3`).
    pub channel: PathBuf,
    /// Continue when the channel fails the complete-positivity check.
    #[arg(long)]
    pub allow_noncp: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Finest mesh resolution; the solver also starts from k/2 and 3k/4.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(2..))]
    pub k: u64,
    /// Target dual gap.
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub tol: f64,
    /// Mesh orientations per resolution.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub starts: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverArgs {
    pub fn config(&self, allow_noncp: bool) -> holocap::CapacityConfig {
        holocap::CapacityConfig {
            rotations: self.starts as usize,
            seed: self.seed,
            tolerance: self.tol,
            allow_non_cp: allow_noncp,
            ..Default::default()
        }
        .with_mesh(self.k as usize)
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive number")),
        Err(e) => Err(e.to_string()),
    }
}

/// Reference state for the relative entropy: the optimal average input, or an explicit Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AvgSource {
    FromCapacity,
    Explicit([f64; 3]),
}

impl FromStr for AvgSource {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "from-capacity" {
            return Ok(Self::FromCapacity);
        }
        let v = parse_list(s)?;
        match v[..] {
            [x, y, z] => Ok(Self::Explicit([x, y, z])),
            _ => bail!("expected `from-capacity` or x,y,z; got {s:?}"),
        }
    }
}

/// Comma-separated reals.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| anyhow!("{t:?} is not a number"))
        })
        .collect()
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Print the full result as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RelentMapArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// `from-capacity` or `x,y,z`.
    #[arg(long, default_value = "from-capacity")]
    pub avg: AvgSource,
    #[arg(long, default_value_t = 91)]
    pub phi_steps: usize,
    #[arg(long, default_value_t = 180)]
    pub theta_steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value = "from-capacity")]
    pub avg: AvgSource,
    #[arg(long, default_value_t = 400)]
    pub phi_steps: usize,
    #[arg(long, default_value_t = 800)]
    pub theta_steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct AdditivityArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 50)]
    pub ascents: usize,
    /// JSON output (the only format; accepted for symmetry with `capacity`).
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct GsliceArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// `theta_u,phi_u,theta_v,phi_v`; by default the first two optimal inputs.
    #[arg(long)]
    pub angles: Option<String>,
    /// Values of nu.
    #[arg(
        long,
        default_value = "0,1.5707963267948966,3.141592653589793,4.71238898038469"
    )]
    pub nus: String,
    /// Intervals of the uniform p grid on [0, 1].
    #[arg(long, default_value_t = 100)]
    pub p_steps: usize,
    #[arg(long, default_value = "from-capacity")]
    pub avg: AvgSource,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct ConcavityArgs {
    #[arg(long, default_value = "0.5,0.7071067811865476,0.75")]
    pub mu: String,
    #[arg(long, default_value_t = 100)]
    pub p_steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Directory receiving the artifacts and `summary.json`.
    #[arg(default_value = "reproduction")]
    pub out_dir: PathBuf,
    /// Comma-separated subset of: table1, table2, table3, table4, fig2, fig4,
    /// fig5, cp, census, additivity.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Schmidt samples of the additivity item.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 50)]
    pub ascents: usize,
}

/// Run a parsed command; `Ok(false)` means a reproduction check failed.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Capacity(a) => commands::capacity(a).map(|_| true),
        Command::RelentMap(a) => commands::relent_map(a).map(|_| true),
        Command::Census(a) => commands::census(a).map(|_| true),
        Command::Additivity(a) => commands::additivity(a).map(|_| true),
        Command::Gslice(a) => commands::gslice(a).map(|_| true),
        Command::Concavity(a) => commands::concavity(a).map(|_| true),
        Command::Reproduce(a) => reproduce::run(&a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn avg_source() {
        assert_eq!(
            "from-capacity".parse::<AvgSource>().unwrap(),
            AvgSource::FromCapacity
        );
        assert_eq!(
            "0.1, 0,-0.2".parse::<AvgSource>().unwrap(),
            AvgSource::Explicit([0.1, 0.0, -0.2])
        );
        assert!("1,2".parse::<AvgSource>().is_err());
        assert!("a,b,c".parse::<AvgSource>().is_err());
    }

    #[test]
    fn solver_args_map_to_config() {
        let cli = Cli::try_parse_from([
            "holocap", "capacity", "ch.txt", "--k", "20", "--starts", "2", "--seed", "9",
        ])
        .unwrap();
        let Command::Capacity(a) = cli.command else {
            panic!()
        };
        let cfg = a.solver.config(false);
        assert_eq!(cfg.mesh_sizes, vec![10, 15, 20]);
        assert_eq!((cfg.rotations, cfg.seed), (2, 9));
        assert!(Cli::try_parse_from(["holocap", "capacity", "ch.txt", "--tol", "0"]).is_err());
        assert!(Cli::try_parse_from(["holocap", "capacity", "ch.txt", "--k", "1"]).is_err());
    }
}
