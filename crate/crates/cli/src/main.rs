//! `fiid-forest`: reproducible experiment runner for the one-ended forest
//! constructions.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fiid_forest::replicas::Mode;
use fiid_forest::substrates::SubstrateKind;

use commands::RunConfig;
use report::{write_atomic, Format};

/// Default directory for reports when `--out` is not given. Without either,
/// reports go to stdout.
const OUT_DIR_ENV: &str = "FIID_FOREST_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "fiid-forest", version, about = "One-ended factor-of-iid spanning trees on finite windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Build one-ended spanning trees and report per-stage connectivity.
    BuildTree,
    /// Exhaustive interval-lemma sweep plus random snap-map instances.
    VerifyLemma2,
    /// Distance ratio profile on the snake quotient.
    DistanceProfile,
    /// Connector percolation marginals and the transport bound.
    TrunkDemo,
    /// Mass-transport identity on torus windows.
    MtpCheck,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::BuildTree => "build-tree",
            Command::VerifyLemma2 => "verify-lemma2",
            Command::DistanceProfile => "distance-profile",
            Command::TrunkDemo => "trunk-demo",
            Command::MtpCheck => "mtp-check",
        }
    }
}

fn parse_kind(s: &str) -> Result<SubstrateKind, String> {
    s.parse().map_err(|e: fiid_forest::Error| e.to_string())
}

#[derive(clap::Args, Debug)]
struct Opts {
    /// grid2d | torus2d | ladder | path
    #[arg(long, global = true, value_parser = parse_kind)]
    substrate: Option<SubstrateKind>,
    /// Side of a 2d window, length of a ladder or path.
    #[arg(long, global = true)]
    side: Option<usize>,
    /// Core margin (default: a quarter of the side).
    #[arg(long, global = true)]
    margin: Option<usize>,
    /// Hang pendant vertices off the snake spine.
    #[arg(long, global = true)]
    pendant: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Replica count (random instances for verify-lemma2).
    #[arg(long, global = true)]
    seeds: Option<usize>,
    #[arg(long, global = true, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, global = true)]
    max_stage: Option<usize>,
    /// Comma-separated n values for distance-profile.
    #[arg(long, global = true, value_delimiter = ',')]
    ns: Option<Vec<usize>>,
    /// Gap M splitting the transport bound into head and tail.
    #[arg(long, global = true, default_value_t = 16)]
    split_gap: usize,
    #[arg(long, global = true, default_value_t = 5)]
    max_intervals: usize,
    #[arg(long, global = true, default_value_t = 12)]
    span_max: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Run replicas on one thread (output is identical).
    #[arg(long, global = true)]
    sequential: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn resolve(cmd: Command, o: &Opts) -> RunConfig {
    use SubstrateKind::*;
    let (kind, side, seeds) = match cmd {
        Command::BuildTree => (Torus2d, 32, 30),
        Command::VerifyLemma2 => (Path, 12, 1000),
        Command::DistanceProfile => (Grid2d, 64, 30),
        Command::TrunkDemo => (Grid2d, 64, 30),
        Command::MtpCheck => (Torus2d, 32, 30),
    };
    RunConfig {
        substrate: o.substrate.unwrap_or(kind),
        side: o.side.unwrap_or(side),
        margin: o.margin,
        pendant: o.pendant,
        seed: o.seed,
        seeds: o.seeds.unwrap_or(seeds),
        eps: o.eps,
        max_stage: o.max_stage,
        ns: o.ns.clone().unwrap_or_else(|| vec![1, 2, 4, 8, 16, 32]),
        split_gap: o.split_gap,
        max_intervals: o.max_intervals,
        span_max: o.span_max,
        mode: if o.sequential { Mode::Sequential } else { Mode::Parallel },
    }
}

/// `key=value` pairs in a fixed order, only those the command reads.
fn canonical(cmd: Command, c: &RunConfig, format: Format) -> String {
    let mut kv: Vec<(&str, String)> = vec![("command", cmd.name().into())];
    let margin = || c.margin.map_or_else(|| format!("{}", c.side / 4), |m| m.to_string());
    let stage = || c.max_stage.map_or("none".into(), |m| m.to_string());
    match cmd {
        Command::VerifyLemma2 => {
            kv.push(("max-intervals", c.max_intervals.to_string()));
            kv.push(("span-max", c.span_max.to_string()));
        }
        _ => {
            kv.push(("substrate", c.substrate.to_string()));
            kv.push(("side", c.side.to_string()));
            kv.push(("margin", margin()));
        }
    }
    if matches!(cmd, Command::DistanceProfile | Command::TrunkDemo | Command::MtpCheck) {
        kv.push(("pendant", c.pendant.to_string()));
    }
    kv.push(("seed", c.seed.to_string()));
    kv.push(("seeds", c.seeds.to_string()));
    match cmd {
        Command::BuildTree => {
            kv.push(("eps", c.eps.to_string()));
            kv.push(("max-stage", stage()));
        }
        Command::DistanceProfile => {
            kv.push(("ns", c.ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")));
        }
        Command::TrunkDemo => {
            kv.push(("max-stage", c.max_stage.unwrap_or(6).to_string()));
            kv.push(("split-gap", c.split_gap.to_string()));
        }
        Command::MtpCheck => kv.push(("max-stage", c.max_stage.unwrap_or(6).to_string())),
        Command::VerifyLemma2 => {}
    }
    kv.push(("format", format.extension().into()));
    kv.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmd = cli.command;
    let cfg = resolve(cmd, &cli.opts);
    let header = format!("# fiid-forest v{} config={}", env!("CARGO_PKG_VERSION"), canonical(cmd, &cfg, cli.opts.format));
    let result = match cmd {
        Command::BuildTree => commands::build_tree(&cfg),
        Command::VerifyLemma2 => commands::verify_lemma2(&cfg),
        Command::DistanceProfile => commands::distance_profile(&cfg),
        Command::TrunkDemo => commands::trunk_demo(&cfg),
        Command::MtpCheck => commands::mtp(&cfg),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.render(&header, cli.opts.format);
    let target = cli.opts.out.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("{}.{}", cmd.name(), cli.opts.format.extension())))
    });
    match target {
        Some(path) => {
            if let Err(e) = write_atomic(&path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        for v in &report.violations {
            eprintln!("invariant violated: {v}");
        }
        ExitCode::from(1)
    }
}
