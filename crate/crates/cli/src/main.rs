use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod manifest;

/// Limit roots of Lorentzian Coxeter systems.
#[derive(Parser, Debug)]
#[command(name = "limitroots", version, about)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArg {
    /// Built-in name (fig1a, fig1b, fig8, a2, universal<n>:<c>) or a graph JSON file.
    #[arg(long, short = 'g')]
    pub graph: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OnlyKind {
    Parabolic,
    Hyperbolic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the form, its signature and the type of the system.
    Analyze {
        #[command(flatten)]
        graph: GraphArg,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Sample limit roots from conjugated eigendirections.
    LimitRoots(commands::LimitRootsArgs),
    /// Draw points, the light conic and optionally the arrangement as SVG.
    Plot(commands::PlotArgs),
    /// Space-like intersections of the root arrangement and the weights.
    Arrangement(commands::ArrangementArgs),
    /// Limit root of the infinite word prefix·period·period·…
    WordLimit(commands::WordLimitArgs),
    /// Run a named verification suite.
    Verify(commands::VerifyArgs),
}

/// Parses `a..b`, `a..=b` (both inclusive) or a single length `a`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected a length range like 3..4, got '{s}'");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let argv: Vec<String> = std::env::args().collect();
    let result = match cli.command {
        Command::Analyze { graph, json } => commands::analyze(&graph, json),
        Command::LimitRoots(a) => commands::limit_roots(&a, &argv),
        Command::Plot(a) => commands::plot(&a),
        Command::Arrangement(a) => commands::arrangement(&a, &argv),
        Command::WordLimit(a) => commands::word_limit(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(commands::Outcome::Ok) => ExitCode::SUCCESS,
        Ok(commands::Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
