use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use synclcs::cli::{self, GraphOptions, GroupFormat, Outcome, RepSource};
use synclcs::report::DEFAULT_TOLERANCE;
use synclcs::Limits;

/// Synchronous linear constraint system games over Z_p.
///
/// Limits can be raised with SYNCLCS_ENUM_CAP and SYNCLCS_SEARCH_BUDGET.
/// Exit codes: 0 pass, 1 check failed, 2 invalid input, 3 parse or I/O
/// error, 4 budget exceeded.
#[derive(Parser)]
#[command(name = "synclcs", version)]
struct Args {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a system file: prime modulus, shapes, degenerate rows.
    Validate { system: PathBuf },
    /// Row supports, solution-set sizes, solvability and graph sizes.
    Analyze { system: PathBuf },
    /// Gaussian elimination plus the best deterministic syncLCS strategy.
    Solve {
        system: PathBuf,
        /// Export the winning rule table as JSON.
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Build G_{A,b} (or G_{A,0}).
    Graph {
        system: PathBuf,
        #[arg(long)]
        homogeneous: bool,
        /// Write Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write vertices and edges as JSON.
        #[arg(long)]
        adjacency: Option<PathBuf>,
    },
    /// Search for an isomorphism G_{A,b} -> G_{A,0}.
    Iso { system: PathBuf },
    /// Emit the solution group presentation.
    Group {
        system: PathBuf,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: GroupFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a representation: group relations, game-algebra families and
    /// the Iso-game family.
    Repcheck {
        system: PathBuf,
        /// Matrix JSON file, `scalar:<x1,..,xn>`, `scalar:auto` or `pauli-ms`.
        #[arg(long, value_parser = parse_source)]
        rep: RepSource,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Write a built-in system: magic-square, one-eq or p3-demo.
    Examples {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_format(s: &str) -> Result<GroupFormat, String> {
    s.parse().map_err(|e: synclcs::Error| e.to_string())
}

fn parse_source(s: &str) -> Result<RepSource, String> {
    s.parse().map_err(|e: synclcs::Error| e.to_string())
}

fn run(command: &Command) -> synclcs::Result<Outcome> {
    let limits = Limits::from_env();
    match command {
        Command::Validate { system } => cli::cmd_validate(system),
        Command::Analyze { system } => cli::cmd_analyze(system, &limits),
        Command::Solve { system, rules } => cli::cmd_solve(system, rules.as_deref(), &limits),
        Command::Graph { system, homogeneous, dot, adjacency } => {
            let opts = GraphOptions { homogeneous: *homogeneous, dot: dot.as_deref(), adjacency: adjacency.as_deref() };
            cli::cmd_graph(system, &opts, &limits)
        }
        Command::Iso { system } => cli::cmd_iso(system, &limits),
        Command::Group { system, format, out } => cli::cmd_group(system, *format, out.as_deref()),
        Command::Repcheck { system, rep, tol } => cli::cmd_repcheck(system, rep, *tol, &limits),
        Command::Examples { name, out } => cli::cmd_examples(name, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = match run(&args.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(cli::exit_code_for(&e) as u8);
        }
    };
    let json = outcome.report.to_json();
    match &args.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(cli::EXIT_PARSE as u8);
            }
        }
        None => print!("{json}"),
    }
    ExitCode::from(outcome.exit_code as u8)
}
