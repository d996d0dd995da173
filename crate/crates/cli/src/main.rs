//! `conserv`: load algebras, run the analyses and the verification suite.
//!
//! Exit codes: 0 when every check passes, 1 when one fails or a computation
//! errors, 2 on a usage error.

mod commands;
mod refs;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use conserv::automorphisms::{EnumerationMode, DEFAULT_BUDGET};
use conserv::suite::{CatalogCorruption, CRITERIA};
use conserv::FieldSpec;

use commands::{AutosMode, AutosOptions, KantorOptions, Outcome, VerifyOptions};
use refs::AlgebraRef;

/// Why a command did not produce an outcome.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<conserv::Error> for Failure {
    fn from(e: conserv::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse().map_err(|e: conserv::Error| e.to_string())
}

fn parse_criteria(s: &str) -> Result<BTreeSet<u8>, String> {
    s.split(',')
        .map(|t| match t.trim().parse::<u8>() {
            Ok(c) if (1..=CRITERIA).contains(&c) => Ok(c),
            _ => Err(format!("`{t}` is not a criterion number in 1..={CRITERIA}")),
        })
        .collect()
}

#[derive(Parser)]
#[command(name = "conserv", version, about = "Exact verification of nonassociative algebra structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Target {
    /// S2, S2_char2, W2, W2x2, zero:N, or a JSON algebra file.
    algebra: AlgebraRef,
    /// Q or Fp with p prime (F2, F5, F101). Defaults to Q, or the file's field.
    #[arg(long, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchMode {
    Dfs,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Print the multiplication table.
    Show(Target),
    /// Basis graph, strong connectivity and optional DOT export.
    Graph {
        #[command(flatten)]
        target: Target,
        /// Write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Draw every edge instead of a reachability-preserving subset.
        #[arg(long, requires = "dot")]
        full: bool,
    },
    /// Multiplication algebra, radical, simplicity verdicts and annihilators.
    Analyze(Target),
    /// Automorphisms: enumeration, family verification, or completeness.
    #[command(group(ArgGroup::new("mode").required(true).args(["enumerate", "family", "complete"])))]
    Autos {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        family: bool,
        #[arg(long)]
        complete: bool,
        /// Family name; defaults to the one registered for the algebra and characteristic.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value = "dfs")]
        search: SearchMode,
        /// Rational samples for --family over Q.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Node budget for the column search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Derivation algebra from the Leibniz system.
    Derivations(Target),
    /// Kantor rebuild of W(2) and invariant-polynomial checks.
    #[command(group(ArgGroup::new("what").required(true).multiple(true).args(["rebuild_w2", "check_invariants"])))]
    Kantor {
        #[arg(long)]
        rebuild_w2: bool,
        #[arg(long)]
        check_invariants: bool,
        /// Defaults to Q for the rebuild and F101 for the invariants.
        #[arg(long, value_parser = parse_field)]
        field: Option<FieldSpec>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run every acceptance check.
    VerifyPaper {
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Comma-separated criteria to run; the rest are skipped.
        #[arg(long, value_parser = parse_criteria)]
        only: Option<BTreeSet<u8>>,
        /// Bump one catalog coefficient before running: NAME:i,j,k (1-based).
        #[arg(long, value_parser = commands::parse_corruption)]
        corrupt: Option<CatalogCorruption>,
    },
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("CONSERV_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("CONSERV_THREADS=`{v}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<(Outcome, bool), Failure> {
    configure_threads()?;
    Ok(match cli.command {
        Command::Show(t) => (commands::show(&refs::load(&t.algebra, t.field)?), t.json),
        Command::Graph { target: t, dot, full } => {
            (commands::graph(&refs::load(&t.algebra, t.field)?, dot.as_deref(), full)?, t.json)
        }
        Command::Analyze(t) => (commands::analyze(&refs::load(&t.algebra, t.field)?)?, t.json),
        Command::Autos {
            target: t,
            enumerate,
            family,
            name,
            search,
            samples,
            seed,
            budget,
            ..
        } => {
            let mode = if enumerate {
                AutosMode::Enumerate(match search {
                    SearchMode::Dfs => EnumerationMode::Dfs,
                    SearchMode::Full => EnumerationMode::Full,
                })
            } else if family {
                AutosMode::Family
            } else {
                AutosMode::Complete
            };
            let opts = AutosOptions {
                mode,
                family: name.as_deref(),
                samples,
                seed,
                budget,
            };
            (commands::autos(&refs::load(&t.algebra, t.field)?, &opts)?, t.json)
        }
        Command::Derivations(t) => (commands::derivation_report(&refs::load(&t.algebra, t.field)?), t.json),
        Command::Kantor {
            rebuild_w2,
            check_invariants,
            field,
            samples,
            seed,
            json,
        } => {
            let opts = KantorOptions {
                rebuild: rebuild_w2,
                invariants: check_invariants,
                field,
                samples,
                seed,
            };
            (commands::kantor(&opts)?, json)
        }
        Command::VerifyPaper { json, only, corrupt } => {
            let opts = VerifyOptions {
                json: json.as_deref(),
                only,
                corruption: corrupt,
            };
            (commands::verify(&opts)?, false)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, json)) => {
            let body = if json { &outcome.json } else { &outcome.text };
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(body.as_bytes());
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
