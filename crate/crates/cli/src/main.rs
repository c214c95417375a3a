use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use symdelta::homology::SphereQuotientOptions;
use symdelta::permgroup::DEFAULT_GROUP_CAP;
use symdelta::spectral::DeltaOptions;
use symdelta::spherequotient::SubdivisionLevel;
use symdelta_cli::selftest::{self, SelftestOptions};
use symdelta_cli::{render, CliError, CliResult, GroupInput, SphereQuotientArgs};

/// Integral homology of sphere quotients and of moduli spaces of tropical curves.
#[derive(Parser)]
#[command(name = "symdelta", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, env = "SYMDELTA_JOBS", global = true)]
    jobs: Option<usize>,
    /// Largest permutation group that may be generated.
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP, global = true)]
    group_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced homology of S^{p-1}/G for G acting on the vertices of Δ^p.
    SphereQuotient(SphereQuotientCmd),
    /// Stable graphs.
    Graphs {
        #[command(subcommand)]
        command: GraphsCmd,
    },
    /// Relative cells, E₁ page and certified homology of Δ_{g,n}.
    Delta {
        #[command(flatten)]
        gn: GenusMarks,
        #[command(flatten)]
        quotient: QuotientFlags,
    },
    /// Whether every cell of dimension ≤ 1 lies in the bm subcomplex.
    CheckSkeleton {
        #[command(flatten)]
        gn: GenusMarks,
    },
    /// Known-answer cases and consistency checks.
    Selftest {
        /// Skip the p ≥ 7 quotients and the genus-4 pipeline.
        #[arg(long)]
        quick: bool,
        /// Compare subdivision levels 1 and 2 for every p ≤ 5 test group.
        #[arg(long)]
        level_check: bool,
        /// Seconds after which remaining cases are skipped.
        #[arg(long, default_value_t = 1800)]
        budget: u64,
    },
}

#[derive(Args)]
struct GenusMarks {
    #[arg(long)]
    g: u32,
    #[arg(long, default_value_t = 0)]
    n: u32,
}

#[derive(Args)]
struct QuotientFlags {
    /// Number of barycentric subdivisions of the boundary.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    subdivide: u8,
    /// Build the complex even when the group contains a transposition.
    #[arg(long)]
    no_shortcut: bool,
}

#[derive(Args)]
struct SphereQuotientCmd {
    #[arg(long, requires = "group")]
    p: Option<usize>,
    /// Generators in cycle notation, e.g. "(0 1 2 3), (0 1)".
    #[arg(long, requires = "p", conflicts_with = "graph")]
    group: Option<String>,
    /// Graph JSON file; the group is its edge symmetry group.
    #[arg(long, required_unless_present = "group")]
    graph: Option<PathBuf>,
    #[command(flatten)]
    quotient: QuotientFlags,
    /// Also compute the other subdivision level and fail if they differ.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Subcommand)]
enum GraphsCmd {
    /// All stable graphs of type (g, n) up to isomorphism.
    Enumerate {
        #[command(flatten)]
        gn: GenusMarks,
        #[arg(long)]
        max_edges: Option<usize>,
        /// List only graphs outside the bm subcomplex.
        #[arg(long)]
        non_bm: bool,
    },
}

fn emit<T: Serialize>(format: Format, report: &T, table: impl FnOnce(&T) -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("reports serialize")),
        Format::Table => print!("{}", table(report)),
    }
}

fn level(flags: &QuotientFlags) -> CliResult<SubdivisionLevel> {
    Ok(SubdivisionLevel::from_u8(flags.subdivide)?)
}

fn run(cli: Cli) -> CliResult<()> {
    let format = cli.format;
    match cli.command {
        Command::SphereQuotient(cmd) => {
            let input = match (&cmd.group, &cmd.graph, cmd.p) {
                (Some(text), None, Some(p)) => GroupInput::Generators { p, text },
                (None, Some(path), None) => GroupInput::GraphFile(path),
                (None, Some(_), Some(_)) => return Err(CliError::Usage("--p is implied by --graph".into())),
                _ => return Err(CliError::Usage("give --p with --group, or --graph".into())),
            };
            let report = symdelta_cli::sphere_quotient(SphereQuotientArgs {
                input,
                level: level(&cmd.quotient)?,
                shortcut: !cmd.quotient.no_shortcut,
                cross_check: cmd.cross_check,
                group_cap: cli.group_cap,
            })?;
            emit(format, &report, render::sphere_quotient);
        }
        Command::Graphs {
            command: GraphsCmd::Enumerate { gn, max_edges, non_bm },
        } => {
            let report = symdelta_cli::graphs_enumerate(gn.g, gn.n, max_edges, non_bm)?;
            emit(format, &report, render::enumeration);
        }
        Command::Delta { gn, quotient } => {
            let options = DeltaOptions {
                sphere: SphereQuotientOptions {
                    level: level(&quotient)?,
                    shortcut: !quotient.no_shortcut,
                },
                group_cap: cli.group_cap,
            };
            let report = symdelta_cli::delta(gn.g, gn.n, options)?;
            emit(format, &report, render::delta);
        }
        Command::CheckSkeleton { gn } => {
            let report = symdelta_cli::check_skeleton(gn.g, gn.n)?;
            emit(format, &report, render::skeleton);
        }
        Command::Selftest {
            quick,
            level_check,
            budget,
        } => {
            let report = selftest::run(SelftestOptions {
                quick,
                level_check,
                budget: Duration::from_secs(budget),
            });
            emit(format, &report, render::selftest);
            if report.failed > 0 {
                return Err(CliError::SelftestFailed { failed: report.failed });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp_millis()
        .init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            log::warn!("could not configure {jobs} threads: {e}");
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
