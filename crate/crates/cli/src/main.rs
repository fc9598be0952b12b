use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use seaweed_cli::{
    enumerate, enumerate_specs, info_text, ranks, to_json, write_corpus, write_corpus_file, CliError, SpecArgs, Summary,
};
use seaweed_core::report::{build_report, info, Options};
use seaweed_core::rootsystem::TypeLabel;

#[derive(Parser)]
#[command(name = "seaweed", version, about = "Exact adjoint cohomology of seaweed Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split Dynkin diagram, dimensions, center and quotient components.
    Info {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        json: bool,
    },
    /// Per-degree dimensions of H^n(s, s), with the decomposition formula when s has a center.
    Cohomology {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Allow degrees above the default cap on large seaweeds.
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every check for one seaweed; exit status 1 on any discrepancy.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        allow_large: bool,
        /// Treat informational discrepancies as failures.
        #[arg(long)]
        strict_paper: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify all (pi1, pi2) of a type and write one report per line.
    Enumerate {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long)]
        max_rank: usize,
        /// Only this rank instead of every rank up to --max-rank.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        strict_paper: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn emit(json: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, format!("{json}\n")).map_err(|e| CliError::Io(p.clone(), e)),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Info { spec, json } => {
            let target = spec.target()?;
            if json {
                println!("{}", serde_json::to_string_pretty(&info(&target)).expect("info serializes"));
            } else {
                print!("{}", info_text(&target));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cohomology {
            spec,
            max_degree,
            allow_large,
            out,
        } => {
            let opts = Options {
                max_degree,
                allow_large,
                ..Options::default()
            };
            let report = build_report(&spec.target()?, &opts)?;
            emit(&to_json(&report), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            spec,
            max_degree,
            allow_large,
            strict_paper,
            out,
        } => {
            let opts = Options {
                max_degree,
                allow_large,
                certificates: true,
                ..Options::default()
            };
            let report = build_report(&spec.target()?, &opts)?;
            emit(&to_json(&report), out.as_ref())?;
            let failures = report.failures(strict_paper);
            for d in &report.discrepancies {
                eprintln!("{:?}: {} (expected {}, observed {})", d.severity, d.check, d.expected, d.observed);
            }
            Ok(if failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Enumerate {
            type_label,
            max_rank,
            rank,
            max_degree,
            out,
            strict_paper,
            jobs,
        } => {
            let t = TypeLabel::parse(&type_label)?;
            let specs = enumerate_specs(t, &ranks(t, max_rank, rank));
            let opts = Options {
                max_degree,
                allow_large: max_degree.is_some(),
                certificates: true,
                ..Options::default()
            };
            let reports = enumerate(&specs, &opts, jobs)?;
            match &out {
                Some(p) => write_corpus_file(p, &reports)?,
                None => write_corpus(io::stdout().lock(), &reports).map_err(|e| CliError::Io("<stdout>".into(), e))?,
            }
            let summary = Summary::of(&reports, strict_paper);
            eprintln!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            Ok(if summary.failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
