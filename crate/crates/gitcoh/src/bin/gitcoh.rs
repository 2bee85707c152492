use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use gitcoh::strata::{index_set_search, CodimMode, SearchOptions};
use gitcoh::worksheet::eval::step_text;
use gitcoh::worksheet::expr::eval_str;
use gitcoh::worksheet::{evaluate_worksheet, parse_worksheet, verify_golden};

#[derive(Parser)]
#[command(
    name = "gitcoh",
    version,
    about = "Equivariant Poincaré series of GIT quotients and their ledgers"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search the Kirwan index vectors of SL(vars) acting on degree-d forms.
    Search {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        degree: u32,
        /// Keep strata of codimension at most this value.
        #[arg(long)]
        cutoff: Option<i64>,
        #[arg(long, default_value = "rootcount")]
        codim_mode: CodimMode,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Enumerate every subset instead of one orbit representative per first weight.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Expand a series expression, e.g. "(1+t^2)/(1-t^4)(1-t^6)".
    Series {
        expr: String,
        #[arg(long, default_value_t = 20)]
        truncation: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate a worksheet and print every step (or one).
    Evaluate {
        #[arg(long)]
        worksheet: PathBuf,
        #[arg(long)]
        step: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a worksheet against its expectations: exit 0 pass, 1 mismatch, 2 error.
    Verify {
        #[arg(long)]
        worksheet: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn load(path: &PathBuf) -> Result<gitcoh::worksheet::Worksheet> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_worksheet(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Search {
            vars,
            degree,
            cutoff,
            codim_mode,
            jobs,
            no_symmetry,
            format,
        } => {
            if let Some(j) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build_global()?;
            }
            let opts = SearchOptions {
                symmetry: !no_symmetry,
                parallel: true,
            };
            let report = index_set_search(vars, degree, cutoff, codim_mode, opts)?;
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.to_json())?),
            }
        }
        Cmd::Series {
            expr,
            truncation,
            format,
        } => {
            let s = eval_str(&expr, truncation).map_err(anyhow::Error::msg)?;
            match format {
                Format::Text => println!("{s}"),
                Format::Json => println!("{}", serde_json::to_string(&s)?),
            }
        }
        Cmd::Evaluate {
            worksheet,
            step,
            format,
        } => {
            let ws = load(&worksheet)?;
            let report = evaluate_worksheet(&ws)?;
            match step {
                Some(name) => {
                    let Some(s) = report.step(&name) else {
                        bail!("no step named {name:?}")
                    };
                    match format {
                        Format::Text => println!("{}", step_text(s)),
                        Format::Json => println!("{}", serde_json::to_string_pretty(s)?),
                    }
                }
                None => match format {
                    Format::Text => print!("{}", report.to_text()),
                    Format::Json => println!("{}", report.to_json()),
                },
            }
        }
        Cmd::Verify { worksheet, format } => {
            let ws = load(&worksheet)?;
            let report = verify_golden(&ws)?;
            match format {
                Format::Text => {
                    for s in report.mismatches() {
                        println!("{}", step_text(s));
                    }
                    let checked = ws.steps.iter().filter(|s| s.expect.is_some()).count();
                    let bad = report.mismatches().count();
                    println!(
                        "{}: {} of {checked} expectations met",
                        ws.title,
                        checked - bad
                    );
                }
                Format::Json => println!("{}", report.to_json()),
            }
            return Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
