//! `varcross`: catalog self-check, claim manifests, proof scripts, probes and
//! witness search.
//!
//! Exit codes: 0 everything passed, 1 a claim or step failed, 2 something was
//! inconclusive, 3 the input could not be read or resolved.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use varcross::catalog::{selfcheck_dir, Catalog};
use varcross::freeobject::IsotermVerdict;
use varcross::harness::{
    parse_manifest, probe_isoterm, probe_properties, run_proof, witness_search, MonoidExpr,
    SearchOutcome, SearchSpec,
};
use varcross::parse_word;

#[derive(Parser)]
#[command(
    name = "varcross",
    version,
    about = "Checks identities, proofs and lattice claims over finite monoids"
)]
struct Cli {
    /// Catalog directory to use instead of the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// Human-readable report followed by a summary line.
    Text,
    /// One `claim-id verdict millis detail` record per claim.
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeKind {
    Iso,
    Props,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every catalog entry.
    Selfcheck,
    /// Evaluate a claim manifest.
    Manifest {
        file: PathBuf,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Product budget per satisfaction check, e.g. 100000000 or 1e8.
        #[arg(long)]
        budget: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Fill the millis column of records.
        #[arg(long)]
        timings: bool,
    },
    /// Verify a proof script.
    Proof {
        file: PathBuf,
        /// Allow repeated non-adjacent chain words, with a warning.
        #[arg(long)]
        lax: bool,
    },
    /// Report on one monoid: `iso EXPR WORD` or `props EXPR`.
    Probe {
        kind: ProbeKind,
        expr: String,
        word: Option<String>,
    },
    /// Search small monoids for a separating witness.
    Search {
        /// Identities the witness must satisfy (one reference or `u = v` per line).
        #[arg(long)]
        satisfy: Option<PathBuf>,
        /// Identities the witness must fail.
        #[arg(long)]
        fail: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        max_order: usize,
        /// Enumeration nodes across all orders.
        #[arg(long)]
        node_budget: Option<u64>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_budget(s: &str) -> Result<u64> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let f: f64 = s.parse().with_context(|| format!("bad budget {s:?}"))?;
    anyhow::ensure!(f.is_finite() && f >= 1.0, "bad budget {s:?}");
    Ok(f as u64)
}

fn catalog(cli: &Cli) -> Result<Catalog> {
    match &cli.catalog {
        Some(dir) => {
            Catalog::from_dir(dir).with_context(|| format!("loading catalog {}", dir.display()))
        }
        None => Ok(Catalog::builtin()?),
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Selfcheck => {
            let report = match &cli.catalog {
                Some(dir) => selfcheck_dir(dir),
                None => Catalog::builtin()?.selfcheck(),
            };
            println!("{report}");
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Manifest {
            file,
            jobs,
            budget,
            format,
            timings,
        } => {
            let cat = catalog(cli)?;
            let budget = budget.as_deref().map(parse_budget).transpose()?;
            let manifest =
                parse_manifest(&read(file)?).with_context(|| file.display().to_string())?;
            let report = manifest
                .run(&cat, *jobs, budget)
                .with_context(|| file.display().to_string())?;
            match format {
                Format::Text => println!("{report}"),
                Format::Records => print!("{}", report.records(*timings)),
            }
            Ok(report.exit_code() as u8)
        }
        Command::Proof { file, lax } => {
            let cat = catalog(cli)?;
            let run = run_proof(&read(file)?, *lax, Some(&cat))
                .with_context(|| file.display().to_string())?;
            println!("{run}");
            Ok(run.exit_code() as u8)
        }
        Command::Probe { kind, expr, word } => {
            let cat = catalog(cli)?;
            let expr = MonoidExpr::parse(expr).with_context(|| format!("monoid {expr:?}"))?;
            match kind {
                ProbeKind::Props => {
                    println!("{}", probe_properties(&expr, &cat)?);
                    Ok(0)
                }
                ProbeKind::Iso => {
                    let word = word.as_deref().context("probe iso needs a word")?;
                    let word = parse_word(word).with_context(|| format!("word {word:?}"))?;
                    let (verdict, text) = probe_isoterm(&expr, &word, &cat)?;
                    println!("{text}");
                    Ok(match verdict {
                        IsotermVerdict::Inconclusive(_) => 2,
                        _ => 0,
                    })
                }
            }
        }
        Command::Search {
            satisfy,
            fail,
            max_order,
            node_budget,
        } => {
            let cat = catalog(cli)?;
            let load = |p: &Option<PathBuf>| -> Result<Vec<_>> {
                match p {
                    Some(p) => Ok(cat
                        .parse_basis(&read(p)?, &p.display().to_string())?
                        .axioms()
                        .to_vec()),
                    None => Ok(Vec::new()),
                }
            };
            let mut spec = SearchSpec::new(load(satisfy)?, load(fail)?, *max_order);
            if let Some(b) = node_budget {
                spec.node_budget = *b;
            }
            let outcome = witness_search(&spec)?;
            println!("{outcome}");
            Ok(match outcome {
                SearchOutcome::Found { .. } => 0,
                SearchOutcome::NoneWithin { undecided: 0, .. } => 1,
                _ => 2,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
