//! `ssdopt`: generate Wu supersaturated designs, evaluate design files and
//! run the closed-form verification suites.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on bad usage
//! or input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ssdopt::design::{hadamard_design, read_csv_path, write_csv_path, ColumnLabel, Construction};
use ssdopt::es2::{evaluate_design, verdict};
use ssdopt::verify::{verify_lemmas, verify_theorems, CheckRow};
use ssdopt::wu::{build, SsdFamily, StartingArray};

#[derive(Parser)]
#[command(
    name = "ssdopt",
    version,
    about = "Exact E(s^2) construction and certification of two-level supersaturated designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a supersaturated design and write it with its sidecar report.
    Generate(GenerateArgs),
    /// Report balance, strength, wordlength pattern and E(s^2) for a design CSV.
    Evaluate(EvaluateArgs),
    /// Check the J-sum, Krawtchouk and distance closed forms by brute force.
    VerifyLemmas(VerifyArgs),
    /// Check E(s^2), bound and verdict for every family, start and choice.
    VerifyTheorems(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Sylvester,
    Paley,
}

impl ConstructionArg {
    fn resolve(arg: Option<Self>) -> Construction {
        match arg {
            Some(ConstructionArg::Sylvester) => Construction::Sylvester,
            Some(ConstructionArg::Paley) => Construction::Paley,
            None => Construction::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Full,
    MinusOne,
    InteractionsOnly,
    SingleParent,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of runs (a multiple of 4).
    #[arg(long)]
    n: usize,
    /// Hadamard construction; defaults to Sylvester for powers of two and
    /// Paley otherwise.
    #[arg(long, value_enum)]
    construction: Option<ConstructionArg>,
    /// Delete the last K columns of the Hadamard design.
    #[arg(long, value_name = "K", conflicts_with = "drop_cols")]
    drop: Option<usize>,
    /// Delete these columns (1-based, e.g. 10,11).
    #[arg(long, value_name = "I,J", value_delimiter = ',')]
    drop_cols: Vec<usize>,
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Column removed by the minus-one family, e.g. c3 or c1*c2.
    #[arg(long, value_name = "LABEL")]
    delete: Option<ColumnLabel>,
    /// Parent column of the single-parent family (1-based label index).
    #[arg(long, value_name = "I")]
    parent: Option<usize>,
    /// Design CSV; the sidecar goes next to it with a .json extension.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write the optimality report here.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Design CSV to evaluate.
    input: PathBuf,
    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run counts to check.
    #[arg(long, value_delimiter = ',', default_values_t = [12, 16, 20, 24])]
    n: Vec<usize>,
    #[arg(long, value_enum)]
    construction: Option<ConstructionArg>,
    /// Visit at most this many deletion sets (or starts) per size, on a
    /// fixed stride.
    #[arg(long)]
    cap: Option<usize>,
    /// Print the rows as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn generate(args: GenerateArgs) -> Result<ExitCode> {
    let h = hadamard_design(args.n, ConstructionArg::resolve(args.construction))?;
    let q = h.cols();
    let positions: Vec<usize> = match args.drop {
        Some(k) if k > q => bail!("cannot drop {k} of {q} columns"),
        Some(k) => (q - k..q).collect(),
        None => args
            .drop_cols
            .iter()
            .map(|&i| {
                h.position_of(ColumnLabel::Main(i)).with_context(|| format!("no column c{i} in H({}, {q})", args.n))
            })
            .collect::<Result<_>>()?,
    };
    let start = StartingArray::from_design(&h, &positions)?;

    let family = match args.family {
        FamilyArg::Full => SsdFamily::FullAugment,
        FamilyArg::InteractionsOnly => SsdFamily::InteractionsOnly,
        FamilyArg::MinusOne => {
            SsdFamily::MinusOne { deleted: args.delete.context("--family minus-one needs --delete LABEL")? }
        }
        FamilyArg::SingleParent => {
            let i = args.parent.context("--family single-parent needs --parent I")?;
            let parent = start
                .array
                .position_of(ColumnLabel::Main(i))
                .with_context(|| format!("parent c{i} is not a column of the starting array"))?;
            SsdFamily::SingleParent { parent }
        }
    };

    let b = build(&start, family)?;
    let report = verdict(&b)?;
    let out = args.out.unwrap_or_else(|| PathBuf::from(format!("ssd-{}x{}-{}.csv", b.n(), b.m(), b.family)));
    write_csv_path(&b.design, &out).with_context(|| format!("writing {}", out.display()))?;
    write_json(&out.with_extension("json"), &json!({ "build": b.summary(), "report": report }))?;
    if let Some(path) = &args.report {
        write_json(path, &serde_json::to_value(&report)?)?;
    }
    println!("{}", report.summary_line());
    for note in &report.notes {
        println!("  {note}");
    }
    Ok(ExitCode::SUCCESS)
}

fn evaluate(args: EvaluateArgs) -> Result<ExitCode> {
    let x = read_csv_path(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let report = serde_json::to_value(evaluate_design(&x)?)?;
    match &args.report {
        Some(path) => {
            write_json(path, &report)?;
            let line = match &report["optimality"] {
                serde_json::Value::Null => format!("n={} m={} (no lower bound)", report["n"], report["m"]),
                o => format!(
                    "n={} m={} E(s^2)={} LB={} gap={} optimal={}",
                    report["n"],
                    report["m"],
                    o["es2"]["decimal"],
                    o["lb"]["decimal"],
                    o["gap"]["decimal"],
                    o["optimal"]
                ),
            };
            println!("{}", line.replace('"', ""));
        }
        None => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_rows(rows: &[CheckRow], as_json: bool) -> Result<ExitCode> {
    if as_json {
        println!("{}", serde_json::to_string_pretty(rows)?);
    } else {
        let width = rows.iter().map(|r| r.check.len()).max().unwrap_or(0);
        for r in rows {
            let status = if r.passed() { "pass" } else { "FAIL" };
            let note = r.note.as_deref().map(|n| format!("  {n}")).unwrap_or_default();
            println!("n={:<3} {:<width$}  {status}  {:>7} cases{note}", r.n, r.check, r.cases);
        }
    }
    let failed: Vec<&CheckRow> = rows.iter().filter(|r| !r.passed()).collect();
    if failed.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    eprintln!("{}", serde_json::to_string_pretty(&failed)?);
    Ok(ExitCode::from(1))
}

fn verify(
    args: VerifyArgs,
    run: fn(usize, Construction, Option<usize>) -> ssdopt::Result<Vec<CheckRow>>,
) -> Result<ExitCode> {
    let construction = ConstructionArg::resolve(args.construction);
    let mut rows = Vec::new();
    for &n in &args.n {
        rows.extend(run(n, construction, args.cap).with_context(|| format!("n = {n}"))?);
    }
    print_rows(&rows, args.json)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Evaluate(args) => evaluate(args),
        Command::VerifyLemmas(args) => verify(args, verify_lemmas),
        Command::VerifyTheorems(args) => verify(args, verify_theorems),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
