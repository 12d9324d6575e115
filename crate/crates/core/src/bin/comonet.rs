use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use comonet::address::{AddressPlan, CommunityAddress};
use comonet::harness::{render, run_batch, Format, RunOptions, Scenario};

/// Community mobile network simulator.
#[derive(Debug, Parser)]
#[command(name = "comonet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario file and print its QoS report.
    Run {
        scenario: PathBuf,
        /// Seed for a single run; defaults to the scenario's own seed.
        #[arg(long, conflicts_with = "seeds")]
        seed: Option<u64>,
        /// Inclusive seed range N..M, run in parallel and reported with a mean.
        #[arg(long, value_parser = parse_seeds)]
        seeds: Option<RangeInclusive<u64>>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        /// Write the event trace of a single run here.
        #[arg(long, conflicts_with = "seeds")]
        trace: Option<PathBuf>,
    },
    /// Convert between phone numbers and community addresses.
    Addr {
        #[command(subcommand)]
        op: AddrOp,
        /// Common prefix shared by every number of the community.
        #[arg(long, default_value = "07", global = true)]
        prefix: String,
    },
}

#[derive(Debug, Subcommand)]
enum AddrOp {
    /// Phone number to dotted address.
    Encode { value: String },
    /// Dotted address to phone number.
    Decode { value: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
}

fn parse_seeds(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected N..M, got {s:?}"))?;
    let a: u64 = a
        .trim()
        .parse()
        .map_err(|e| format!("bad range start {a:?}: {e}"))?;
    let b: u64 = b
        .trim()
        .parse()
        .map_err(|e| format!("bad range end {b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty seed range {a}..{b}"));
    }
    Ok(a..=b)
}

const VALIDATION: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Run {
            scenario,
            seed,
            seeds,
            out,
            format,
            trace,
        } => run(scenario, seed, seeds, out, format, trace),
        Command::Addr { op, prefix } => addr(op, &prefix),
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(VALIDATION)
}

fn run(
    path: PathBuf,
    seed: Option<u64>,
    seeds: Option<RangeInclusive<u64>>,
    out: Option<PathBuf>,
    format: OutputFormat,
    trace: Option<PathBuf>,
) -> ExitCode {
    let scenario = match Scenario::load(&path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            for issue in e.issues() {
                eprintln!("  {issue}");
            }
            return ExitCode::from(VALIDATION);
        }
    };
    let seeds: Vec<u64> = match seeds {
        Some(r) => r.collect(),
        None => vec![seed.unwrap_or(scenario.seed)],
    };
    let options = RunOptions {
        trace: trace.is_some(),
    };
    let reports = match run_batch(&scenario, &seeds, options) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let format = match format {
        OutputFormat::Table => Format::Table,
        OutputFormat::Csv => Format::Csv,
    };
    let text = render(&reports, format);
    if let (Some(file), Some(body)) = (&trace, reports.first().and_then(|r| r.trace.as_ref())) {
        if let Err(e) = fs::write(file, body) {
            return fail(format!("{}: {e}", file.display()));
        }
    }
    match out {
        Some(file) => {
            if let Err(e) = fs::write(&file, text) {
                return fail(format!("{}: {e}", file.display()));
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

fn addr(op: AddrOp, prefix: &str) -> ExitCode {
    let plan = match AddressPlan::new(prefix) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let result = match op {
        AddrOp::Encode { value } => plan.address_of(&value).map(|a| a.to_string()),
        AddrOp::Decode { value } => match value.parse::<CommunityAddress>() {
            Ok(a) => plan.decode(a).map(|n| n.as_str().to_string()),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
