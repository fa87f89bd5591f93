mod emit;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use report::{parse_modulus, run, RunInput, RunReport};
use schottky_core::formulas::legendre;
use schottky_core::generators::is_prime;
use schottky_core::order::{order_lookup, FAMILIES};
use schottky_core::Error;

const EXIT_BAD_PRIME: u8 = 2;
const EXIT_NOT_SCHOTTKY: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Dot,
}

/// Schottky generators, boundary pairings and reduction graphs for
/// class-number-one definite Eichler orders.
#[derive(Parser, Debug)]
#[command(name = "schottky", version)]
struct Args {
    /// Discriminant of the quaternion algebra.
    #[arg(long = "D", value_name = "D")]
    d: Option<u64>,
    /// Level of the Eichler order.
    #[arg(long = "N", value_name = "N")]
    n: Option<u64>,
    /// Odd prime not dividing 2DN.
    #[arg(long)]
    p: Option<u64>,
    /// Override the congruence modulus as "c0,c1,c2,c3" in the basis 1, i, j, k; entries may be fractions.
    #[arg(long = "xi", value_name = "COORDS", allow_hyphen_values = true)]
    modulus: Option<String>,
    /// p-adic precision k for matrix entries modulo p^k.
    #[arg(long, default_value_t = 6)]
    precision: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Run every family (or only --D/--N if given) over all admissible p up to PMAX.
    #[arg(long, value_name = "PMAX")]
    sweep: Option<u64>,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the JSON report.
    #[arg(long)]
    timing: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotSplit { .. } | Error::NotOddPrime(_) | Error::PrimeDividesLevel { .. } | Error::NotInOrder(_) => {
            EXIT_BAD_PRIME
        }
        Error::NotSchottky { .. } => EXIT_NOT_SCHOTTKY,
        Error::NoModulus { .. } | Error::ClassNumberNotOne { .. } => EXIT_UNSUPPORTED,
        _ => EXIT_INTERNAL,
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), u8> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_INTERNAL
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(rename = "D")]
    d: String,
    #[serde(rename = "N")]
    n: String,
    p: String,
    status: String,
    impure_count: String,
    pure_count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_counts: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    genus_quotient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    genus_plus: Option<String>,
}

fn sweep_row(r: &RunReport) -> SweepRow {
    let forms = r.closed_forms.as_ref();
    SweepRow {
        d: r.inputs.d.clone(),
        n: r.inputs.n.clone(),
        p: r.inputs.p.clone(),
        status: if r.is_schottky() { "schottky" } else { "pure-generators" }.into(),
        impure_count: r.generators.impure_count.clone(),
        pure_count: r.generators.pure_count.clone(),
        edge_counts: forms.map(|f| f.edges_of_length.values().cloned().collect()),
        genus_quotient: forms.map(|f| f.genus_quotient.clone()),
        genus_plus: forms.map(|f| f.genus_plus.clone()),
    }
}

fn sweep(args: &Args, pmax: u64) -> Result<String, u8> {
    let families: Vec<(u64, u64)> = match (args.d, args.n) {
        (Some(d), Some(n)) => {
            order_lookup(d, n).map_err(|e| {
                eprintln!("error: {e}");
                exit_code(&e)
            })?;
            vec![(d, n)]
        }
        (None, None) => FAMILIES.to_vec(),
        _ => {
            eprintln!("error: --D and --N must be given together");
            return Err(EXIT_UNSUPPORTED);
        }
    };
    let mut jobs = Vec::new();
    for &(d, n) in &families {
        let o = order_lookup(d, n).map_err(|e| exit_code(&e))?;
        for p in (3..=pmax).filter(|&p| is_prime(p) && (2 * d * n) % p != 0 && legendre(o.algebra.a, p) == 1) {
            jobs.push(RunInput { d, n, p, precision: args.precision });
        }
    }
    let results: Vec<Result<RunReport, (RunInput, Error)>> =
        jobs.par_iter().map(|&job| run(job, None, false).map_err(|e| (job, e))).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut failures = 0;
    for r in results {
        match r {
            Ok(report) => rows.push(sweep_row(&report)),
            Err((job, e)) => {
                failures += 1;
                eprintln!("error: (D,N,p) = ({},{},{}): {e}", job.d, job.n, job.p);
            }
        }
    }
    if failures > 0 {
        return Err(EXIT_INTERNAL);
    }
    Ok(emit::json(&rows))
}

fn single(args: &Args) -> Result<(String, u8), u8> {
    let (Some(d), Some(n), Some(p)) = (args.d, args.n, args.p) else {
        eprintln!("error: --D, --N and --p are required unless --sweep is given");
        return Err(EXIT_UNSUPPORTED);
    };
    let modulus = match &args.modulus {
        Some(s) => Some(parse_modulus(s).map_err(|e| {
            eprintln!("error: --xi: {e}");
            EXIT_BAD_PRIME
        })?),
        None => None,
    };
    let report = run(RunInput { d, n, p, precision: args.precision }, modulus.as_ref(), args.timing).map_err(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })?;
    let status = if report.is_schottky() {
        0
    } else {
        eprintln!("not Schottky: {} pure generators; graph stages skipped", report.generators.pure_count);
        EXIT_NOT_SCHOTTKY
    };
    let text = match args.format {
        Format::Json => emit::json(&report),
        Format::Dot => emit::dot(&report),
    };
    Ok((text, status))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.precision == 0 {
        eprintln!("error: --precision must be at least 1");
        return ExitCode::from(EXIT_INTERNAL);
    }
    let outcome = match args.sweep {
        Some(pmax) => sweep(&args, pmax).map(|t| (t, 0)),
        None => single(&args),
    };
    match outcome {
        Ok((text, status)) => match write_output(&args.out, &text) {
            Ok(()) => ExitCode::from(status),
            Err(code) => ExitCode::from(code),
        },
        Err(code) => ExitCode::from(code),
    }
}
