use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use matroid_forge::corank3::selftest_appendix_a;
use matroid_forge::decomposition::{replay_appendix_b, replay_appendix_c, ReplayReport};
use matroid_forge::io::{read_matrix, to_json, to_text, verify_file};
use matroid_forge::solver::{table, DEFAULT_TABLE_CAP};
use matroid_forge::{count_square_invertible, solve, Error, SolveOutcome};

const EXIT_MISMATCH: u8 = 1;
const EXIT_NONEXISTENT: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_FAILURE: u8 = 5;

/// Explicit integer witnesses for linear matroids with a given number of bases.
#[derive(Parser)]
#[command(name = "matroid-forge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify an r x (n - r) matrix M such that (I_r | M) has b bases.
    Solve {
        n: u64,
        r: u64,
        b: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print A = (I_r | M) instead of M.
        #[arg(long)]
        full_matrix: bool,
        #[arg(long)]
        json: bool,
    },
    /// Count the invertible square submatrices of a matrix file.
    Count { file: PathBuf },
    /// Count and compare with an expected value.
    Verify {
        file: PathBuf,
        #[arg(long)]
        expect: Option<u128>,
    },
    /// Solve every b in 1..=C(n, r).
    Table {
        n: u64,
        r: u64,
        #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
        cap: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rerun a row-budget verification over its full range.
    Replay {
        which: ReplayTarget,
        #[arg(long)]
        json: bool,
    },
    /// Recount every shipped table matrix.
    Selftest { which: SelftestTarget },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReplayTarget {
    AppendixB,
    AppendixC,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelftestTarget {
    AppendixA,
}

fn main() -> ExitCode {
    // clap's own usage exit code would collide with the nonexistent code
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Construction(_) | Error::GenericPosition { .. } | Error::Data(_)) => {
            EXIT_FAILURE
        }
        _ => EXIT_INPUT,
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Solve {
            n,
            r,
            b,
            seed,
            full_matrix,
            json,
        } => {
            let outcome = solve(n, r, b, seed)?;
            let code = match &outcome {
                SolveOutcome::Constructed(_) => 0,
                SolveOutcome::KnownNonexistent => EXIT_NONEXISTENT,
                SolveOutcome::Unknown(_) => EXIT_UNKNOWN,
            };
            if json {
                let mut v = serde_json::json!({ "n": n, "r": r, "b": b.to_string(), "outcome": outcome.tag() });
                match &outcome {
                    SolveOutcome::Constructed(w) => {
                        let m = if full_matrix {
                            w.full_matrix()
                        } else {
                            w.matrix.clone()
                        };
                        v["verified"] = w.verified.into();
                        v["seed"] = w.seed.into();
                        v["matrix"] = to_json(&m);
                    }
                    SolveOutcome::Unknown(why) => v["reason"] = why.as_str().into(),
                    SolveOutcome::KnownNonexistent => {}
                }
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                match &outcome {
                    SolveOutcome::Constructed(w) => {
                        let m = if full_matrix {
                            w.full_matrix()
                        } else {
                            w.matrix.clone()
                        };
                        println!(
                            "# CONSTRUCTED n={n} r={r} b={b} seed={seed} verified={}",
                            w.verified
                        );
                        print!("{}", to_text(&m));
                    }
                    SolveOutcome::KnownNonexistent => {
                        println!("KNOWN_NONEXISTENT n={n} r={r} b={b}")
                    }
                    SolveOutcome::Unknown(why) => println!("UNKNOWN n={n} r={r} b={b}: {why}"),
                }
            }
            Ok(code)
        }
        Command::Count { file } => {
            let m = read_matrix(&file).with_context(|| format!("reading {}", file.display()))?;
            let c = count_square_invertible(&m);
            println!("r={} k={} b={} b_bar={}", c.r, c.k, c.b, c.b_bar);
            Ok(0)
        }
        Command::Verify { file, expect } => {
            let report = verify_file(&file, expect.map(Into::into))
                .with_context(|| format!("reading {}", file.display()))?;
            print!(
                "r={} k={} b={} b_bar={}",
                report.r, report.k, report.b, report.b_bar
            );
            match report.passed {
                None => {
                    println!();
                    Ok(0)
                }
                Some(true) => {
                    println!(" expected={} PASS", expect.unwrap());
                    Ok(0)
                }
                Some(false) => {
                    println!(" expected={} FAIL", expect.unwrap());
                    Ok(EXIT_MISMATCH)
                }
            }
        }
        Command::Table { n, r, cap, seed } => {
            let rows = table(n, r, cap, seed)?;
            let mut failed = false;
            for row in &rows {
                failed |= row.tag == "FAILED";
                let mut line = format!("{} {}", row.b, row.tag);
                if row.tag == "CONSTRUCTED" {
                    line += &format!(" {}x{} verified={}", row.rows, row.cols, row.verified);
                }
                if let Some(note) = &row.note {
                    line += &format!(" ({note})");
                }
                println!("{line}");
            }
            Ok(if failed { EXIT_FAILURE } else { 0 })
        }
        Command::Replay { which, json } => {
            let report = match which {
                ReplayTarget::AppendixB => replay_appendix_b(),
                ReplayTarget::AppendixC => replay_appendix_c(),
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_replay(&report);
            }
            Ok(if report.passed() { 0 } else { EXIT_FAILURE })
        }
        Command::Selftest {
            which: SelftestTarget::AppendixA,
        } => {
            let report = selftest_appendix_a()?;
            for m in &report.mismatches {
                println!("MISMATCH r={} b={} counted={}", m.r, m.b, m.counted);
            }
            println!(
                "appendix-a: {} entries, {} mismatches: {}",
                report.entries,
                report.mismatches.len(),
                if report.passed() { "PASS" } else { "FAIL" }
            );
            Ok(if report.passed() { 0 } else { EXIT_FAILURE })
        }
    }
}

fn print_replay(report: &ReplayReport) {
    for s in &report.per_r {
        println!(
            "r={} max_rows={} at b_bar={}",
            s.r, s.max_rows, s.argmax_b_bar
        );
    }
    for v in &report.violations {
        println!("VIOLATION r={} b_bar={} rows={}", v.r, v.b_bar, v.rows);
    }
    println!(
        "{}: r={}..={}, {} cells, {} violations: {}",
        report.name,
        report.r_range.0,
        report.r_range.1,
        report.cells,
        report.violations.len(),
        if report.passed() { "PASS" } else { "FAIL" }
    );
}
