//! Command-line front end.
//!
//! JSON goes to standard output, human diagnostics to standard error. Exit
//! codes: 0 success, 1 rejection or failed verification, 2 usage or parse
//! error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::data::{ImmersionData, Unrealizable};
use crate::oracle::{self, Bounds};
use crate::planner::{plan_or_explain, ConstructionTrace};
use crate::verifier::verify_detailed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "imm-regions", version, about = "Region data of surface immersions in S^3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a data file is realizable.
    Check {
        #[arg(long)]
        data: PathBuf,
    },
    /// Write a construction trace realizing a data file.
    Plan {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay a trace and compare against a data file.
    Verify {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// Random E/H/T/Q moves, checking the homotopy invariants.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        steps: u64,
        /// Largest genus of the random starting embedding.
        #[arg(long, default_value_t = 3)]
        max_k: u32,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Data realized by all construction traces up to a length.
    Enumerate {
        #[arg(long)]
        max_k: u32,
        #[arg(long)]
        max_count: u32,
        #[arg(long)]
        max_n: u32,
        #[arg(long, allow_hyphen_values = true)]
        min_chi: i64,
        #[arg(long)]
        max_len: u32,
        /// Exit 1 unless the result equals the realizable data in the box.
        #[arg(long)]
        compare_predicate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct CliError(String);

#[derive(Serialize)]
struct CheckReport {
    realizable: bool,
    two_black: i128,
    two_white: i128,
    chi_plus_n: i128,
    rejection: Option<Unrealizable>,
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError(format!("{}: cannot read {what} file: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError(format!("{}: invalid {what}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn emit(
    text: &str,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| CliError(format!("{}: cannot write: {e}", p.display()))),
        None => writeln!(out, "{text}").map_err(|e| CliError(format!("stdout: {e}"))),
    }
}

/// Runs one command, writing JSON to `out` and diagnostics to `err`, and
/// returns the exit code.
pub fn run(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(command, out, err) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Check { data } => {
            let d: ImmersionData = read_json(data, "data")?;
            let reason = d.check().err();
            let report = CheckReport {
                realizable: reason.is_none(),
                two_black: 2 * d.black.weighted_sum(),
                two_white: 2 * d.white.weighted_sum(),
                chi_plus_n: d.chi_plus_n(),
                rejection: reason.clone(),
            };
            emit(&to_json(&report), None, out)?;
            Ok(match reason {
                None => EXIT_OK,
                Some(r) => {
                    let _ = writeln!(err, "not realizable: {r}");
                    EXIT_REJECTED
                }
            })
        }
        Command::Plan { data, out: path } => {
            let d: ImmersionData = read_json(data, "data")?;
            match plan_or_explain(&d) {
                Ok(trace) => {
                    emit(&to_json(&trace), Some(path), out)?;
                    let summary = json!({ "base": trace.base, "steps": trace.steps.len(), "out": path });
                    emit(&to_json(&summary), None, out)?;
                    Ok(EXIT_OK)
                }
                Err(report) => {
                    emit(&to_json(&report), None, out)?;
                    let _ = writeln!(err, "{report}");
                    Ok(EXIT_REJECTED)
                }
            }
        }
        Command::Verify { trace, data } => {
            let t: ConstructionTrace = read_json(trace, "trace")?;
            let d: ImmersionData = read_json(data, "data")?;
            match verify_detailed(&t, &d) {
                Ok(_) => {
                    emit(&to_json(&json!({ "verified": true })), None, out)?;
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    emit(&to_json(&json!({ "verified": false, "error": e })), None, out)?;
                    let _ = writeln!(err, "verification failed: {e}");
                    Ok(EXIT_REJECTED)
                }
            }
        }
        Command::Fuzz { seed, steps, max_k, out: path } => {
            let bounds = Bounds { max_k: *max_k, ..Bounds::default() };
            let report = oracle::fuzz_homotopy(*seed, *steps, &bounds);
            emit(&to_json(&report), path.as_deref(), out)?;
            if report.passed() {
                Ok(EXIT_OK)
            } else {
                let _ = writeln!(err, "{} invariant failures", report.failures.len());
                Ok(EXIT_REJECTED)
            }
        }
        Command::Enumerate {
            max_k,
            max_count,
            max_n,
            min_chi,
            max_len,
            compare_predicate,
            out: path,
        } => {
            if *min_chi > 2 {
                return Err(CliError(format!("--min-chi {min_chi} exceeds 2")));
            }
            let bounds = Bounds {
                max_k: *max_k,
                max_count: *max_count,
                max_n: *max_n,
                min_chi: *min_chi,
                max_trace_len: *max_len,
            };
            let realized = oracle::enumerate_realized(&bounds);
            emit(&to_json(&realized), path.as_deref(), out)?;
            if !compare_predicate {
                return Ok(EXIT_OK);
            }
            let expected = oracle::realizable_in_box(&bounds);
            let missing: Vec<_> = expected.difference(&realized).collect();
            let extra: Vec<_> = realized.difference(&expected).collect();
            for d in &missing {
                let _ = writeln!(err, "realizable but not realized: {d}");
            }
            for d in &extra {
                let _ = writeln!(err, "realized but not realizable: {d}");
            }
            Ok(if missing.is_empty() && extra.is_empty() { EXIT_OK } else { EXIT_REJECTED })
        }
    }
}

/// Parses `args` and runs; clap usage errors map to exit code 2.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command, out, err),
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            EXIT_USAGE
        }
        Err(e) => {
            // --help and --version
            let _ = write!(out, "{e}");
            EXIT_OK
        }
    }
}
