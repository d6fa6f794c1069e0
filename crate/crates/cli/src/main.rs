//! `cnz`: synthesize, verify, count and convert multi-controlled-Z circuits.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
//! Machine-readable output goes to stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cnz_core::codec::{emit_text, export_quirk_url, parse_quirk_url, parse_text};
use cnz_core::resources::{compare, count};
use cnz_core::synthesis::{cccz_6t, synth_cnz, with_x_target, CnzSpec, Method};
use cnz_core::verify::{check_implements, oracle_cnz, VerifyError, DEFAULT_TOLERANCE};
use cnz_core::Circuit;

#[derive(Parser)]
#[command(name = "cnz", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a circuit and print its resource count as JSON.
    Synth {
        #[arg(long, value_enum)]
        gate: GateKind,
        /// Number of controls (cnz only; cccz is n = 3).
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "optimized")]
        method: MethodArg,
        /// Write the circuit in canonical text form to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Conjugate the target with H, giving a multi-controlled X.
        #[arg(long)]
        x_target: bool,
    },
    /// Check a circuit against a reference gate as a quantum channel.
    Verify {
        /// Circuit text file or Quirk URL.
        #[arg(long = "in")]
        input: String,
        /// `cccz` or `cnz:N`.
        #[arg(long)]
        against: String,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Print the resource count of a circuit as JSON.
    Count {
        #[arg(long = "in")]
        input: String,
    },
    /// Tabulate baseline vs optimized T counts for n = 3..=n_max.
    Table {
        #[arg(long)]
        n_max: usize,
    },
    /// Convert a circuit to another format.
    Export {
        #[arg(long = "in")]
        input: String,
        #[arg(long, value_enum, default_value = "quirk")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GateKind {
    Cccz,
    Cnz,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Baseline,
    Optimized,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Quirk,
}

/// A failed run: exit code and a message for stderr.
struct Failure(u8, String);

fn usage(msg: impl ToString) -> Failure {
    Failure(2, msg.to_string())
}

fn is_url(s: &str) -> bool {
    s.starts_with("http://") || s.starts_with("https://") || s.contains("#circuit=")
}

fn load(input: &str) -> Result<Circuit, Failure> {
    let parsed = if is_url(input) {
        parse_quirk_url(input)
    } else {
        let doc = fs::read_to_string(Path::new(input))
            .map_err(|e| usage(format!("cannot read {input}: {e}")))?;
        if is_url(doc.trim()) {
            parse_quirk_url(doc.trim())
        } else {
            parse_text(&doc)
        }
    };
    parsed.map_err(|e| usage(format!("{input}: {e}")))
}

fn synth(
    gate: GateKind,
    n: Option<usize>,
    method: MethodArg,
    out: Option<&Path>,
    x_target: bool,
) -> Result<(), Failure> {
    let circuit = match gate {
        GateKind::Cccz => {
            if n.is_some_and(|n| n != 3) {
                return Err(usage(
                    "cccz has exactly 3 controls; use --gate cnz for other n",
                ));
            }
            cccz_6t()
        }
        GateKind::Cnz => {
            let n = n.ok_or_else(|| usage("--gate cnz requires -n"))?;
            let spec = CnzSpec::new(n).map_err(usage)?;
            let method = match method {
                MethodArg::Baseline => Method::Baseline,
                MethodArg::Optimized => Method::Optimized,
            };
            synth_cnz(spec, method).map_err(usage)?
        }
    };
    let circuit = if x_target {
        let target = *circuit
            .data_qubits()
            .last()
            .expect("at least one data qubit");
        with_x_target(&circuit, target)
    } else {
        circuit
    };
    if let Some(path) = out {
        let text = emit_text(&circuit).map_err(usage)?;
        fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    print_count(&circuit)
}

fn print_count(circuit: &Circuit) -> Result<(), Failure> {
    let rc = count(circuit).map_err(usage)?;
    println!("{}", serde_json::to_string(&rc).expect("counts serialize"));
    Ok(())
}

fn parse_against(spec: &str) -> Result<usize, Failure> {
    match spec {
        "cccz" => Ok(3),
        _ => spec
            .strip_prefix("cnz:")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| usage(format!("--against must be `cccz` or `cnz:N`, got `{spec}`"))),
    }
}

fn verify(input: &str, against: &str, tolerance: f64) -> Result<(), Failure> {
    let n = parse_against(against)?;
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(usage("--tolerance must be a positive number"));
    }
    let circuit = load(input)?;
    let oracle = oracle_cnz(n).map_err(usage)?;
    let verdict = match check_implements(&circuit, &oracle, tolerance) {
        Ok(v) => v,
        Err(VerifyError::DimensionMismatch { expected, found }) => {
            return Err(Failure(
                1,
                format!(
                "FAIL: circuit acts on a {found}-dimensional data space, {against} on {expected}"
            ),
            ))
        }
        Err(e) => return Err(usage(e)),
    };
    println!(
        "{}",
        serde_json::to_string(&verdict).expect("verdict serializes")
    );
    for g in &verdict.groups {
        let label = if g.outcomes.is_empty() {
            "-".to_string()
        } else {
            g.outcome_string()
        };
        eprintln!(
            "outcome {label}: p = {:.6}, phase = {:.6}{:+.6}i, max deviation = {:.3e}",
            g.probability, g.phase.re, g.phase.im, g.max_deviation
        );
    }
    if !verdict.ancilla_clean {
        eprintln!(
            "ancillas not clean: leakage {:.3e}",
            verdict.max_ancilla_leakage
        );
    }
    if verdict.passed {
        eprintln!("PASS: implements {against} within {tolerance:e}");
        Ok(())
    } else {
        Err(Failure(
            1,
            format!(
                "FAIL: does not implement {against} (max deviation {:.3e}, tolerance {tolerance:e})",
                verdict.max_deviation()
            ),
        ))
    }
}

fn table(n_max: usize) -> Result<(), Failure> {
    if n_max < 3 {
        return Err(usage(format!("--n-max must be at least 3 (got {n_max})")));
    }
    println!(
        "{:>3}  {:>10}  {:>11}  {:>6}",
        "n", "baseline_t", "optimized_t", "saving"
    );
    for n in 3..=n_max {
        let spec = CnzSpec::new(n).map_err(usage)?;
        let row = compare(spec).map_err(usage)?;
        println!(
            "{:>3}  {:>10}  {:>11}  {:>6}",
            row.n, row.baseline_t, row.optimized_t, row.saving
        );
    }
    Ok(())
}

fn export(input: &str, format: Format) -> Result<(), Failure> {
    let circuit = load(input)?;
    match format {
        Format::Quirk => println!("{}", export_quirk_url(&circuit).map_err(usage)?),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Synth {
            gate,
            n,
            method,
            out,
            x_target,
        } => synth(gate, n, method, out.as_deref(), x_target),
        Command::Verify {
            input,
            against,
            tolerance,
        } => verify(&input, &against, tolerance),
        Command::Count { input } => print_count(&load(&input)?),
        Command::Table { n_max } => table(n_max),
        Command::Export { input, format } => export(&input, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn against_specs() {
        assert_eq!(parse_against("cccz").ok(), Some(3));
        assert_eq!(parse_against("cnz:5").ok(), Some(5));
        assert!(parse_against("cnz:").is_err());
        assert!(parse_against("ccz").is_err());
    }

    #[test]
    fn url_detection() {
        assert!(is_url("https://algassert.com/quirk#circuit={}"));
        assert!(!is_url("circuits/c.qct"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
