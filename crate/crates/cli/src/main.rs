mod error;
mod manifest;

use clap::{Parser, Subcommand};
use error::{CliError, CliResult};
use manifest::RunArgs;
use qaccred::accredit::run_accreditation;
use qaccred::circuits::MatrixRepr;
use qaccred::oracle::{verify_robustness, verify_soundness};
use qaccred::qalg::gates;
use qaccred::twirl::{search_tau_decomposition_with, SearchEffort, TauDecomposition};
use qaccred::Unitary;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Accreditation of noisy circuits with non-Clifford two-qubit gates.
#[derive(Parser)]
#[command(name = "qaccred", version)]
struct Cli {
    /// Maximum worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the accreditation protocol once and write the report and per-trap table.
    Accredit(RunArgs),
    /// Check soundness over repeated runs, or robustness against a second noise model.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Protocol runs for the soundness harness.
        #[arg(long)]
        runs: Option<usize>,
        /// Second noise file; switches to the robustness check.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Search for a τ-decomposition of a two-qubit gate.
    SearchDecomposition {
        /// Named gate: cnot, cz, t-cnot, sqrt-iswap.
        #[arg(long, conflicts_with = "matrix")]
        gate: Option<String>,
        /// JSON file with a 4×4 matrix of [re, im] pairs.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        restarts: Option<usize>,
    },
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn out_dir(out: Option<PathBuf>) -> CliResult<PathBuf> {
    let dir = out.unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    Ok(dir)
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn accredit(args: &RunArgs) -> CliResult<()> {
    let r = args.resolve(None, None)?;
    let report = run_accreditation(&r.circuit, &r.noise, &r.config)?;
    let dir = out_dir(r.out)?;
    write(&dir.join("report.json"), &(report.to_json() + "\n"))?;
    write_csv(&dir.join("traps.csv"), &report.trap_rows())?;
    println!("target sample: {}", report.target_sample);
    println!("bound: {} ({} of {} traps failed)", report.bound, report.trap_failures, report.n_traps);
    Ok(())
}

fn verify(args: &RunArgs, runs: Option<usize>, compare: Option<&Path>) -> CliResult<()> {
    let r = args.resolve(compare, runs)?;
    let dir = out_dir(r.out)?;
    if let Some(other) = &r.compare {
        let v = verify_robustness(&r.circuit, &r.noise, other)?;
        write(&dir.join("robustness.json"), &(serde_json::to_string_pretty(&v).expect("verdict serialises") + "\n"))?;
        println!("tvd {} vs m·ε = {} ({} sites, ε = {})", v.lhs, v.rhs, v.differing_sites, v.epsilon);
        if !v.ok() {
            return Err(CliError::Inconclusive("tvd exceeds m·ε estimate; ε is a lower bound, verdict inconclusive".into()));
        }
        return Ok(());
    }
    let runs = r.runs.unwrap_or(100);
    let v = verify_soundness(&r.circuit, &r.noise, &r.config, runs, r.config.seed)?;
    write(&dir.join("verdict.json"), &(serde_json::to_string_pretty(&v).expect("verdict serialises") + "\n"))?;
    write_csv(&dir.join("runs.csv"), &v.per_run)?;
    println!(
        "{} of {} runs below true ν = {} (allowed {:.2}); mean bound {}",
        v.violations,
        v.runs,
        v.true_nu,
        v.allowed_violations(),
        v.mean_bound
    );
    Ok(())
}

#[derive(Serialize)]
struct SearchReport {
    found: bool,
    best_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau1: Option<MatrixRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau2: Option<MatrixRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    clifford: Option<MatrixRepr>,
    alternatives: usize,
}

fn named_gate(name: &str) -> CliResult<Unitary> {
    Ok(match name {
        "cnot" => gates::cnot(),
        "cz" => gates::cz(),
        "t-cnot" => TauDecomposition::t_cnot().gate().clone(),
        "sqrt-iswap" => gates::sqrt_iswap(),
        other => return Err(CliError::Validation(format!("unknown gate `{other}` (cnot, cz, t-cnot, sqrt-iswap)"))),
    })
}

fn search(gate: Option<&str>, matrix: Option<&Path>, tolerance: f64, seed: u64, restarts: Option<usize>) -> CliResult<()> {
    let u = match (gate, matrix) {
        (Some(name), _) => named_gate(name)?,
        (None, Some(path)) => {
            let text = manifest::read(path)?;
            let repr: MatrixRepr = serde_json::from_str(&text).map_err(|e| CliError::File {
                path: path.to_path_buf(),
                source: qaccred::Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())),
            })?;
            repr.to_unitary().map_err(|source| CliError::File { path: path.to_path_buf(), source })?
        }
        (None, None) => return Err(CliError::Validation("give --gate or --matrix".into())),
    };
    if u.dim() != 4 {
        return Err(CliError::Validation(format!("expected a 4×4 unitary, got {}×{}", u.dim(), u.dim())));
    }
    let mut effort = SearchEffort::default();
    if let Some(r) = restarts {
        effort.restarts = r;
    }
    let outcome = search_tau_decomposition_with(&u, tolerance, seed, effort);
    let dec = outcome.decomposition.as_ref();
    let report = SearchReport {
        found: dec.is_some(),
        best_residual: outcome.best_residual,
        tau1: dec.map(|d| MatrixRepr::from_unitary(d.tau1())),
        tau2: dec.map(|d| MatrixRepr::from_unitary(d.tau2())),
        clifford: dec.map(|d| MatrixRepr::from_unitary(d.clifford())),
        alternatives: outcome.alternatives.len(),
    };
    if !report.found {
        eprintln!("none within {tolerance} (best residual {:.3e})", outcome.best_residual);
    }
    println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::Validation(format!("--jobs: {e}")))?;
    }
    match &cli.command {
        Command::Accredit(args) => accredit(args),
        Command::Verify { run, runs, compare } => verify(run, *runs, compare.as_deref()),
        Command::SearchDecomposition { gate, matrix, tolerance, seed, restarts } => {
            search(gate.as_deref(), matrix.as_deref(), *tolerance, *seed, *restarts)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
