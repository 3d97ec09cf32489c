//! `cohering`: cohering power of quantum operations from JSON specifications.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cohering::doc::{matrix_to_json, vector_to_json, ChannelSpecDocument, CircuitSpecDocument, DilationDocument, DocError};
use cohering::power::{circuit_hadamard_bound, PowerReport};
use cohering::verify::{run_cases, CaseId, Profile, VerifyReport};
use cohering::{cohering_power, generalized_cohering_power, CoherenceMeasure, Error, OptimizerConfig, QuantumOperation};

const EXIT_PARSE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "cohering", version, about = "Coherence measures and cohering power of quantum operations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    L1,
    Relent,
}

impl From<Measure> for CoherenceMeasure {
    fn from(m: Measure) -> Self {
        match m {
            Measure::L1 => CoherenceMeasure::L1,
            Measure::Relent => CoherenceMeasure::RelativeEntropy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Cohering power by enumeration over basis inputs.
    Power {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "l1")]
        measure: Measure,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Best-found generalized cohering power (a lower bound).
    Gpower {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "l1")]
        measure: Measure,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Objective tolerance for the local searches.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Unitary dilation with a d^2-dimensional ancilla.
    Dilate {
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        check_states: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Randomized checks of the identities and bounds.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        profile: ProfileArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run only this case (may be repeated).
        #[arg(long = "case")]
        cases: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Hadamard-count bound on the l1 cohering power of a circuit.
    CircuitBound {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
}

/// A message and the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Parse(_) => Failure {
                code: EXIT_PARSE,
                message: e.to_string(),
            },
            DocError::Invalid(inner) => Failure {
                code: EXIT_VALIDATION,
                message: format!("invalid document: {inner}"),
            },
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numerical(_) | Error::Optimizer(_) | Error::Dilation(_) | Error::Singular | Error::NonFinite => {
                EXIT_NUMERICAL
            }
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn load_channel(path: &Path) -> Result<QuantumOperation, Failure> {
    let text = read_input(path)?;
    Ok(ChannelSpecDocument::parse(&text)?.to_operation()?)
}

fn emit(output: Output, value: &Value, text: impl FnOnce() -> String) {
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(value).expect("reports serialize")),
        Output::Text => print!("{}", text()),
    }
}

fn opt_f64(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

fn power_json(report: &PowerReport) -> Value {
    json!({
        "measure": report.measure,
        "s_value": report.s_value,
        "argmax_basis_index": report.argmax_basis_index,
        "closed_form_value": report.closed_form_value,
        "s_hat_value": report.s_hat_value,
        "s_hat_witness": report.s_hat_witness.as_ref().map(|w| matrix_to_json(w.matrix())),
        "method": report.method,
        "diagnostics": report.diagnostics,
    })
}

fn power_text(report: &PowerReport) -> String {
    let mut out = format!(
        "measure: {}\ns_value: {}\nargmax_basis_index: {}\nclosed_form_value: {}\nmethod: {:?}\n",
        report.measure,
        report.s_value,
        report.argmax_basis_index,
        opt_f64(report.closed_form_value),
        report.method,
    );
    if let Some(s_hat) = report.s_hat_value {
        out += &format!("s_hat_value: {s_hat}\n");
    }
    if let Some(d) = &report.diagnostics {
        out += &format!(
            "lower_bound: {}\nrestarts: {} ({} converged, {} aborted)\niterations: {}\nevaluations: {}\noptimizer_converged: {}\n",
            d.lower_bound, d.restarts, d.converged_restarts, d.aborted_restarts, d.iterations, d.evaluations, d.optimizer_converged
        );
    }
    out
}

fn cmd_power(input: &Path, measure: Measure, output: Output) -> CmdResult {
    let op = load_channel(input)?;
    let report = cohering_power(&op, measure.into())?;
    emit(output, &power_json(&report), || power_text(&report));
    Ok(())
}

fn cmd_gpower(input: &Path, measure: Measure, restarts: usize, seed: u64, tol: f64, output: Output) -> CmdResult {
    let op = load_channel(input)?;
    let cfg = OptimizerConfig {
        restarts,
        seed,
        objective_tol: tol,
        ..OptimizerConfig::default()
    };
    let report = generalized_cohering_power(&op, measure.into(), &cfg)?;
    emit(output, &power_json(&report), || power_text(&report));
    Ok(())
}

fn cmd_dilate(input: &Path, check_states: usize, seed: u64, output: Output) -> CmdResult {
    let op = load_channel(input)?;
    let dil = op.stinespring_dilate_checked(check_states, seed)?;
    let value = serde_json::to_value(DilationDocument::from(&dil)).expect("dilations serialize");
    emit(output, &value, || {
        let rows: Vec<String> = (0..dil.big_unitary.rows())
            .map(|i| serde_json::to_string(&matrix_to_json(&dil.big_unitary)[i]).expect("rows serialize"))
            .collect();
        format!(
            "ancilla_dim: {}\nancilla_state: {}\nbig_unitary:\n  {}\nreconstruction_error: {:e}\n",
            dil.ancilla_dim,
            vector_to_json(&dil.ancilla_state),
            rows.join("\n  "),
            dil.reconstruction_error,
        )
    });
    Ok(())
}

fn verify_text(report: &VerifyReport) -> String {
    let mut out = String::new();
    for c in &report.cases {
        out += &format!(
            "{} {}: {} trials, {} failures, worst margin {:e} (tol {:e})\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.trials,
            c.failures,
            c.worst_margin,
            c.tolerance
        );
        if c.id == CaseId::P7_COUNTEREXAMPLE {
            if let Some(w) = &c.witness {
                out += &format!("  S = {}, gain = {}\n", w["s"], w["gain"]);
            }
        } else if !c.passed {
            if let Some(w) = &c.witness {
                out += &format!("  witness: {w}\n");
            }
        }
    }
    out += &format!("seed {}: {}\n", report.seed, if report.passed { "all passed" } else { "FAILED" });
    out
}

fn cmd_verify(profile: ProfileArg, seed: u64, cases: &[String], output: Output) -> CmdResult {
    let ids: Vec<CaseId> = if cases.is_empty() {
        CaseId::ALL.to_vec()
    } else {
        cases
            .iter()
            .map(|c| c.parse::<CaseId>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure {
                code: EXIT_PARSE,
                message: e.to_string(),
            })?
    };
    let profile = match profile {
        ProfileArg::Quick => Profile::Quick,
        ProfileArg::Full => Profile::Full,
    };
    let report = run_cases(seed, profile, &ids);
    emit(output, &serde_json::to_value(&report).expect("reports serialize"), || verify_text(&report));
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.cases.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
        Err(Failure {
            code: EXIT_VALIDATION,
            message: format!("failing cases: {}", failed.join(", ")),
        })
    }
}

fn cmd_circuit_bound(input: &Path, output: Output) -> CmdResult {
    let text = read_input(input)?;
    let circuit = CircuitSpecDocument::parse(&text)?.to_circuit()?;
    let b = circuit_hadamard_bound(&circuit)?;
    emit(output, &serde_json::to_value(b).expect("bounds serialize"), || {
        format!(
            "qubits: {}\nhadamard_count: {}\nbound: {}\nexact: {}\n",
            circuit.qubits(),
            b.hadamard_count,
            b.bound,
            opt_f64(b.exact)
        )
    });
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Power { input, measure, output } => cmd_power(input, *measure, *output),
        Command::Gpower {
            input,
            measure,
            restarts,
            seed,
            tol,
            output,
        } => cmd_gpower(input, *measure, *restarts, *seed, *tol, *output),
        Command::Dilate {
            input,
            check_states,
            seed,
            output,
        } => cmd_dilate(input, *check_states, *seed, *output),
        Command::Verify {
            profile,
            seed,
            cases,
            output,
        } => cmd_verify(*profile, *seed, cases, *output),
        Command::CircuitBound { input, output } => cmd_circuit_bound(input, *output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
