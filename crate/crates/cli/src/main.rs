use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use wignerlift::codec;
use wignerlift::harness::{self, parse_dims, parse_propositions, TrialPlan};
use wignerlift::hilbert::ComplexMatrix;
use wignerlift::lift::{lift, required_queries};
use wignerlift::projective::RayMap;
use wignerlift::tensor::{
    check_span_surjectivity, check_totality, composition_convention, construct_isomorphism_with,
    map_basis, CompositionOracle, Witness, FACTORIZATION_TRIALS,
};
use wignerlift::{Error, RayMapOracle, ToleranceConfig};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "wignerlift",
    version,
    about = "Lift ray maps and factor composite systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct Tolerances {
    /// Equality tolerance.
    #[arg(long = "tol", default_value_t = ToleranceConfig::default().eq_tol)]
    eq_tol: f64,
    /// Relative rank tolerance.
    #[arg(long, default_value_t = ToleranceConfig::default().rank_tol)]
    rank_tol: f64,
}

impl Tolerances {
    fn config(&self) -> Result<ToleranceConfig, Error> {
        ToleranceConfig::new(self.eq_tol, self.rank_tol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized proposition suite.
    Verify {
        /// Comma-separated ids or tags, e.g. `S6,ADD1`.
        #[arg(long)]
        props: Option<String>,
        /// Comma-separated `N`, `AxB` or `N..M`.
        #[arg(long, default_value = "2..4")]
        dims: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Master seed; `WIGNERLIFT_SEED` takes precedence when set.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        tol: Tolerances,
        #[arg(long)]
        negative_controls: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Lift a serialized ray map to a unitary or antiunitary matrix.
    Lift {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Check a bilinear composition map and build `C ≅ A ⊗ B`.
    Factor {
        #[arg(long)]
        bilinear: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = FACTORIZATION_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Tabulate a matrix-induced map on every point `lift` queries.
    Tabulate {
        #[arg(long)]
        matrix: PathBuf,
        /// Conjugate inputs first (antiunitary map).
        #[arg(long)]
        conjugate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
}

/// Failure with an exit code; the message goes to stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_FAIL
            },
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| input_failure(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn seed_override(seed: u64) -> Result<u64, Failure> {
    match std::env::var("WIGNERLIFT_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| {
            input_failure(format!("WIGNERLIFT_SEED is not an unsigned integer: {v:?}"))
        }),
        Err(_) => Ok(seed),
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Verify {
            props,
            dims,
            trials,
            seed,
            tol,
            negative_controls,
            out,
            format,
            workers,
        } => {
            let plan = TrialPlan {
                propositions: match props {
                    Some(list) => parse_propositions(&list)?,
                    None => harness::PropositionId::ALL.to_vec(),
                },
                dims: parse_dims(&dims)?,
                trials,
                seed: seed_override(seed)?,
                tolerances: tol.config()?,
                negative_controls,
                workers,
            };
            let report = harness::run_suite(&plan)?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text().trim_end().to_string(),
            };
            emit(out.as_deref(), &text)?;
            Ok(if report.pass { 0 } else { EXIT_FAIL })
        }
        Command::Lift { map, out, tol } => {
            let tol = tol.config()?;
            let oracle = codec::decode_oracle(&read(&map)?, &tol)?;
            match lift(&oracle, oracle.domain_dim(), oracle.codomain_dim(), &tol) {
                Ok(l) => {
                    emit(out.as_deref(), &codec::encode_lift(&l))?;
                    eprintln!(
                        "lift {} residual={:.3e}",
                        if l.antilinear() {
                            "antilinear"
                        } else {
                            "linear"
                        },
                        l.residual()
                    );
                    Ok(0)
                }
                Err(e) if e.is_input_error() => Err(e.into()),
                Err(e) => {
                    let mut body = json!({ "error": e.kind(), "message": e.to_string() });
                    match &e {
                        Error::NotProbabilityPreserving { deviation, pair } => {
                            body["deviation"] = json!(deviation);
                            body["worst_pair"] = json!([
                                serde_json::from_str::<serde_json::Value>(&codec::encode_vector(
                                    pair.0.rep()
                                ))
                                .expect("valid json"),
                                serde_json::from_str::<serde_json::Value>(&codec::encode_vector(
                                    pair.1.rep()
                                ))
                                .expect("valid json"),
                            ]);
                        }
                        Error::InconsistentTau { index } => body["index"] = json!(index),
                        Error::NonUnimodularK { index, modulus } => {
                            body["index"] = json!(index);
                            body["modulus"] = json!(modulus);
                        }
                        Error::ValidationFailed { residual } => body["residual"] = json!(residual),
                        _ => {}
                    }
                    emit(out.as_deref(), &body.to_string())?;
                    eprintln!("lift rejected: {e}");
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Factor {
            bilinear,
            out,
            trials,
            seed,
            tol,
        } => factor(&bilinear, out.as_deref(), trials, seed, &tol.config()?),
        Command::Tabulate {
            matrix,
            conjugate,
            out,
            tol,
        } => {
            let tol = tol.config()?;
            let m = codec::decode_matrix(&read(&matrix)?)?;
            let table = RayMapOracle::tabulate(&m, conjugate, &required_queries(m.cols()), &tol)?;
            emit(out.as_deref(), &codec::encode_oracle(&table)?)?;
            Ok(0)
        }
    }
}

/// Gates H1 → H2 → H3 → basis → isomorphism, one verdict line each.
fn factor(
    path: &Path,
    out: Option<&Path>,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<u8, Failure> {
    let m = codec::decode_bilinear(&read(path)?)?;
    let (da, db, dc) = m.dims();

    let totality = check_totality(&m, trials, seed, tol);
    match totality.weakest.filter(|_| !totality.passed) {
        Some(Witness::BasisPair { i, j }) => println!("H1 FAIL (offending basis pair ({i}, {j}))"),
        Some(Witness::RandomTrial { trial }) => println!("H1 FAIL (random trial {trial})"),
        None => println!("H1 pass (min norm {:.3e})", totality.min_norm),
    }
    if !totality.passed {
        return Ok(EXIT_FAIL);
    }
    println!("H2 bilinear by representation");

    let span = check_span_surjectivity(&m, tol);
    if span.passed {
        println!("H3 pass (rank {})", span.rank);
    } else {
        println!("H3 FAIL (rank {} of {})", span.rank, span.dim_c);
        return Ok(EXIT_FAIL);
    }

    let basis = map_basis(&m, tol);
    println!(
        "basis {} (gram deviation {:.3e})",
        verdict(basis.gram_deviation < tol.eq_tol),
        basis.gram_deviation
    );
    if basis.gram_deviation >= tol.eq_tol {
        return Ok(EXIT_FAIL);
    }
    if dc != da * db {
        println!("dims FAIL (dim_c {dc} != {da}·{db})");
        return Ok(EXIT_FAIL);
    }

    let shared: std::sync::Arc<dyn CompositionOracle> = std::sync::Arc::new(m.clone());
    if let Ok(c) = composition_convention(&shared, tol) {
        let slot = |flag: Option<bool>| match flag {
            Some(true) => "antilinear",
            Some(false) => "linear",
            None => "ambiguous",
        };
        println!(
            "convention first={} second={}",
            slot(c.first_antilinear),
            slot(c.second_antilinear)
        );
    }

    let iso = construct_isomorphism_with(&m, trials, seed, tol)?;
    if iso.iso.max_abs_diff(&ComplexMatrix::identity(dc)) < tol.eq_tol {
        println!("iso = identity");
    } else {
        println!("iso = {dc}x{dc} unitary");
    }
    println!(
        "iso {} (unitarity residual {:.3e}, factorization residual {:.3e})",
        verdict(iso.accepted(tol)),
        iso.unitarity_residual,
        iso.factorization_residual
    );
    if let Some(path) = out {
        emit(Some(path), &codec::encode_isomorphism(&iso))?;
    }
    Ok(if iso.accepted(tol) { 0 } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
