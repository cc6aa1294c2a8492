//! Command-line interface: job files in, canonical result documents out,
//! plus built-in verification suites and classical degree checks.
//!
//! Exit codes: 0 success, 1 validation error, 2 math-contract violation
//! (for example a non-integral halving), 3 internal oracle or cross-path
//! mismatch.

mod job;
mod output;

use clap::{Args, Parser, Subcommand};
use gysin_core::expr;
use gysin_core::flag::{push, push_full_roots_a, Family, FlagSpec, PushError, PushOptions};
use gysin_core::oracle::{classical_degree, Space};
use gysin_core::ring::RingElement;
use gysin_core::schur::{push_monomials, push_schur_grassmann_a, push_schur_isotropic};
use gysin_core::verify::{degree_over_point, run_suite, Suite, SuiteReport, DEFAULT_SEED};
use job::{Basis, JobFile, Prepared};
use output::ResultDocument;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

const GRAMMAR_HELP: &str = "Expression grammar (stable):
  atoms:      integer literals; flag variables xi_1, xi_2, ... (t_k is an
              alias); base-ring generators by name; class references
              s[i](BUNDLE), c[i](BUNDLE), c1(LINE)
  operators:  + - * ^ with precedence ^ > unary - > * > binary + -,
              all left-associative; exponents are non-negative integer
              literals; no division
  sequences:  integer lists like [3,1,0]; negative entries allowed: [2,-1]";

#[derive(Parser)]
#[command(
    name = "gysin",
    version,
    about = "Gysin push-forwards along flag bundles of types A, C and B/D",
    after_help = GRAMMAR_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Push an integrand to the base through the extraction engine.
    Push(PushArgs),
    /// Push Schur or monomial integrands through the determinantal path.
    Schur(SchurArgs),
    /// Run the built-in randomized verification suites.
    Verify(VerifyArgs),
    /// Compare an engine-computed classical degree with its closed form.
    Degree(DegreeArgs),
    /// Parse an expression and print its canonical rendering.
    ParseCheck(ParseCheckArgs),
}

#[derive(Args)]
struct PushArgs {
    /// Job file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Emit the result document as JSON.
    #[arg(long)]
    json: bool,
    /// Result basis: monomial (default) or segre.
    #[arg(long)]
    basis: Option<String>,
    /// Divide the B/D result by two (even-rank maximal case only).
    #[arg(long)]
    halve_maximal_orthogonal: bool,
    /// Report whether the integrand is block-symmetric.
    #[arg(long)]
    check_symmetry: bool,
}

#[derive(Args)]
struct SchurArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    basis: Option<String>,
    #[arg(long)]
    halve_maximal_orthogonal: bool,
    #[arg(long)]
    check_symmetry: bool,
    /// Also run the extraction path and require agreement.
    #[arg(long)]
    both_paths: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: all, ring, extraction, lemma-ej, oracle, degrees,
    /// cross-path.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DegreeArgs {
    /// Space descriptor: grassmann(d,n), lagrangian(n), projective(n),
    /// quadric(rank).
    space: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ParseCheckArgs {
    /// Expression text; read from --input when omitted.
    expression: Option<String>,
    /// File containing the expression.
    #[arg(long)]
    input: Option<PathBuf>,
}

enum Failure {
    Validation(String),
    MathContract(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 1,
            Failure::MathContract(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::MathContract(m) | Failure::Mismatch(m) => m,
        }
    }
}

fn validation(error: impl std::fmt::Display) -> Failure {
    Failure::Validation(error.to_string())
}

fn validation_chain(error: anyhow::Error) -> Failure {
    Failure::Validation(format!("{error:#}"))
}

fn main() {
    // behave like a classic unix filter when the consumer closes the pipe
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Push(args) => cmd_push(args),
        Command::Schur(args) => cmd_schur(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Degree(args) => cmd_degree(args),
        Command::ParseCheck(args) => cmd_parse_check(args),
    }
}

fn parse_basis(text: Option<&str>) -> Result<Option<Basis>, Failure> {
    match text {
        None => Ok(None),
        Some("monomial") => Ok(Some(Basis::Monomial)),
        Some("segre") => Ok(Some(Basis::Segre)),
        Some(other) => Err(validation(format!(
            "unknown basis `{other}` (expected monomial or segre)"
        ))),
    }
}

/// Merges command-line flags into the job options; flags win.
fn merge_options(job: &mut JobFile, basis: Option<Basis>, halve: bool, check_symmetry: bool) {
    if let Some(basis) = basis {
        job.options.basis = basis;
    }
    job.options.halve_maximal_orthogonal |= halve;
    job.options.check_symmetry |= check_symmetry;
}

fn classify_push_error(error: PushError) -> Failure {
    match error {
        PushError::NonIntegralHalving => Failure::MathContract(error.to_string()),
        other => validation(other),
    }
}

#[allow(clippy::too_many_arguments)]
fn finish_document(
    job: JobFile,
    prepared: &Prepared,
    result: &RingElement,
    path: &str,
    symmetric: Option<bool>,
    both_paths: Option<String>,
    json: bool,
    started: Instant,
) -> Result<(), Failure> {
    let (homogeneous, degree) = ResultDocument::degree_fields(result);
    let fiber = prepared
        .spec
        .fiber_dimension(prepared.spec.auto_variant())
        .map_err(validation)?;
    let (segre_basis, segre_basis_error) = if job.options.basis == Basis::Segre {
        match output::rewrite_in_segre_basis(result, &prepared.bundle, &prepared.ring) {
            Ok(text) => (Some(text), None),
            Err(message) => (None, Some(message)),
        }
    } else {
        (None, None)
    };
    let document = ResultDocument {
        result: result.to_string(),
        homogeneous,
        degree,
        fiber_dimension: fiber,
        path: path.to_string(),
        family: prepared.spec.family().as_str().to_string(),
        dims: prepared.spec.dims().to_vec(),
        symmetric,
        segre_basis,
        segre_basis_error,
        both_paths,
        job,
    };
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&document).expect("document serializes")
        );
    } else {
        println!("{}", document.render_human());
    }
    eprintln!("elapsed: {:.3?}", started.elapsed());
    Ok(())
}

fn cmd_push(args: PushArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let basis = parse_basis(args.basis.as_deref())?;
    let mut job = JobFile::from_path(&args.input).map_err(validation_chain)?;
    merge_options(
        &mut job,
        basis,
        args.halve_maximal_orthogonal,
        args.check_symmetry,
    );
    let prepared = job.prepare().map_err(validation_chain)?;
    let (f, origin) = job.integrand_poly(&prepared).map_err(validation_chain)?;
    let options = PushOptions {
        halve_maximal_orthogonal: job.options.halve_maximal_orthogonal,
    };

    let (result, path, symmetric) = if origin == "expression-full-roots" {
        if options.halve_maximal_orthogonal {
            return Err(validation(PushError::HalveNotApplicable));
        }
        let result = push_full_roots_a(&prepared.spec, &f).map_err(classify_push_error)?;
        (result, "extraction-full-roots", None)
    } else {
        let symmetric = if job.options.check_symmetry {
            let report = expr::check_block_symmetry_poly(&f, &prepared.spec);
            if !report.symmetric {
                eprintln!(
                    "warning: integrand is not block-symmetric; the value is \
                     linear-algebraically defined but does not correspond to a \
                     class on the flag bundle"
                );
            }
            Some(report.symmetric)
        } else {
            None
        };
        let result = push(&prepared.spec, &f, &options).map_err(classify_push_error)?;
        (result, "extraction", symmetric)
    };
    finish_document(
        job, &prepared, &result, path, symmetric, None, args.json, started,
    )
}

fn apply_halving(spec: &FlagSpec, result: RingElement) -> Result<RingElement, Failure> {
    let rank = spec.bundle().rank();
    let applicable =
        spec.family() == Family::BD && rank.is_multiple_of(2) && spec.d() as u32 == rank / 2;
    if !applicable {
        return Err(validation(PushError::HalveNotApplicable));
    }
    result
        .try_halve()
        .ok_or_else(|| Failure::MathContract(PushError::NonIntegralHalving.to_string()))
}

fn cmd_schur(args: SchurArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let basis = parse_basis(args.basis.as_deref())?;
    let mut job = JobFile::from_path(&args.input).map_err(validation_chain)?;
    merge_options(
        &mut job,
        basis,
        args.halve_maximal_orthogonal,
        args.check_symmetry,
    );
    let prepared = job.prepare().map_err(validation_chain)?;
    if job.integrand.is_some() {
        return Err(validation(
            "the schur command takes a `schur` or `monomials` shortcut, not `integrand`",
        ));
    }

    let mut result = if let Some(lambda) = &job.schur {
        if lambda.len() != prepared.spec.d() {
            return Err(validation(format!(
                "schur sequence length {} does not match flag arity {}",
                lambda.len(),
                prepared.spec.d()
            )));
        }
        match prepared.spec.family() {
            Family::A => {
                if prepared.spec.dims().len() != 1 {
                    return Err(validation(
                        "the schur shortcut needs a single-step (Grassmann) flag",
                    ));
                }
                push_schur_grassmann_a(&prepared.bundle, &prepared.ring, prepared.spec.d(), lambda)
                    .map_err(validation)?
            }
            Family::C | Family::BD => {
                push_schur_isotropic(&prepared.spec, lambda).map_err(validation)?
            }
        }
    } else if job.monomials.is_some() {
        let terms = job.monomial_terms(&prepared).map_err(validation_chain)?;
        push_monomials(&prepared.spec, &terms).map_err(validation)?
    } else {
        return Err(validation(
            "the schur command needs a `schur` or `monomials` section",
        ));
    };
    if job.options.halve_maximal_orthogonal {
        result = apply_halving(&prepared.spec, result)?;
    }
    let symmetric = if job.options.check_symmetry {
        // monomial collections may fail to be block-symmetric (or may not
        // even convert to a polynomial when exponents are negative)
        match job.integrand_poly(&prepared) {
            Ok((f, _)) => {
                let report = expr::check_block_symmetry_poly(&f, &prepared.spec);
                if !report.symmetric {
                    eprintln!(
                        "warning: integrand is not block-symmetric; the value is \
                         linear-algebraically defined but does not correspond to a \
                         class on the flag bundle"
                    );
                }
                Some(report.symmetric)
            }
            Err(_) => {
                eprintln!("warning: symmetry not checked (no polynomial form)");
                None
            }
        }
    } else {
        None
    };

    let both_paths = if args.both_paths {
        let (f, _) = job.integrand_poly(&prepared).map_err(validation_chain)?;
        let options = PushOptions {
            halve_maximal_orthogonal: job.options.halve_maximal_orthogonal,
        };
        let extracted = push(&prepared.spec, &f, &options).map_err(classify_push_error)?;
        if extracted != result {
            return Err(Failure::Mismatch(format!(
                "determinantal path `{result}` disagrees with extraction path `{extracted}`"
            )));
        }
        Some("agree".to_string())
    } else {
        None
    };

    finish_document(
        job,
        &prepared,
        &result,
        "determinantal",
        symmetric,
        both_paths,
        args.json,
        started,
    )
}

#[derive(Serialize)]
struct PropertyReport {
    property: String,
    cases: usize,
    failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<String>,
}

#[derive(Serialize)]
struct VerifyDocument {
    seed: u64,
    cases_per_suite: usize,
    suites: Vec<SuiteDocument>,
    passed: bool,
}

#[derive(Serialize)]
struct SuiteDocument {
    suite: String,
    passed: bool,
    properties: Vec<PropertyReport>,
}

fn aggregate(report: &SuiteReport) -> SuiteDocument {
    let mut properties: BTreeMap<String, PropertyReport> = BTreeMap::new();
    for case in &report.cases {
        let key = case
            .name
            .split(" #")
            .next()
            .unwrap_or(&case.name)
            .split(' ')
            .next()
            .unwrap_or(&case.name)
            .to_string();
        let entry = properties.entry(key.clone()).or_insert(PropertyReport {
            property: key,
            cases: 0,
            failures: 0,
            counterexample: None,
        });
        entry.cases += 1;
        if !case.passed {
            entry.failures += 1;
            if entry.counterexample.is_none() {
                entry.counterexample = Some(format!(
                    "{}: {}",
                    case.name,
                    case.detail.clone().unwrap_or_default()
                ));
            }
        }
    }
    SuiteDocument {
        suite: report.suite.to_string(),
        passed: report.passed(),
        properties: properties.into_values().collect(),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let cases = 100usize;
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::from_name(&args.suite).ok_or_else(|| {
            validation(format!(
                "unknown suite `{}` (expected all, ring, extraction, lemma-ej, oracle, \
                 degrees, cross-path)",
                args.suite
            ))
        })?]
    };

    // independent suites run concurrently; assembly stays ordered
    let reports: Vec<SuiteReport> = suites
        .par_iter()
        .map(|suite| run_suite(*suite, args.seed, cases))
        .collect();

    let documents: Vec<SuiteDocument> = reports.iter().map(aggregate).collect();
    let passed = documents.iter().all(|d| d.passed);
    if args.json {
        let document = VerifyDocument {
            seed: args.seed,
            cases_per_suite: cases,
            suites: documents,
            passed,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&document).expect("report serializes")
        );
    } else {
        for document in &documents {
            for property in &document.properties {
                if property.failures == 0 {
                    println!(
                        "{}/{}: PASS ({} cases)",
                        document.suite, property.property, property.cases
                    );
                } else {
                    println!(
                        "{}/{}: FAIL ({}/{} cases failed)",
                        document.suite, property.property, property.failures, property.cases
                    );
                    if let Some(counterexample) = &property.counterexample {
                        println!("  counterexample: {counterexample}");
                    }
                }
            }
        }
        println!("verify: {}", if passed { "PASS" } else { "FAIL" });
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Mismatch(
            "one or more verification properties failed".to_string(),
        ))
    }
}

fn parse_space(text: &str) -> Result<Space, Failure> {
    let text = text.trim();
    let (name, arguments) = text
        .split_once('(')
        .and_then(|(name, rest)| rest.strip_suffix(')').map(|inner| (name, inner)))
        .ok_or_else(|| {
            validation(
                "space must look like grassmann(2,4), lagrangian(3), projective(4) or quadric(6)",
            )
        })?;
    let numbers: Vec<u32> = arguments
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| validation(format!("bad space argument `{part}`")))
        })
        .collect::<Result<_, _>>()?;
    match (name, numbers.as_slice()) {
        ("grassmann", [d, n]) if *d >= 1 && d < n => Ok(Space::Grassmann { d: *d, n: *n }),
        ("lagrangian", [n]) if *n >= 1 => Ok(Space::Lagrangian { n: *n }),
        ("projective", [n]) => Ok(Space::Projective { n: *n }),
        ("quadric", [rank]) if *rank >= 3 => Ok(Space::Quadric { rank: *rank }),
        _ => Err(validation(format!("bad space descriptor `{text}`"))),
    }
}

fn cmd_degree(args: DegreeArgs) -> Result<(), Failure> {
    let space = parse_space(&args.space)?;
    let expected = classical_degree(space);
    let engine = match space {
        Space::Projective { n } => degree_over_point(Family::A, n + 1, 1, n),
        Space::Grassmann { d, n } => degree_over_point(Family::A, n, d, d * (n - d)),
        Space::Lagrangian { n } => degree_over_point(Family::C, 2 * n, n, n * (n + 1) / 2),
        Space::Quadric { rank } => degree_over_point(Family::BD, rank, 1, rank - 2),
    };
    let engine = engine.to_string();
    let matches = engine == expected.to_string();
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "space": args.space.trim(),
                "engine": engine,
                "classical": expected.to_string(),
                "match": matches,
            })
        );
    } else {
        println!("space: {}", args.space.trim());
        println!("engine: {engine}");
        println!("classical: {expected}");
        println!("match: {matches}");
    }
    if matches {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "engine degree {engine} disagrees with the classical value {expected}"
        )))
    }
}

fn cmd_parse_check(args: ParseCheckArgs) -> Result<(), Failure> {
    let text = match (args.expression, args.input) {
        (Some(text), None) => text,
        (None, Some(path)) => std::fs::read_to_string(&path)
            .map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?,
        _ => {
            return Err(validation(
                "provide an expression argument or --input FILE, not both",
            ))
        }
    };
    let text = text.trim();
    match expr::parse(text) {
        Ok(ast) => {
            println!("ok: {ast}");
            Ok(())
        }
        Err(error) => Err(validation(format!("{error}"))),
    }
}
