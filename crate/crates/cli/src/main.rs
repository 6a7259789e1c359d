//! `cupzero`: scan for exceptional characters, compute cup products, run the
//! verification suites and specialize the Eisenstein family. JSON on stdout.

mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cupzero_core::arith::is_prime;
use cupzero_core::characters::{
    enumerate_characters, is_exceptional, theta_from_chi, DirichletChar,
};
use cupzero_core::lambda::{default_degree, eisenstein_specialization};
use cupzero_core::reciprocity::{cup_product, nontriviality_threshold};
use cupzero_core::verify::{self, VerifyOptions};
use cupzero_core::Error;
use rayon::prelude::*;
use serde::Serialize;

use report::*;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_PRECISION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cupzero",
    version,
    about = "Cup products at exceptional zeros of Dirichlet characters"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Add wall-clock duration to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List exceptional odd primitive characters of conductor N <= nmax.
    Scan(ScanArgs),
    /// Cup product of q with the cyclotomic unit at level N p^r.
    Cup(CupArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Specialize the Eisenstein family at a weight.
    Eisenstein(EisensteinArgs),
}

#[derive(Args, Serialize)]
struct ScanArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    nmax: u64,
}

#[derive(Args, Serialize)]
struct CupArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    chi: String,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    r: u32,
    /// Working precision; defaults to r + 4.
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(value_parser = ["lemma41", "reciprocity", "lp", "eisenstein", "all"])]
    suite: String,
    /// Largest level M for the geometric identity.
    #[arg(long, default_value_t = 30)]
    max_m: u64,
}

#[derive(Args, Serialize)]
struct EisensteinArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    chi: String,
    #[arg(long)]
    weight: u32,
    #[arg(long)]
    terms: u64,
    /// Truncation degree in T; defaults to max(precision - 1, weight - 2).
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 6)]
    precision: u32,
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::Hypothesis(_) | Error::Parity { .. } | Error::NotPrimitive { .. } => {
                (EXIT_HYPOTHESIS, "hypothesis")
            }
            Error::PrecisionUnderflow { .. }
            | Error::Budget { .. }
            | Error::TailBound { .. }
            | Error::Undetermined { .. }
            | Error::ExtensionTooLarge { .. } => (EXIT_PRECISION, "precision"),
            Error::Label(_) | Error::InvalidPrime(_) | Error::Range(_) => (EXIT_USAGE, "usage"),
            _ => (EXIT_FAIL, "internal"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

struct Output {
    json: String,
    code: u8,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn envelope<A: Serialize, R: Serialize>(
    command: &'static str,
    args: A,
    convention: Option<String>,
    results: Vec<R>,
    counters: Option<Counters>,
    start: Option<Instant>,
) -> String {
    to_json(&Envelope {
        command,
        args,
        convention,
        results,
        counters,
        duration_ms: start.map(|s| s.elapsed().as_millis()),
    })
}

fn require_prime(p: u64) -> Result<(), Failure> {
    if p >= 5 && is_prime(p) {
        Ok(())
    } else {
        Err(Failure::usage(format!("--p {p} is not a prime >= 5")))
    }
}

fn parse_chi(label: &str, n: u64) -> Result<DirichletChar, Failure> {
    let chi = DirichletChar::from_label(label).map_err(|e| Failure::usage(e.to_string()))?;
    if chi.modulus() != n {
        return Err(Failure::usage(format!(
            "character {label} has modulus {}, not --n {n}",
            chi.modulus()
        )));
    }
    Ok(chi)
}

fn scan(a: ScanArgs, start: Option<Instant>) -> Result<Output, Failure> {
    require_prime(a.p)?;
    let p = a.p;
    let rows: Vec<ScanRow> = (1..=a.nmax)
        .into_par_iter()
        .flat_map_iter(|n| {
            enumerate_characters(n)
                .into_iter()
                .filter(move |c| is_exceptional(c, p).exceptional)
                .map(move |c| ScanRow {
                    n,
                    chi: c.label(),
                    order: c.order(),
                    theta: theta_from_chi(&c, p).map(|t| t.label()).unwrap_or_default(),
                })
        })
        .collect();
    Ok(Output {
        json: envelope("scan", a, None, rows, None, start),
        code: 0,
    })
}

fn cup(a: CupArgs, start: Option<Instant>) -> Result<Output, Failure> {
    require_prime(a.p)?;
    let chi = parse_chi(&a.chi, a.n)?;
    if !is_prime(a.q) || !(a.n * a.p).is_multiple_of(a.q) {
        return Err(Failure::usage(format!(
            "--q {} is not a prime dividing N p = {}",
            a.q,
            a.n * a.p
        )));
    }
    if a.r == 0 {
        return Err(Failure::usage("--r must be at least 1"));
    }
    let k = a.precision.unwrap_or(a.r + 4);
    let v = cup_product(a.q, &chi, a.p, a.r, k)?;
    let r0 = nontriviality_threshold(&v).ok();
    let convention = Some(v.convention.clone());
    let args = CupArgs {
        precision: Some(k),
        ..a
    };
    Ok(Output {
        json: envelope(
            "cup",
            args,
            convention,
            vec![CupJson::new(&v, r0)],
            None,
            start,
        ),
        code: 0,
    })
}

fn run_verify(a: VerifyArgs, start: Option<Instant>) -> Result<Output, Failure> {
    let opts = VerifyOptions {
        max_m: a.max_m,
        ..VerifyOptions::default()
    };
    let reports = verify::run(&a.suite, &opts)
        .ok_or_else(|| Failure::usage(format!("unknown suite {}", a.suite)))?;
    let mut counters = Counters::default();
    for r in &reports {
        counters.checks += r.checks.len();
        counters.passed += r.passed();
        counters.failed += r.failed();
    }
    let for_stderr: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.checks
                .iter()
                .filter(|c| !c.passed)
                .map(move |c| format!("FAIL [{}] {}", r.suite, c.name))
        })
        .collect();
    for line in for_stderr {
        eprintln!("{line}");
    }
    let suites: Vec<SuiteJson> = reports.iter().map(Into::into).collect();
    let code = if counters.failed == 0 { 0 } else { EXIT_FAIL };
    Ok(Output {
        json: envelope("verify", a, None, suites, Some(counters), start),
        code,
    })
}

fn eisenstein(a: EisensteinArgs, start: Option<Instant>) -> Result<Output, Failure> {
    require_prime(a.p)?;
    if a.weight < 2 {
        return Err(Failure::usage("--weight must be at least 2"));
    }
    let chi = parse_chi(&a.chi, a.n)?;
    let theta = theta_from_chi(&chi, a.p)?;
    let d = a
        .degree
        .unwrap_or_else(|| default_degree(a.precision, a.weight));
    let e = eisenstein_specialization(&theta, a.p, a.weight, a.terms, d, a.precision)?;
    let result = EisensteinJson {
        weight: e.weight,
        degree: e.degree,
        precision: e.precision,
        kappa: e.kappa.clone(),
        lp_value: (&e.lp_value).into(),
        coefficients: e.coefficients.iter().map(Into::into).collect(),
    };
    let args = EisensteinArgs {
        degree: Some(d),
        ..a
    };
    Ok(Output {
        json: envelope(
            "eisenstein",
            args,
            Some(e.convention),
            vec![result],
            None,
            start,
        ),
        code: 0,
    })
}

/// Writes the report; a closed pipe is not an error worth a panic.
fn emit(json: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{json}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    let start = cli.timing.then(Instant::now);
    let (name, outcome) = match cli.command {
        Command::Scan(a) => ("scan", scan(a, start)),
        Command::Cup(a) => ("cup", cup(a, start)),
        Command::Verify(a) => ("verify", run_verify(a, start)),
        Command::Eisenstein(a) => ("eisenstein", eisenstein(a, start)),
    };
    match outcome {
        Ok(out) => {
            emit(&out.json);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            emit(&to_json(&ErrorEnvelope {
                command: name,
                error: ErrorBody {
                    kind: f.kind,
                    exit_code: f.code as i32,
                    message: f.message,
                },
            }));
            ExitCode::from(f.code)
        }
    }
}
