//! Command-line verification harness: runs named suites of exact symbolic
//! checks, solves chain equations under polynomial ansätze, and compares
//! report files. Reports are deterministic byte-for-byte for fixed flags
//! and seed; wall-clock timing goes to stderr only.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context as _};
use clap::{Parser, Subcommand, ValueEnum};
use num::BigRational;

use haantjes::exact::parse_scalar;
use haantjes::fixtures::{render_context, render_tensor};
use haantjes::models::ParamEnv;
use haantjes::solver::{filter_haantjes, solve_chain, AnsatzSpec, ChainOutcome};
use haantjes::suites::{registry, run_suite, SuiteParams};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "haantjes",
    about = "Exact verification toolkit for the separation machinery of the generalized Zernike family",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args, Debug)]
struct Flags {
    /// Order of the family (suite-dependent; e.g. obstruction order)
    #[arg(long = "N")]
    n: Option<usize>,
    /// Rational value for gamma1, e.g. `-1/2` (symbolic when absent)
    #[arg(long, allow_hyphen_values = true)]
    gamma1: Option<String>,
    /// Rational value for gamma2 (symbolic when absent)
    #[arg(long, allow_hyphen_values = true)]
    gamma2: Option<String>,
    /// Rational value for k1 (symbolic when absent)
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<String>,
    /// Rational value for k2 (symbolic when absent)
    #[arg(long, allow_hyphen_values = true)]
    k2: Option<String>,
    /// Ansatz degree for the solver-based suites
    #[arg(long)]
    deg: Option<u32>,
    /// Seed for the sampled numeric checks
    #[arg(long, default_value_t = haantjes::numeric::DEFAULT_SEED)]
    seed: u64,
    /// Sample count for the numeric checks
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Relative tolerance for the numeric checks
    #[arg(long, default_value_t = haantjes::numeric::DEFAULT_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one verification suite and emit its report
    Run {
        /// Suite name (see `list`)
        suite: Option<String>,
        /// Suite name (flag form of the positional argument)
        #[arg(long = "suite")]
        suite_flag: Option<String>,
        #[command(flatten)]
        flags: Flags,
        /// Output format for stdout (text summary or the JSON document)
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the structured JSON report to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the available suites
    List,
    /// Solve the chain equation K^T dH = dI under a polynomial ansatz and
    /// write the solution family as a fixture file
    Solve {
        /// Hamiltonian expression over (q1, q2, p1, p2, gamma1, gamma2, k1, k2)
        #[arg(long = "H")]
        hamiltonian: String,
        /// Integral expression (the chain target)
        #[arg(long = "I")]
        integral: String,
        /// Maximal total degree of the ansatz entries in (q, p)
        #[arg(long, default_value_t = 2)]
        deg: u32,
        /// Restrict the position block to position variables
        #[arg(long)]
        momentum_free_a: bool,
        /// Write the resulting fixture here (stdout otherwise)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structurally compare two JSON reports
    ReportDiff { left: PathBuf, right: PathBuf },
}

fn parse_rational(s: &str) -> anyhow::Result<BigRational> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    Ok(BigRational::new(
        num.parse().map_err(|_| anyhow!("bad rational `{s}`"))?,
        den.parse().map_err(|_| anyhow!("bad rational `{s}`"))?,
    ))
}

fn suite_params(flags: &Flags) -> anyhow::Result<SuiteParams> {
    let opt = |v: &Option<String>| -> anyhow::Result<Option<BigRational>> {
        v.as_deref().map(parse_rational).transpose()
    };
    Ok(SuiteParams {
        n: flags.n,
        gamma1: opt(&flags.gamma1)?,
        gamma2: opt(&flags.gamma2)?,
        k1: opt(&flags.k1)?,
        k2: opt(&flags.k2)?,
        deg: flags.deg,
        seed: flags.seed,
        samples: flags.samples,
        tol: flags.tol,
    })
}

fn cmd_run(suite: &str, flags: &Flags, format: Format, out: Option<&PathBuf>) -> anyhow::Result<u8> {
    if !registry().iter().any(|d| d.name == suite) {
        eprintln!("unknown suite `{suite}`; see `haantjes list`");
        return Ok(EXIT_USAGE);
    }
    let params = suite_params(flags)?;
    let started = std::time::Instant::now();
    let report = run_suite(suite, &params).map_err(|e| anyhow!("suite failed: {e}"))?;
    eprintln!("suite `{suite}` finished in {:?}", started.elapsed());
    let rendered = match format {
        Format::Json => report.to_json(),
        Format::Text => report.render_text(),
    };
    println!("{rendered}");
    if let Some(path) = out {
        std::fs::write(path, report.to_json())
            .with_context(|| format!("writing report to {}", path.display()))?;
    }
    Ok(if report.passed { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_list() -> u8 {
    for d in registry() {
        println!("{:<22} {}", d.name, d.summary);
    }
    0
}

fn cmd_solve(
    hamiltonian: &str,
    integral: &str,
    deg: u32,
    momentum_free_a: bool,
    out: Option<&PathBuf>,
) -> anyhow::Result<u8> {
    let env = ParamEnv::symbolic_elliptic();
    let ctx = env.ctx();
    let h = parse_scalar(ctx, hamiltonian).map_err(|e| anyhow!("--H: {e}"))?;
    let i = parse_scalar(ctx, integral).map_err(|e| anyhow!("--I: {e}"))?;
    let mut spec = AnsatzSpec::degree(deg);
    if momentum_free_a {
        spec = spec.with_positions_only_a();
    }
    match solve_chain(&h, &i, &spec).map_err(|e| anyhow!("solver: {e}"))? {
        ChainOutcome::Family(family) => {
            let filtered = filter_haantjes(&family, &[]).map_err(|e| anyhow!("filter: {e}"))?;
            let mut doc = String::new();
            doc.push_str("# chain solutions (affine family and Haantjes-filtered members)\n");
            doc.push_str(&render_context(ctx));
            doc.push('\n');
            doc.push_str(&render_tensor("particular", &family.particular));
            for (k, b) in family.homogeneous.iter().enumerate() {
                doc.push('\n');
                doc.push_str(&render_tensor(&format!("basis_{k}"), b));
            }
            for (k, m) in filtered.iter().enumerate() {
                doc.push('\n');
                doc.push_str(&render_tensor(&format!("haantjes_member_{k}"), m));
            }
            match out {
                Some(path) => std::fs::write(path, &doc)
                    .with_context(|| format!("writing fixture to {}", path.display()))?,
                None => print!("{doc}"),
            }
            eprintln!(
                "family dimension {}, {} Haantjes members",
                family.dimension(),
                filtered.len()
            );
            Ok(0)
        }
        ChainOutcome::Infeasible { uncancelled } => {
            eprintln!("no solution in the ansatz; uncancelled monomials:");
            for m in &uncancelled {
                eprintln!("  {m}");
            }
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

fn cmd_report_diff(left: &PathBuf, right: &PathBuf) -> anyhow::Result<u8> {
    let read = |p: &PathBuf| -> anyhow::Result<serde_json::Value> {
        let text = std::fs::read_to_string(p)
            .with_context(|| format!("reading {}", p.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
    };
    let (l, r) = (read(left)?, read(right)?);
    let mut diffs = Vec::new();
    diff_values("", &l, &r, &mut diffs);
    if diffs.is_empty() {
        println!("reports are identical");
        Ok(0)
    } else {
        for d in &diffs {
            println!("{d}");
        }
        Ok(EXIT_CHECK_FAILED)
    }
}

fn diff_values(path: &str, l: &serde_json::Value, r: &serde_json::Value, out: &mut Vec<String>) {
    use serde_json::Value;
    match (l, r) {
        (Value::Object(a), Value::Object(b)) => {
            for key in a.keys().chain(b.keys()) {
                let p = format!("{path}/{key}");
                match (a.get(key), b.get(key)) {
                    (Some(x), Some(y)) => diff_values(&p, x, y, out),
                    (Some(_), None) => out.push(format!("{p}: only in left")),
                    (None, Some(_)) => out.push(format!("{p}: only in right")),
                    (None, None) => unreachable!(),
                }
            }
            out.dedup();
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                out.push(format!("{path}: length {} vs {}", a.len(), b.len()));
                return;
            }
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                diff_values(&format!("{path}[{i}]"), x, y, out);
            }
        }
        _ => {
            if l != r {
                out.push(format!("{path}: {l} vs {r}"));
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Run {
            suite,
            suite_flag,
            flags,
            format,
            out,
        } => match suite.as_ref().or(suite_flag.as_ref()) {
            Some(name) => cmd_run(name, flags, *format, out.as_ref()),
            None => {
                eprintln!("missing suite name; see `haantjes list`");
                Ok(EXIT_USAGE)
            }
        },
        Cmd::List => Ok(cmd_list()),
        Cmd::Solve {
            hamiltonian,
            integral,
            deg,
            momentum_free_a,
            out,
        } => cmd_solve(hamiltonian, integral, *deg, *momentum_free_a, out.as_ref()),
        Cmd::ReportDiff { left, right } => cmd_report_diff(left, right),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
