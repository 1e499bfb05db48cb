use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hderiv::check::{self, CheckReport, ReportDocument};
use hderiv::diffops::{DiffConfig, Scheme};
use hderiv::expr::{self, EvalContext, ParseError};
use hderiv::series::SeriesTruncation;
use hderiv::Quaternion;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// H-derivatives of quaternion expressions in one variable `z`.
#[derive(Debug, Parser)]
#[command(name = "hderiv", version)]
struct Cli {
    /// Series truncation tolerance.
    #[arg(long, global = true, default_value_t = 1e-14)]
    eps: f64,

    /// Largest series order allowed.
    #[arg(long, global = true, default_value_t = 200)]
    nmax: usize,

    /// Bind a named constant, e.g. `--bind c=2+i`. Repeatable.
    #[arg(
        long = "bind",
        global = true,
        value_name = "NAME=Q",
        allow_hyphen_values = true
    )]
    bind: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value of EXPR at a point.
    Eval(PointArgs),
    /// H-derivative of EXPR at a point.
    Diff(PointArgs),
    /// Compare the H-derivative with a finite-difference oracle.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct PointArgs {
    expr: String,
    #[arg(long, allow_hyphen_values = true)]
    at: String,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Required unless --corpus is given.
    #[arg(required_unless_present = "corpus")]
    expr: Option<String>,

    /// Comma-separated points.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "corpus")]
    at: Option<String>,

    #[arg(long, default_value_t = 1e-5)]
    step: f64,

    #[arg(long, default_value_t = 1e-6)]
    tol: f64,

    /// Use forward instead of central differences.
    #[arg(long)]
    forward: bool,

    /// Emit JSON: one document per expression, one per line.
    #[arg(long)]
    json: bool,

    /// File of `EXPR ; POINT` lines.
    #[arg(long, conflicts_with_all = ["expr", "at"])]
    corpus: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn fail(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAIL,
            message: message.into(),
        }
    }

    fn parse(text: &str, err: ParseError) -> Self {
        Self::usage(format!(
            "{err}\n  {text}\n  {}^",
            " ".repeat(err.offset().unwrap_or(0))
        ))
    }
}

fn parse_bindings(raw: &[String]) -> Result<Vec<(String, Quaternion)>, Failure> {
    raw.iter()
        .map(|b| {
            let (name, value) = b
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("--bind expects NAME=Q, got `{b}`")))?;
            let q = expr::parse_quaternion(value.trim())
                .map_err(|e| Failure::parse(value.trim(), e))?;
            Ok((name.trim().to_string(), q))
        })
        .collect()
}

fn parse_point(text: &str) -> Result<Quaternion, Failure> {
    expr::parse_quaternion(text.trim()).map_err(|e| Failure::parse(text.trim(), e))
}

fn print_text(reports: &[CheckReport]) {
    for r in reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        match (&r.error, r.ad_derivative, r.fd_derivative, r.abs_error) {
            (None, Some(ad), Some(fd), Some(err)) => {
                println!(
                    "{status} {} at {}: ad {ad}, fd {fd}, error {err:.3e} (tol {:.1e})",
                    r.expression, r.point, r.tolerance
                );
                let d = &r.diagnostics;
                if let Some(n) = d.series_order {
                    print!("     series order {n}");
                    if let Some(t) = d.tail_bound {
                        print!(", tail bound {t:.3e}");
                    }
                    println!();
                }
                if !d.condition_numbers.is_empty() {
                    let conds: Vec<_> = d
                        .condition_numbers
                        .iter()
                        .map(|c| format!("{c:.3e}"))
                        .collect();
                    println!("     condition numbers {}", conds.join(", "));
                }
            }
            (err, ..) => println!(
                "{status} {} at {}: {}",
                r.expression,
                r.point,
                err.as_deref().unwrap_or("no result")
            ),
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let series =
        SeriesTruncation::new(cli.eps, cli.nmax).map_err(|e| Failure::usage(e.to_string()))?;
    let ctx = EvalContext {
        series,
        ..EvalContext::default()
    };
    let owned = parse_bindings(&cli.bind)?;
    let bindings: Vec<(&str, Quaternion)> = owned.iter().map(|(n, q)| (n.as_str(), *q)).collect();

    match cli.command {
        Command::Eval(args) => {
            let e = expr::parse_with_constants(&args.expr, &bindings)
                .map_err(|e| Failure::parse(&args.expr, e))?;
            let z0 = parse_point(&args.at)?;
            let v = expr::evaluate(&e, z0, &ctx)
                .map_err(|err| Failure::fail(err.describe(&args.expr)))?;
            println!("{v}");
            Ok(true)
        }
        Command::Diff(args) => {
            let e = expr::parse_with_constants(&args.expr, &bindings)
                .map_err(|e| Failure::parse(&args.expr, e))?;
            let z0 = parse_point(&args.at)?;
            let d = expr::differentiate(&e, z0, &ctx)
                .map_err(|err| Failure::fail(err.describe(&args.expr)))?;
            println!("{d}");
            Ok(true)
        }
        Command::Check(args) => {
            let scheme = if args.forward {
                Scheme::Forward
            } else {
                Scheme::Central
            };
            let cfg = DiffConfig::new(args.step, scheme, args.tol)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let docs = match &args.corpus {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        Failure::usage(format!("cannot read {}: {e}", path.display()))
                    })?;
                    let entries =
                        check::parse_corpus(&text).map_err(|e| Failure::usage(e.to_string()))?;
                    check::run_corpus(&entries, &bindings, &cfg, &ctx)
                        .map_err(|e| Failure::usage(e.to_string()))?
                }
                None => {
                    // clap guarantees both are present without --corpus
                    let text = args.expr.as_deref().unwrap_or_default();
                    let points = args
                        .at
                        .as_deref()
                        .unwrap_or_default()
                        .split(',')
                        .map(parse_point)
                        .collect::<Result<Vec<_>, _>>()?;
                    let reports = check::cmd_check(text, &bindings, &points, &cfg, &ctx)
                        .map_err(|e| Failure::parse(text, e))?;
                    vec![ReportDocument::new(text, reports)]
                }
            };
            for doc in &docs {
                if args.json {
                    let line =
                        serde_json::to_string(doc).map_err(|e| Failure::fail(e.to_string()))?;
                    println!("{line}");
                } else {
                    print_text(&doc.results);
                }
            }
            Ok(docs.iter().all(ReportDocument::all_pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
