//! Autodiff-versus-oracle checks and their JSON reports.
//!
//! Every report compares the H-derivative from [`crate::expr::differentiate`]
//! with the real-axis difference quotient from [`crate::diffops::fd_partial_x0`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diffops::{fd_partial_x0, DiffConfig};
use crate::expr::{self, EvalContext, EvalError, Expr, ParseError};
use crate::quat::Quaternion;

/// Value of the `schema` field of every report document.
pub const REPORT_SCHEMA: &str = "hderiv-report/1";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportDiagnostics {
    /// Highest series power kept by any `exp`/`sin`/`cos` node.
    pub series_order: Option<usize>,
    /// Second-order remainder bound of those series at `|h| = step`.
    pub tail_bound: Option<f64>,
    /// Condition numbers of the solves behind each `ln` node.
    pub condition_numbers: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub expression: String,
    pub point: Quaternion,
    pub ad_derivative: Option<Quaternion>,
    pub fd_derivative: Option<Quaternion>,
    pub abs_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub error: Option<String>,
    pub diagnostics: ReportDiagnostics,
}

/// One expression checked at a list of points, in input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub expression: String,
    pub results: Vec<CheckReport>,
}

impl ReportDocument {
    pub fn new(expression: impl Into<String>, results: Vec<CheckReport>) -> Self {
        Self {
            schema: REPORT_SCHEMA.to_string(),
            expression: expression.into(),
            results,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

fn failed(text: &str, z0: Quaternion, cfg: &DiffConfig, err: &EvalError) -> CheckReport {
    CheckReport {
        expression: text.to_string(),
        point: z0,
        ad_derivative: None,
        fd_derivative: None,
        abs_error: None,
        tolerance: cfg.tol,
        pass: false,
        error: Some(err.describe(text)),
        diagnostics: ReportDiagnostics::default(),
    }
}

/// Compares autodiff with the oracle at one point. Errors land in the report.
pub fn check_point(
    text: &str,
    expr: &Expr,
    z0: Quaternion,
    cfg: &DiffConfig,
    ctx: &EvalContext,
) -> CheckReport {
    let dual = match expr::propagate(expr, z0, ctx) {
        Ok(d) => d,
        Err(e) => return failed(text, z0, cfg, &e),
    };
    let fd = match fd_partial_x0(&expr.evaluator(ctx), z0, cfg) {
        Ok(d) => d,
        Err(e) => return failed(text, z0, cfg, &e),
    };
    let ad = dual.derivative();
    let abs_error = ad.dist(fd);
    let diag = &dual.diagnostics;
    let step = cfg.step;
    CheckReport {
        expression: text.to_string(),
        point: z0,
        ad_derivative: Some(ad),
        fd_derivative: Some(fd),
        abs_error: Some(abs_error),
        tolerance: cfg.tol,
        pass: abs_error <= cfg.tol,
        error: None,
        diagnostics: ReportDiagnostics {
            series_order: diag.series_order,
            tail_bound: diag
                .tail_constant
                .filter(|_| step < 1.0)
                .map(|k| k * step * step / (1.0 - step)),
            condition_numbers: diag.condition_numbers.clone(),
        },
    }
}

pub fn check_expr(
    text: &str,
    expr: &Expr,
    points: &[Quaternion],
    cfg: &DiffConfig,
    ctx: &EvalContext,
) -> Vec<CheckReport> {
    points
        .iter()
        .map(|&z0| check_point(text, expr, z0, cfg, ctx))
        .collect()
}

/// Parses `text` once and checks it at every point.
pub fn cmd_check(
    text: &str,
    constants: &[(&str, Quaternion)],
    points: &[Quaternion],
    cfg: &DiffConfig,
    ctx: &EvalContext,
) -> Result<Vec<CheckReport>, ParseError> {
    let expr = expr::parse_with_constants(text, constants)?;
    Ok(check_expr(text, &expr, points, cfg, ctx))
}

/// One `EXPR ; POINT` line of a corpus file.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    /// 1-based line number.
    pub line: usize,
    pub expression: String,
    pub point: Quaternion,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusError {
    Format { line: usize },
    Point { line: usize, source: ParseError },
    Expression { line: usize, source: ParseError },
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::Format { line } => {
                write!(f, "corpus line {line}: expected `EXPR ; POINT`")
            }
            CorpusError::Point { line, source } => {
                write!(f, "corpus line {line}: bad point: {source}")
            }
            CorpusError::Expression { line, source } => {
                write!(f, "corpus line {line}: bad expression: {source}")
            }
        }
    }
}

impl std::error::Error for CorpusError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CorpusError::Format { .. } => None,
            CorpusError::Point { source, .. } | CorpusError::Expression { source, .. } => {
                Some(source)
            }
        }
    }
}

/// Reads newline-delimited `EXPR ; POINT` pairs; blank lines and `#` comments are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (expr, point) = trimmed
            .rsplit_once(';')
            .ok_or(CorpusError::Format { line })?;
        let expression = expr.trim();
        if expression.is_empty() {
            return Err(CorpusError::Format { line });
        }
        let point = expr::parse_quaternion(point.trim())
            .map_err(|source| CorpusError::Point { line, source })?;
        out.push(CorpusEntry {
            line,
            expression: expression.to_string(),
            point,
        });
    }
    Ok(out)
}

/// Checks a corpus, grouping consecutive lines with the same expression into one document.
pub fn run_corpus(
    entries: &[CorpusEntry],
    constants: &[(&str, Quaternion)],
    cfg: &DiffConfig,
    ctx: &EvalContext,
) -> Result<Vec<ReportDocument>, CorpusError> {
    let mut docs = Vec::new();
    for group in entries.chunk_by(|a, b| a.expression == b.expression) {
        let first = &group[0];
        let expr = expr::parse_with_constants(&first.expression, constants).map_err(|source| {
            CorpusError::Expression {
                line: first.line,
                source,
            }
        })?;
        let points: Vec<_> = group.iter().map(|e| e.point).collect();
        let results = check_expr(&first.expression, &expr, &points, cfg, ctx);
        docs.push(ReportDocument::new(first.expression.clone(), results));
    }
    Ok(docs)
}
