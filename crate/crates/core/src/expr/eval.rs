use thiserror::Error;

use super::{Expr, ExprKind, Func, Span};
use crate::autodiff::{self, HDual};
use crate::error::Error;
use crate::logarithm::{self, LogSolveConfig};
use crate::quat::Quaternion;
use crate::series::{self, Elementary, SeriesTruncation};
use crate::Side;

/// Numerical settings shared by evaluation and differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalContext {
    pub series: SeriesTruncation,
    pub log: LogSolveConfig,
}

/// A numerical error tagged with the subexpression that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{source}{}", .span.map(|s| format!(" (bytes {}..{})", s.start, s.end)).unwrap_or_default())]
pub struct EvalError {
    pub span: Option<Span>,
    pub source: Error,
}

impl EvalError {
    /// Message naming the offending subexpression of `text`.
    pub fn describe(&self, text: &str) -> String {
        match self.span.and_then(|s| s.slice(text)) {
            Some(snippet) if !snippet.is_empty() => format!("{} in `{snippet}`", self.source),
            _ => self.source.to_string(),
        }
    }
}

impl From<Error> for EvalError {
    fn from(source: Error) -> Self {
        Self { span: None, source }
    }
}

trait AtSpan<T> {
    fn at(self, span: Span) -> Result<T, EvalError>;
}

impl<T> AtSpan<T> for Result<T, Error> {
    fn at(self, span: Span) -> Result<T, EvalError> {
        self.map_err(|source| EvalError {
            span: Some(span),
            source,
        })
    }
}

fn elementary(func: Func) -> Option<Elementary> {
    match func {
        Func::Exp => Some(Elementary::Exp),
        Func::Sin => Some(Elementary::Sin),
        Func::Cos => Some(Elementary::Cos),
        Func::Ln | Func::Inv => None,
    }
}

/// Value of `expr` at `z0`.
pub fn evaluate(expr: &Expr, z0: Quaternion, ctx: &EvalContext) -> Result<Quaternion, EvalError> {
    let span = expr.span;
    Ok(match &expr.kind {
        ExprKind::Var => z0,
        ExprKind::Const(q) => *q,
        ExprKind::Add(a, b) => evaluate(a, z0, ctx)? + evaluate(b, z0, ctx)?,
        ExprKind::Sub(a, b) => evaluate(a, z0, ctx)? - evaluate(b, z0, ctx)?,
        ExprKind::Mul(a, b) => evaluate(a, z0, ctx)? * evaluate(b, z0, ctx)?,
        ExprKind::Div(a, b) => {
            let num = evaluate(a, z0, ctx)?;
            let den = evaluate(b, z0, ctx)?;
            num * den.inverse().at(b.span)?
        }
        ExprKind::Neg(a) => -evaluate(a, z0, ctx)?,
        ExprKind::PowInt(a, n) => evaluate(a, z0, ctx)?.pow_int(*n).at(span)?,
        ExprKind::Call(func, a) => {
            let w = evaluate(a, z0, ctx)?;
            match (func, elementary(*func)) {
                (_, Some(kind)) => series::eval_series(kind, w, &ctx.series).at(span)?.value,
                (Func::Ln, None) => logarithm::principal_log(w).at(span)?,
                _ => w.inverse().at(span)?,
            }
        }
    })
}

/// `(value, differential)` of `expr` at `z0`.
pub fn propagate(expr: &Expr, z0: Quaternion, ctx: &EvalContext) -> Result<HDual, EvalError> {
    let span = expr.span;
    Ok(match &expr.kind {
        ExprKind::Var => autodiff::lift_var(z0),
        ExprKind::Const(q) => autodiff::lift_const(*q),
        ExprKind::Add(a, b) => autodiff::d_add(&propagate(a, z0, ctx)?, &propagate(b, z0, ctx)?),
        ExprKind::Sub(a, b) => autodiff::d_sub(&propagate(a, z0, ctx)?, &propagate(b, z0, ctx)?),
        ExprKind::Mul(a, b) => autodiff::d_mul(&propagate(a, z0, ctx)?, &propagate(b, z0, ctx)?),
        ExprKind::Div(a, b) => {
            let num = propagate(a, z0, ctx)?;
            let den = autodiff::d_inv(&propagate(b, z0, ctx)?).at(b.span)?;
            autodiff::d_mul(&num, &den)
        }
        ExprKind::Neg(a) => {
            autodiff::d_scale(-Quaternion::ONE, &propagate(a, z0, ctx)?, Side::Right)
        }
        ExprKind::PowInt(a, n) => autodiff::d_pow(&propagate(a, z0, ctx)?, *n).at(span)?,
        ExprKind::Call(func, a) => {
            let inner = propagate(a, z0, ctx)?;
            match (func, elementary(*func)) {
                (_, Some(kind)) => autodiff::d_elementary(kind, &inner, &ctx.series).at(span)?,
                (Func::Ln, None) => logarithm::d_ln(&inner, &ctx.log).at(span)?,
                _ => autodiff::d_inv(&inner).at(span)?,
            }
        }
    })
}

/// H-derivative of `expr` at `z0`: the trace of the propagated differential.
pub fn differentiate(
    expr: &Expr,
    z0: Quaternion,
    ctx: &EvalContext,
) -> Result<Quaternion, EvalError> {
    propagate(expr, z0, ctx).map(|d| d.derivative())
}

/// Distance from `q` to the closed half-line of non-positive reals.
fn log_cut_distance(q: Quaternion) -> f64 {
    if q.x0 > 0.0 {
        q.norm()
    } else {
        q.imag().norm()
    }
}

impl Expr {
    /// Smallest distance of any `inv`/`/` argument from 0 and of any `ln`
    /// argument from the non-positive reals, at `z0`. Infinite if none occur.
    pub fn singularity_margin(&self, z0: Quaternion, ctx: &EvalContext) -> Result<f64, EvalError> {
        Ok(match &self.kind {
            ExprKind::Var | ExprKind::Const(_) => f64::INFINITY,
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => a
                .singularity_margin(z0, ctx)?
                .min(b.singularity_margin(z0, ctx)?),
            ExprKind::Div(a, b) => {
                let own = evaluate(b, z0, ctx)?.norm();
                own.min(a.singularity_margin(z0, ctx)?)
                    .min(b.singularity_margin(z0, ctx)?)
            }
            ExprKind::Neg(a) => a.singularity_margin(z0, ctx)?,
            ExprKind::PowInt(a, n) => {
                let inner = a.singularity_margin(z0, ctx)?;
                if *n < 0 {
                    inner.min(evaluate(a, z0, ctx)?.norm())
                } else {
                    inner
                }
            }
            ExprKind::Call(func, a) => {
                let inner = a.singularity_margin(z0, ctx)?;
                match func {
                    Func::Inv => inner.min(evaluate(a, z0, ctx)?.norm()),
                    Func::Ln => inner.min(log_cut_distance(evaluate(a, z0, ctx)?)),
                    Func::Exp | Func::Sin | Func::Cos => inner,
                }
            }
        })
    }

    /// `z ↦ evaluate(self, z)` for the finite-difference oracles.
    pub fn evaluator<'a>(
        &'a self,
        ctx: &'a EvalContext,
    ) -> impl Fn(Quaternion) -> Result<Quaternion, EvalError> + 'a {
        move |z| evaluate(self, z, ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    const I1: Quaternion = Quaternion::I1;
    const I2: Quaternion = Quaternion::I2;
    const I3: Quaternion = Quaternion::I3;

    fn ctx() -> EvalContext {
        EvalContext::default()
    }

    #[test]
    fn evaluate_examples() {
        let v = evaluate(&parse("z^2").unwrap(), I1 + I2, &ctx()).unwrap();
        assert_eq!(v, Quaternion::real(-2.0));
        let z0 = Quaternion::new(1.0, 2.0, 0.0, -1.0);
        let v = evaluate(&parse("exp(ln(z))").unwrap(), z0, &ctx()).unwrap();
        assert!(v.approx_eq(z0, 1e-10));
    }

    #[test]
    fn domain_errors_carry_spans() {
        let text = "z + inv(z)";
        let err = evaluate(&parse(text).unwrap(), Quaternion::ZERO, &ctx()).unwrap_err();
        assert_eq!(err.span, Some(Span::new(4, 10)));
        assert!(matches!(err.source, Error::Domain(_)));
        assert_eq!(
            err.describe(text),
            "domain error: no inverse of 0 in `inv(z)`"
        );

        let text = "1/(2 - z)";
        let err = differentiate(&parse(text).unwrap(), Quaternion::real(2.0), &ctx()).unwrap_err();
        assert_eq!(err.span.and_then(|s| s.slice(text)), Some("(2 - z)"));

        let err = evaluate(&parse("ln(z)").unwrap(), Quaternion::real(-2.0), &ctx()).unwrap_err();
        assert!(err.to_string().contains("branch point"), "{err}");
    }

    #[test]
    fn differentiate_examples() {
        let z0 = Quaternion::ONE + I2;
        let d = differentiate(&parse("z^3").unwrap(), z0, &ctx()).unwrap();
        assert!(d.approx_eq(I2 * 6.0, 1e-13), "{d}");

        let d = differentiate(&parse("sin(z)").unwrap(), Quaternion::real(0.3), &ctx()).unwrap();
        assert!(d.approx_eq(Quaternion::real(0.3f64.cos()), 1e-14));

        let d = differentiate(&parse("inv(2 - z)").unwrap(), I3, &ctx()).unwrap();
        let expect = (Quaternion::real(2.0) - I3).pow_int(-2).unwrap();
        assert!(d.approx_eq(expect, 1e-14));
    }

    #[test]
    fn right_division_order() {
        // z/c = z·c⁻¹ has derivative c⁻¹; inv(c)*z also, but c*z differs from z*c in value
        let c = Quaternion::new(1.0, 2.0, 0.0, 1.0);
        let e = crate::expr::parse_with_constants("(z*c)/c - z", &[("c", c)]).unwrap();
        let z0 = Quaternion::new(0.3, -0.2, 1.0, 0.5);
        let v = evaluate(&e, z0, &ctx()).unwrap();
        assert!(v.approx_eq(Quaternion::ZERO, 1e-15));
        let d = differentiate(&e, z0, &ctx()).unwrap();
        assert!(d.approx_eq(Quaternion::ZERO, 1e-15));
    }

    #[test]
    fn singularity_margins() {
        let m = |text: &str, z0| parse(text).unwrap().singularity_margin(z0, &ctx()).unwrap();
        assert_eq!(m("exp(z)*z^3", I1), f64::INFINITY);
        assert_eq!(m("inv(2 - z)", Quaternion::real(1.5)), 0.5);
        assert_eq!(m("1/z + z^-2", I1 * 0.25), 0.25);
        assert_eq!(m("ln(z)", Quaternion::new(-3.0, 0.0, 0.4, 0.3)), 0.5);
        assert_eq!(m("ln(z)", Quaternion::new(3.0, 0.0, 4.0, 0.0)), 5.0);
        assert!(parse("ln(inv(z))")
            .unwrap()
            .singularity_margin(Quaternion::ZERO, &ctx())
            .is_err());
    }

    #[test]
    fn propagate_value_matches_evaluate() {
        let e = parse("exp(z)*sin(z) - ln(z)/(1+z^2) + cos(inv(z))").unwrap();
        let z0 = Quaternion::new(0.4, 0.9, -0.3, 0.2);
        let v = evaluate(&e, z0, &ctx()).unwrap();
        let d = propagate(&e, z0, &ctx()).unwrap();
        assert!(d.value.approx_eq(v, 1e-14));
        assert_eq!(d.diagnostics.condition_numbers.len(), 1);
        assert!(d.diagnostics.series_order.is_some());
    }
}
