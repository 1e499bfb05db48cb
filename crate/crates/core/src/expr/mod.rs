//! Expressions in one quaternion variable `z`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := power (('*' | '/') power)*
//! power   := unary ('^' power)?            exponent must fold to an integer
//! unary   := '-' unary | primary
//! primary := number [i|j|k] | i | j | k | z | NAME | FUNC '(' sum ')' | '(' sum ')'
//! ```
//!
//! `FUNC` is one of `exp`, `sin`, `cos`, `ln`, `inv`; `NAME` is a constant
//! bound by the caller. `a / b` means `a·inv(b)`; write `inv(b)*a` for the
//! other order. Numbers are plain decimals without exponents. A
//! parenthesized group built only from literals with `+`/`-` is folded into
//! one quaternion constant, so `(1-2i+0.5k)` is a single [`ExprKind::Const`].

mod eval;
mod parse;

use std::fmt;

use crate::quat::Quaternion;

pub use eval::{differentiate, evaluate, propagate, EvalContext, EvalError};
pub use parse::{parse, parse_quaternion, parse_with_constants, ParseError};

/// Byte range `start..end` in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    /// The spanned slice of `source`, if in range.
    pub fn slice(self, source: &str) -> Option<&str> {
        source.get(self.start..self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Ln,
    Inv,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Exp, Func::Sin, Func::Cos, Func::Ln, Func::Inv];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Ln => "ln",
            Func::Inv => "inv",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// A node with its source span. Equality compares structure only.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Var,
    Const(Quaternion),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `a · inv(b)`.
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    PowInt(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

// Span-free constructors, mostly for building expected trees in tests.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Self { kind, span }
    }

    fn bare(kind: ExprKind) -> Self {
        Self::new(kind, Span::default())
    }

    pub fn var() -> Self {
        Self::bare(ExprKind::Var)
    }

    pub fn constant(q: Quaternion) -> Self {
        Self::bare(ExprKind::Const(q))
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Self::bare(ExprKind::Add(Box::new(a), Box::new(b)))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Self::bare(ExprKind::Sub(Box::new(a), Box::new(b)))
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Self::bare(ExprKind::Mul(Box::new(a), Box::new(b)))
    }

    pub fn div(a: Expr, b: Expr) -> Self {
        Self::bare(ExprKind::Div(Box::new(a), Box::new(b)))
    }

    pub fn neg(a: Expr) -> Self {
        Self::bare(ExprKind::Neg(Box::new(a)))
    }

    pub fn pow(a: Expr, n: i32) -> Self {
        Self::bare(ExprKind::PowInt(Box::new(a), n))
    }

    pub fn call(f: Func, a: Expr) -> Self {
        Self::bare(ExprKind::Call(f, Box::new(a)))
    }

    /// Whether the variable occurs anywhere in the tree.
    pub fn contains_var(&self) -> bool {
        match &self.kind {
            ExprKind::Var => true,
            ExprKind::Const(_) => false,
            ExprKind::Add(a, b)
            | ExprKind::Sub(a, b)
            | ExprKind::Mul(a, b)
            | ExprKind::Div(a, b) => a.contains_var() || b.contains_var(),
            ExprKind::Neg(a) | ExprKind::PowInt(a, _) | ExprKind::Call(_, a) => a.contains_var(),
        }
    }

    fn is_neg(&self) -> bool {
        matches!(self.kind, ExprKind::Neg(_))
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) | ExprKind::Div(..) => 2,
            ExprKind::PowInt(..) => 3,
            ExprKind::Neg(..) => 4,
            ExprKind::Const(q) if !is_plain_real(*q) => 5,
            ExprKind::Var | ExprKind::Const(_) | ExprKind::Call(..) => 5,
        }
    }
}

fn is_plain_real(q: Quaternion) -> bool {
    q.x1 == 0.0 && q.x2 == 0.0 && q.x3 == 0.0 && q.x0 >= 0.0 && !q.x0.is_sign_negative()
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Renders text that parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        let binary = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr| {
            write_child(f, a, a.precedence() < prec)?;
            f.write_str(op)?;
            // `a- -b` rather than `a--b`; parentheses would fold a negated literal
            if op == "-" && b.is_neg() {
                f.write_str(" ")?;
            }
            write_child(f, b, b.precedence() <= prec)
        };
        match &self.kind {
            ExprKind::Var => f.write_str("z"),
            ExprKind::Const(q) if is_plain_real(*q) => write!(f, "{}", q.x0),
            ExprKind::Const(q) => write!(f, "({q})"),
            ExprKind::Add(a, b) => binary(f, a, "+", b),
            ExprKind::Sub(a, b) => binary(f, a, "-", b),
            ExprKind::Mul(a, b) => binary(f, a, "*", b),
            ExprKind::Div(a, b) => binary(f, a, "/", b),
            ExprKind::Neg(a) => {
                f.write_str(if a.is_neg() { "- " } else { "-" })?;
                write_child(f, a, a.precedence() < prec)
            }
            ExprKind::PowInt(a, n) => {
                write_child(f, a, a.precedence() <= prec)?;
                write!(f, "^{n}")
            }
            ExprKind::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
