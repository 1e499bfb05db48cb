use std::collections::HashMap;
use std::str::FromStr;

use thiserror::Error;

use super::{Expr, ExprKind, Func, Span};
use crate::quat::Quaternion;

/// Largest accepted `|n|` in `e^n`.
pub const MAX_EXPONENT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("integer exponent required at byte {offset}")]
    IntegerExponent { offset: usize },
    #[error("exponent {value} at byte {offset} is out of range (|n| <= {MAX_EXPONENT})")]
    ExponentRange { offset: usize, value: i64 },
    #[error("expression must use the single variable `z`, found `{name}` at byte {offset}")]
    MultipleVariables { offset: usize, name: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { offset: usize, name: String },
    #[error("component `{unit}` given twice at byte {offset}")]
    DuplicateComponent { offset: usize, unit: char },
    #[error("invalid constant name `{name}`")]
    InvalidConstantName { name: String },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::IntegerExponent { offset }
            | ParseError::ExponentRange { offset, .. }
            | ParseError::MultipleVariables { offset, .. }
            | ParseError::UnknownFunction { offset, .. }
            | ParseError::DuplicateComponent { offset, .. } => Some(*offset),
            ParseError::InvalidConstantName { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    /// Real coefficient and unit index (0 = real, 1..=3 = i, j, k).
    Number(f64, usize),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(..) => "number".into(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn unit_index(c: u8) -> Option<usize> {
    match c {
        b'i' => Some(1),
        b'j' => Some(2),
        b'k' => Some(3),
        _ => None,
    }
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            pos += 1;
            out.push(Token {
                tok,
                span: Span::new(start, pos),
            });
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'.' {
                pos += 1;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
            }
            let digits = &text[start..pos];
            if !digits.bytes().any(|b| b.is_ascii_digit()) {
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: vec!["digit".into()],
                    found: "`.`".into(),
                });
            }
            let value: f64 = digits.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                expected: vec!["decimal number".into()],
                found: format!("`{digits}`"),
            })?;
            let mut unit = 0;
            if pos < bytes.len() {
                if let Some(u) = unit_index(bytes[pos]) {
                    if pos + 1 >= bytes.len() || !is_ident_char(bytes[pos + 1]) {
                        unit = u;
                        pos += 1;
                    }
                }
            }
            out.push(Token {
                tok: Tok::Number(value, unit),
                span: Span::new(start, pos),
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while pos < bytes.len() && is_ident_char(bytes[pos]) {
                pos += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..pos].to_string()),
                span: Span::new(start, pos),
            });
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(ParseError::Syntax {
            offset: start,
            expected: vec!["expression".into()],
            found: format!("character `{ch}`"),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(text.len(), text.len()),
    });
    Ok(out)
}

fn unit_quaternion(coef: f64, unit: usize) -> Quaternion {
    let mut c = [0.0; 4];
    c[unit] = coef;
    Quaternion::from_array(c)
}

fn is_reserved(name: &str) -> bool {
    matches!(name, "z" | "i" | "j" | "k") || Func::from_name(name).is_some()
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    constants: &'a HashMap<String, Quaternion>,
}

const PRIMARY_EXPECTED: [&str; 6] = [
    "number",
    "`z`",
    "unit `i`/`j`/`k`",
    "function call",
    "`(`",
    "`-`",
];

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            offset: t.span.start,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let ctor: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek().tok {
                Tok::Plus => ExprKind::Add,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(ctor(Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.power()?;
        loop {
            let ctor: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek().tok {
                Tok::Star => ExprKind::Mul,
                Tok::Slash => ExprKind::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.power()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(ctor(Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exponent = self.power()?;
        let n = integer_value(&exponent)?;
        if n.abs() > MAX_EXPONENT {
            return Err(ParseError::ExponentRange {
                offset: exponent.span.start,
                value: n,
            });
        }
        let span = base.span.join(exponent.span);
        Ok(Expr::new(ExprKind::PowInt(Box::new(base), n as i32), span))
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Minus {
            let start = self.bump().span;
            let inner = self.unary()?;
            let span = start.join(inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(v, unit) => {
                self.bump();
                Ok(Expr::new(ExprKind::Const(unit_quaternion(v, unit)), t.span))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error(&["`)`", "operator"]));
                }
                let close = self.bump().span;
                let span = t.span.join(close);
                Ok(match fold_literal(&inner) {
                    Some(q) => Expr::new(ExprKind::Const(q), span),
                    None => Expr::new(inner.kind, span),
                })
            }
            Tok::Ident(ref name) => {
                self.bump();
                self.identifier(name, t.span)
            }
            _ => Err(self.error(&PRIMARY_EXPECTED)),
        }
    }

    fn identifier(&mut self, name: &str, span: Span) -> Result<Expr, ParseError> {
        if name == "z" {
            return Ok(Expr::new(ExprKind::Var, span));
        }
        if let Some(u) = name
            .bytes()
            .next()
            .and_then(unit_index)
            .filter(|_| name.len() == 1)
        {
            return Ok(Expr::new(ExprKind::Const(unit_quaternion(1.0, u)), span));
        }
        if let Some(&q) = self.constants.get(name) {
            return Ok(Expr::new(ExprKind::Const(q), span));
        }
        if self.peek().tok == Tok::LParen {
            let Some(func) = Func::from_name(name) else {
                return Err(ParseError::UnknownFunction {
                    offset: span.start,
                    name: name.to_string(),
                });
            };
            self.bump();
            let arg = self.sum()?;
            if self.peek().tok != Tok::RParen {
                return Err(self.error(&["`)`", "operator"]));
            }
            let close = self.bump().span;
            return Ok(Expr::new(
                ExprKind::Call(func, Box::new(arg)),
                span.join(close),
            ));
        }
        if Func::from_name(name).is_some() {
            return Err(self.error(&["`(`"]));
        }
        Err(ParseError::MultipleVariables {
            offset: span.start,
            name: name.to_string(),
        })
    }
}

/// Sum of a tree made only of literal constants, `+`, `-` and negation.
fn fold_literal(e: &Expr) -> Option<Quaternion> {
    match &e.kind {
        ExprKind::Const(q) => Some(*q),
        ExprKind::Add(a, b) => Some(fold_literal(a)? + fold_literal(b)?),
        ExprKind::Sub(a, b) => Some(fold_literal(a)? - fold_literal(b)?),
        ExprKind::Neg(a) => Some(-fold_literal(a)?),
        _ => None,
    }
}

/// Integer value of an exponent tree: integer literals, negation and integer powers.
fn integer_value(e: &Expr) -> Result<i64, ParseError> {
    let fail = || ParseError::IntegerExponent {
        offset: e.span.start,
    };
    match &e.kind {
        ExprKind::Const(q) => {
            let x = q.x0;
            let real = q.x1 == 0.0 && q.x2 == 0.0 && q.x3 == 0.0;
            if real && x.fract() == 0.0 && x.abs() <= i64::MAX as f64 / 2.0 {
                Ok(x as i64)
            } else {
                Err(fail())
            }
        }
        ExprKind::Neg(a) => Ok(-integer_value(a)?),
        ExprKind::PowInt(a, n) if *n >= 0 => {
            let base = integer_value(a)?;
            base.checked_pow(*n as u32)
                .ok_or(ParseError::ExponentRange {
                    offset: e.span.start,
                    value: i64::MAX,
                })
        }
        _ => Err(fail()),
    }
}

/// Parses an expression in `z` with no named constants.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with_constants(text, &[])
}

/// Parses an expression in `z`, substituting each bound `name` by its value.
pub fn parse_with_constants(
    text: &str,
    constants: &[(&str, Quaternion)],
) -> Result<Expr, ParseError> {
    let mut map = HashMap::new();
    for &(name, q) in constants {
        let valid = !name.is_empty()
            && name
                .bytes()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == b'_')
            && name.bytes().all(is_ident_char);
        if !valid || is_reserved(name) {
            return Err(ParseError::InvalidConstantName {
                name: name.to_string(),
            });
        }
        map.insert(name.to_string(), q);
    }
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
        constants: &map,
    };
    let e = p.sum()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

/// Parses `a+bi+cj+dk`: signed terms, each a decimal with optional unit
/// suffix or a bare unit, each unit at most once.
pub fn parse_quaternion(text: &str) -> Result<Quaternion, ParseError> {
    let tokens = lex(text)?;
    let mut seen = [false; 4];
    let mut coords = [0.0; 4];
    let mut i = 0;
    let mut first = true;
    loop {
        let sign_tok = &tokens[i];
        let sign = match sign_tok.tok {
            Tok::Plus => 1.0,
            Tok::Minus => -1.0,
            Tok::Eof if !first => break,
            _ if first => 0.0,
            _ => {
                return Err(ParseError::Syntax {
                    offset: sign_tok.span.start,
                    expected: vec!["`+`".into(), "`-`".into(), "end of input".into()],
                    found: sign_tok.tok.describe(),
                })
            }
        };
        if sign != 0.0 {
            i += 1;
        }
        let t = &tokens[i];
        let (value, unit) = match &t.tok {
            Tok::Number(v, u) => (*v, *u),
            Tok::Ident(name) if name.len() == 1 && unit_index(name.as_bytes()[0]).is_some() => {
                (1.0, unit_index(name.as_bytes()[0]).unwrap_or(0))
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: t.span.start,
                    expected: vec!["number".into(), "unit `i`/`j`/`k`".into()],
                    found: other.describe(),
                })
            }
        };
        if seen[unit] {
            return Err(ParseError::DuplicateComponent {
                offset: t.span.start,
                unit: ['1', 'i', 'j', 'k'][unit],
            });
        }
        seen[unit] = true;
        coords[unit] = if sign < 0.0 { -value } else { value };
        i += 1;
        first = false;
    }
    Ok(Quaternion::from_array(coords))
}

impl FromStr for Quaternion {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_quaternion(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I1: Quaternion = Quaternion::I1;

    #[test]
    fn grammar_example() {
        let e = parse("exp(z)*z^2").unwrap();
        let expect = Expr::mul(
            Expr::call(Func::Exp, Expr::var()),
            Expr::pow(Expr::var(), 2),
        );
        assert_eq!(e, expect);
        assert_eq!(e.span, Span::new(0, 10));
    }

    #[test]
    fn bound_constant() {
        let c = Quaternion::new(2.0, 1.0, 0.0, 0.0);
        let e = parse_with_constants("1/(c - z)", &[("c", c)]).unwrap();
        let expect = Expr::div(
            Expr::constant(Quaternion::ONE),
            Expr::sub(Expr::constant(c), Expr::var()),
        );
        assert_eq!(e, expect);
        assert!(parse_with_constants("z", &[("z", c)]).is_err());
        assert!(parse_with_constants("z", &[("exp", c)]).is_err());
        assert!(parse_with_constants("z", &[("2x", c)]).is_err());
    }

    #[test]
    fn parenthesized_literal_folds() {
        let e = parse("(2+i)*z").unwrap();
        assert_eq!(
            e,
            Expr::mul(
                Expr::constant(Quaternion::new(2.0, 1.0, 0.0, 0.0)),
                Expr::var()
            )
        );
        // unparenthesized stays a sum
        let e = parse("2+i").unwrap();
        assert_eq!(
            e,
            Expr::add(Expr::constant(Quaternion::real(2.0)), Expr::constant(I1))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // unary minus binds tighter than ^
        assert_eq!(parse("-z^2").unwrap(), Expr::pow(Expr::neg(Expr::var()), 2));
        assert_eq!(parse("z^2^2").unwrap(), Expr::pow(Expr::var(), 4));
        assert_eq!(parse("z^-2").unwrap(), Expr::pow(Expr::var(), -2));
        assert_eq!(parse("z^(-3)").unwrap(), Expr::pow(Expr::var(), -3));
        assert_eq!(
            parse("z-z-z").unwrap(),
            Expr::sub(Expr::sub(Expr::var(), Expr::var()), Expr::var())
        );
        assert_eq!(
            parse("z+z*z").unwrap(),
            Expr::add(Expr::var(), Expr::mul(Expr::var(), Expr::var()))
        );
        assert_eq!(
            parse("2i*z").unwrap(),
            Expr::mul(Expr::constant(I1 * 2.0), Expr::var())
        );
    }

    #[test]
    fn exponent_errors() {
        assert_eq!(
            parse("z^(1.5)").unwrap_err(),
            ParseError::IntegerExponent { offset: 2 }
        );
        assert!(matches!(
            parse("z^z"),
            Err(ParseError::IntegerExponent { .. })
        ));
        assert!(matches!(
            parse("z^i"),
            Err(ParseError::IntegerExponent { .. })
        ));
        assert!(matches!(
            parse("z^5000"),
            Err(ParseError::ExponentRange { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("z + * 2").unwrap_err() {
            ParseError::Syntax {
                offset,
                expected,
                found,
            } => {
                assert_eq!(offset, 4);
                assert!(expected.iter().any(|e| e == "`z`"));
                assert_eq!(found, "`*`");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("(z"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("z)"),
            Err(ParseError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse("2z"),
            Err(ParseError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse("z # 1"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse(""),
            Err(ParseError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(parse("1e-3*z"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("exp z"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn variable_and_function_errors() {
        assert_eq!(
            parse("z*w").unwrap_err(),
            ParseError::MultipleVariables {
                offset: 2,
                name: "w".into()
            }
        );
        assert_eq!(
            parse("tan(z)").unwrap_err(),
            ParseError::UnknownFunction {
                offset: 0,
                name: "tan".into()
            }
        );
    }

    #[test]
    fn quaternion_literals() {
        assert_eq!(
            parse_quaternion("1-2i+0.5k").unwrap(),
            Quaternion::new(1.0, -2.0, 0.0, 0.5)
        );
        assert_eq!(parse_quaternion("i").unwrap(), I1);
        assert_eq!(parse_quaternion("-j").unwrap(), -Quaternion::I2);
        assert_eq!(parse_quaternion(" 3 ").unwrap(), Quaternion::real(3.0));
        assert_eq!(
            parse_quaternion("k+2").unwrap(),
            Quaternion::new(2.0, 0.0, 0.0, 1.0)
        );
        assert_eq!(
            "3+2i-1j+5k".parse::<Quaternion>().unwrap(),
            Quaternion::new(3.0, 2.0, -1.0, 5.0)
        );
        assert!(parse_quaternion("").is_err());
        assert!(parse_quaternion("1+").is_err());
        assert!(parse_quaternion("1 2").is_err());
        assert!(parse_quaternion("z").is_err());
        assert!(matches!(
            parse_quaternion("1i+2i"),
            Err(ParseError::DuplicateComponent { unit: 'i', .. })
        ));
    }

    #[test]
    fn display_round_trips_through_parse() {
        let q = Quaternion::new(-0.25, 3.0, -1.5, 0.0);
        assert_eq!(q.to_string().parse::<Quaternion>().unwrap(), q);
    }
}
