//! A small arithmetic expression grammar for scenario files:
//! `+ - * / ^ sin cos atan`, numeric constants, `pi`, variables
//! `x1..xn` and `t`. Expressions are differentiated symbolically so
//! one-form components stay exactly closed.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("parse error at byte {0}: {1}")]
    Parse(usize, String),
    #[error("variable x{0} exceeds the scenario dimension")]
    VarOutOfRange(usize),
    #[error("cannot differentiate a power with non-constant exponent")]
    NonConstantExponent,
}

/// Variable reference: a base coordinate or the product coordinate t
/// (always the last coordinate of a product scenario).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X(usize),
    T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Atan(Box<Expr>),
}

impl Expr {
    /// Evaluates with `t` mapped to the last entry of `x`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::X(k)) => x[*k],
            Expr::Var(Var::T) => x[x.len() - 1],
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Expr::Neg(a) => -a.eval(x),
            Expr::Sin(a) => a.eval(x).sin(),
            Expr::Cos(a) => a.eval(x).cos(),
            Expr::Atan(a) => a.eval(x).atan(),
        }
    }

    /// Largest x-index mentioned, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(Var::X(k)) => Some(*k),
            Expr::Var(Var::T) => None,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.max_var().max(b.max_var()),
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Atan(a) => a.max_var(),
        }
    }

    pub fn uses_t(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(Var::X(_)) => false,
            Expr::Var(Var::T) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.uses_t() || b.uses_t(),
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Atan(a) => a.uses_t(),
        }
    }

    /// Symbolic partial derivative with respect to `v`.
    pub fn diff(&self, v: Var) -> Result<Expr, ExprError> {
        use Expr::*;
        let zero = Const(0.0);
        Ok(match self {
            Const(_) => zero,
            Var(w) => {
                if *w == v {
                    Const(1.0)
                } else {
                    zero
                }
            }
            Add(a, b) => add(a.diff(v)?, b.diff(v)?),
            Sub(a, b) => sub(a.diff(v)?, b.diff(v)?),
            Mul(a, b) => add(
                mul(a.diff(v)?, (**b).clone()),
                mul((**a).clone(), b.diff(v)?),
            ),
            Div(a, b) => {
                // (a'b − ab') / b²
                let num = sub(
                    mul(a.diff(v)?, (**b).clone()),
                    mul((**a).clone(), b.diff(v)?),
                );
                div(num, mul((**b).clone(), (**b).clone()))
            }
            Pow(a, b) => {
                let Const(c) = **b else {
                    return Err(ExprError::NonConstantExponent);
                };
                // c·a^(c−1)·a'
                mul(
                    mul(Const(c), pow((**a).clone(), Const(c - 1.0))),
                    a.diff(v)?,
                )
            }
            Neg(a) => neg(a.diff(v)?),
            Sin(a) => mul(Cos(a.clone()), a.diff(v)?),
            Cos(a) => neg(mul(Sin(a.clone()), a.diff(v)?)),
            Atan(a) => div(
                a.diff(v)?,
                add(Const(1.0), mul((**a).clone(), (**a).clone())),
            ),
        })
    }
}

// Constant-folding smart constructors keep derivatives compact.
fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (Expr::Const(c), b) if c == 0.0 => b,
        (a, Expr::Const(c)) if c == 0.0 => a,
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (a, Expr::Const(c)) if c == 0.0 => a,
        (Expr::Const(c), b) if c == 0.0 => neg(b),
        (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        (Expr::Const(c), _) | (_, Expr::Const(c)) if c == 0.0 => Expr::Const(0.0),
        (Expr::Const(c), b) if c == 1.0 => b,
        (a, Expr::Const(c)) if c == 1.0 => a,
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(c), _) if c == 0.0 => Expr::Const(0.0),
        (a, Expr::Const(c)) if c == 1.0 => a,
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(x) => Expr::Const(-x),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (_, Expr::Const(c)) if *c == 0.0 => Expr::Const(1.0),
        (_, Expr::Const(c)) if *c == 1.0 => a,
        _ => Expr::Pow(Box::new(a), Box::new(b)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(Var::X(k)) => write!(f, "x{}", k + 1),
            Expr::Var(Var::T) => write!(f, "t"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Atan(a) => write!(f, "atan({a})"),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(ExprError::Parse(p.pos, "trailing input".into()));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), ExprError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ExprError::Parse(self.pos, format!("expected '{}'", b as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            // right-associative, and `-` binds weaker: x^-2 is allowed
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => self.number(),
            Some(b) if b.is_ascii_alphabetic() => self.ident(),
            _ => Err(ExprError::Parse(self.pos, "expected expression".into())),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit() || *b == b'.' || *b == b'e' || *b == b'E')
        {
            // exponent sign
            if (self.bytes[self.pos] == b'e' || self.bytes[self.pos] == b'E')
                && matches!(self.bytes.get(self.pos + 1), Some(b'+') | Some(b'-'))
            {
                self.pos += 1;
            }
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|e| ExprError::Parse(start, e.to_string()))
    }

    fn ident(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match name {
            "pi" => Ok(Expr::Const(std::f64::consts::PI)),
            "t" => Ok(Expr::Var(Var::T)),
            "sin" | "cos" | "atan" => {
                self.expect(b'(')?;
                let arg = Box::new(self.expr()?);
                self.expect(b')')?;
                Ok(match name {
                    "sin" => Expr::Sin(arg),
                    "cos" => Expr::Cos(arg),
                    _ => Expr::Atan(arg),
                })
            }
            _ => {
                if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
                    if idx >= 1 {
                        return Ok(Expr::Var(Var::X(idx - 1)));
                    }
                }
                Err(ExprError::Parse(start, format!("unknown identifier `{name}`")))
            }
        }
    }
}
