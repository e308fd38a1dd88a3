//! Closed-form series identifiers: a small expression language over `t`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 't' | name | func '(' expr ')' | '(' expr ')'
//! func   := sqrt | exp | log | tree | rev
//! ```
//!
//! `tree(f)` is `T(f)` where `T = t·exp(T)`; `rev(f)` is the compositional
//! inverse. A bare `name` refers to a named integer sequence.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{AlgebraicEquation, PowerSeries, SeriesError, SeriesKind};
use crate::exactmath::{binomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Expr {
    Num(Rational),
    T,
    Named(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Func {
    Sqrt,
    Exp,
    Log,
    Tree,
    Rev,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "tree" => Func::Tree,
            "rev" => Func::Rev,
            _ => return None,
        })
    }
}

/// A parsed closed form together with its coefficient convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesId {
    source: String,
    kind: SeriesKind,
    expr: Expr,
}

impl SeriesId {
    pub fn parse(source: &str, kind: SeriesKind) -> Result<Self, SeriesError> {
        let mut p = Parser { chars: source.char_indices().collect(), pos: 0 };
        let expr = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(SeriesId { source: source.trim().to_string(), kind, expr })
    }

    /// Looks up an entry of [`catalog`].
    pub fn named(name: &str) -> Result<Self, SeriesError> {
        catalog()
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|(_, src, kind)| SeriesId::parse(src, *kind).expect("catalog entries parse"))
            .ok_or_else(|| SeriesError::UnknownId(name.to_string()))
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    /// Exact coefficients up to `order`.
    pub fn expand(&self, order: usize) -> Result<PowerSeries, SeriesError> {
        let mut slack = 4;
        loop {
            let s = eval(&self.expr, order + slack, self.kind)?;
            if s.order() >= order {
                return Ok(s.truncate(order));
            }
            if slack > 4 * (order + 8) {
                return Err(SeriesError::Domain("precision loss while expanding".into()));
            }
            slack *= 2;
        }
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.source)
    }
}

/// Expands a catalog name or an expression.
pub fn expand(id: &SeriesId, order: usize) -> Result<PowerSeries, SeriesError> {
    id.expand(order)
}

/// Named closed forms: `(name, expression, kind)`.
pub fn catalog() -> &'static [(&'static str, &'static str, SeriesKind)] {
    use SeriesKind::{Exponential as E, Ordinary as O};
    &[
        ("geometric", "t/(1-t)", O),
        ("exp-minus-1", "exp(t)-1", E),
        ("minus-log", "-log(1-t)", E),
        ("catalan", "(1-2*t-sqrt(1-4*t))/(2*t)", O),
        ("catalan-shifted", "(1-sqrt(1-4*t))/2", O),
        ("linear-squared", "t/(1-t)^2", O),
        ("lambert", "tree(t)", E),
        ("t-exp", "t*exp(t)", E),
        ("schroeder", "(1-t-sqrt(1-6*t+t^2))/2", O),
        ("two-power-minus-1", "t/((1-t)*(1-2*t))", O),
        ("fubini", "(exp(t)-1)/(2-exp(t))", E),
        ("fine", "(1+2*t-sqrt(1-4*t))/(2*(2+t))", O),
        ("double-factorial", "1-sqrt(1-2*t)", E),
    ]
}

/// Integer sequences without a convenient closed form, indexed from `t^1`.
pub fn named_sequence(name: &str, order: usize) -> Option<Vec<Rational>> {
    match name {
        // (1/n) Σ_{j=n}^{2n-1} C(3n, n+1+j) C(j-1, j-n)
        "quadri" => Some(
            (1..=order as u64)
                .map(|n| {
                    let mut s = BigInt::zero();
                    for j in n..=2 * n - 1 {
                        s += binomial(3 * n, n + 1 + j) * binomial(j - 1, j - n);
                    }
                    &Rational::from(s) / &Rational::from(n)
                })
                .collect(),
        ),
        _ => None,
    }
}

fn eval(e: &Expr, order: usize, kind: SeriesKind) -> Result<PowerSeries, SeriesError> {
    Ok(match e {
        Expr::Num(r) => PowerSeries::constant(r.clone(), order, kind),
        Expr::T => PowerSeries::t(order, kind),
        Expr::Named(n) => {
            let c = named_sequence(n, order).ok_or_else(|| SeriesError::UnknownId(n.clone()))?;
            PowerSeries::from_coefficients(kind, c)
        }
        Expr::Neg(a) => eval(a, order, kind)?.neg(),
        Expr::Add(a, b) => eval(a, order, kind)?.add(&eval(b, order, kind)?),
        Expr::Sub(a, b) => eval(a, order, kind)?.sub(&eval(b, order, kind)?),
        Expr::Mul(a, b) => eval(a, order, kind)?.mul(&eval(b, order, kind)?),
        Expr::Div(a, b) => eval(a, order, kind)?.div(&eval(b, order, kind)?)?,
        Expr::Pow(a, k) => eval(a, order, kind)?.pow(*k),
        Expr::Call(f, a) => {
            let x = eval(a, order, kind)?;
            match f {
                Func::Sqrt => x.sqrt()?,
                Func::Exp => x.exp()?,
                Func::Log => x.log()?,
                Func::Rev => x.reversion()?,
                Func::Tree => {
                    let n = x.order();
                    let phi = PowerSeries::t(n, kind).exp()?;
                    let t = super::solve_algebraic(&AlgebraicEquation::Lagrange(phi), n, kind)?;
                    t.compose(&x)?
                }
            }
        }
    })
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> SeriesError {
        SeriesError::Syntax { column: self.pos + 1, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, SeriesError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SeriesError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SeriesError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SeriesError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let k: u32 = digits.parse().map_err(|_| self.error("expected a nonnegative integer exponent"))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !f(c) {
                break;
            }
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn atom(&mut self) -> Result<Expr, SeriesError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let r: Rational = digits.parse().map_err(|_| self.error("bad number"))?;
                Ok(Expr::Num(r))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                if name == "t" {
                    return Ok(Expr::T);
                }
                if self.peek() == Some('(') {
                    let f = Func::from_name(&name).ok_or_else(|| {
                        self.pos = start;
                        self.error(&format!("unknown function `{name}`"))
                    })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.error("expected `)`"));
                    }
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                if named_sequence(&name, 1).is_none() {
                    self.pos = start;
                    return Err(self.error(&format!("unknown sequence `{name}`")));
                }
                Ok(Expr::Named(name))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
