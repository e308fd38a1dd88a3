use std::collections::BTreeMap;

use thiserror::Error;

use super::{check_relation, validate, Diagnostic, Equivariance, Generator, Mode, Presentation, Relation, TreeExpr};
use crate::exactmath::{Permutation, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Punct(char),
}

struct Line {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Line {
    fn new(text: &str, line: usize) -> Result<Line, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let col = i + 1;
            if c.is_ascii_alphabetic() || c == '_' {
                let s: String = chars[i..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '_').collect();
                i += s.len();
                toks.push((Tok::Ident(s), col));
            } else if c.is_ascii_digit() {
                let s: String = chars[i..].iter().take_while(|c| c.is_ascii_digit()).collect();
                i += s.len();
                toks.push((Tok::Int(s), col));
            } else if "()[],=+-*/".contains(c) {
                toks.push((Tok::Punct(c), col));
                i += 1;
            } else {
                return Err(ParseError { line, column: col, message: format!("unexpected character `{c}`") });
            }
        }
        Ok(Line { toks, pos: 0, line, end_col: chars.len() + 1 })
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.col(), message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{kw}`"))),
        }
    }

    fn int(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Int(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    /// `[-] int [/ int]`
    fn rational(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat('-');
        let col = self.col();
        let n = self.int()?;
        let mut text = n;
        if self.peek() == Some(&Tok::Punct('/')) && matches!(self.peek_at(1), Some(Tok::Int(_))) {
            self.pos += 1;
            text = format!("{text}/{}", self.int()?);
        }
        let r: Rational = text
            .parse()
            .map_err(|_| ParseError { line: self.line, column: col, message: format!("invalid rational `{text}`") })?;
        Ok(if neg { -r } else { r })
    }
}

fn variable_index(s: &str) -> Option<usize> {
    let rest = s.strip_prefix('x')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn valid_symbol(s: &str) -> bool {
    variable_index(s).is_none() && !matches!(s, "op" | "rel" | "sym" | "arity" | "param" | "name" | "mode")
}

/// Parses DSL source into a validated presentation.
pub fn parse(text: &str) -> Result<Presentation, ParseError> {
    parse_with_params(text, &[])
}

/// Like [`parse`], overriding the values of declared parameters.
pub fn parse_with_params(text: &str, overrides: &[(&str, Rational)]) -> Result<Presentation, ParseError> {
    let mut name: Option<String> = None;
    let mut mode: Option<Mode> = None;
    let mut p = Presentation::new("", Mode::Symmetric);
    let mut params: BTreeMap<String, Rational> = BTreeMap::new();
    let mut rel_lines: Vec<usize> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        // the name is the raw rest of the line, so it may hold any characters
        let trimmed = raw.trim_start();
        if let Some(rest) = trimmed.strip_prefix("name").filter(|r| r.is_empty() || r.starts_with(char::is_whitespace)) {
            let rest = rest.split('#').next().unwrap().trim();
            if rest.is_empty() {
                return Err(ParseError { line: lineno, column: raw.len() + 1, message: "expected a name".into() });
            }
            if name.is_some() {
                return Err(ParseError { line: lineno, column: 1, message: "duplicate `name`".into() });
            }
            name = Some(rest.to_string());
            continue;
        }
        let mut l = Line::new(raw, lineno)?;
        if l.at_end() {
            continue;
        }
        let kw = l.ident("a keyword")?;
        match kw.as_str() {
            "mode" => {
                let m = l.ident("`ns` or `symmetric`")?;
                mode = Some(match m.as_str() {
                    "ns" => Mode::Ns,
                    "symmetric" => Mode::Symmetric,
                    _ => {
                        l.pos -= 1;
                        return Err(l.err(format!("unknown mode `{m}`")));
                    }
                });
                if p.generators.len() + p.relations.len() > 0 {
                    return Err(ParseError { line: lineno, column: 1, message: "`mode` must come before `op` and `rel`".into() });
                }
                p.mode = mode.unwrap();
            }
            "op" => {
                let col = l.col();
                let sym = l.ident("a generator symbol")?;
                if !valid_symbol(&sym) {
                    return Err(ParseError { line: lineno, column: col, message: format!("`{sym}` is not a valid generator symbol") });
                }
                if p.generator(&sym).is_some() || params.contains_key(&sym) {
                    return Err(ParseError { line: lineno, column: col, message: format!("`{sym}` is already declared") });
                }
                l.keyword("arity")?;
                let acol = l.col();
                let k: usize = l.int()?.parse().map_err(|_| l.err("arity too large"))?;
                if k == 0 {
                    return Err(ParseError { line: lineno, column: acol, message: "arity must be at least 1".into() });
                }
                let mut g = Generator::new(sym, k);
                while !l.at_end() {
                    l.keyword("sym")?;
                    let pcol = l.col();
                    l.expect('[')?;
                    let mut imgs = Vec::new();
                    loop {
                        imgs.push(l.int()?.parse::<usize>().map_err(|_| l.err("bad permutation entry"))?);
                        if l.eat(']') {
                            break;
                        }
                        l.expect(',')?;
                    }
                    if imgs.len() != k {
                        return Err(ParseError {
                            line: lineno,
                            column: pcol,
                            message: format!("permutation has {} entries, generator arity is {k}", imgs.len()),
                        });
                    }
                    let perm = Permutation::from_one_based(&imgs)
                        .map_err(|e| ParseError { line: lineno, column: pcol, message: e.to_string() })?;
                    l.expect('=')?;
                    let scalar = l.rational()?;
                    g.equivariances.push(Equivariance { perm, scalar });
                }
                p.generators.push(g);
            }
            "param" => {
                let col = l.col();
                let id = l.ident("a parameter name")?;
                if !valid_symbol(&id) || p.generator(&id).is_some() || params.contains_key(&id) {
                    return Err(ParseError { line: lineno, column: col, message: format!("invalid or duplicate parameter `{id}`") });
                }
                l.expect('=')?;
                let mut v = l.rational()?;
                if let Some((_, o)) = overrides.iter().find(|(n, _)| *n == id) {
                    v = o.clone();
                }
                params.insert(id.clone(), v.clone());
                p.params.push((id, v));
            }
            "rel" => {
                let mut sides = vec![parse_sum(&mut l, &p, &params)?];
                while l.eat('=') {
                    sides.push(parse_sum(&mut l, &p, &params)?);
                }
                if sides.len() == 1 {
                    sides.push(Vec::new());
                }
                for w in sides.windows(2) {
                    let mut terms = w[0].clone();
                    terms.extend(w[1].iter().map(|(c, t)| (-c, t.clone())));
                    let rel = Relation::new(terms).normalized();
                    let index = p.relations.len();
                    let diags = check_relation(&p, index, &rel);
                    if let Some(d) = diags.into_iter().next() {
                        return Err(ParseError { line: lineno, column: 1, message: d.to_string() });
                    }
                    p.relations.push(rel);
                    rel_lines.push(lineno);
                }
            }
            other => {
                l.pos -= 1;
                return Err(l.err(format!("unknown keyword `{other}`")));
            }
        }
        if !l.at_end() {
            return Err(l.err("unexpected trailing input"));
        }
    }
    for (o, _) in overrides {
        if !params.contains_key(*o) {
            return Err(ParseError { line: 0, column: 0, message: format!("no parameter named `{o}`") });
        }
    }
    p.name = name.ok_or(ParseError { line: 1, column: 1, message: "missing `name` line".into() })?;
    p.mode = mode.unwrap_or(Mode::Symmetric);
    // whole-presentation checks, including the ns rules that depend on the final mode
    if let Some(d) = validate(&p).into_iter().next() {
        let line = match &d {
            Diagnostic::UnknownSymbol { index, .. }
            | Diagnostic::ArityMismatch { index, .. }
            | Diagnostic::Variables { index, .. }
            | Diagnostic::NonHomogeneous { index, .. }
            | Diagnostic::NsPermuted { index, .. }
            | Diagnostic::ZeroRelation { index }
            | Diagnostic::BareVariable { index } => rel_lines[*index],
            _ => 0,
        };
        return Err(ParseError { line, column: 1, message: d.to_string() });
    }
    Ok(p)
}

fn parse_sum(l: &mut Line, p: &Presentation, params: &BTreeMap<String, Rational>) -> Result<Vec<(Rational, TreeExpr)>, ParseError> {
    let mut terms = Vec::new();
    let mut sign = Rational::one();
    if l.eat('-') {
        sign = -Rational::one();
    } else {
        l.eat('+');
    }
    loop {
        if let Some(t) = parse_term(l, p, params, sign)? {
            terms.push(t);
        }
        if l.eat('+') {
            sign = Rational::one();
        } else if l.eat('-') {
            sign = -Rational::one();
        } else {
            break;
        }
    }
    Ok(terms)
}

/// `factor (* factor)*`; a term without a tree must be the literal zero.
fn parse_term(
    l: &mut Line,
    p: &Presentation,
    params: &BTreeMap<String, Rational>,
    sign: Rational,
) -> Result<Option<(Rational, TreeExpr)>, ParseError> {
    let start = l.col();
    let mut coeff = sign;
    let mut expr: Option<TreeExpr> = None;
    loop {
        match l.peek().cloned() {
            Some(Tok::Int(_)) => coeff = &coeff * &l.rational()?,
            Some(Tok::Ident(s)) => {
                let is_call = l.peek_at(1) == Some(&Tok::Punct('('));
                if is_call || variable_index(&s).is_some() {
                    if expr.is_some() {
                        return Err(l.err("a term may contain only one tree expression"));
                    }
                    expr = Some(parse_expr(l, p)?);
                } else if let Some(v) = params.get(&s) {
                    l.pos += 1;
                    coeff = &coeff * v;
                } else {
                    return Err(l.err(format!("unknown parameter `{s}`")));
                }
            }
            Some(Tok::Punct('-')) => {
                l.pos += 1;
                coeff = -coeff;
                continue;
            }
            Some(Tok::Punct('(')) => return Err(l.err("parenthesized infix is not supported; use prefix application")),
            _ => return Err(l.err("expected a coefficient, parameter or tree expression")),
        }
        if !l.eat('*') {
            break;
        }
    }
    match expr {
        Some(e) => Ok(Some((coeff, e))),
        None if coeff.is_zero() => Ok(None),
        None => Err(ParseError { line: l.line, column: start, message: "a nonzero constant is not a relation term".into() }),
    }
}

fn parse_expr(l: &mut Line, p: &Presentation) -> Result<TreeExpr, ParseError> {
    let col = l.col();
    let s = l.ident("a variable or generator application")?;
    if let Some(i) = variable_index(&s) {
        if i == 0 {
            return Err(ParseError { line: l.line, column: col, message: "variables are numbered from x1".into() });
        }
        return Ok(TreeExpr::Var(i - 1));
    }
    let g = p
        .generator(&s)
        .ok_or_else(|| ParseError { line: l.line, column: col, message: format!("unknown symbol `{s}`") })?;
    let arity = g.arity;
    l.expect('(')?;
    let mut args = Vec::new();
    loop {
        args.push(parse_expr(l, p)?);
        if l.eat(')') {
            break;
        }
        l.expect(',')?;
    }
    if args.len() != arity {
        return Err(ParseError {
            line: l.line,
            column: col,
            message: format!("`{s}` applied to {} arguments, expected {arity}", args.len()),
        });
    }
    Ok(TreeExpr::Op(s, args))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEND: &str = "\
name Dend
mode ns
op l arity 2   # x < y
op r arity 2   # x > y
rel l(l(x1,x2),x3) = l(x1,l(x2,x3)) + l(x1,r(x2,x3))
rel l(r(x1,x2),x3) = r(x1,l(x2,x3))
rel r(l(x1,x2),x3) + r(r(x1,x2),x3) = r(x1,r(x2,x3))
";

    #[test]
    fn dend_parses() {
        let p = parse(DEND).unwrap();
        assert_eq!(p.name, "Dend");
        assert_eq!(p.mode, Mode::Ns);
        assert_eq!(p.generators.len(), 2);
        assert_eq!(p.relations.len(), 3);
        assert!(p.relations.iter().all(|r| r.weight() == 2 && r.arity() == 3));
        assert_eq!(p.relations[0].terms.len(), 3);
        assert_eq!(p.relations[0].terms[1].0, -Rational::one());
    }

    #[test]
    fn names_keep_punctuation() {
        let p = parse("name (As<2>)! # dual\nmode ns\nop m arity 2\n").unwrap();
        assert_eq!(p.name, "(As<2>)!");
    }

    #[test]
    fn nil2_chain() {
        let p = parse("name Nil2\nmode ns\nop m arity 2\nrel m(m(x1,x2),x3) = 0 = m(x1,m(x2,x3))\n").unwrap();
        assert_eq!(p.relations.len(), 2);
        assert_eq!(p.relations[0].terms.len(), 1);
        assert_eq!(p.relations[1].terms.len(), 1);
        assert_eq!(p.relations[1].terms[0].0, -Rational::one());
    }

    #[test]
    fn variable_error() {
        let e = parse("name X\nop m arity 2\nrel m(m(x1,x2),x3) = m(x1,m(x2,x4))\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("exactly once"), "{e}");
        let e = parse("name X\nop m arity 2\nrel m(m(x1,x1),x3)\n").unwrap_err();
        assert!(e.message.contains("exactly once"));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse("name X\nop m arity 2\nrel m(x1 x2)\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 10));
        let e = parse("name X\nop m arity 2\nrel q(x1,x2)\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 5));
        assert!(e.message.contains("unknown symbol"));
        let e = parse("name X\nop m arity 2\nrel m(x1,x2,x3)\n").unwrap_err();
        assert!(e.message.contains("expected 2"));
        let e = parse("name X\nbogus\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        assert!(parse("op m arity 2\n").is_err());
        assert!(parse("name X\nop m arity 2 sym [2,2] = 1\n").is_err());
        assert!(parse("name X\nop m arity 2 sym [2,1] = 2\n").is_err());
    }

    #[test]
    fn ns_rejects_permutations() {
        let e = parse("name X\nmode ns\nop m arity 2\nrel m(x2,x1)\n").unwrap_err();
        assert!(e.message.contains("ns"));
        assert!(parse("name X\nmode ns\nop m arity 2 sym [2,1] = 1\n").is_err());
    }

    #[test]
    fn params_and_coefficients() {
        let src = "name P\nop m arity 2\nparam a = 1/3\nrel m(m(x1,x2),x3) - 2 * a * m(x1,m(x2,x3)) + -1/2 * m(m(x2,x1),x3)\n";
        let p = parse(src).unwrap();
        let cs: Vec<String> = p.relations[0].terms.iter().map(|(c, _)| c.to_string()).collect();
        assert_eq!(cs, vec!["1", "-2/3", "-1/2"]);
        let p = parse_with_params(src, &[("a", Rational::from_int(3))]).unwrap();
        assert_eq!(p.relations[0].terms[1].0, Rational::from_int(-6));
        assert!(parse_with_params(src, &[("b", Rational::one())]).is_err());
        assert!(parse("name P\nop m arity 2\nrel a * m(x1,x2)\n").is_err());
    }

    #[test]
    fn mixed_arity_relation_is_rejected() {
        let e = parse("name X\nop m arity 2\nrel m(m(x1,x2),x3) + m(m(x1,x2),m(x3,x4))\n").unwrap_err();
        assert!(e.message.contains("different arities"), "{e}");
    }
}
