//! Operad presentations: generators with symmetries and multilinear relations.
//!
//! Presentations are usually read from a small line-oriented DSL:
//!
//! ```text
//! name Lie
//! mode symmetric
//! op b arity 2 sym [2,1] = -1
//! rel b(b(x1,x2),x3) + b(b(x2,x3),x1) + b(b(x3,x1),x2)
//! ```
//!
//! A relation line is a sum of terms, optionally followed by `= <sum>` (a
//! chain `a = b = c` yields the relations `a - b` and `b - c`). A term is an
//! optional rational coefficient and optional parameter names multiplied
//! onto one tree expression.

mod parse;
mod render;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{Permutation, Rational};

pub use parse::{parse, parse_with_params, ParseError};
pub use render::{render, render_relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ns,
    Symmetric,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ns => "ns",
            Mode::Symmetric => "symmetric",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `g ∘ σ = λ g`, i.e. `g(x_σ(1), ..., x_σ(k)) = λ g(x_1, ..., x_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equivariance {
    pub perm: Permutation,
    pub scalar: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub symbol: String,
    pub arity: usize,
    pub equivariances: Vec<Equivariance>,
}

impl Generator {
    pub fn new(symbol: impl Into<String>, arity: usize) -> Self {
        Generator { symbol: symbol.into(), arity, equivariances: Vec::new() }
    }

    pub fn with_symmetry(mut self, one_based: &[usize], scalar: Rational) -> Self {
        let perm = Permutation::from_one_based(one_based).expect("valid permutation");
        self.equivariances.push(Equivariance { perm, scalar });
        self
    }

    /// The character on the subgroup generated by the declared permutations,
    /// or a witness permutation that receives two different scalars.
    pub fn equivariance_closure(&self) -> Result<BTreeMap<Permutation, Rational>, Permutation> {
        let mut seen: BTreeMap<Permutation, Rational> = BTreeMap::new();
        seen.insert(Permutation::identity(self.arity), Rational::one());
        let mut queue: VecDeque<Permutation> = VecDeque::from([Permutation::identity(self.arity)]);
        while let Some(p) = queue.pop_front() {
            let lp = seen[&p].clone();
            for e in &self.equivariances {
                if e.scalar.is_zero() {
                    return Err(e.perm.clone());
                }
                // g∘(p∘s) = (g∘p)∘s = λ_p λ_s g
                let q = p.compose(&e.perm);
                let lq = &lp * &e.scalar;
                match seen.get(&q) {
                    Some(old) if *old != lq => return Err(q),
                    Some(_) => {}
                    None => {
                        seen.insert(q.clone(), lq);
                        queue.push_back(q);
                    }
                }
            }
        }
        Ok(seen)
    }
}

/// A tree expression in variables `x1..xn` (stored zero-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeExpr {
    Var(usize),
    Op(String, Vec<TreeExpr>),
}

impl TreeExpr {
    pub fn var(i: usize) -> Self {
        TreeExpr::Var(i)
    }

    pub fn op(symbol: &str, args: Vec<TreeExpr>) -> Self {
        TreeExpr::Op(symbol.to_string(), args)
    }

    /// Variables in left-to-right order.
    pub fn variables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            TreeExpr::Var(i) => out.push(*i),
            TreeExpr::Op(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeExpr::Var(_) => 1,
            TreeExpr::Op(_, args) => args.iter().map(|a| a.leaf_count()).sum(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            TreeExpr::Var(_) => 0,
            TreeExpr::Op(_, args) => 1 + args.iter().map(|a| a.vertex_count()).sum::<usize>(),
        }
    }

    /// Sum over vertices of `arity - 1`.
    pub fn weight(&self) -> usize {
        match self {
            TreeExpr::Var(_) => 0,
            TreeExpr::Op(_, args) => args.len() - 1 + args.iter().map(|a| a.weight()).sum::<usize>(),
        }
    }

    pub fn symbols(&self) -> Vec<&str> {
        match self {
            TreeExpr::Var(_) => Vec::new(),
            TreeExpr::Op(s, args) => {
                let mut v = vec![s.as_str()];
                for a in args {
                    v.extend(a.symbols());
                }
                v
            }
        }
    }

    /// Renames every variable `i` to `f(i)`.
    pub fn map_vars(&self, f: &impl Fn(usize) -> usize) -> TreeExpr {
        match self {
            TreeExpr::Var(i) => TreeExpr::Var(f(*i)),
            TreeExpr::Op(s, args) => TreeExpr::Op(s.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// Renames every generator symbol.
    pub fn map_symbols(&self, f: &impl Fn(&str) -> String) -> TreeExpr {
        match self {
            TreeExpr::Var(i) => TreeExpr::Var(*i),
            TreeExpr::Op(s, args) => TreeExpr::Op(f(s), args.iter().map(|a| a.map_symbols(f)).collect()),
        }
    }

    /// Replaces variable `i` by `subs[i]`.
    pub fn substitute(&self, subs: &[TreeExpr]) -> TreeExpr {
        match self {
            TreeExpr::Var(i) => subs[*i].clone(),
            TreeExpr::Op(s, args) => TreeExpr::Op(s.clone(), args.iter().map(|a| a.substitute(subs)).collect()),
        }
    }
}

impl fmt::Display for TreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeExpr::Var(i) => write!(f, "x{}", i + 1),
            TreeExpr::Op(s, args) => {
                write!(f, "{s}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub terms: Vec<(Rational, TreeExpr)>,
}

impl Relation {
    pub fn new(terms: Vec<(Rational, TreeExpr)>) -> Self {
        Relation { terms }
    }

    /// Merges repeated monomials and drops zero coefficients, keeping first-occurrence order.
    pub fn normalized(&self) -> Relation {
        let mut out: Vec<(Rational, TreeExpr)> = Vec::new();
        for (c, t) in &self.terms {
            match out.iter_mut().find(|(_, u)| u == t) {
                Some((d, _)) => *d += c,
                None => out.push((c.clone(), t.clone())),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        Relation { terms: out }
    }

    pub fn arity(&self) -> usize {
        self.terms.first().map_or(0, |(_, t)| t.leaf_count())
    }

    pub fn weight(&self) -> usize {
        self.terms.first().map_or(0, |(_, t)| t.weight())
    }

    /// Largest number of generator vertices in a term.
    pub fn max_vertices(&self) -> usize {
        self.terms.iter().map(|(_, t)| t.vertex_count()).max().unwrap_or(0)
    }

    pub fn scale(&self, f: &Rational) -> Relation {
        Relation { terms: self.terms.iter().map(|(c, t)| (c * f, t.clone())).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub mode: Mode,
    pub params: Vec<(String, Rational)>,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

/// A human-readable problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("generator `{symbol}`: symmetry {perm} has {got} letters, expected {arity}")]
    SymmetrySize { symbol: String, perm: Permutation, got: usize, arity: usize },
    #[error("generator `{symbol}`: symmetries are contradictory at {witness} (forces the generator to vanish)")]
    ContradictorySymmetry { symbol: String, witness: Permutation },
    #[error("generator `{0}`: ns presentations cannot declare symmetries")]
    NsSymmetry(String),
    #[error("relation {index}: unknown symbol `{symbol}`")]
    UnknownSymbol { index: usize, symbol: String },
    #[error("relation {index}: `{symbol}` applied to {got} arguments, expected {arity}")]
    ArityMismatch { index: usize, symbol: String, got: usize, arity: usize },
    #[error("relation {index}: term {term} must use each of x1..x{arity} exactly once")]
    Variables { index: usize, term: String, arity: usize },
    #[error("relation {index}: terms have different arities ({0} and {1})", .arities.0, .arities.1)]
    NonHomogeneous { index: usize, arities: (usize, usize) },
    #[error("relation {index}: term {term} permutes variables, which ns mode forbids")]
    NsPermuted { index: usize, term: String },
    #[error("relation {index} has no nonzero coefficient")]
    ZeroRelation { index: usize },
    #[error("relation {index}: a bare variable is not a relation term")]
    BareVariable { index: usize },
}

impl Presentation {
    pub fn new(name: impl Into<String>, mode: Mode) -> Self {
        Presentation { name: name.into(), mode, params: Vec::new(), generators: Vec::new(), relations: Vec::new() }
    }

    pub fn generator(&self, symbol: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.symbol == symbol)
    }

    pub fn generator_index(&self, symbol: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.symbol == symbol)
    }

    pub fn is_binary(&self) -> bool {
        !self.generators.is_empty() && self.generators.iter().all(|g| g.arity == 2)
    }

    /// The common generator arity, if all generators share one.
    pub fn uniform_arity(&self) -> Option<usize> {
        let first = self.generators.first()?.arity;
        self.generators.iter().all(|g| g.arity == first).then_some(first)
    }

    /// All relations are composites of exactly two generators.
    pub fn is_quadratic(&self) -> bool {
        self.relations.iter().all(|r| r.terms.iter().all(|(_, t)| t.vertex_count() == 2))
    }

    /// Arity step `k - 1` when all generators are `k`-ary; arities not `1 mod (k-1)` vanish.
    pub fn arity_step(&self) -> usize {
        match self.uniform_arity() {
            Some(k) if k >= 2 => k - 1,
            _ => 1,
        }
    }

    /// The symmetric operad generated by an ns presentation (regular representations).
    pub fn to_symmetric(&self) -> Presentation {
        let mut p = self.clone();
        p.mode = Mode::Symmetric;
        p
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        validate(self)
    }
}

pub fn validate(p: &Presentation) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for g in &p.generators {
        if !seen.insert(g.symbol.as_str()) {
            out.push(Diagnostic::DuplicateGenerator(g.symbol.clone()));
        }
        if g.arity == 0 {
            out.push(Diagnostic::ZeroArity(g.symbol.clone()));
        }
        if p.mode == Mode::Ns && !g.equivariances.is_empty() {
            out.push(Diagnostic::NsSymmetry(g.symbol.clone()));
        }
        let mut sizes_ok = true;
        for e in &g.equivariances {
            if e.perm.len() != g.arity {
                sizes_ok = false;
                out.push(Diagnostic::SymmetrySize {
                    symbol: g.symbol.clone(),
                    perm: e.perm.clone(),
                    got: e.perm.len(),
                    arity: g.arity,
                });
            }
        }
        if sizes_ok {
            if let Err(witness) = g.equivariance_closure() {
                out.push(Diagnostic::ContradictorySymmetry { symbol: g.symbol.clone(), witness });
            }
        }
    }
    for (index, r) in p.relations.iter().enumerate() {
        out.extend(check_relation(p, index, r));
    }
    out
}

fn check_expr(p: &Presentation, index: usize, e: &TreeExpr, out: &mut Vec<Diagnostic>) {
    if let TreeExpr::Op(s, args) = e {
        match p.generator(s) {
            None => out.push(Diagnostic::UnknownSymbol { index, symbol: s.clone() }),
            Some(g) if g.arity != args.len() => out.push(Diagnostic::ArityMismatch {
                index,
                symbol: s.clone(),
                got: args.len(),
                arity: g.arity,
            }),
            Some(_) => {}
        }
        for a in args {
            check_expr(p, index, a, out);
        }
    }
}

pub(crate) fn check_relation(p: &Presentation, index: usize, r: &Relation) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if r.terms.iter().all(|(c, _)| c.is_zero()) {
        out.push(Diagnostic::ZeroRelation { index });
        return out;
    }
    let arity = r.arity();
    for (_, t) in &r.terms {
        if matches!(t, TreeExpr::Var(_)) {
            out.push(Diagnostic::BareVariable { index });
            continue;
        }
        check_expr(p, index, t, &mut out);
        let n = t.leaf_count();
        if n != arity {
            out.push(Diagnostic::NonHomogeneous { index, arities: (arity, n) });
            continue;
        }
        let mut vars = t.variables();
        let in_order = vars.iter().enumerate().all(|(i, &v)| i == v);
        vars.sort_unstable();
        if !vars.iter().enumerate().all(|(i, &v)| i == v) {
            out.push(Diagnostic::Variables { index, term: t.to_string(), arity });
        } else if p.mode == Mode::Ns && !in_order {
            out.push(Diagnostic::NsPermuted { index, term: t.to_string() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn lie() -> Presentation {
        let mut p = Presentation::new("Lie", Mode::Symmetric);
        p.generators.push(Generator::new("b", 2).with_symmetry(&[2, 1], q(-1)));
        let b = |x, y| TreeExpr::op("b", vec![x, y]);
        let v = TreeExpr::var;
        p.relations.push(Relation::new(vec![
            (q(1), b(b(v(0), v(1)), v(2))),
            (q(1), b(b(v(1), v(2)), v(0))),
            (q(1), b(b(v(2), v(0)), v(1))),
        ]));
        p
    }

    #[test]
    fn valid_lie() {
        assert_eq!(validate(&lie()), vec![]);
    }

    #[test]
    fn mixed_arity_is_flagged() {
        let mut p = lie();
        let b = |x, y| TreeExpr::op("b", vec![x, y]);
        let v = TreeExpr::var;
        p.relations.push(Relation::new(vec![
            (q(1), b(b(v(0), v(1)), v(2))),
            (q(1), b(b(v(0), v(1)), b(v(2), v(3)))),
        ]));
        assert!(validate(&p).iter().any(|d| matches!(d, Diagnostic::NonHomogeneous { .. })));
    }

    #[test]
    fn contradictory_involution() {
        let mut p = Presentation::new("bad", Mode::Symmetric);
        p.generators.push(Generator::new("m", 2).with_symmetry(&[2, 1], q(2)));
        assert!(matches!(validate(&p)[..], [Diagnostic::ContradictorySymmetry { .. }]));
        let mut p = Presentation::new("bad", Mode::Symmetric);
        p.generators.push(Generator::new("m", 3).with_symmetry(&[2, 1, 3], q(1)).with_symmetry(&[1, 3, 2], q(-1)));
        assert!(matches!(validate(&p)[..], [Diagnostic::ContradictorySymmetry { .. }]));
    }

    #[test]
    fn consistent_character() {
        // the sign character of S_3
        let g = Generator::new("m", 3).with_symmetry(&[2, 1, 3], q(-1)).with_symmetry(&[1, 3, 2], q(-1));
        let c = g.equivariance_closure().unwrap();
        assert_eq!(c.len(), 6);
        for (p, l) in c {
            assert_eq!(l, q(p.sign() as i64));
        }
    }

    #[test]
    fn tree_weights() {
        let t = TreeExpr::op("m", vec![TreeExpr::op("m", vec![TreeExpr::var(0), TreeExpr::var(1), TreeExpr::var(2)]), TreeExpr::var(3), TreeExpr::var(4)]);
        assert_eq!(t.weight(), 4);
        assert_eq!(t.vertex_count(), 2);
        assert_eq!(t.leaf_count(), 5);
    }
}
