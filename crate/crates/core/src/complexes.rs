//! Chain complexes of finite-dimensional algebras: the non-unital Hochschild
//! boundary `b′`, the Chevalley–Eilenberg differential and the Leibniz
//! differential, with exhaustive `d ∘ d = 0` checks.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{Permutation, Rational};
use crate::models::LinComb;
use crate::presentation::{parse, Presentation, TreeExpr};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("algebra `{algebra}` is not certified {axiom}")]
    MissingAxiom { algebra: String, axiom: Axiom },
    #[error("chain kind mismatch: expected {expected} chains")]
    ChainKind { expected: &'static str },
    #[error("presentation `{0}` must have exactly one binary generator")]
    Unsupported(String),
    #[error("unknown complex `{0}` (expected hochschild, ce or leibniz)")]
    UnknownComplex(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Associative,
    Lie,
    Leibniz,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Associative => "associative",
            Axiom::Lie => "Lie",
            Axiom::Leibniz => "Leibniz",
        })
    }
}

impl Axiom {
    pub fn presentation(self) -> Presentation {
        let src = match self {
            Axiom::Associative => "name As\nmode ns\nop m arity 2\nrel m(m(x1,x2),x3) = m(x1,m(x2,x3))\n",
            Axiom::Lie => "name Lie\nop b arity 2 sym [2,1] = -1\nrel b(b(x1,x2),x3) = b(x1,b(x2,x3)) + b(b(x1,x3),x2)\n",
            Axiom::Leibniz => "name Leib\nop b arity 2\nrel b(b(x1,x2),x3) = b(x1,b(x2,x3)) + b(b(x1,x3),x2)\n",
        };
        parse(src).expect("built-in presentation")
    }
}

/// A product on `𝕂^dim` given by structure constants.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    pub name: String,
    pub basis: Vec<String>,
    table: Vec<Vec<Vec<(usize, Rational)>>>,
    flags: BTreeSet<Axiom>,
}

/// Relation instance that fails on basis elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomWitness {
    pub relation: String,
    pub inputs: Vec<String>,
    pub value: String,
}

impl fmt::Display for AxiomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at ({}): {}", self.relation, self.inputs.join(", "), self.value)
    }
}

impl FiniteAlgebra {
    /// The zero product on the named basis.
    pub fn new(name: &str, basis: &[&str]) -> Self {
        let n = basis.len();
        FiniteAlgebra {
            name: name.to_string(),
            basis: basis.iter().map(|s| s.to_string()).collect(),
            table: vec![vec![Vec::new(); n]; n],
            flags: BTreeSet::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Sets `e_i e_j`. Clears all certifications.
    pub fn set_product(&mut self, i: usize, j: usize, value: &[(usize, Rational)]) {
        let v = LinComb::from_terms(value.iter().cloned());
        self.table[i][j] = v.terms().map(|(k, c)| (*k, c.clone())).collect();
        self.flags.clear();
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i][j]
    }

    pub fn flags(&self) -> &BTreeSet<Axiom> {
        &self.flags
    }

    pub fn has(&self, a: Axiom) -> bool {
        self.flags.contains(&a)
    }

    /// Checks the axiom exhaustively and records it on success.
    pub fn certify(&mut self, a: Axiom) -> Result<(), AxiomWitness> {
        verify_axioms(self, &a.presentation()).map_err(|e| match e {
            AxiomCheckError::Witness(w) => w,
            AxiomCheckError::Unsupported(_) => unreachable!("built-in presentations are binary"),
        })?;
        self.flags.insert(a);
        Ok(())
    }

    fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    fn unit_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }

    fn render(&self, v: &[Rational]) -> String {
        let comb = LinComb::from_terms(v.iter().enumerate().map(|(i, c)| (self.basis[i].clone(), c.clone())));
        comb.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AxiomCheckError {
    #[error("{0}")]
    Witness(AxiomWitness),
    #[error("{0}")]
    Unsupported(#[from] ComplexError),
}

fn eval(a: &FiniteAlgebra, e: &TreeExpr, inputs: &[usize]) -> Vec<Rational> {
    match e {
        TreeExpr::Var(i) => a.unit_vector(inputs[*i]),
        TreeExpr::Op(_, args) => a.mul(&eval(a, &args[0], inputs), &eval(a, &args[1], inputs)),
    }
}

/// Evaluates every relation and symmetry of `p` (one binary generator, read
/// as the product of `a`) on all tuples of basis elements.
pub fn verify_axioms(a: &FiniteAlgebra, p: &Presentation) -> Result<(), AxiomCheckError> {
    if p.generators.len() != 1 || p.generators[0].arity != 2 {
        return Err(ComplexError::Unsupported(p.name.clone()).into());
    }
    let g = &p.generators[0];
    let mut identities: Vec<(String, Vec<(Rational, TreeExpr)>)> = Vec::new();
    for e in &g.equivariances {
        let moved = TreeExpr::op(&g.symbol, (0..2).map(|i| TreeExpr::Var(e.perm.apply(i))).collect());
        let plain = TreeExpr::op(&g.symbol, vec![TreeExpr::Var(0), TreeExpr::Var(1)]);
        identities.push((format!("{moved} = {} * {plain}", e.scalar), vec![(Rational::one(), moved), (-e.scalar.clone(), plain)]));
    }
    for r in &p.relations {
        identities.push((crate::presentation::render_relation(r), r.terms.clone()));
    }
    let n = a.dim();
    for (text, terms) in identities {
        let k = terms.first().map_or(0, |(_, t)| t.leaf_count());
        for code in 0..n.pow(k as u32) {
            let mut c = code;
            let mut inputs = vec![0; k];
            for slot in inputs.iter_mut().rev() {
                *slot = c % n;
                c /= n;
            }
            let mut v = vec![Rational::zero(); n];
            for (coef, t) in &terms {
                for (acc, x) in v.iter_mut().zip(eval(a, t, &inputs)) {
                    *acc += &(coef * &x);
                }
            }
            if v.iter().any(|x| !x.is_zero()) {
                return Err(AxiomCheckError::Witness(AxiomWitness {
                    relation: text,
                    inputs: inputs.iter().map(|&i| a.basis[i].clone()).collect(),
                    value: a.render(&v),
                }));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Tensor,
    Wedge,
}

/// A homogeneous chain: tuples of basis indices with rational coefficients.
/// Wedge chains are stored with strictly increasing indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub degree: usize,
    pub kind: ChainKind,
    terms: LinComb<Vec<usize>>,
}

impl Chain {
    pub fn zero(degree: usize, kind: ChainKind) -> Self {
        Chain { degree, kind, terms: LinComb::zero() }
    }

    pub fn tensor(indices: &[usize]) -> Self {
        let mut c = Chain::zero(indices.len(), ChainKind::Tensor);
        c.add(indices.to_vec(), &Rational::one());
        c
    }

    /// `x_{i1} ∧ ... ∧ x_{in}` in canonical form (possibly zero or negated).
    pub fn wedge(indices: &[usize]) -> Self {
        let mut c = Chain::zero(indices.len(), ChainKind::Wedge);
        c.add(indices.to_vec(), &Rational::one());
        c
    }

    /// Adds `coef · tuple`, canonicalizing wedge tuples.
    pub fn add(&mut self, tuple: Vec<usize>, coef: &Rational) {
        match self.kind {
            ChainKind::Tensor => self.terms.add_term(tuple, coef),
            ChainKind::Wedge => {
                if let Some((sorted, sign)) = canonical_wedge(tuple) {
                    let c = if sign < 0 { -coef.clone() } else { coef.clone() };
                    self.terms.add_term(sorted, &c);
                }
            }
        }
    }

    pub fn add_chain(&mut self, other: &Chain, coef: &Rational) {
        for (t, c) in other.terms() {
            self.add(t.clone(), &(coef * c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.terms.terms()
    }

    pub fn coefficient(&self, tuple: &[usize]) -> Rational {
        self.terms.coefficient(&tuple.to_vec())
    }

    pub fn render(&self, a: &FiniteAlgebra) -> String {
        let sep = if self.kind == ChainKind::Wedge { "∧" } else { "⊗" };
        let comb = LinComb::from_terms(
            self.terms().map(|(t, c)| (t.iter().map(|&i| a.basis[i].as_str()).collect::<Vec<_>>().join(sep), c.clone())),
        );
        comb.to_string()
    }
}

fn canonical_wedge(mut t: Vec<usize>) -> Option<(Vec<usize>, i32)> {
    let sign = Permutation::sorting(&t).sign();
    t.sort_unstable();
    if t.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((t, sign))
}

fn require(a: &FiniteAlgebra, ax: Axiom) -> Result<(), ComplexError> {
    if a.has(ax) {
        Ok(())
    } else {
        Err(ComplexError::MissingAxiom { algebra: a.name.clone(), axiom: ax })
    }
}

/// `b′(a₁,…,aₙ) = Σ_{i=1}^{n−1} (−1)^{i−1} (a₁,…,a_i a_{i+1},…,aₙ)`.
pub fn hochschild_b(c: &Chain, a: &FiniteAlgebra) -> Result<Chain, ComplexError> {
    require(a, Axiom::Associative)?;
    if c.kind != ChainKind::Tensor {
        return Err(ComplexError::ChainKind { expected: "tensor" });
    }
    let mut out = Chain::zero(c.degree.saturating_sub(1), ChainKind::Tensor);
    for (t, coef) in c.terms() {
        for i in 0..t.len().saturating_sub(1) {
            let sign = if i % 2 == 0 { coef.clone() } else { -coef.clone() };
            for (k, s) in a.product(t[i], t[i + 1]) {
                let mut u = t[..i].to_vec();
                u.push(*k);
                u.extend_from_slice(&t[i + 2..]);
                out.add(u, &(&sign * s));
            }
        }
    }
    Ok(out)
}

/// `Σ_{i<j} (−1)^j (x₁,…,[x_i,x_j],…,x̂_j,…,xₙ)` with 1-based `j`.
fn bracket_sum(c: &Chain, a: &FiniteAlgebra, kind: ChainKind) -> Chain {
    let mut out = Chain::zero(c.degree.saturating_sub(1), kind);
    for (t, coef) in c.terms() {
        for j in 1..t.len() {
            // 0-based j is 1-based j+1
            let sign = if (j + 1) % 2 == 0 { coef.clone() } else { -coef.clone() };
            for i in 0..j {
                for (k, s) in a.product(t[i], t[j]) {
                    let mut u = t.clone();
                    u[i] = *k;
                    u.remove(j);
                    out.add(u, &(&sign * s));
                }
            }
        }
    }
    out
}

/// Chevalley–Eilenberg differential on wedge chains.
pub fn ce_d(c: &Chain, g: &FiniteAlgebra) -> Result<Chain, ComplexError> {
    require(g, Axiom::Lie)?;
    if c.kind != ChainKind::Wedge {
        return Err(ComplexError::ChainKind { expected: "wedge" });
    }
    Ok(bracket_sum(c, g, ChainKind::Wedge))
}

/// Leibniz differential on tensor chains.
pub fn leibniz_d(c: &Chain, g: &FiniteAlgebra) -> Result<Chain, ComplexError> {
    require(g, Axiom::Leibniz)?;
    if c.kind != ChainKind::Tensor {
        return Err(ComplexError::ChainKind { expected: "tensor" });
    }
    Ok(bracket_sum(c, g, ChainKind::Tensor))
}

/// The canonical projection `x₁⊗…⊗xₙ ↦ x₁∧…∧xₙ`.
pub fn project_to_wedge(c: &Chain) -> Chain {
    let mut out = Chain::zero(c.degree, ChainKind::Wedge);
    for (t, coef) in c.terms() {
        out.add(t.clone(), coef);
    }
    out
}

/// `x₁∧…∧xₙ ↦ Σ_σ sgn(σ) x_σ(1)⊗…⊗x_σ(n)`.
pub fn antisymmetrize(c: &Chain) -> Chain {
    let mut out = Chain::zero(c.degree, ChainKind::Tensor);
    for (t, coef) in c.terms() {
        for p in Permutation::all(t.len()) {
            let u: Vec<usize> = p.images().iter().map(|&i| t[i]).collect();
            let s = if p.sign() < 0 { -coef.clone() } else { coef.clone() };
            out.add(u, &s);
        }
    }
    out
}

/// Tensor algebra on `letters` generators modulo words longer than `max_len`.
pub fn truncated_free_associative(letters: usize, max_len: usize) -> FiniteAlgebra {
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| (0..letters).map(move |x| [w.as_slice(), &[x]].concat())).collect();
        words.extend(layer.iter().cloned());
    }
    let name = |w: &[usize]| w.iter().map(|&x| (b'a' + x as u8) as char).collect::<String>();
    let names: Vec<String> = words.iter().map(|w| name(w)).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut a = FiniteAlgebra::new(&format!("T{letters}/(len>{max_len})"), &refs);
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            let uv = [u.as_slice(), v.as_slice()].concat();
            if let Some(k) = words.iter().position(|w| *w == uv) {
                a.set_product(i, j, &[(k, Rational::one())]);
            }
        }
    }
    a
}

/// `sl₂` with basis `e, f, h`: `[e,f]=h`, `[h,e]=2e`, `[h,f]=−2f`.
pub fn sl2() -> FiniteAlgebra {
    let (e, f, h) = (0, 1, 2);
    let mut g = FiniteAlgebra::new("sl2", &["e", "f", "h"]);
    let r = Rational::from_int;
    g.set_product(e, f, &[(h, r(1))]);
    g.set_product(f, e, &[(h, r(-1))]);
    g.set_product(h, e, &[(e, r(2))]);
    g.set_product(e, h, &[(e, r(-2))]);
    g.set_product(h, f, &[(f, r(-2))]);
    g.set_product(f, h, &[(f, r(2))]);
    g
}

/// Basis `x, y` with `[y,y] = x` and all other brackets zero: Leibniz, not Lie.
pub fn leibniz_nonlie() -> FiniteAlgebra {
    let mut g = FiniteAlgebra::new("leib2", &["x", "y"]);
    g.set_product(1, 1, &[(0, Rational::one())]);
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSquaredReport {
    pub complex: String,
    pub algebra: String,
    pub max_degree: usize,
    pub chains_checked: usize,
    pub failure: Option<String>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for DSquaredReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "{}: d∘d = 0 on {} ({} basis chains, degree <= {})",
                self.complex, self.algebra, self.chains_checked, self.max_degree
            ),
            Some(m) => write!(f, "{}: d∘d != 0 on {}: {}", self.complex, self.algebra, m),
        }
    }
}

fn basis_tuples(dim: usize, n: usize, increasing: bool) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let start = if increasing { t.last().map_or(0, |&l| l + 1) } else { 0 };
                (start..dim).map(move |x| [t.as_slice(), &[x]].concat())
            })
            .collect();
    }
    out
}

/// Applies `d` twice to every basis chain of degree `2..=max_degree`.
pub fn check_d_squared(
    complex: &str,
    a: &FiniteAlgebra,
    max_degree: usize,
    d: impl Fn(&Chain, &FiniteAlgebra) -> Result<Chain, ComplexError> + Sync,
    kind: ChainKind,
) -> Result<DSquaredReport, ComplexError> {
    let mut checked = 0;
    for n in 2..=max_degree {
        let tuples = basis_tuples(a.dim(), n, kind == ChainKind::Wedge);
        checked += tuples.len();
        let bad = tuples
            .par_iter()
            .map(|t| -> Result<Option<String>, ComplexError> {
                let c = match kind {
                    ChainKind::Tensor => Chain::tensor(t),
                    ChainKind::Wedge => Chain::wedge(t),
                };
                let dd = d(&d(&c, a)?, a)?;
                Ok((!dd.is_zero()).then(|| format!("d∘d({}) = {}", c.render(a), dd.render(a))))
            })
            .find_first(|r| !matches!(r, Ok(None)));
        match bad {
            None => {}
            Some(Err(e)) => return Err(e),
            Some(Ok(msg)) => {
                return Ok(DSquaredReport {
                    complex: complex.to_string(),
                    algebra: a.name.clone(),
                    max_degree,
                    chains_checked: checked,
                    failure: msg,
                })
            }
        }
    }
    Ok(DSquaredReport { complex: complex.to_string(), algebra: a.name.clone(), max_degree, chains_checked: checked, failure: None })
}

/// `d∘d = 0` for a named complex on its reference algebras:
/// `hochschild` on the 3-letter tensor algebra truncated at length 2, `ce` on
/// `sl₂`, `leibniz` on `sl₂` and on a 2-dimensional non-Lie Leibniz algebra.
pub fn check_named(complex: &str, max_degree: usize) -> Result<Vec<DSquaredReport>, ComplexError> {
    let certified = |mut a: FiniteAlgebra, ax: Axiom| {
        a.certify(ax).expect("reference algebra satisfies its axiom");
        a
    };
    match complex {
        "hochschild" => {
            let a = certified(truncated_free_associative(3, 2), Axiom::Associative);
            Ok(vec![check_d_squared("hochschild", &a, max_degree, hochschild_b, ChainKind::Tensor)?])
        }
        "ce" => {
            let g = certified(sl2(), Axiom::Lie);
            Ok(vec![check_d_squared("ce", &g, max_degree, ce_d, ChainKind::Wedge)?])
        }
        "leibniz" => {
            let g = certified(sl2(), Axiom::Leibniz);
            let h = certified(leibniz_nonlie(), Axiom::Leibniz);
            Ok(vec![
                check_d_squared("leibniz", &g, max_degree, leibniz_d, ChainKind::Tensor)?,
                check_d_squared("leibniz", &h, max_degree, leibniz_d, ChainKind::Tensor)?,
            ])
        }
        other => Err(ComplexError::UnknownComplex(other.to_string())),
    }
}
