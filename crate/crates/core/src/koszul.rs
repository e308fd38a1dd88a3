//! Quadratic duals of binary (ns or symmetric) and ternary ns presentations.
//!
//! The weight-two space is spelled out on labelled monomials: every
//! two-vertex tree with leaves `x1..x_n`, each generator taken without its
//! symmetries. The pairing is diagonal on that basis. For a binary monomial
//! with leaf word `σ` it is `sgn(σ)` when the inner vertex is the left child
//! and `-sgn(σ)` when it is the right child. In ns mode only the identity
//! word occurs, so `∘1` pairs to `+1` and `∘2` to `-1`. Ternary ns monomials
//! all pair to `+1`.
//!
//! The relations of `p` together with the consequences of the generator
//! symmetries span a subspace `R` of that space. The dual relations are the
//! annihilator of `R`, and the dual generators carry the symmetries of `p`
//! twisted by the sign representation.

use serde::Serialize;
use thiserror::Error;

use crate::exactmath::dense::{nullspace, rref};
use crate::exactmath::{Rational, SpanMatrix};
use crate::freeoperad::{self, FreeError, TreeMonomial};
use crate::presentation::{Equivariance, Generator, Mode, Presentation, Relation, TreeExpr};
use crate::series::{koszul_series_compare, KoszulSeriesOutcome, PowerSeries, SeriesError, SeriesKind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KoszulError {
    #[error("not quadratic: {0}")]
    NotQuadratic(String),
    #[error("generators of arity {0} are not supported (binary, or ternary ns only)")]
    UnsupportedArity(usize),
    #[error("ternary duals are only implemented for ns presentations")]
    SymmetricTernary,
    #[error("generator map: {0}")]
    GeneratorMap(String),
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The arity-`2k-1` weight-two monomials and their pairing signs.
#[derive(Clone, Debug, Serialize)]
pub struct WeightTwoSpace {
    pub arity: usize,
    pub basis: Vec<TreeMonomial>,
    pub signs: Vec<i32>,
}

fn pairing_sign(t: &TreeMonomial, k: usize) -> i32 {
    if k != 2 {
        return 1;
    }
    let TreeMonomial::Node(_, children) = t else { return 1 };
    let inner_left = matches!(children[0], TreeMonomial::Node(..));
    let s = t.leaf_labels().sign();
    if inner_left {
        s
    } else {
        -s
    }
}

/// Checks the input shape and returns the common generator arity.
fn quadratic_arity(p: &Presentation) -> Result<usize, KoszulError> {
    let k = p.uniform_arity().ok_or_else(|| {
        KoszulError::NotQuadratic("generators must all have the same arity".into())
    })?;
    if k != 2 && k != 3 {
        return Err(KoszulError::UnsupportedArity(k));
    }
    if k == 3 && p.mode == Mode::Symmetric {
        return Err(KoszulError::SymmetricTernary);
    }
    let diags = p.validate();
    if !diags.is_empty() {
        return Err(FreeError::Invalid(diags).into());
    }
    for (i, r) in p.relations.iter().enumerate() {
        if r.terms.iter().any(|(_, t)| t.vertex_count() != 2) {
            return Err(KoszulError::NotQuadratic(format!("relation {} is not a sum of two-vertex monomials", i + 1)));
        }
    }
    Ok(k)
}

pub fn weight_two_space(p: &Presentation) -> Result<WeightTwoSpace, KoszulError> {
    let k = quadratic_arity(p)?;
    let arity = 2 * k - 1;
    let basis = freeoperad::free_basis(p, arity)?;
    let signs = basis.iter().map(|t| pairing_sign(t, k)).collect();
    Ok(WeightTwoSpace { arity, basis, signs })
}

/// Dense rows (over the weight-two basis) of the relations plus symmetry consequences.
fn relation_rows(p: &Presentation, arity: usize, ncols: usize) -> Result<Vec<Vec<Rational>>, KoszulError> {
    let span = freeoperad::relation_span(p, arity)?;
    let basis = span.echelon_basis();
    Ok(basis
        .iter()
        .map(|r| (0..ncols).map(|c| r.get(c as u32)).collect())
        .collect())
}

fn twisted_generators(p: &Presentation) -> Vec<Generator> {
    p.generators
        .iter()
        .map(|g| Generator {
            symbol: g.symbol.clone(),
            arity: g.arity,
            equivariances: g
                .equivariances
                .iter()
                .map(|e| Equivariance { perm: e.perm.clone(), scalar: &e.scalar * &Rational::from_int(e.perm.sign() as i64) })
                .collect(),
        })
        .collect()
}

/// Scales a vector to coprime integers with a positive first entry.
fn primitive(v: &mut [Rational]) {
    let den = crate::exactmath::common_denominator(v.iter());
    let den = Rational::from_bigint(den);
    for x in v.iter_mut() {
        *x = &*x * &den;
    }
    let mut g = num_bigint::BigInt::from(0);
    for x in v.iter() {
        g = num_integer::Integer::gcd(&g, &x.numer());
    }
    if g > num_bigint::BigInt::from(1) {
        let g = Rational::from_bigint(g).recip();
        for x in v.iter_mut() {
            *x = &*x * &g;
        }
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
}

/// The quadratic dual presentation `p!`.
pub fn quadratic_dual(p: &Presentation) -> Result<Presentation, KoszulError> {
    let w = weight_two_space(p)?;
    let n = w.basis.len();
    // R D: annihilator under the diagonal pairing
    let r = relation_rows(p, w.arity, n)?;
    let twisted: Vec<Vec<Rational>> = r
        .iter()
        .map(|row| row.iter().zip(&w.signs).map(|(x, &s)| x * &Rational::from_int(s as i64)).collect())
        .collect();
    let ann = nullspace(&twisted, n);

    let mut dual = Presentation::new(format!("{}!", p.name), p.mode);
    dual.generators = twisted_generators(p);

    // Reduce modulo the dual's symmetry consequences, in reversed column order
    // so that early basis monomials survive as representatives.
    let rev = |v: &[Rational]| -> Vec<Rational> { v.iter().rev().cloned().collect() };
    let mut sym = relation_rows(&dual, w.arity, n)?.iter().map(|v| rev(v)).collect::<Vec<_>>();
    let sym_pivots = if sym.is_empty() { Vec::new() } else { rref(&mut sym) };
    let mut reduced: Vec<Vec<Rational>> = ann
        .iter()
        .map(|v| {
            let mut v = rev(v);
            for (row, &pc) in sym.iter().zip(&sym_pivots) {
                if !v[pc].is_zero() {
                    let f = v[pc].clone();
                    for (x, y) in v.iter_mut().zip(row) {
                        if !y.is_zero() {
                            *x = &*x - &(&f * y);
                        }
                    }
                }
            }
            v
        })
        .collect();
    if !reduced.is_empty() {
        rref(&mut reduced);
    }
    let mut current = sym.len();
    for v in reduced {
        let mut v: Vec<Rational> = v.into_iter().rev().collect();
        primitive(&mut v);
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.clone(), w.basis[i].to_expr(&dual)))
            .collect();
        dual.relations.push(Relation::new(terms));
        // in symmetric mode keep only relations whose orbit adds something
        if p.mode == Mode::Symmetric {
            let rank = freeoperad::relation_span(&dual, w.arity)?.rank();
            if rank == current {
                dual.relations.pop();
            } else {
                current = rank;
            }
        }
    }
    Ok(dual)
}

/// `dim R(p)` inside the weight-two space (symmetry consequences excluded).
pub fn relation_dim(p: &Presentation) -> Result<usize, KoszulError> {
    let w = weight_two_space(p)?;
    let all = freeoperad::relation_span(p, w.arity)?.rank();
    let mut bare = p.clone();
    bare.relations.clear();
    let sym = freeoperad::relation_span(&bare, w.arity)?.rank();
    Ok(all - sym)
}

/// Rebuilds `q` with `p`'s generator order and symbols; `map` pairs (symbol in p, symbol in q).
fn transport(p: &Presentation, q: &Presentation, map: &[(&str, &str)]) -> Result<Presentation, KoszulError> {
    if p.generators.len() != q.generators.len() || map.len() != p.generators.len() {
        return Err(KoszulError::GeneratorMap(format!(
            "{} has {} generators, {} has {}, map has {} pairs",
            p.name,
            p.generators.len(),
            q.name,
            q.generators.len(),
            map.len()
        )));
    }
    let mut out = Presentation::new(q.name.clone(), q.mode);
    for g in &p.generators {
        let Some((_, qs)) = map.iter().find(|(ps, _)| *ps == g.symbol) else {
            return Err(KoszulError::GeneratorMap(format!("`{}` is not mapped", g.symbol)));
        };
        let Some(h) = q.generator(qs) else {
            return Err(KoszulError::GeneratorMap(format!("`{qs}` is not a generator of {}", q.name)));
        };
        if h.arity != g.arity {
            return Err(KoszulError::GeneratorMap(format!("`{}` and `{qs}` have different arities", g.symbol)));
        }
        out.generators.push(Generator { symbol: g.symbol.clone(), arity: g.arity, equivariances: h.equivariances.clone() });
    }
    let rename = |s: &str| map.iter().find(|(_, qs)| *qs == s).map(|(ps, _)| ps.to_string()).unwrap_or_else(|| s.to_string());
    out.relations = q
        .relations
        .iter()
        .map(|r| Relation::new(r.terms.iter().map(|(c, t)| (c.clone(), t.map_symbols(&rename))).collect()))
        .collect();
    Ok(out)
}

/// Whether `p` and `q` (transported along `map`) generate the same ideal in
/// every arity up to their largest relation arity, symmetries included.
pub fn relations_equivalent(p: &Presentation, q: &Presentation, map: &[(&str, &str)]) -> Result<bool, KoszulError> {
    let scaled: Vec<(&str, &str, Rational)> = map.iter().map(|(a, b)| (*a, *b, Rational::one())).collect();
    relations_equivalent_scaled(p, q, &scaled)
}

fn node_scale(t: &TreeExpr, scale: &dyn Fn(&str) -> Rational) -> Rational {
    match t {
        TreeExpr::Var(_) => Rational::one(),
        TreeExpr::Op(s, args) => args.iter().fold(scale(s), |acc, a| &acc * &node_scale(a, scale)),
    }
}

/// Like [`relations_equivalent`], with `(a, b, c)` meaning `a = c·b`.
pub fn relations_equivalent_scaled(p: &Presentation, q: &Presentation, map: &[(&str, &str, Rational)]) -> Result<bool, KoszulError> {
    let scale = |s: &str| map.iter().find(|(a, _, _)| *a == s).map_or_else(Rational::one, |(_, _, c)| c.clone());
    if map.iter().any(|(_, _, c)| c.is_zero()) {
        return Err(KoszulError::GeneratorMap("zero scale".into()));
    }
    let mut p = p.clone();
    for r in &mut p.relations {
        for (c, t) in &mut r.terms {
            *c = &*c * &node_scale(t, &scale);
        }
    }
    let map: Vec<(&str, &str)> = map.iter().map(|(a, b, _)| (*a, *b)).collect();
    let (p, map) = (&p, &map[..]);
    if p.mode != q.mode {
        return Ok(false);
    }
    let q = transport(p, q, map)?;
    let top = p.relations.iter().chain(&q.relations).map(|r| r.arity()).max().unwrap_or(2).max(2);
    for n in 2..=top {
        let a = freeoperad::relation_span(p, n)?;
        let b = freeoperad::relation_span(&q, n)?;
        let ra = a.rank();
        if ra != b.rank() {
            return Ok(false);
        }
        let mut rows = a.rows().to_vec();
        rows.extend(b.rows().iter().cloned());
        if SpanMatrix::from_rows(a.ncols(), rows).rank() != ra {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Identity correspondence between equally named generators.
pub fn identity_map(p: &Presentation) -> Vec<(&str, &str)> {
    p.generators.iter().map(|g| (g.symbol.as_str(), g.symbol.as_str())).collect()
}

/// The generating series of computed dimensions (ordinary for ns, exponential for symmetric).
pub fn dims_series(p: &Presentation, dims: &[(usize, u64)], order: usize) -> PowerSeries {
    let kind = match p.mode {
        Mode::Ns => SeriesKind::Ordinary,
        Mode::Symmetric => SeriesKind::Exponential,
    };
    let mut v = vec![0u64; order];
    for &(a, d) in dims {
        if a >= 1 && a <= order {
            v[a - 1] = d;
        }
    }
    PowerSeries::from_dims(kind, &v)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualDimsReport {
    pub dims: Vec<(usize, u64)>,
    pub dual_dims: Vec<(usize, u64)>,
    pub order: usize,
    pub consistent: bool,
    pub first_difference: Option<usize>,
}

/// Compares the series of `p` and `p!` through arity `n` (a necessary
/// condition for Koszulness, never a proof).
pub fn dual_dims_report(p: &Presentation, n: usize) -> Result<DualDimsReport, KoszulError> {
    if quadratic_arity(p)? != 2 {
        return Err(KoszulError::UnsupportedArity(3));
    }
    let dual = quadratic_dual(p)?;
    let a = freeoperad::quotient_dims(p, n)?;
    let b = freeoperad::quotient_dims(&dual, n)?;
    let order = a.rows.len().min(b.rows.len());
    let fa = dims_series(p, &a.dims_by_arity(), order);
    let fb = dims_series(p, &b.dims_by_arity(), order);
    let outcome = koszul_series_compare(&fa, &fb)?;
    let first_difference = match outcome {
        KoszulSeriesOutcome::Holds { .. } => None,
        KoszulSeriesOutcome::Differs { degree, .. } => Some(degree),
    };
    Ok(DualDimsReport {
        dims: a.dims_by_arity(),
        dual_dims: b.dims_by_arity(),
        order,
        consistent: first_difference.is_none(),
        first_difference,
    })
}

pub fn dual_dims_consistency(p: &Presentation, n: usize) -> Result<bool, KoszulError> {
    Ok(dual_dims_report(p, n)?.consistent)
}
