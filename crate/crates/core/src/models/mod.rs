//! Concrete free algebras with explicit product formulas, and a checker that
//! evaluates a presentation's relations on them.
//!
//! Elements are multilinear: a basis element of degree `d` uses the letters
//! `0..d`, and the checker shifts the letters of each argument so that a tuple
//! never repeats a letter. Because every product is natural in the letters,
//! one representative per letter pattern is enough.

mod rooted;
mod trees;
mod words;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exactmath::Rational;
use crate::presentation::{parse, Presentation, TreeExpr};

pub use rooted::{nap_graft, prelie_graft, NapModel, PreLieModel};
pub use trees::{dend_left, dend_right, dend_star, dup_over, dup_under, DecoratedTree, DendModel, DupModel};
pub use words::{
    as_concat, dias_left, dias_right, perm_product, zinb_halfshuffle, ConcatModel, DiasModel, MarkedWord, PermElement, PermModel,
    TensorWord, ZinbModel,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("the model has no operation `{symbol}` of arity {arity}")]
    UnknownOperation { symbol: String, arity: usize },
    #[error("bad interpretation of `{symbol}`: {message}")]
    Interpretation { symbol: String, message: String },
}

/// A finite formal linear combination with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinComb<E: Ord>(BTreeMap<E, Rational>);

impl<E: Ord + Clone> LinComb<E> {
    pub fn zero() -> Self {
        LinComb(BTreeMap::new())
    }

    pub fn basis(e: E) -> Self {
        let mut m = BTreeMap::new();
        m.insert(e, Rational::one());
        LinComb(m)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (E, Rational)>) -> Self {
        let mut out = LinComb::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    pub fn add_term(&mut self, e: E, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb<E>, c: &Rational) {
        for (e, d) in &other.0 {
            self.add_term(e.clone(), &(c * d));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, e: &E) -> Rational {
        self.0.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&E, &Rational)> {
        self.0.iter()
    }
}

impl<E: Ord + fmt::Display> fmt::Display for LinComb<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}·")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A free algebra with an explicit basis and product formulas.
pub trait Model: Sync {
    type Elem: Clone + Ord + fmt::Display + Send + Sync;

    fn id(&self) -> &'static str;

    /// Native operations as `(symbol, arity)`.
    fn operations(&self) -> &'static [(&'static str, usize)];

    /// Number of letters.
    fn degree(&self, e: &Self::Elem) -> usize;

    /// The size used by the `size` bound of [`relation_check`] (letters, leaves, vertices...).
    fn size(&self, e: &Self::Elem) -> usize {
        self.degree(e)
    }

    /// Renames letter `i` to `i + by`.
    fn shift(&self, e: &Self::Elem, by: usize) -> Self::Elem;

    /// The full multilinear basis in degree `d` (letters `0..d`).
    fn basis(&self, d: usize) -> Vec<Self::Elem>;

    /// Enough of the basis to test identities, up to renaming letters.
    fn representatives(&self, d: usize) -> Vec<Self::Elem> {
        self.basis(d)
    }

    fn apply(&self, op: &str, args: &[&Self::Elem]) -> LinComb<Self::Elem>;
}

/// How the symbols of a presentation act in a model: each symbol becomes a
/// linear combination of native operations applied to `x1..xk`.
#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    defs: BTreeMap<String, (usize, Vec<(Rational, TreeExpr)>)>,
}

impl Interpretation {
    /// Every symbol means the native operation of the same name.
    pub fn native() -> Self {
        Interpretation::default()
    }

    /// Definitions such as `("b", 2, "l(x1,x2) - r(x2,x1)")`, written in the
    /// model's native symbols.
    pub fn define(model_ops: &[(&str, usize)], defs: &[(&str, usize, &str)]) -> Result<Self, ModelError> {
        let mut header = String::from("name interpretation\nmode symmetric\n");
        for (s, k) in model_ops {
            header.push_str(&format!("op {s} arity {k}\n"));
        }
        let mut out = Interpretation::default();
        for (sym, arity, body) in defs {
            let src = format!("{header}rel {body}\n");
            let p = parse(&src).map_err(|e| ModelError::Interpretation { symbol: sym.to_string(), message: e.to_string() })?;
            let rel = &p.relations[0];
            if rel.arity() != *arity {
                return Err(ModelError::Interpretation {
                    symbol: sym.to_string(),
                    message: format!("uses {} variables, expected {arity}", rel.arity()),
                });
            }
            out.defs.insert(sym.to_string(), (*arity, rel.terms.clone()));
        }
        Ok(out)
    }
}

fn eval<M: Model>(m: &M, interp: &Interpretation, e: &TreeExpr, inputs: &[M::Elem]) -> Result<LinComb<M::Elem>, ModelError> {
    match e {
        TreeExpr::Var(i) => Ok(LinComb::basis(inputs[*i].clone())),
        TreeExpr::Op(sym, args) => {
            let vals: Vec<LinComb<M::Elem>> = args.iter().map(|a| eval(m, interp, a, inputs)).collect::<Result<_, _>>()?;
            if let Some((k, body)) = interp.defs.get(sym) {
                if *k != args.len() {
                    return Err(ModelError::UnknownOperation { symbol: sym.clone(), arity: args.len() });
                }
                // substitute the argument values into the native definition
                let mut out = LinComb::zero();
                for (c, t) in body {
                    out.add_scaled(&eval_native(m, t, &vals)?, c);
                }
                return Ok(out);
            }
            apply_linear(m, sym, &vals)
        }
    }
}

fn eval_native<M: Model>(m: &M, e: &TreeExpr, vals: &[LinComb<M::Elem>]) -> Result<LinComb<M::Elem>, ModelError> {
    match e {
        TreeExpr::Var(i) => Ok(vals[*i].clone()),
        TreeExpr::Op(sym, args) => {
            let inner: Vec<LinComb<M::Elem>> = args.iter().map(|a| eval_native(m, a, vals)).collect::<Result<_, _>>()?;
            apply_linear(m, sym, &inner)
        }
    }
}

/// Multilinear extension of a native operation.
fn apply_linear<M: Model>(m: &M, sym: &str, vals: &[LinComb<M::Elem>]) -> Result<LinComb<M::Elem>, ModelError> {
    if !m.operations().iter().any(|(s, k)| *s == sym && *k == vals.len()) {
        return Err(ModelError::UnknownOperation { symbol: sym.to_string(), arity: vals.len() });
    }
    let mut out = LinComb::zero();
    let terms: Vec<Vec<(&M::Elem, &Rational)>> = vals.iter().map(|v| v.terms().collect()).collect();
    if terms.iter().any(|t| t.is_empty()) {
        return Ok(out);
    }
    let mut idx = vec![0usize; terms.len()];
    'outer: loop {
        let args: Vec<&M::Elem> = idx.iter().zip(&terms).map(|(&i, t)| t[i].0).collect();
        let mut c = Rational::one();
        for (&i, t) in idx.iter().zip(&terms) {
            c *= t[i].1;
        }
        out.add_scaled(&m.apply(sym, &args), &c);
        for j in (0..idx.len()).rev() {
            idx[j] += 1;
            if idx[j] < terms[j].len() {
                continue 'outer;
            }
            idx[j] = 0;
        }
        break;
    }
    Ok(out)
}

/// A failing instance of a relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub relation: String,
    pub inputs: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub model: String,
    pub presentation: String,
    pub size: usize,
    pub identities: usize,
    pub instances: usize,
    pub counterexample: Option<Counterexample>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(
                f,
                "{} satisfies {} ({} identities, {} instances, size <= {})",
                self.model, self.presentation, self.identities, self.instances, self.size
            ),
            Some(c) => write!(
                f,
                "{} violates {}: {} at ({}) gives {}",
                self.model,
                self.presentation,
                c.relation,
                c.inputs.join(", "),
                c.value
            ),
        }
    }
}

/// The identities to test: every relation, plus `g∘σ - λ·g` for each declared symmetry.
fn identities(p: &Presentation) -> Vec<(String, Vec<(Rational, TreeExpr)>)> {
    let mut out = Vec::new();
    for g in &p.generators {
        for e in &g.equivariances {
            let args = |img: &dyn Fn(usize) -> usize| (0..g.arity).map(|i| TreeExpr::Var(img(i))).collect::<Vec<_>>();
            let moved = TreeExpr::Op(g.symbol.clone(), args(&|i| e.perm.apply(i)));
            let plain = TreeExpr::Op(g.symbol.clone(), args(&|i| i));
            out.push((format!("{moved} = {} * {plain}", e.scalar), vec![(Rational::one(), moved), (-e.scalar.clone(), plain)]));
        }
    }
    for r in &p.relations {
        out.push((crate::presentation::render_relation(r), r.terms.clone()));
    }
    out
}

/// Substitutes every tuple of representatives of size `<= size` into each
/// identity of `p` and reports the first failure.
pub fn relation_check<M: Model>(m: &M, p: &Presentation, size: usize, interp: &Interpretation) -> Result<CheckReport, ModelError> {
    use rayon::prelude::*;

    let mut pool: Vec<M::Elem> = Vec::new();
    for d in 1..=size {
        pool.extend(m.representatives(d).into_iter().filter(|e| m.size(e) <= size));
    }
    let ids = identities(p);
    let mut instances = 0usize;
    for (text, terms) in &ids {
        let arity = terms.first().map_or(0, |(_, t)| t.leaf_count());
        let total = pool.len().pow(arity as u32);
        let tuple = |mut k: usize| {
            let mut picks = vec![0usize; arity];
            for j in (0..arity).rev() {
                picks[j] = k % pool.len();
                k /= pool.len();
            }
            picks
        };
        let first_bad = (0..total)
            .into_par_iter()
            .map(|k| -> Result<Option<(Vec<M::Elem>, LinComb<M::Elem>)>, ModelError> {
                let mut offset = 0;
                let inputs: Vec<M::Elem> = tuple(k)
                    .into_iter()
                    .map(|i| {
                        let e = m.shift(&pool[i], offset);
                        offset += m.degree(&pool[i]);
                        e
                    })
                    .collect();
                let mut v = LinComb::zero();
                for (c, t) in terms {
                    v.add_scaled(&eval(m, interp, t, &inputs)?, c);
                }
                Ok(if v.is_zero() { None } else { Some((inputs, v)) })
            })
            .find_first(|r| !matches!(r, Ok(None)));
        instances += total;
        match first_bad {
            None => {}
            Some(Err(e)) => return Err(e),
            Some(Ok(Some((inputs, v)))) => {
                return Ok(CheckReport {
                    model: m.id().to_string(),
                    presentation: p.name.clone(),
                    size,
                    identities: ids.len(),
                    instances,
                    counterexample: Some(Counterexample {
                        relation: text.clone(),
                        inputs: inputs.iter().map(|e| e.to_string()).collect(),
                        value: v.to_string(),
                    }),
                })
            }
            Some(Ok(None)) => unreachable!(),
        }
    }
    Ok(CheckReport { model: m.id().to_string(), presentation: p.name.clone(), size, identities: ids.len(), instances, counterexample: None })
}

/// Model identifiers accepted by [`check_by_id`].
pub const MODEL_IDS: &[&str] = &["concat", "zinbiel", "dendriform", "duplicial", "diassociative", "perm", "prelie", "nap"];

/// [`relation_check`] with the model chosen by name.
pub fn check_by_id(id: &str, p: &Presentation, size: usize, interp: &Interpretation) -> Result<CheckReport, ModelError> {
    match id {
        "concat" => relation_check(&ConcatModel, p, size, interp),
        "zinbiel" => relation_check(&ZinbModel, p, size, interp),
        "dendriform" => relation_check(&DendModel, p, size, interp),
        "duplicial" => relation_check(&DupModel, p, size, interp),
        "diassociative" => relation_check(&DiasModel, p, size, interp),
        "perm" => relation_check(&PermModel, p, size, interp),
        "prelie" => relation_check(&PreLieModel, p, size, interp),
        "nap" => relation_check(&NapModel, p, size, interp),
        other => Err(ModelError::UnknownModel(other.to_string())),
    }
}

/// Native operations of a model chosen by name.
pub fn operations_by_id(id: &str) -> Result<&'static [(&'static str, usize)], ModelError> {
    Ok(match id {
        "concat" => ConcatModel.operations(),
        "zinbiel" => ZinbModel.operations(),
        "dendriform" => DendModel.operations(),
        "duplicial" => DupModel.operations(),
        "diassociative" => DiasModel.operations(),
        "perm" => PermModel.operations(),
        "prelie" => PreLieModel.operations(),
        "nap" => NapModel.operations(),
        other => return Err(ModelError::UnknownModel(other.to_string())),
    })
}

/// `dim` of the multilinear component of degree `d`.
pub fn multilinear_dim(id: &str, d: usize) -> Result<usize, ModelError> {
    Ok(match id {
        "concat" => ConcatModel.basis(d).len(),
        "zinbiel" => ZinbModel.basis(d).len(),
        "dendriform" => DendModel.basis(d).len(),
        "duplicial" => DupModel.basis(d).len(),
        "diassociative" => DiasModel.basis(d).len(),
        "perm" => PermModel.basis(d).len(),
        "prelie" => PreLieModel.basis(d).len(),
        "nap" => NapModel.basis(d).len(),
        other => return Err(ModelError::UnknownModel(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lincomb_cancels() {
        let mut v = LinComb::basis(1u8);
        v.add_term(2, &Rational::from_int(3));
        v.add_term(1, &-Rational::one());
        assert_eq!(v.len(), 1);
        assert_eq!(v.coefficient(&2), Rational::from_int(3));
        assert_eq!(v.to_string(), "3·2");
    }

    #[test]
    fn interpretation_rejects_bad_bodies() {
        let ops = [("l", 2), ("r", 2)];
        assert!(Interpretation::define(&ops, &[("b", 2, "l(x1,x2) - r(x2,x1)")]).is_ok());
        assert!(Interpretation::define(&ops, &[("b", 2, "q(x1,x2)")]).is_err());
        assert!(Interpretation::define(&ops, &[("b", 3, "l(x1,x2)")]).is_err());
    }

    #[test]
    fn unknown_model_and_operation() {
        let p = parse("name X\nop m arity 2\nrel m(m(x1,x2),x3) - m(x1,m(x2,x3))\n").unwrap();
        assert!(matches!(check_by_id("nope", &p, 2, &Interpretation::native()), Err(ModelError::UnknownModel(_))));
        let q = parse("name X\nop w arity 2\nrel w(w(x1,x2),x3) - w(x1,w(x2,x3))\n").unwrap();
        assert!(matches!(check_by_id("concat", &q, 2, &Interpretation::native()), Err(ModelError::UnknownOperation { .. })));
    }

    const DEND: &str = "name Dend\nmode ns\nop l arity 2\nop r arity 2\n\
        rel l(l(x1,x2),x3) = l(x1,l(x2,x3)) + l(x1,r(x2,x3))\n\
        rel l(r(x1,x2),x3) = r(x1,l(x2,x3))\n\
        rel r(l(x1,x2),x3) + r(r(x1,x2),x3) = r(x1,r(x2,x3))\n";
    const DUP: &str = "name Dup\nmode ns\nop l arity 2\nop r arity 2\n\
        rel l(l(x1,x2),x3) = l(x1,l(x2,x3))\n\
        rel l(r(x1,x2),x3) = r(x1,l(x2,x3))\n\
        rel r(r(x1,x2),x3) = r(x1,r(x2,x3))\n";
    const DIAS: &str = "name Dias\nmode ns\nop l arity 2\nop r arity 2\n\
        rel l(l(x1,x2),x3) = l(x1,l(x2,x3))\n\
        rel l(l(x1,x2),x3) = l(x1,r(x2,x3))\n\
        rel l(r(x1,x2),x3) = r(x1,l(x2,x3))\n\
        rel r(l(x1,x2),x3) = r(x1,r(x2,x3))\n\
        rel r(r(x1,x2),x3) = r(x1,r(x2,x3))\n";
    const ZINB: &str = "name Zinb\nop m arity 2\nrel m(m(x1,x2),x3) = m(x1,m(x2,x3)) + m(x1,m(x3,x2))\n";
    const PERM: &str = "name Perm\nop m arity 2\nrel m(m(x1,x2),x3) = m(x1,m(x2,x3)) = m(x1,m(x3,x2))\n";
    const PRELIE: &str =
        "name PreLie\nop m arity 2\nrel m(m(x1,x2),x3) - m(x1,m(x2,x3)) = m(m(x1,x3),x2) - m(x1,m(x3,x2))\n";
    const NAP: &str = "name NAP\nop m arity 2\nrel m(m(x1,x2),x3) = m(m(x1,x3),x2)\n";
    const AS: &str = "name As\nmode ns\nop m arity 2\nrel m(m(x1,x2),x3) = m(x1,m(x2,x3))\n";
    const COM: &str = "name Com\nop m arity 2 sym [2,1] = 1\nrel m(m(x1,x2),x3) = m(x1,m(x2,x3))\n";
    const LEIB: &str = "name Leib\nop b arity 2\nrel b(b(x1,x2),x3) = b(x1,b(x2,x3)) + b(b(x1,x3),x2)\n";

    fn native(id: &str, src: &str, size: usize) -> CheckReport {
        check_by_id(id, &parse(src).unwrap(), size, &Interpretation::native()).unwrap()
    }

    #[test]
    fn native_suites_pass() {
        for (id, src, size) in [
            ("dendriform", DEND, 4),
            ("duplicial", DUP, 4),
            ("diassociative", DIAS, 4),
            ("zinbiel", ZINB, 4),
            ("perm", PERM, 3),
            ("prelie", PRELIE, 3),
            ("nap", NAP, 4),
            ("concat", AS, 3),
        ] {
            let r = native(id, src, size);
            assert!(r.passed(), "{r}");
            assert!(r.instances > 0);
        }
    }

    #[test]
    fn concatenation_is_not_zinbiel() {
        let r = native("concat", ZINB, 3);
        let c = r.counterexample.as_ref().expect("must fail");
        assert_eq!(c.inputs, vec!["a", "b", "c"]);
        assert!(r.to_string().contains("violates"));
    }

    #[test]
    fn swapped_dend_operations_fail() {
        let swapped = DEND.replace("op l", "op x").replace("op r", "op l").replace("op x", "op r");
        let swapped = swapped.replace("l(", "X(").replace("r(", "l(").replace("X(", "r(");
        assert!(!native("dendriform", &swapped, 3).passed());
        assert!(!native("duplicial", DEND, 3).passed());
    }

    #[test]
    fn derived_operations() {
        let dias = DiasModel.operations();
        let leib = Interpretation::define(dias, &[("b", 2, "l(x1,x2) - r(x2,x1)")]).unwrap();
        assert!(relation_check(&DiasModel, &parse(LEIB).unwrap(), 4, &leib).unwrap().passed());

        let dend = DendModel.operations();
        let prelie = Interpretation::define(dend, &[("m", 2, "l(x1,x2) - r(x2,x1)")]).unwrap();
        assert!(relation_check(&DendModel, &parse(PRELIE).unwrap(), 4, &prelie).unwrap().passed());
        let star = Interpretation::define(dend, &[("m", 2, "l(x1,x2) + r(x1,x2)")]).unwrap();
        assert!(relation_check(&DendModel, &parse(AS).unwrap(), 4, &star).unwrap().passed());

        let sym = Interpretation::define(ZinbModel.operations(), &[("m", 2, "m(x1,x2) + m(x2,x1)")]).unwrap();
        let r = relation_check(&ZinbModel, &parse(COM).unwrap(), 4, &sym).unwrap();
        assert!(r.passed(), "{r}");
        // the raw half-shuffle is not commutative
        assert!(!native("zinbiel", COM, 2).passed());
    }

    #[test]
    fn multilinear_dims_by_id() {
        let ns = |id: &str| (1..=5).map(|d| multilinear_dim(id, d).unwrap() / (1..=d).product::<usize>()).collect::<Vec<_>>();
        assert_eq!(ns("dendriform"), vec![1, 2, 5, 14, 42]);
        assert_eq!(ns("duplicial"), vec![1, 2, 5, 14, 42]);
        assert_eq!(ns("diassociative"), vec![1, 2, 3, 4, 5]);
        assert_eq!(ns("concat"), vec![1; 5]);
        let sym = |id: &str| (1..=5).map(|d| multilinear_dim(id, d).unwrap()).collect::<Vec<_>>();
        assert_eq!(sym("zinbiel"), vec![1, 2, 6, 24, 120]);
        assert_eq!(sym("perm"), vec![1, 2, 3, 4, 5]);
        assert_eq!(sym("prelie"), vec![1, 2, 9, 64, 625]);
        assert_eq!(sym("nap"), vec![1, 2, 9, 64, 625]);
    }
}
