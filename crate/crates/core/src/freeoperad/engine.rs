//! Arity-by-arity normal forms for quotients of free operads.
//!
//! Symmetries of the generators and relations between single corollas are
//! divided out first: each arity-`k` vertex is decorated by a basis element of
//! `E'(k)`, the span of all `g(x_σ(1), ..., x_σ(k))` modulo those relations.
//! Monomials are then shuffle trees (children ordered by smallest leaf label;
//! in ns mode leaves simply stay in order).
//!
//! In arity `n`, modulo the ideal elements that sit strictly below the root,
//! the quotient is spanned by a root decoration with reduced (normal-form)
//! children. The remaining ideal elements are relations placed at the root
//! with normal-form children substituted for their variables, so only these
//! rows are eliminated. Their non-pivot columns form the normal-form basis of
//! arity `n`, and the reduced echelon form rewrites every other column.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::exactmath::dense::rref;
use crate::exactmath::{Permutation, Rational, SpanMatrix, SparseVec};
use crate::presentation::{Mode, Presentation, Relation, TreeExpr};

use super::combinat::{compress, interval_partitions, ordered_partitions, set_partitions};

/// Basis of `E'(k)` and the rewriting of every `(g, π)` in it.
#[derive(Debug)]
pub(crate) struct DecTable {
    pub basis: Vec<(usize, Permutation)>,
    pub expand: HashMap<(usize, Permutation), Vec<(u32, Rational)>>,
}

pub(crate) fn decorations(p: &Presentation, k: usize, corolla_rels: &[&Relation]) -> DecTable {
    let gens: Vec<usize> = (0..p.generators.len()).filter(|&g| p.generators[g].arity == k).collect();
    let perms = match p.mode {
        Mode::Ns => vec![Permutation::identity(k)],
        Mode::Symmetric => Permutation::all(k),
    };
    let mut cols: Vec<(usize, Permutation)> = Vec::new();
    for &g in &gens {
        for s in &perms {
            cols.push((g, s.clone()));
        }
    }
    let ncols = cols.len();
    // reversed column order, so the first generators with the identity
    // arrangement are preferred as basis elements
    let pos: HashMap<(usize, Permutation), usize> =
        cols.iter().enumerate().map(|(i, c)| (c.clone(), ncols - 1 - i)).collect();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut push = |terms: Vec<((usize, Permutation), Rational)>| {
        let mut row = vec![Rational::zero(); ncols];
        for (c, v) in terms {
            row[pos[&c]] += &v;
        }
        rows.push(row);
    };
    let translates = |s: &Permutation| -> Vec<Permutation> {
        match p.mode {
            Mode::Ns => vec![s.clone()],
            Mode::Symmetric => perms.iter().map(|r| r.compose(s)).collect(),
        }
    };
    for &g in &gens {
        if let Ok(closure) = p.generators[g].equivariance_closure() {
            for (s, lambda) in closure {
                if s.is_identity() {
                    continue;
                }
                for r in &perms {
                    push(vec![((g, r.compose(&s)), Rational::one()), ((g, r.clone()), -lambda.clone())]);
                }
            }
        }
    }
    for rel in corolla_rels {
        let terms: Vec<(Rational, usize, Permutation)> = rel
            .terms
            .iter()
            .map(|(c, t)| match t {
                TreeExpr::Op(s, args) => {
                    let g = p.generator_index(s).expect("validated symbol");
                    let images = args
                        .iter()
                        .map(|a| match a {
                            TreeExpr::Var(i) => *i,
                            TreeExpr::Op(..) => unreachable!("corolla relation"),
                        })
                        .collect();
                    (c.clone(), g, Permutation::from_images(images))
                }
                TreeExpr::Var(_) => unreachable!("validated relation"),
            })
            .collect();
        for r in translates(&Permutation::identity(k)) {
            push(terms.iter().map(|(c, g, s)| ((*g, r.compose(s)), c.clone())).collect());
        }
    }
    let pivots = if rows.is_empty() { Vec::new() } else { rref(&mut rows) };
    let is_pivot: Vec<bool> = (0..ncols).map(|c| pivots.contains(&c)).collect();
    let mut basis_of_pos: HashMap<usize, u32> = HashMap::new();
    let mut basis = Vec::new();
    for c in &cols {
        let q = pos[c];
        if !is_pivot[q] {
            basis_of_pos.insert(q, basis.len() as u32);
            basis.push(c.clone());
        }
    }
    let mut expand = HashMap::new();
    for c in &cols {
        let q = pos[c];
        let e = if let Some(&b) = basis_of_pos.get(&q) {
            vec![(b, Rational::one())]
        } else {
            let r = pivots.iter().position(|&pc| pc == q).unwrap();
            let mut v: Vec<(u32, Rational)> = (0..ncols)
                .filter(|&j| j != q && !rows[r][j].is_zero())
                .map(|j| (basis_of_pos[&j], -rows[r][j].clone()))
                .collect();
            v.sort_by_key(|(b, _)| *b);
            v
        };
        expand.insert(c.clone(), e);
    }
    DecTable { basis, expand }
}

#[derive(Clone, Debug)]
enum TExpr {
    Var(usize),
    Node(usize, Vec<TExpr>),
}

impl TExpr {
    fn from_expr(p: &Presentation, e: &TreeExpr) -> TExpr {
        match e {
            TreeExpr::Var(i) => TExpr::Var(*i),
            TreeExpr::Op(s, args) => TExpr::Node(
                p.generator_index(s).expect("validated symbol"),
                args.iter().map(|a| TExpr::from_expr(p, a)).collect(),
            ),
        }
    }
}

struct Template {
    arity: usize,
    terms: Vec<(Rational, TExpr)>,
}

/// An expression tree whose leaves are normal-form basis elements placed on a label set.
enum X {
    Q(u64, u32),
    Node(usize, Vec<X>, u64),
}

impl X {
    fn mask(&self) -> u64 {
        match self {
            X::Q(m, _) | X::Node(_, _, m) => *m,
        }
    }

    fn build(e: &TExpr, blocks: &[u64], qs: &[u32]) -> X {
        match e {
            TExpr::Var(i) => X::Q(blocks[*i], qs[*i]),
            TExpr::Node(g, args) => {
                let children: Vec<X> = args.iter().map(|a| X::build(a, blocks, qs)).collect();
                let m = children.iter().fold(0, |acc, c| acc | c.mask());
                X::Node(*g, children, m)
            }
        }
    }

    fn encode(&self, within: u64, out: &mut Vec<u64>) {
        match self {
            X::Q(m, q) => {
                out.push(compress(*m, within));
                out.push(*q as u64);
            }
            X::Node(g, c, _) => {
                out.push(1 << 63 | *g as u64);
                c.iter().for_each(|x| x.encode(within, out));
            }
        }
    }
}

/// Root decoration (local to its arity) and children as (standardized label set, normal form index).
type VKey = (u32, Vec<(u64, u32)>);

enum Nf {
    Basis(u32),
    Combo(Vec<(u32, Rational)>),
}

struct Level {
    index: HashMap<VKey, u32>,
    nf: Vec<Nf>,
    qdim: usize,
}

type Memo = HashMap<Vec<u64>, Arc<Vec<(u32, Rational)>>>;

pub(crate) enum Step {
    Done { quotient: usize },
    TooLarge { size: u128 },
}

pub(crate) struct Engine {
    mode: Mode,
    decs: BTreeMap<usize, DecTable>,
    templates: Vec<Template>,
    levels: Vec<Level>,
}

impl Engine {
    pub fn new(p: &Presentation) -> Engine {
        let mut corolla: BTreeMap<usize, Vec<&Relation>> = BTreeMap::new();
        let mut templates = Vec::new();
        for r in &p.relations {
            if r.terms.is_empty() {
                continue;
            }
            if r.max_vertices() == 1 {
                corolla.entry(r.arity()).or_default().push(r);
            } else {
                templates.push(Template {
                    arity: r.arity(),
                    terms: r.terms.iter().map(|(c, t)| (c.clone(), TExpr::from_expr(p, t))).collect(),
                });
            }
        }
        let mut decs = BTreeMap::new();
        for g in &p.generators {
            decs.entry(g.arity).or_insert_with(|| {
                decorations(p, g.arity, corolla.get(&g.arity).map_or(&[][..], |v| &v[..]))
            });
        }
        let leaf = Level { index: HashMap::from([((0, Vec::new()), 0)]), nf: vec![Nf::Basis(0)], qdim: 1 };
        let empty = Level { index: HashMap::new(), nf: Vec::new(), qdim: 0 };
        Engine { mode: p.mode, decs, templates, levels: vec![empty, leaf] }
    }

    fn root_blocks(&self, n: usize, k: usize) -> Vec<Vec<u64>> {
        match self.mode {
            Mode::Ns => interval_partitions(n, k),
            Mode::Symmetric => set_partitions(n, k),
        }
    }

    fn relation_blocks(&self, n: usize, k: usize) -> Vec<Vec<u64>> {
        match self.mode {
            Mode::Ns => interval_partitions(n, k),
            Mode::Symmetric => ordered_partitions(n, k),
        }
    }

    fn block_product(&self, blocks: &[u64]) -> u128 {
        blocks.iter().map(|b| self.levels[b.count_ones() as usize].qdim as u128).product()
    }

    /// Size of the arity-`n` working basis (before elimination).
    pub fn basis_size(&self, n: usize) -> u128 {
        let mut total = 0u128;
        for (&k, t) in &self.decs {
            if k < 2 || k > n || t.basis.is_empty() {
                continue;
            }
            let per: u128 = self.root_blocks(n, k).iter().map(|b| self.block_product(b)).sum();
            total += per * t.basis.len() as u128;
        }
        total
    }

    /// Computes the next arity.
    pub fn step(&mut self, limit: usize) -> Step {
        let n = self.levels.len();
        let size = self.basis_size(n);
        if size > limit as u128 {
            return Step::TooLarge { size };
        }
        // enumerate the working basis
        let mut index: HashMap<VKey, u32> = HashMap::with_capacity(size as usize);
        for (&k, t) in &self.decs {
            if k < 2 || k > n {
                continue;
            }
            let partitions = self.root_blocks(n, k);
            for d in 0..t.basis.len() as u32 {
                for blocks in &partitions {
                    let lens: Vec<u32> = blocks.iter().map(|b| self.levels[b.count_ones() as usize].qdim as u32).collect();
                    for_each_tuple(&lens, |qs| {
                        let key = (d, blocks.iter().zip(qs).map(|(b, q)| (*b, *q)).collect());
                        let next = index.len() as u32;
                        index.insert(key, next);
                    });
                }
            }
        }
        let ncols = index.len();
        // relation rows
        let mut work: Vec<(usize, Vec<u64>)> = Vec::new();
        for (i, t) in self.templates.iter().enumerate() {
            if t.arity <= n {
                for b in self.relation_blocks(n, t.arity) {
                    work.push((i, b));
                }
            }
        }
        let this = &*self;
        let chunks: Vec<Vec<SparseVec>> = work
            .par_iter()
            .map_init(Memo::new, |memo, (i, blocks)| {
                let t = &this.templates[*i];
                let lens: Vec<u32> =
                    blocks.iter().map(|b| this.levels[b.count_ones() as usize].qdim as u32).collect();
                let mut rows = Vec::new();
                for_each_tuple(&lens, |qs| {
                    let mut acc: HashMap<u32, Rational> = HashMap::new();
                    for (c, e) in &t.terms {
                        let x = X::build(e, blocks, qs);
                        let (g, children, m) = match &x {
                            X::Node(g, ch, m) => (*g, ch, *m),
                            X::Q(..) => unreachable!("bare variable"),
                        };
                        for (col, v) in this.node_vector(g, children, m, &index, memo) {
                            *acc.entry(col).or_insert_with(Rational::zero) += &(c * &v);
                        }
                    }
                    let row = SparseVec::from_pairs(acc.into_iter().collect());
                    if !row.is_zero() {
                        rows.push(row);
                    }
                });
                rows
            })
            .collect();
        let rows: Vec<SparseVec> = chunks.into_iter().flatten().collect();
        let red = SpanMatrix::from_rows(ncols, rows).reduced_echelon();
        let mut pivot_row: HashMap<u32, usize> = HashMap::new();
        for (i, r) in red.iter().enumerate() {
            pivot_row.insert(r.entries()[0].0, i);
        }
        let mut q_of = vec![u32::MAX; ncols];
        let mut qdim = 0u32;
        for (c, slot) in q_of.iter_mut().enumerate() {
            if !pivot_row.contains_key(&(c as u32)) {
                *slot = qdim;
                qdim += 1;
            }
        }
        let nf = (0..ncols)
            .map(|c| match pivot_row.get(&(c as u32)) {
                None => Nf::Basis(q_of[c]),
                Some(&r) => {
                    Nf::Combo(red[r].entries()[1..].iter().map(|(j, v)| (q_of[*j as usize], -v.clone())).collect())
                }
            })
            .collect();
        self.levels.push(Level { index, nf, qdim: qdim as usize });
        Step::Done { quotient: qdim as usize }
    }

    /// `g(children)` on label set `mask`, in working-basis coordinates of that arity.
    fn node_vector(
        &self,
        g: usize,
        children: &[X],
        mask: u64,
        top: &HashMap<VKey, u32>,
        memo: &mut Memo,
    ) -> Vec<(u32, Rational)> {
        let k = children.len();
        let m = mask.count_ones() as usize;
        let index = if m == self.levels.len() { top } else { &self.levels[m].index };
        let mut parts: Vec<(u64, Arc<Vec<(u32, Rational)>>)> = children
            .iter()
            .map(|c| match c {
                X::Q(b, q) => (*b, Arc::new(vec![(*q, Rational::one())])),
                X::Node(..) => (c.mask(), self.sub_nf(c, top, memo)),
            })
            .collect();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| parts[i].0.trailing_zeros());
        let mut pos = vec![0; k];
        for (j, &i) in order.iter().enumerate() {
            pos[i] = j;
        }
        let pi = Permutation::from_images(pos);
        let Some(exp) = self.decs.get(&k).and_then(|t| t.expand.get(&(g, pi))) else {
            return Vec::new();
        };
        if exp.is_empty() || parts.iter().any(|(_, v)| v.is_empty()) {
            return Vec::new();
        }
        parts = order.iter().map(|&i| parts[i].clone()).collect();
        let std: Vec<u64> = parts.iter().map(|(b, _)| compress(*b, mask)).collect();
        let lens: Vec<u32> = parts.iter().map(|(_, v)| v.len() as u32).collect();
        let mut out = Vec::new();
        for (d, dv) in exp {
            for_each_tuple(&lens, |sel| {
                let mut coef = dv.clone();
                let mut key = Vec::with_capacity(k);
                for j in 0..k {
                    let (q, v) = &parts[j].1[sel[j] as usize];
                    coef *= v;
                    key.push((std[j], *q));
                }
                out.push((index[&(*d, key)], coef));
            });
        }
        out
    }

    /// Normal form of a subtree below the root, as a combination of basis indices.
    fn sub_nf(&self, x: &X, top: &HashMap<VKey, u32>, memo: &mut Memo) -> Arc<Vec<(u32, Rational)>> {
        let X::Node(g, children, mask) = x else { unreachable!() };
        let mut key = Vec::new();
        x.encode(*mask, &mut key);
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let m = mask.count_ones() as usize;
        let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
        for (col, v) in self.node_vector(*g, children, *mask, top, memo) {
            match &self.levels[m].nf[col as usize] {
                Nf::Basis(q) => *acc.entry(*q).or_insert_with(Rational::zero) += &v,
                Nf::Combo(c) => {
                    for (q, w) in c {
                        *acc.entry(*q).or_insert_with(Rational::zero) += &(&v * w);
                    }
                }
            }
        }
        let out: Arc<Vec<(u32, Rational)>> = Arc::new(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        memo.insert(key, out.clone());
        out
    }
}

/// Calls `f` on every tuple in `0..lens[0] x 0..lens[1] x ...` (lexicographic).
fn for_each_tuple(lens: &[u32], mut f: impl FnMut(&[u32])) {
    if lens.contains(&0) {
        return;
    }
    let mut idx = vec![0u32; lens.len()];
    'outer: loop {
        f(&idx);
        for j in (0..idx.len()).rev() {
            idx[j] += 1;
            if idx[j] < lens[j] {
                continue 'outer;
            }
            idx[j] = 0;
        }
        break;
    }
}
