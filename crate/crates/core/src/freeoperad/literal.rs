//! The free operad spelled out on labelled planar monomials.
//!
//! Slow but direct: every relation (including the symmetries of the
//! generators, written as relations between corollas) is inserted at every
//! position of every monomial. Used for small arities and as an oracle for
//! the normal-form engine.

use std::collections::HashMap;

use crate::exactmath::{Permutation, Rational, SpanMatrix, SparseVec};
use crate::presentation::{Mode, Presentation, Relation, TreeExpr};

use super::combinat::{interval_partitions, ordered_partitions};
use super::{FreeError, TreeMonomial};

/// Decorated planar trees with leaves `0..n` in order.
fn ns_trees(arities: &[usize], n: usize, out: &mut Vec<TreeMonomial>) {
    if n == 1 {
        out.push(TreeMonomial::Leaf(0));
        return;
    }
    for (g, &k) in arities.iter().enumerate() {
        if k < 2 || k > n {
            continue;
        }
        for comp in crate::trees::compositions(n, k) {
            let parts: Vec<Vec<TreeMonomial>> = comp
                .iter()
                .map(|&s| {
                    let mut v = Vec::new();
                    ns_trees(arities, s, &mut v);
                    v
                })
                .collect();
            if parts.iter().any(|v| v.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; k];
            'outer: loop {
                let mut offset = 0;
                let children = (0..k)
                    .map(|j| {
                        let t = parts[j][idx[j]].relabel(&|l| l + offset);
                        offset += comp[j];
                        t
                    })
                    .collect();
                out.push(TreeMonomial::Node(g, children));
                for j in (0..k).rev() {
                    idx[j] += 1;
                    if idx[j] < parts[j].len() {
                        continue 'outer;
                    }
                    idx[j] = 0;
                }
                break;
            }
        }
    }
}

pub(super) fn basis(p: &Presentation, n: usize) -> Vec<TreeMonomial> {
    let arities: Vec<usize> = p.generators.iter().map(|g| g.arity).collect();
    let mut shapes = Vec::new();
    ns_trees(&arities, n, &mut shapes);
    match p.mode {
        Mode::Ns => shapes,
        Mode::Symmetric => {
            let perms = Permutation::all(n);
            let mut out = Vec::with_capacity(shapes.len() * perms.len());
            for t in &shapes {
                for s in &perms {
                    out.push(t.relabel(&|l| s.apply(l)));
                }
            }
            out
        }
    }
}

/// Relations used literally: the declared ones plus `g∘σ - λ g` for each symmetry.
fn literal_relations(p: &Presentation) -> Vec<Relation> {
    let mut out = Vec::new();
    for g in &p.generators {
        let Ok(closure) = g.equivariance_closure() else { continue };
        for (perm, scalar) in closure {
            if perm.is_identity() {
                continue;
            }
            let args = |s: &Permutation| (0..g.arity).map(|i| TreeExpr::Var(s.apply(i))).collect();
            out.push(Relation::new(vec![
                (Rational::one(), TreeExpr::op(&g.symbol, args(&perm))),
                (-scalar, TreeExpr::op(&g.symbol, args(&Permutation::identity(g.arity)))),
            ]));
        }
    }
    out.extend(p.relations.iter().cloned());
    out
}

fn place(t: &TreeMonomial, block: u64) -> TreeMonomial {
    let labels: Vec<usize> = (0..64).filter(|b| block >> b & 1 == 1).collect();
    t.relabel(&|l| labels[l])
}

fn substitute(p: &Presentation, e: &TreeExpr, subs: &[TreeMonomial]) -> TreeMonomial {
    match e {
        TreeExpr::Var(i) => subs[*i].clone(),
        TreeExpr::Op(s, args) => TreeMonomial::Node(
            p.generator_index(s).expect("validated symbol"),
            args.iter().map(|a| substitute(p, a, subs)).collect(),
        ),
    }
}

struct Arity {
    basis: Vec<TreeMonomial>,
    index: HashMap<TreeMonomial, u32>,
    ideal: Vec<SparseVec>,
}

pub(super) struct Literal<'a> {
    p: &'a Presentation,
    rels: Vec<Relation>,
    levels: Vec<Arity>,
}

impl<'a> Literal<'a> {
    pub fn new(p: &'a Presentation) -> Self {
        Literal { p, rels: literal_relations(p), levels: Vec::new() }
    }

    fn blocks(&self, n: usize, k: usize) -> Vec<Vec<u64>> {
        match self.p.mode {
            Mode::Ns => interval_partitions(n, k),
            Mode::Symmetric => ordered_partitions(n, k),
        }
    }

    /// Spanning rows of the ideal in arity `n` (requires all smaller arities).
    fn span(&self, n: usize, index: &HashMap<TreeMonomial, u32>, ncols: usize) -> SpanMatrix {
        let mut m = SpanMatrix::new(ncols);
        let col = |t: &TreeMonomial| index[t];
        let each_choice = |sizes: &[usize], skip: Option<usize>, f: &mut dyn FnMut(&[usize])| {
            let lens: Vec<usize> = sizes
                .iter()
                .enumerate()
                .map(|(j, &s)| if Some(j) == skip { 1 } else { self.levels[s].basis.len() })
                .collect();
            if lens.contains(&0) {
                return;
            }
            let mut idx = vec![0usize; sizes.len()];
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
        };
        // relation at the root, arbitrary monomials below
        for r in &self.rels {
            let a = r.arity();
            if a > n {
                continue;
            }
            for blocks in self.blocks(n, a) {
                let sizes: Vec<usize> = blocks.iter().map(|b| b.count_ones() as usize).collect();
                each_choice(&sizes, None, &mut |idx| {
                    let subs: Vec<TreeMonomial> = (0..a)
                        .map(|j| place(&self.levels[sizes[j]].basis[idx[j]], blocks[j]))
                        .collect();
                    let row = r.terms.iter().map(|(c, t)| (col(&substitute(self.p, t, &subs)), c.clone())).collect();
                    m.push(SparseVec::from_pairs(row));
                });
            }
        }
        // a generator at the root, an ideal element in one subtree
        for (g, gen) in self.p.generators.iter().enumerate() {
            let k = gen.arity;
            if k < 2 || k > n {
                continue;
            }
            for blocks in self.blocks(n, k) {
                let sizes: Vec<usize> = blocks.iter().map(|b| b.count_ones() as usize).collect();
                for j in 0..k {
                    for ideal_row in &self.levels[sizes[j]].ideal {
                        each_choice(&sizes, Some(j), &mut |idx| {
                            let mut pairs = Vec::new();
                            for (c, coef) in ideal_row.entries() {
                                let children = (0..k)
                                    .map(|i| {
                                        let t = if i == j {
                                            &self.levels[sizes[i]].basis[*c as usize]
                                        } else {
                                            &self.levels[sizes[i]].basis[idx[i]]
                                        };
                                        place(t, blocks[i])
                                    })
                                    .collect();
                                pairs.push((col(&TreeMonomial::Node(g, children)), coef.clone()));
                            }
                            m.push(SparseVec::from_pairs(pairs));
                        });
                    }
                }
            }
        }
        m
    }

    /// Fills levels up to `n` and returns the spanning rows for arity `n`.
    pub fn run(&mut self, n: usize, limit: usize) -> Result<SpanMatrix, FreeError> {
        if self.levels.is_empty() {
            self.levels.push(Arity { basis: Vec::new(), index: HashMap::new(), ideal: Vec::new() });
        }
        let mut last = None;
        for m in self.levels.len()..=n {
            let size = super::free_dim(self.p, m);
            if size > limit as u128 {
                return Err(FreeError::TooLarge { arity: m, size, limit });
            }
            let basis = basis(self.p, m);
            let index: HashMap<TreeMonomial, u32> =
                basis.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
            let span = if m == 1 { SpanMatrix::new(1) } else { self.span(m, &index, basis.len()) };
            let ideal = span.echelon_basis();
            self.levels.push(Arity { basis, index, ideal });
            last = Some(span);
        }
        match last {
            Some(s) => Ok(s),
            None => {
                let lv = &self.levels[n];
                Ok(self.span(n, &lv.index, lv.basis.len()))
            }
        }
    }

    pub fn ideal_dim(&self, n: usize) -> usize {
        self.levels[n].ideal.len()
    }
}
