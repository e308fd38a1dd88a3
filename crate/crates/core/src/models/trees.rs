//! Planar binary tree models: dendriform and duplicial.
//!
//! A multilinear element of degree `n` is a tree with `n + 1` leaves and a
//! word of `n` letters sitting between the leaves; products concatenate the
//! words.

use std::fmt;

use super::words::{identity_word, letter_orders, TensorWord};
use super::{LinComb, Model};
use crate::exactmath::Rational;
use crate::trees::{enumerate_pbt, graft, PlanarBinaryTree};

/// A planar binary tree with a letter in each gap between consecutive leaves.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DecoratedTree {
    pub tree: PlanarBinaryTree,
    pub word: Vec<u32>,
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊗{}", self.tree, TensorWord(self.word.clone()))
    }
}

fn map_trees(v: &LinComb<PlanarBinaryTree>, f: impl Fn(&PlanarBinaryTree) -> PlanarBinaryTree) -> LinComb<PlanarBinaryTree> {
    LinComb::from_terms(v.terms().map(|(t, c)| (f(t), c.clone())))
}

/// `s ∗ t = s ≺ t + s ≻ t`, with the leaf as unit.
pub fn dend_star(s: &PlanarBinaryTree, t: &PlanarBinaryTree) -> LinComb<PlanarBinaryTree> {
    if s.is_leaf() {
        return LinComb::basis(t.clone());
    }
    if t.is_leaf() {
        return LinComb::basis(s.clone());
    }
    let mut out = dend_left(s, t);
    out.add_scaled(&dend_right(s, t), &Rational::one());
    out
}

/// `s ≺ t = s^l ∨ (s^r ∗ t)`.
pub fn dend_left(s: &PlanarBinaryTree, t: &PlanarBinaryTree) -> LinComb<PlanarBinaryTree> {
    match s.decompose() {
        None => LinComb::zero(),
        Some(_) if t.is_leaf() => LinComb::basis(s.clone()),
        Some((sl, sr)) => map_trees(&dend_star(sr, t), |u| graft(sl.clone(), u.clone())),
    }
}

/// `s ≻ t = (s ∗ t^l) ∨ t^r`.
pub fn dend_right(s: &PlanarBinaryTree, t: &PlanarBinaryTree) -> LinComb<PlanarBinaryTree> {
    match t.decompose() {
        None => LinComb::zero(),
        Some(_) if s.is_leaf() => LinComb::basis(t.clone()),
        Some((tl, tr)) => map_trees(&dend_star(s, tl), |u| graft(u.clone(), tr.clone())),
    }
}

/// `s ≻ t`: `s` grafted on the leftmost leaf of `t`.
pub fn dup_over(s: &PlanarBinaryTree, t: &PlanarBinaryTree) -> PlanarBinaryTree {
    t.graft_leftmost(s)
}

/// `s ≺ t`: `t` grafted on the rightmost leaf of `s`.
pub fn dup_under(s: &PlanarBinaryTree, t: &PlanarBinaryTree) -> PlanarBinaryTree {
    s.graft_rightmost(t)
}

fn decorate(v: LinComb<PlanarBinaryTree>, a: &DecoratedTree, b: &DecoratedTree) -> LinComb<DecoratedTree> {
    let mut word = a.word.clone();
    word.extend_from_slice(&b.word);
    LinComb::from_terms(v.terms().map(|(t, c)| (DecoratedTree { tree: t.clone(), word: word.clone() }, c.clone())))
}

fn tree_basis(d: usize, all_words: bool) -> Vec<DecoratedTree> {
    let Ok(shapes) = enumerate_pbt(d + 1) else {
        return Vec::new();
    };
    let words = if all_words { letter_orders(d) } else { vec![identity_word(d)] };
    shapes.iter().flat_map(|t| words.iter().map(move |w| DecoratedTree { tree: t.clone(), word: w.clone() })).collect()
}

fn shift_tree(e: &DecoratedTree, by: usize) -> DecoratedTree {
    DecoratedTree { tree: e.tree.clone(), word: e.word.iter().map(|&x| x + by as u32).collect() }
}

/// Free dendriform algebra: `l = ≺`, `r = ≻`.
pub struct DendModel;

impl Model for DendModel {
    type Elem = DecoratedTree;

    fn id(&self) -> &'static str {
        "dendriform"
    }

    fn operations(&self) -> &'static [(&'static str, usize)] {
        &[("l", 2), ("r", 2)]
    }

    fn degree(&self, e: &DecoratedTree) -> usize {
        e.word.len()
    }

    /// Leaves.
    fn size(&self, e: &DecoratedTree) -> usize {
        e.tree.leaves()
    }

    fn shift(&self, e: &DecoratedTree, by: usize) -> DecoratedTree {
        shift_tree(e, by)
    }

    fn basis(&self, d: usize) -> Vec<DecoratedTree> {
        tree_basis(d, true)
    }

    fn representatives(&self, d: usize) -> Vec<DecoratedTree> {
        tree_basis(d, false)
    }

    fn apply(&self, op: &str, args: &[&DecoratedTree]) -> LinComb<DecoratedTree> {
        let (a, b) = (args[0], args[1]);
        let v = match op {
            "l" => dend_left(&a.tree, &b.tree),
            _ => dend_right(&a.tree, &b.tree),
        };
        decorate(v, a, b)
    }
}

/// Free duplicial algebra: `l = ≺` (under), `r = ≻` (over).
pub struct DupModel;

impl Model for DupModel {
    type Elem = DecoratedTree;

    fn id(&self) -> &'static str {
        "duplicial"
    }

    fn operations(&self) -> &'static [(&'static str, usize)] {
        &[("l", 2), ("r", 2)]
    }

    fn degree(&self, e: &DecoratedTree) -> usize {
        e.word.len()
    }

    /// Leaves.
    fn size(&self, e: &DecoratedTree) -> usize {
        e.tree.leaves()
    }

    fn shift(&self, e: &DecoratedTree, by: usize) -> DecoratedTree {
        shift_tree(e, by)
    }

    fn basis(&self, d: usize) -> Vec<DecoratedTree> {
        tree_basis(d, true)
    }

    fn representatives(&self, d: usize) -> Vec<DecoratedTree> {
        tree_basis(d, false)
    }

    fn apply(&self, op: &str, args: &[&DecoratedTree]) -> LinComb<DecoratedTree> {
        let (a, b) = (args[0], args[1]);
        let t = match op {
            "l" => dup_under(&a.tree, &b.tree),
            _ => dup_over(&a.tree, &b.tree),
        };
        decorate(LinComb::basis(t), a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> PlanarBinaryTree {
        PlanarBinaryTree::y()
    }

    #[test]
    fn dend_on_two_cherries() {
        // |∨Y has its internal edge on the right
        assert_eq!(dend_left(&y(), &y()), LinComb::basis(PlanarBinaryTree::right_comb(3)));
        assert_eq!(dend_right(&y(), &y()), LinComb::basis(PlanarBinaryTree::left_comb(3)));
    }

    #[test]
    fn dend_partial_units() {
        let leaf = PlanarBinaryTree::leaf();
        assert!(dend_left(&leaf, &y()).is_zero());
        assert_eq!(dend_left(&y(), &leaf), LinComb::basis(y()));
        assert_eq!(dend_right(&leaf, &y()), LinComb::basis(y()));
        assert!(dend_right(&y(), &leaf).is_zero());
    }

    #[test]
    fn dend_star_adds_leaf_counts() {
        let a = PlanarBinaryTree::left_comb(3);
        let v = dend_star(&a, &y());
        assert!(!v.is_zero());
        assert!(v.terms().all(|(t, c)| t.leaves() == 4 && c.is_one()));
    }

    #[test]
    fn dup_on_two_cherries() {
        let leaf = PlanarBinaryTree::leaf();
        assert_eq!(dup_over(&leaf, &y()), y());
        assert_eq!(dup_over(&y(), &y()), PlanarBinaryTree::left_comb(3));
        assert_eq!(dup_under(&y(), &y()), PlanarBinaryTree::right_comb(3));
    }

    #[test]
    fn catalan_multilinear_components() {
        let ns: Vec<usize> = (1..=5).map(|d| DendModel.representatives(d).len()).collect();
        assert_eq!(ns, vec![1, 2, 5, 14, 42]);
        assert_eq!(DupModel.basis(3).len(), 5 * 6);
    }
}
