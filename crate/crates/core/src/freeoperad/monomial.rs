use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactmath::Permutation;
use crate::presentation::{Presentation, TreeExpr};
use crate::trees::PlanarTree;

use super::FreeError;

/// A tree monomial: a planar tree whose vertices carry generator indices and
/// whose leaves carry distinct zero-based labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TreeMonomial {
    Leaf(usize),
    Node(usize, Vec<TreeMonomial>),
}

impl TreeMonomial {
    pub fn leaf_count(&self) -> usize {
        match self {
            TreeMonomial::Leaf(_) => 1,
            TreeMonomial::Node(_, c) => c.iter().map(|t| t.leaf_count()).sum(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            TreeMonomial::Leaf(_) => 0,
            TreeMonomial::Node(_, c) => 1 + c.iter().map(|t| t.vertex_count()).sum::<usize>(),
        }
    }

    /// Leaf labels read left to right.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        match self {
            TreeMonomial::Leaf(i) => out.push(*i),
            TreeMonomial::Node(_, c) => c.iter().for_each(|t| t.collect(out)),
        }
    }

    /// The underlying undecorated planar tree.
    pub fn shape(&self) -> PlanarTree {
        match self {
            TreeMonomial::Leaf(_) => PlanarTree::Leaf,
            TreeMonomial::Node(_, c) => PlanarTree::Node(c.iter().map(|t| t.shape()).collect()),
        }
    }

    /// The leaf labelling as a permutation (position `i` holds label `σ(i)`).
    pub fn leaf_labels(&self) -> Permutation {
        Permutation::from_images(self.labels())
    }

    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> TreeMonomial {
        match self {
            TreeMonomial::Leaf(i) => TreeMonomial::Leaf(f(*i)),
            TreeMonomial::Node(g, c) => TreeMonomial::Node(*g, c.iter().map(|t| t.relabel(f)).collect()),
        }
    }

    fn replace_leaf(&self, label: usize, inner: &TreeMonomial) -> TreeMonomial {
        match self {
            TreeMonomial::Leaf(i) if *i == label => inner.clone(),
            TreeMonomial::Leaf(i) => TreeMonomial::Leaf(*i),
            TreeMonomial::Node(g, c) => TreeMonomial::Node(*g, c.iter().map(|t| t.replace_leaf(label, inner)).collect()),
        }
    }

    /// Grafts `inner` onto the leaf labelled `i` (zero-based), with the usual
    /// relabelling: labels after `i` shift up by `inner.leaf_count() - 1`.
    pub fn partial_compose(&self, i: usize, inner: &TreeMonomial) -> Result<TreeMonomial, FreeError> {
        let m = self.leaf_count();
        if i >= m {
            return Err(FreeError::Position { position: i + 1, arity: m });
        }
        let k = inner.leaf_count();
        let outer = self.relabel(&|l| if l > i { l + k - 1 } else { l });
        let inner = inner.relabel(&|l| l + i);
        Ok(outer.replace_leaf(i, &inner))
    }

    pub fn from_expr(p: &Presentation, e: &TreeExpr) -> Option<TreeMonomial> {
        Some(match e {
            TreeExpr::Var(i) => TreeMonomial::Leaf(*i),
            TreeExpr::Op(s, args) => TreeMonomial::Node(
                p.generator_index(s)?,
                args.iter().map(|a| TreeMonomial::from_expr(p, a)).collect::<Option<_>>()?,
            ),
        })
    }

    pub fn to_expr(&self, p: &Presentation) -> TreeExpr {
        match self {
            TreeMonomial::Leaf(i) => TreeExpr::Var(*i),
            TreeMonomial::Node(g, c) => {
                TreeExpr::Op(p.generators[*g].symbol.clone(), c.iter().map(|t| t.to_expr(p)).collect())
            }
        }
    }

    pub fn display<'a>(&'a self, p: &'a Presentation) -> impl fmt::Display + 'a {
        struct D<'a>(&'a TreeMonomial, &'a Presentation);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0.to_expr(self.1))
            }
        }
        D(self, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(g: usize, c: Vec<TreeMonomial>) -> TreeMonomial {
        TreeMonomial::Node(g, c)
    }

    #[test]
    fn compose_relabels() {
        use TreeMonomial::Leaf;
        // m(x1,x2) ∘_1 m(x1,x2) = m(m(x1,x2),x3)
        let m = node(0, vec![Leaf(0), Leaf(1)]);
        assert_eq!(m.partial_compose(0, &m).unwrap(), node(0, vec![m.clone(), Leaf(2)]));
        // m(x2,x1) ∘_1 m(x1,x2) = m(x3, m(x1,x2))
        let op = node(0, vec![Leaf(1), Leaf(0)]);
        assert_eq!(op.partial_compose(0, &m).unwrap(), node(0, vec![Leaf(2), m.clone()]));
        // m(x1,x2) ∘_2 m(x2,x1) = m(x1, m(x3,x2))
        assert_eq!(m.partial_compose(1, &op).unwrap(), node(0, vec![Leaf(0), node(0, vec![Leaf(2), Leaf(1)])]));
        assert!(m.partial_compose(2, &m).is_err());
    }

    #[test]
    fn shape_and_labels() {
        use TreeMonomial::Leaf;
        let t = node(1, vec![Leaf(2), node(0, vec![Leaf(0), Leaf(1)])]);
        assert_eq!(t.labels(), vec![2, 0, 1]);
        assert_eq!(t.leaf_labels().one_based(), vec![3, 1, 2]);
        assert_eq!(t.shape().leaves(), 3);
        assert_eq!(t.vertex_count(), 2);
    }
}
