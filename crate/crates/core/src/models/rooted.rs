//! Rooted tree models: pre-Lie (graft everywhere) and NAP (graft at the root).

use std::collections::BTreeSet;

use super::{LinComb, Model};
use crate::exactmath::Rational;
use crate::trees::{enumerate_labeled_rooted, LabeledRootedTree};

/// `x ∘ y`: the sum over the vertices of `x` of `y` attached under that vertex.
pub fn prelie_graft(x: &LabeledRootedTree, y: &LabeledRootedTree) -> LinComb<LabeledRootedTree> {
    LinComb::from_terms(x.attach_everywhere(y).into_iter().map(|t| (t, Rational::one())))
}

/// `x · y`: `y` attached under the root of `x`.
pub fn nap_graft(x: &LabeledRootedTree, y: &LabeledRootedTree) -> LabeledRootedTree {
    x.attach_at_root(y)
}

fn relabel(t: &LabeledRootedTree, by: u32) -> LabeledRootedTree {
    LabeledRootedTree::new(t.label() + by, t.children().iter().map(|c| relabel(c, by)).collect())
}

fn shape(t: &LabeledRootedTree) -> String {
    let mut kids: Vec<String> = t.children().iter().map(shape).collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn all_trees(d: usize) -> Vec<LabeledRootedTree> {
    if d == 0 {
        return Vec::new();
    }
    let labels: Vec<u32> = (0..d as u32).collect();
    enumerate_labeled_rooted(d, &labels).unwrap_or_default()
}

/// One labeling of each unlabeled shape.
fn one_per_shape(d: usize) -> Vec<LabeledRootedTree> {
    let mut seen = BTreeSet::new();
    all_trees(d).into_iter().filter(|t| seen.insert(shape(t))).collect()
}

/// Rooted trees with right pre-Lie grafting `m`.
pub struct PreLieModel;

impl Model for PreLieModel {
    type Elem = LabeledRootedTree;

    fn id(&self) -> &'static str {
        "prelie"
    }

    fn operations(&self) -> &'static [(&'static str, usize)] {
        &[("m", 2)]
    }

    fn degree(&self, e: &LabeledRootedTree) -> usize {
        e.size()
    }

    fn shift(&self, e: &LabeledRootedTree, by: usize) -> LabeledRootedTree {
        relabel(e, by as u32)
    }

    fn basis(&self, d: usize) -> Vec<LabeledRootedTree> {
        all_trees(d)
    }

    fn representatives(&self, d: usize) -> Vec<LabeledRootedTree> {
        one_per_shape(d)
    }

    fn apply(&self, _op: &str, args: &[&LabeledRootedTree]) -> LinComb<LabeledRootedTree> {
        prelie_graft(args[0], args[1])
    }
}

/// Rooted trees with right NAP grafting `m`.
pub struct NapModel;

impl Model for NapModel {
    type Elem = LabeledRootedTree;

    fn id(&self) -> &'static str {
        "nap"
    }

    fn operations(&self) -> &'static [(&'static str, usize)] {
        &[("m", 2)]
    }

    fn degree(&self, e: &LabeledRootedTree) -> usize {
        e.size()
    }

    fn shift(&self, e: &LabeledRootedTree, by: usize) -> LabeledRootedTree {
        relabel(e, by as u32)
    }

    fn basis(&self, d: usize) -> Vec<LabeledRootedTree> {
        all_trees(d)
    }

    fn representatives(&self, d: usize) -> Vec<LabeledRootedTree> {
        one_per_shape(d)
    }

    fn apply(&self, _op: &str, args: &[&LabeledRootedTree]) -> LinComb<LabeledRootedTree> {
        LinComb::basis(nap_graft(args[0], args[1]))
    }
}
