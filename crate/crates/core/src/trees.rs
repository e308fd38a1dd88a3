//! Planar binary trees, planar trees and labeled rooted trees.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("leaf count must be at least 1")]
    ZeroLeaves,
    #[error("duplicate label {0}")]
    DuplicateLabel(u32),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// A planar binary rooted tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarBinaryTree {
    Leaf,
    Node(Box<PlanarBinaryTree>, Box<PlanarBinaryTree>),
}

impl PlanarBinaryTree {
    pub fn leaf() -> Self {
        PlanarBinaryTree::Leaf
    }

    /// The 2-leaf tree.
    pub fn y() -> Self {
        graft(Self::Leaf, Self::Leaf)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, PlanarBinaryTree::Leaf)
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlanarBinaryTree::Leaf => 1,
            PlanarBinaryTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn internal_vertices(&self) -> usize {
        match self {
            PlanarBinaryTree::Leaf => 0,
            PlanarBinaryTree::Node(l, r) => 1 + l.internal_vertices() + r.internal_vertices(),
        }
    }

    /// `(t^l, t^r)` for `t = t^l ∨ t^r`; `None` for the leaf.
    pub fn decompose(&self) -> Option<(&PlanarBinaryTree, &PlanarBinaryTree)> {
        match self {
            PlanarBinaryTree::Leaf => None,
            PlanarBinaryTree::Node(l, r) => Some((l, r)),
        }
    }

    pub fn left_comb(n: usize) -> Self {
        let mut t = Self::Leaf;
        for _ in 1..n {
            t = graft(t, Self::Leaf);
        }
        t
    }

    pub fn right_comb(n: usize) -> Self {
        let mut t = Self::Leaf;
        for _ in 1..n {
            t = graft(Self::Leaf, t);
        }
        t
    }

    /// Grafts `other` onto the leftmost leaf.
    pub fn graft_leftmost(&self, other: &PlanarBinaryTree) -> PlanarBinaryTree {
        match self {
            PlanarBinaryTree::Leaf => other.clone(),
            PlanarBinaryTree::Node(l, r) => graft(l.graft_leftmost(other), (**r).clone()),
        }
    }

    /// Grafts `other` onto the rightmost leaf.
    pub fn graft_rightmost(&self, other: &PlanarBinaryTree) -> PlanarBinaryTree {
        match self {
            PlanarBinaryTree::Leaf => other.clone(),
            PlanarBinaryTree::Node(l, r) => graft((**l).clone(), r.graft_rightmost(other)),
        }
    }

    pub fn to_planar(&self) -> PlanarTree {
        match self {
            PlanarBinaryTree::Leaf => PlanarTree::Leaf,
            PlanarBinaryTree::Node(l, r) => PlanarTree::Node(vec![l.to_planar(), r.to_planar()]),
        }
    }
}

impl fmt::Display for PlanarBinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarBinaryTree::Leaf => write!(f, "|"),
            PlanarBinaryTree::Node(l, r) => write!(f, "({l}{r})"),
        }
    }
}

impl fmt::Debug for PlanarBinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn graft(l: PlanarBinaryTree, r: PlanarBinaryTree) -> PlanarBinaryTree {
    PlanarBinaryTree::Node(Box::new(l), Box::new(r))
}

/// All planar binary trees with `n` leaves, ordered by left-subtree size then recursively.
pub fn enumerate_pbt(n: usize) -> Result<Vec<PlanarBinaryTree>, TreeError> {
    if n == 0 {
        return Err(TreeError::ZeroLeaves);
    }
    let mut table: Vec<Vec<PlanarBinaryTree>> = vec![Vec::new(), vec![PlanarBinaryTree::Leaf]];
    for m in 2..=n {
        let mut out = Vec::new();
        for k in 1..m {
            for l in &table[k] {
                for r in &table[m - k] {
                    out.push(graft(l.clone(), r.clone()));
                }
            }
        }
        table.push(out);
    }
    Ok(table.swap_remove(n))
}

/// A planar rooted tree whose internal vertices have at least two children.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(cs) => cs.iter().map(|c| c.leaves()).sum(),
        }
    }

    pub fn internal_vertices(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(cs) => 1 + cs.iter().map(|c| c.internal_vertices()).sum::<usize>(),
        }
    }

    pub fn is_valid(&self) -> bool {
        match self {
            PlanarTree::Leaf => true,
            PlanarTree::Node(cs) => cs.len() >= 2 && cs.iter().all(|c| c.is_valid()),
        }
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "|"),
            PlanarTree::Node(cs) => {
                write!(f, "(")?;
                for c in cs {
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Compositions of `n` into `parts` positive parts, lexicographic.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if n < parts {
            return;
        }
        for first in 1..=n - (parts - 1) {
            cur.push(first);
            go(n - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, parts, &mut Vec::new(), &mut out);
    out
}

/// All planar trees with `n` leaves (little Schröder numbers).
pub fn enumerate_pt(n: usize) -> Result<Vec<PlanarTree>, TreeError> {
    if n == 0 {
        return Err(TreeError::ZeroLeaves);
    }
    let mut table: Vec<Vec<PlanarTree>> = vec![Vec::new(), vec![PlanarTree::Leaf]];
    for m in 2..=n {
        let mut out = Vec::new();
        for parts in 2..=m {
            for comp in compositions(m, parts) {
                let mut partial: Vec<Vec<PlanarTree>> = vec![Vec::new()];
                for &c in &comp {
                    let mut next = Vec::new();
                    for p in &partial {
                        for t in &table[c] {
                            let mut q = p.clone();
                            q.push(t.clone());
                            next.push(q);
                        }
                    }
                    partial = next;
                }
                out.extend(partial.into_iter().map(PlanarTree::Node));
            }
        }
        table.push(out);
    }
    Ok(table.swap_remove(n))
}

/// A rooted tree with labeled vertices and unordered children, kept canonical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledRootedTree {
    label: u32,
    children: Vec<LabeledRootedTree>,
}

impl LabeledRootedTree {
    pub fn vertex(label: u32) -> Self {
        LabeledRootedTree { label, children: Vec::new() }
    }

    /// Builds a tree and canonicalizes it.
    pub fn new(label: u32, children: Vec<LabeledRootedTree>) -> Self {
        let mut t = LabeledRootedTree { label, children };
        t.canonicalize();
        t
    }

    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn children(&self) -> &[LabeledRootedTree] {
        &self.children
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn labels(&self) -> Vec<u32> {
        let mut out = vec![self.label];
        for c in &self.children {
            out.extend(c.labels());
        }
        out
    }

    fn canonicalize(&mut self) {
        for c in &mut self.children {
            c.canonicalize();
        }
        self.children.sort();
    }

    /// Adds `child` below the root.
    pub fn attach_at_root(&self, child: &LabeledRootedTree) -> LabeledRootedTree {
        let mut t = self.clone();
        let pos = t.children.binary_search(child).unwrap_or_else(|p| p);
        t.children.insert(pos, child.clone());
        t
    }

    /// One tree per vertex of `self`, with `child` attached under that vertex.
    pub fn attach_everywhere(&self, child: &LabeledRootedTree) -> Vec<LabeledRootedTree> {
        let mut out = vec![self.attach_at_root(child)];
        for (i, c) in self.children.iter().enumerate() {
            for sub in c.attach_everywhere(child) {
                let mut t = self.clone();
                t.children[i] = sub;
                t.children.sort();
                out.push(t);
            }
        }
        out
    }
}

impl fmt::Display for LabeledRootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.children.is_empty() {
            write!(f, "[")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LabeledRootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All rooted trees whose vertices carry exactly the given labels.
pub fn enumerate_labeled_rooted(n: usize, labels: &[u32]) -> Result<Vec<LabeledRootedTree>, TreeError> {
    if n == 0 {
        return Err(TreeError::ZeroLeaves);
    }
    if labels.len() != n {
        return Err(TreeError::LabelCount { expected: n, got: labels.len() });
    }
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(TreeError::DuplicateLabel(w[0]));
        }
    }
    let mut out = trees_on(&sorted);
    out.sort();
    Ok(out)
}

fn trees_on(set: &[u32]) -> Vec<LabeledRootedTree> {
    let mut out = Vec::new();
    for (i, &root) in set.iter().enumerate() {
        let rest: Vec<u32> = set.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        for forest in forests_on(&rest) {
            out.push(LabeledRootedTree::new(root, forest));
        }
    }
    out
}

fn forests_on(set: &[u32]) -> Vec<Vec<LabeledRootedTree>> {
    if set.is_empty() {
        return vec![Vec::new()];
    }
    // the tree containing the first element, then a forest on the rest
    let first = set[0];
    let others = &set[1..];
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << others.len()) {
        let mut block = vec![first];
        let mut rest = Vec::new();
        for (k, &x) in others.iter().enumerate() {
            if mask >> k & 1 == 1 {
                block.push(x);
            } else {
                rest.push(x);
            }
        }
        let trees = trees_on(&block);
        let forests = forests_on(&rest);
        for t in &trees {
            for f in &forests {
                let mut g = f.clone();
                g.push(t.clone());
                out.push(g);
            }
        }
    }
    out
}

/// Catalan number `c_n = C(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pbt_counts() {
        assert_eq!(enumerate_pbt(1).unwrap(), vec![PlanarBinaryTree::Leaf]);
        for n in 1..=10 {
            assert_eq!(enumerate_pbt(n).unwrap().len() as u128, catalan(n as u64 - 1));
        }
        assert_eq!(enumerate_pbt(4).unwrap().len(), 5);
        assert_eq!(enumerate_pbt(7).unwrap().len(), 132);
        assert!(enumerate_pbt(0).is_err());
    }

    #[test]
    fn catalan_recurrence() {
        // c_{n+1} = sum c_i c_{n-i}
        for n in 0..12u64 {
            let s: u128 = (0..=n).map(|i| catalan(i) * catalan(n - i)).sum();
            assert_eq!(catalan(n + 1), s);
        }
    }

    #[test]
    fn graft_and_decompose() {
        assert_eq!(graft(PlanarBinaryTree::Leaf, PlanarBinaryTree::Leaf), PlanarBinaryTree::y());
        assert_eq!(graft(PlanarBinaryTree::y(), PlanarBinaryTree::Leaf), PlanarBinaryTree::left_comb(3));
        let small: Vec<_> = (1..=5).flat_map(|n| enumerate_pbt(n).unwrap()).collect();
        for x in &small {
            for y in &small {
                let t = graft(x.clone(), y.clone());
                assert_eq!(t.decompose(), Some((x, y)));
                assert_eq!(t.internal_vertices(), t.leaves() - 1);
            }
        }
    }

    #[test]
    fn pt_counts() {
        let expected = [1, 1, 3, 11, 45, 197, 903];
        for (n, &e) in (1..=7).zip(expected.iter()) {
            let ts = enumerate_pt(n).unwrap();
            assert_eq!(ts.len(), e, "n = {n}");
            assert!(ts.iter().all(|t| t.is_valid() && t.leaves() == n));
        }
    }

    #[test]
    fn pbt_embeds_injectively() {
        for n in 1..=6 {
            let pts = enumerate_pt(n).unwrap();
            let mut images: Vec<PlanarTree> = enumerate_pbt(n).unwrap().iter().map(|t| t.to_planar()).collect();
            assert!(images.iter().all(|t| pts.contains(t)));
            let before = images.len();
            images.sort();
            images.dedup();
            assert_eq!(images.len(), before);
        }
    }

    #[test]
    fn rooted_counts() {
        for n in 1..=6usize {
            let labels: Vec<u32> = (0..n as u32).collect();
            let ts = enumerate_labeled_rooted(n, &labels).unwrap();
            assert_eq!(ts.len(), n.pow(n as u32 - 1));
            let mut d = ts.clone();
            d.dedup();
            assert_eq!(d.len(), ts.len());
        }
        assert!(enumerate_labeled_rooted(2, &[1, 1]).is_err());
    }

    #[test]
    fn canonicalization_is_order_invariant() {
        let a = LabeledRootedTree::vertex(1);
        let b = LabeledRootedTree::new(2, vec![LabeledRootedTree::vertex(4)]);
        let c = LabeledRootedTree::vertex(3);
        let t1 = LabeledRootedTree::new(0, vec![a.clone(), b.clone(), c.clone()]);
        let t2 = LabeledRootedTree::new(0, vec![c, b, a]);
        assert_eq!(t1, t2);
        assert_eq!(LabeledRootedTree::new(t1.label(), t1.children().to_vec()), t1);
    }
}
