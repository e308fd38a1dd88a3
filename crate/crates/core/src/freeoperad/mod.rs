//! Free operads on a presentation and the dimensions of their quotients.
//!
//! Two independent routes are provided. [`free_basis`] and [`relation_span`]
//! work with labelled planar monomials directly; [`quotient_dims`] uses
//! normal forms on shuffle trees and scales much further. Tests compare the
//! two.

pub(crate) mod combinat;
pub(crate) mod engine;
mod literal;
mod monomial;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{factorial, SpanMatrix};
use crate::presentation::{Diagnostic, Mode, Presentation};

pub use monomial::TreeMonomial;

/// Largest working basis built in one arity.
pub const MAX_BASIS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FreeError {
    #[error("invalid presentation: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("generator `{0}` is unary; the free operad is infinite in every arity")]
    UnaryGenerator(String),
    #[error("arity {arity}: {size} monomials exceed the budget of {limit}")]
    TooLarge { arity: usize, size: u128, limit: usize },
    #[error("position {position} is not a leaf of an arity {arity} monomial")]
    Position { position: usize, arity: usize },
    #[error("arity {0} is too large (at most 63 leaves)")]
    ArityTooLarge(usize),
}

fn check(p: &Presentation, n: usize) -> Result<(), FreeError> {
    let diags = p.validate();
    if !diags.is_empty() {
        return Err(FreeError::Invalid(diags));
    }
    if let Some(g) = p.generators.iter().find(|g| g.arity == 1) {
        return Err(FreeError::UnaryGenerator(g.symbol.clone()));
    }
    if n > 63 {
        return Err(FreeError::ArityTooLarge(n));
    }
    Ok(())
}

/// Number of labelled planar monomials of arity `n` (saturating).
pub fn free_dim(p: &Presentation, n: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    // planar count by arity, then times n! for labellings
    let mut planar = vec![0u128; n + 1];
    planar[1] = 1;
    for m in 2..=n {
        let mut total = 0u128;
        for g in &p.generators {
            if g.arity < 2 || g.arity > m {
                continue;
            }
            // number of ways to split m leaves among arity children
            let mut ways = vec![0u128; m + 1];
            ways[0] = 1;
            for _ in 0..g.arity {
                let mut next = vec![0u128; m + 1];
                for (s, &w) in ways.iter().enumerate() {
                    if w == 0 {
                        continue;
                    }
                    for t in 1..=m - s {
                        next[s + t] = next[s + t].saturating_add(w.saturating_mul(planar[t]));
                    }
                }
                ways = next;
            }
            total = total.saturating_add(ways[m]);
        }
        planar[m] = total;
    }
    match p.mode {
        Mode::Ns => planar[n],
        Mode::Symmetric => {
            let f = factorial(n as u64);
            u128::try_from(f).map_or(u128::MAX, |f| planar[n].saturating_mul(f))
        }
    }
}

/// All monomials of arity `n`: decorated planar trees, and in symmetric mode
/// every leaf labelling of each.
pub fn free_basis(p: &Presentation, n: usize) -> Result<Vec<TreeMonomial>, FreeError> {
    check(p, n)?;
    let size = free_dim(p, n);
    if size > MAX_BASIS as u128 {
        return Err(FreeError::TooLarge { arity: n, size, limit: MAX_BASIS });
    }
    Ok(literal::basis(p, n))
}

/// A spanning set of the arity-`n` part of the ideal generated by the
/// relations (and the generator symmetries), in [`free_basis`] coordinates.
pub fn relation_span(p: &Presentation, n: usize) -> Result<SpanMatrix, FreeError> {
    check(p, n)?;
    literal::Literal::new(p).run(n, MAX_BASIS)
}

/// `dim` of the quotient in each arity up to `n`, by the literal route.
pub fn literal_quotient_dims(p: &Presentation, n: usize) -> Result<Vec<u64>, FreeError> {
    check(p, n)?;
    let mut lit = literal::Literal::new(p);
    lit.run(n, MAX_BASIS)?;
    Ok((1..=n).map(|m| (free_dim(p, m) - lit.ideal_dim(m) as u128) as u64).collect())
}

/// Limits for [`quotient_dims_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_arity: usize,
    pub max_basis: usize,
}

impl Budget {
    /// ns: arity 8; symmetric: arity 5; ternary presentations: arity 7.
    pub fn default_for(p: &Presentation) -> Budget {
        let max_arity = match (p.mode, p.uniform_arity()) {
            (_, Some(3)) => 7,
            (Mode::Ns, _) => 8,
            (Mode::Symmetric, _) => 5,
        };
        Budget { max_arity, max_basis: MAX_BASIS }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRow {
    pub arity: usize,
    pub free_dim: u128,
    pub quotient_dim: u64,
}

/// Where and why a table stopped early.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub arity: usize,
    pub basis_size: u128,
    pub limit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub name: String,
    pub mode: Mode,
    pub rows: Vec<DimRow>,
    pub truncated: Option<Truncation>,
}

impl DimTable {
    /// Quotient dimensions in row order.
    pub fn dims(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.quotient_dim).collect()
    }

    pub fn get(&self, arity: usize) -> Option<u64> {
        self.rows.iter().find(|r| r.arity == arity).map(|r| r.quotient_dim)
    }

    /// Arity → dimension, the shape expected by [`crate::series::PowerSeries::from_dims`] callers.
    pub fn dims_by_arity(&self) -> Vec<(usize, u64)> {
        self.rows.iter().map(|r| (r.arity, r.quotient_dim)).collect()
    }
}

impl fmt::Display for DimTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({})", self.name, self.mode)?;
        writeln!(f, "{:>5}  {:>14}  {:>12}", "arity", "free", "quotient")?;
        for r in &self.rows {
            writeln!(f, "{:>5}  {:>14}  {:>12}", r.arity, r.free_dim, r.quotient_dim)?;
        }
        if let Some(t) = &self.truncated {
            writeln!(f, "truncated at arity {}: {} monomials exceed the budget of {}", t.arity, t.basis_size, t.limit)?;
        }
        Ok(())
    }
}

/// Quotient dimensions up to arity `n` with the default monomial cap.
pub fn quotient_dims(p: &Presentation, n: usize) -> Result<DimTable, FreeError> {
    quotient_dims_with(p, Budget { max_arity: n, max_basis: MAX_BASIS })
}

/// Quotient dimensions within `budget`; arities that vanish for degree
/// reasons (`n ≠ 1 mod (k-1)` for `k`-ary generators) are omitted.
pub fn quotient_dims_with(p: &Presentation, budget: Budget) -> Result<DimTable, FreeError> {
    check(p, budget.max_arity)?;
    let step = p.arity_step();
    let mut eng = engine::Engine::new(p);
    let mut rows = Vec::new();
    let mut truncated = None;
    if budget.max_arity >= 1 {
        rows.push(DimRow { arity: 1, free_dim: 1, quotient_dim: 1 });
    }
    for n in 2..=budget.max_arity {
        match eng.step(budget.max_basis) {
            engine::Step::Done { quotient, .. } => {
                if (n - 1) % step == 0 {
                    rows.push(DimRow { arity: n, free_dim: free_dim(p, n), quotient_dim: quotient as u64 });
                }
            }
            engine::Step::TooLarge { size } => {
                truncated = Some(Truncation { arity: n, basis_size: size, limit: budget.max_basis });
                break;
            }
        }
    }
    Ok(DimTable { name: p.name.clone(), mode: p.mode, rows, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse;

    fn pres(src: &str) -> Presentation {
        parse(src).unwrap()
    }

    const MAG: &str = "name Mag\nmode ns\nop m arity 2\n";
    const AS_NS: &str = "name As\nmode ns\nop m arity 2\nrel m(m(x1,x2),x3) - m(x1,m(x2,x3))\n";
    const AS: &str = "name As\nmode symmetric\nop m arity 2\nrel m(m(x1,x2),x3) - m(x1,m(x2,x3))\n";
    const COM: &str = "name Com\nmode symmetric\nop m arity 2 sym [2,1] = 1\nrel m(m(x1,x2),x3) - m(x1,m(x2,x3))\n";
    const LIE: &str =
        "name Lie\nmode symmetric\nop b arity 2 sym [2,1] = -1\nrel b(b(x1,x2),x3) + b(b(x2,x3),x1) + b(b(x3,x1),x2)\n";
    const NIL2: &str = "name Nil2\nmode symmetric\nop m arity 2\nrel m(m(x1,x2),x3)\nrel m(x1,m(x2,x3))\n";
    const PRELIE: &str = "name PreLie\nmode symmetric\nop m arity 2\n\
        rel m(m(x1,x2),x3) - m(x1,m(x2,x3)) - m(m(x1,x3),x2) + m(x1,m(x3,x2))\n";
    const DEND: &str = "name Dend\nmode ns\nop l arity 2\nop r arity 2\n\
        rel l(l(x1,x2),x3) = l(x1,l(x2,x3)) + l(x1,r(x2,x3))\n\
        rel l(r(x1,x2),x3) = r(x1,l(x2,x3))\n\
        rel r(x1,r(x2,x3)) = r(l(x1,x2),x3) + r(r(x1,x2),x3)\n";
    const TERN: &str = "name Tern\nmode ns\nop t arity 3\n";

    #[test]
    fn free_counts() {
        assert_eq!(free_dim(&pres(MAG), 4), 5);
        assert_eq!(free_dim(&pres(MAG).to_symmetric(), 3), 12);
        assert_eq!(free_dim(&pres(TERN), 5), 3);
        assert_eq!(free_dim(&pres(TERN), 4), 0);
        assert_eq!(free_basis(&pres(MAG), 4).unwrap().len(), 5);
        assert_eq!(free_basis(&pres(MAG).to_symmetric(), 3).unwrap().len(), 12);
        assert_eq!(free_basis(&pres(TERN), 5).unwrap().len(), 3);
    }

    #[test]
    fn basis_monomials_are_distinct() {
        let b = free_basis(&pres(DEND).to_symmetric(), 3).unwrap();
        let set: std::collections::HashSet<_> = b.iter().collect();
        assert_eq!(set.len(), b.len());
        assert_eq!(b.len(), 2 * 4 * 6);
    }

    #[test]
    fn classical_dims() {
        assert_eq!(quotient_dims(&pres(MAG), 6).unwrap().dims(), vec![1, 1, 2, 5, 14, 42]);
        assert_eq!(quotient_dims(&pres(AS_NS), 6).unwrap().dims(), vec![1; 6]);
        assert_eq!(quotient_dims(&pres(AS), 5).unwrap().dims(), vec![1, 2, 6, 24, 120]);
        assert_eq!(quotient_dims(&pres(COM), 5).unwrap().dims(), vec![1; 5]);
        assert_eq!(quotient_dims(&pres(LIE), 6).unwrap().dims(), vec![1, 1, 2, 6, 24, 120]);
        assert_eq!(quotient_dims(&pres(NIL2), 5).unwrap().dims(), vec![1, 2, 0, 0, 0]);
        assert_eq!(quotient_dims(&pres(PRELIE), 5).unwrap().dims(), vec![1, 2, 9, 64, 625]);
        assert_eq!(quotient_dims(&pres(DEND), 7).unwrap().dims(), vec![1, 2, 5, 14, 42, 132, 429]);
        assert_eq!(quotient_dims(&pres(TERN), 7).unwrap().dims(), vec![1, 1, 3, 12]);
    }

    #[test]
    fn lie_admissible_arity_three() {
        let src = "name LieAdm\nmode symmetric\nop m arity 2\n\
            rel m(m(x1,x2),x3) - m(x1,m(x2,x3)) - m(m(x2,x1),x3) + m(x2,m(x1,x3)) \
            - m(m(x1,x3),x2) + m(x1,m(x3,x2)) - m(m(x3,x2),x1) + m(x3,m(x2,x1)) \
            + m(m(x2,x3),x1) - m(x2,m(x3,x1)) + m(m(x3,x1),x2) - m(x3,m(x1,x2))\n";
        let p = pres(src);
        assert_eq!(relation_span(&p, 3).unwrap().rank(), 1);
        assert_eq!(quotient_dims(&p, 3).unwrap().get(3), Some(11));
    }

    #[test]
    fn literal_route_agrees() {
        for (src, n) in [(AS, 4), (COM, 4), (LIE, 4), (NIL2, 4), (PRELIE, 4), (DEND, 5), (AS_NS, 5)] {
            let p = pres(src);
            let fast = quotient_dims(&p, n).unwrap().dims();
            assert_eq!(literal_quotient_dims(&p, n).unwrap(), fast, "{}", p.name);
        }
    }

    #[test]
    fn budget_truncates() {
        let t = quotient_dims_with(&pres(MAG).to_symmetric(), Budget { max_arity: 9, max_basis: 1000 }).unwrap();
        let tr = t.truncated.clone().unwrap();
        assert!(tr.basis_size > 1000);
        assert_eq!(t.rows.last().unwrap().arity + 1, tr.arity);
        assert!(t.to_string().contains("truncated"));
    }

    #[test]
    fn quotient_never_exceeds_free() {
        for src in [MAG, AS, COM, LIE, NIL2, PRELIE, DEND] {
            let t = quotient_dims(&pres(src), 5).unwrap();
            assert!(t.rows.iter().all(|r| r.quotient_dim as u128 <= r.free_dim));
        }
    }

    #[test]
    fn rejects_unary() {
        let p = pres("name U\nop u arity 1\n");
        assert!(matches!(quotient_dims(&p, 3), Err(FreeError::UnaryGenerator(_))));
    }
}
