//! Exact arithmetic: rationals, permutations, sparse rank.

pub mod dense;
mod permutation;
mod rational;
mod sparse;

pub use permutation::{Permutation, PermutationError};
pub use rational::{binomial, common_denominator, factorial, ParseRationalError, Rational};
pub use sparse::{SpanMatrix, SparseVec};

/// Rank of `m` over the rationals.
pub fn rank(m: &SpanMatrix) -> usize {
    m.rank()
}

/// Sign of a permutation, `+1` or `-1`.
pub fn sign(p: &Permutation) -> i32 {
    p.sign()
}
