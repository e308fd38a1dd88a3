//! Computer algebra for algebraic operads given by generators and relations.
//!
//! The pipeline is: parse a [`presentation::Presentation`], count the
//! dimensions of the quotient of the free operad with [`freeoperad`], build
//! Koszul duals with [`koszul`], and compare against generating series from
//! [`series`]. The [`registry`] bundles a catalog of classical operads with
//! their published dimension tables and replays all of these checks.

pub mod complexes;
pub mod exactmath;
pub mod freeoperad;
pub mod koszul;
pub mod models;
pub mod presentation;
pub mod registry;
pub mod series;
pub mod trees;

pub use exactmath::{Permutation, Rational, SpanMatrix, SparseVec};
