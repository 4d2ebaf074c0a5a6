//! Stallings core graphs for subgroups of free groups.
//!
//! The crate computes intersections, joins and topological pushouts of
//! finitely generated subgroups, the Dicks-graph decomposition of a pair of
//! subgroups of `F(a, b, c)` with its Σ-function rank bound, classifies rank
//! tuples `(rk H, rk K, rk H∨K, rk H∩K)` and builds witnesses for realizable
//! tuples, and runs a seeded random search for tuples outside the known
//! locus.
//!
//! ```
//! use stallings::{lattice, words::parse_words};
//!
//! let h = parse_words(&["cA", "cBcAbC"]).unwrap();
//! let k = parse_words(&["bA", "cBcA"]).unwrap();
//! let p = lattice::rank_profile(&h, &k).unwrap();
//! assert_eq!((p.h, p.k, p.v, p.c), (2, 2, 2, 1));
//! ```

pub mod cli;
pub mod dicks;
pub mod graph;
pub mod lattice;
pub mod locus;
pub mod sampler;
pub mod words;

pub use graph::{build_core_graph, CoreGraph, LabeledGraph};
pub use lattice::{join, pullback, pushout, rank_profile, RankProfile};
pub use words::{Alphabet, Letter, Word};
