//! # lapsep
//!
//! Density matrices of labeled graphs on p×q vertex arrays.
//!
//! A graph `G` with its `n = pq` vertices arranged on a p×q array induces a
//! quantum state on `C^p ⊗ C^q`: the combinatorial laplacian `L = Δ - M`
//! scaled by the degree-sum is a trace-one positive semidefinite matrix.
//! This crate builds those matrices exactly (rational arithmetic), decides
//! separability across the p/q cut, produces explicit separable
//! decompositions for 2×q arrays, and computes entanglement measures.
//!
//! The main entry points:
//!
//! - [`graph::ArrayedGraph`] — labeled graphs on the array, their matrices,
//!   the graph partial transpose, and per-edge matched/unmatched structure.
//! - [`criteria`] — degree criterion, PPT, realignment, line-sum-symmetric
//!   blocks, and the combined [`criteria::verdict`].
//! - [`decompose`] — constructive separable decompositions of 2×q graph
//!   states via cycle peeling of the cross adjacency.
//! - [`measures`] — Wootters concurrence, entanglement of formation,
//!   logarithmic negativity, and the degree-discrepancy norm.
//! - [`families`], [`enumerate`], [`report`] — builtin graph families,
//!   exhaustive labeled-graph enumeration, and batch reports (JSON/CSV).

// Indexed loops here mirror the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod criteria;
pub mod decompose;
pub mod enumerate;
pub mod families;
pub mod graph;
pub mod linalg;
pub mod measures;
pub mod report;

/// Default absolute tolerance for floating-point comparisons.
///
/// Overridable per call; the CLI additionally honors the `LAPSEP_TOL`
/// environment variable.
pub const DEFAULT_TOL: f64 = 1e-9;

pub use graph::ArrayedGraph;
pub use linalg::{ComplexDenseMatrix, RationalSymmetricMatrix};
