//! Constructive separable decompositions.
//!
//! For a 2×q graph satisfying the degree criterion the laplacian splits as
//! L1 + L2 + L3: the two within-row parts and the cross part. L1 and L2 are
//! sums of row-local edge laplacians and decompose edge by edge. The cross
//! part is handled constructively: the 0/1 cross adjacency N (N[j][l] = 1 iff
//! {(1,j),(2,l)} is an edge, vertical edges j = l set aside) is line-sum
//! symmetric exactly when the degree criterion holds, because the partial
//! transpose replaces N by Nᵀ, changing the cross degree of (1,j) by
//! (column sum − row sum) of N at j and of (2,j) by the opposite amount.
//! A line-sum symmetric 0/1 matrix is a balanced directed graph and peels
//! into simple directed cycles. Each cycle [i1..is] of cross edges has
//! laplacian
//!
//!   Σ_{k=0}^{s−1} (1/s) (a_k ⊗ v_k)(a_k ⊗ v_k)*,
//!
//! with a_k = |r1⟩ − ω^{−k}|r2⟩, v_k = Σ_t ω^{kt}|i_t⟩ and ω = exp(2πi/s):
//! expanding the outer products, the ω-power sums collapse to s·δ on the
//! diagonal blocks and −s·N_cycle on the off-diagonal block. Every edge of
//! the graph contributes trace 2/d_G, so the weights are exact rationals
//! summing to one.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{ArrayedGraph, Edge, EdgeLocality};
use crate::linalg::{kron_vec, ratio, ComplexDenseMatrix, RationalSymmetricMatrix};

#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error("graph is on a {0}x{1} array, not 2xq")]
    NotTwoByQ(usize, usize),

    #[error("degree criterion fails: no separable decomposition exists")]
    DegreeCriterionViolated,

    #[error("cross adjacency is not line-sum symmetric (degree criterion fails)")]
    NotLineSumSymmetric,

    #[error("degenerate cycle: {0}")]
    DegenerateCycle(String),

    #[error("edge {0} is a cross edge, not row- or column-local")]
    EdgeNotSeparableLocal(Edge),

    #[error("graph has no matched edges")]
    NoMatchedEdges,
}

/// Where a product term came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TermProvenance {
    LocalEdge {
        edge: [usize; 4],
    },
    VerticalEdge {
        edge: [usize; 4],
    },
    Cycle {
        rows: [usize; 2],
        columns: Vec<usize>,
        phase: usize,
    },
}

fn edge_coords(e: &Edge) -> [usize; 4] {
    let (u, v) = e.endpoints();
    [u.row, u.col, v.row, v.col]
}

/// A unit vector whose nonzero entries are equal-magnitude roots of unity:
/// entry = exp(2πi·k/den) / √m over the m listed positions. Phases stay
/// exact integer multiples of 2π/den; floating values appear only on
/// materialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseVector {
    dim: usize,
    /// (0-based position, phase numerator k): entry exp(2πi·k/den)/√m.
    entries: Vec<(usize, u32)>,
    den: u32,
}

impl PhaseVector {
    pub fn new(dim: usize, entries: Vec<(usize, u32)>, den: u32) -> Self {
        debug_assert!(den >= 1 && !entries.is_empty());
        debug_assert!(entries.iter().all(|&(i, _)| i < dim));
        let entries = entries.into_iter().map(|(i, k)| (i, k % den)).collect();
        Self { dim, entries, den }
    }

    /// Standard basis vector |i⟩ (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        Self::new(dim, vec![(i, 0)], 1)
    }

    /// (|i⟩ − |j⟩)/√2.
    pub fn difference(dim: usize, i: usize, j: usize) -> Self {
        Self::new(dim, vec![(i, 0), (j, 1)], 2)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn materialize(&self) -> Vec<Complex64> {
        let scale = 1.0 / (self.entries.len() as f64).sqrt();
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(i, k) in &self.entries {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (self.den as f64);
            v[i] = Complex64::from_polar(scale, theta);
        }
        v
    }
}

impl fmt::Display for PhaseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(i, k) in &self.entries {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "|{}⟩", i + 1)?;
            } else {
                write!(f, "w({}/{})|{}⟩", k, self.den, i + 1)?;
            }
        }
        write!(f, " /sqrt({})", self.entries.len())
    }
}

/// One product projector w · P[a ⊗ b] of a separable decomposition.
#[derive(Clone, Debug)]
pub struct ProductTerm {
    pub weight: BigRational,
    pub vector_a: PhaseVector,
    pub vector_b: PhaseVector,
    pub provenance: TermProvenance,
}

impl ProductTerm {
    pub fn product_vector(&self) -> Vec<Complex64> {
        kron_vec(&self.vector_a.materialize(), &self.vector_b.materialize())
    }

    /// The materialized rank-one contribution w · (a⊗b)(a⊗b)*.
    pub fn matrix(&self) -> ComplexDenseMatrix {
        let w = self.weight.to_f64().unwrap_or(f64::NAN);
        ComplexDenseMatrix::outer(&self.product_vector()).scale(Complex64::new(w, 0.0))
    }
}

/// A weighted sum of product projectors reconstructing a density matrix.
#[derive(Clone, Debug)]
pub struct SeparableDecomposition {
    pub p: usize,
    pub q: usize,
    pub terms: Vec<ProductTerm>,
    /// Frobenius distance between the reconstruction and the target.
    pub reconstruction_residual: f64,
}

impl SeparableDecomposition {
    pub fn weight_sum(&self) -> BigRational {
        self.terms.iter().map(|t| t.weight.clone()).sum()
    }

    /// Σ w · P[a⊗b] as a dense matrix.
    pub fn reconstruct(&self) -> ComplexDenseMatrix {
        let n = self.p * self.q;
        let mut acc = ComplexDenseMatrix::zeros(n, n);
        for t in &self.terms {
            acc.add_scaled(Complex64::new(1.0, 0.0), &t.matrix());
        }
        acc
    }
}

/// The cross structure of a 2×q graph: 0/1 adjacency from row-1 columns to
/// row-2 columns with vertical edges (equal column) listed separately, so
/// the matrix has zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossAdjacency {
    pub q: usize,
    /// matrix[j][l] = 1 iff {(1, j+1), (2, l+1)} is an edge with j ≠ l.
    pub matrix: Vec<Vec<u8>>,
    /// 1-based columns carrying a vertical edge {(1, j), (2, j)}.
    pub vertical_columns: Vec<usize>,
}

impl CrossAdjacency {
    pub fn row_sums(&self) -> Vec<usize> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|&x| x as usize).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.q)
            .map(|l| self.matrix.iter().map(|r| r[l] as usize).sum())
            .collect()
    }

    /// Row-sum vector equals column-sum vector; for a 2×q graph this is
    /// exactly the degree criterion.
    pub fn is_line_sum_symmetric(&self) -> bool {
        self.row_sums() == self.col_sums()
    }
}

/// Extracts the cross adjacency of a 2×q graph.
pub fn cross_adjacency(g: &ArrayedGraph) -> Result<CrossAdjacency, DecomposeError> {
    if g.rows() != 2 {
        return Err(DecomposeError::NotTwoByQ(g.rows(), g.cols()));
    }
    let q = g.cols();
    let mut matrix = vec![vec![0u8; q]; q];
    let mut vertical_columns = Vec::new();
    for e in g.edges() {
        let (u, v) = e.endpoints();
        if u.row == v.row {
            continue;
        }
        // u is in row 1 since endpoints are index-ordered.
        debug_assert_eq!((u.row, v.row), (1, 2));
        if u.col == v.col {
            vertical_columns.push(u.col);
        } else {
            matrix[u.col - 1][v.col - 1] = 1;
        }
    }
    Ok(CrossAdjacency {
        q,
        matrix,
        vertical_columns,
    })
}

/// The L1 + L2 + L3 split of a 2×q laplacian: within-row-1 edges, within-
/// row-2 edges, and everything between the rows. The parts sum to L(G)
/// exactly; under the degree criterion both diagonal q×q blocks of L3 are
/// the same diagonal cross-degree matrix and its off-diagonal block is minus
/// the cross adjacency (including vertical edges on the diagonal).
#[derive(Clone, Debug)]
pub struct BlockSplit {
    pub l1: RationalSymmetricMatrix,
    pub l2: RationalSymmetricMatrix,
    pub l3: RationalSymmetricMatrix,
}

pub fn split_blocks_2xq(g: &ArrayedGraph) -> Result<BlockSplit, DecomposeError> {
    if g.rows() != 2 {
        return Err(DecomposeError::NotTwoByQ(g.rows(), g.cols()));
    }
    if !degree_criterion_holds(g) {
        return Err(DecomposeError::DegreeCriterionViolated);
    }
    let n = g.vertex_count();
    let q = g.cols();
    let mut l1 = RationalSymmetricMatrix::zeros(n);
    let mut l2 = RationalSymmetricMatrix::zeros(n);
    let mut l3 = RationalSymmetricMatrix::zeros(n);
    let one = ratio(1, 1);
    let minus_one = ratio(-1, 1);
    for e in g.edges() {
        let (u, v) = e.endpoints();
        let i = u.index(q) - 1;
        let j = v.index(q) - 1;
        let part = match (u.row, v.row) {
            (1, 1) => &mut l1,
            (2, 2) => &mut l2,
            _ => &mut l3,
        };
        part.add_at(i, i, &one);
        part.add_at(j, j, &one);
        part.add_at(i, j, &minus_one);
    }
    Ok(BlockSplit { l1, l2, l3 })
}

pub(crate) fn degree_criterion_holds(g: &ArrayedGraph) -> bool {
    g.degrees() == g.partial_transpose().degrees()
}

/// Peels a line-sum symmetric 0/1 matrix with zero diagonal into simple
/// directed cycles of column indices (1-based), reconstructing the matrix
/// exactly as the sum of cycle indicators.
///
/// The walk is deterministic: it starts from the smallest index with
/// remaining out-degree and always follows the smallest available successor.
/// Whenever the walk revisits a vertex, the loop just closed is spliced out
/// and emitted (rotated to start at its smallest index), which keeps every
/// emitted cycle simple.
pub fn cycle_peel(cross: &CrossAdjacency) -> Result<Vec<Vec<usize>>, DecomposeError> {
    if !cross.is_line_sum_symmetric() {
        return Err(DecomposeError::NotLineSumSymmetric);
    }
    let q = cross.q;
    let mut remaining = cross.matrix.clone();
    for (j, row) in remaining.iter().enumerate() {
        debug_assert_eq!(row[j], 0, "cross adjacency has a diagonal entry");
    }
    let mut out_degree: Vec<usize> = remaining
        .iter()
        .map(|r| r.iter().map(|&x| x as usize).sum())
        .collect();

    let mut cycles = Vec::new();
    while let Some(start) = (0..q).find(|&j| out_degree[j] > 0) {
        // Walk a trail, splicing out a loop as soon as any vertex repeats;
        // line-sum symmetry keeps the trail from running dry anywhere but
        // at its start.
        let mut path = vec![start];
        let mut on_path = vec![false; q];
        on_path[start] = true;
        loop {
            let here = *path.last().unwrap();
            let Some(next) = (0..q).find(|&l| remaining[here][l] == 1) else {
                debug_assert!(here == start && path.len() == 1);
                break;
            };
            remaining[here][next] = 0;
            out_degree[here] -= 1;
            if on_path[next] {
                let pos = path.iter().position(|&v| v == next).unwrap();
                let loop_part: Vec<usize> = path.drain(pos..).collect();
                for &v in &loop_part {
                    on_path[v] = false;
                }
                cycles.push(canonical_rotation(loop_part));
                // The trail stands at the revisited vertex; resume there.
                path.push(next);
                on_path[next] = true;
                if path.len() == 1 && out_degree[next] == 0 {
                    break;
                }
            } else {
                path.push(next);
                on_path[next] = true;
            }
        }
    }

    // 1-based columns for reporting.
    Ok(cycles
        .into_iter()
        .map(|c| c.into_iter().map(|v| v + 1).collect())
        .collect())
}

fn canonical_rotation(cycle: Vec<usize>) -> Vec<usize> {
    let min_pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap();
    let mut rotated = Vec::with_capacity(cycle.len());
    rotated.extend_from_slice(&cycle[min_pos..]);
    rotated.extend_from_slice(&cycle[..min_pos]);
    rotated
}

/// The s product terms of one directed cycle of cross edges between two
/// rows: term k is weight 2/d with vectors
/// a_k ∝ |r1⟩ − ω^{−k}|r2⟩ and b_k ∝ Σ_t ω^{kt}|i_t⟩, ω = exp(2πi/s).
/// Their sum reconstructs the laplacian of the cycle's edges divided by d.
pub fn tally_mark_terms(
    p: usize,
    q: usize,
    rows: (usize, usize),
    cycle: &[usize],
    degree_sum: usize,
) -> Result<Vec<ProductTerm>, DecomposeError> {
    let s = cycle.len();
    if s < 2 {
        return Err(DecomposeError::DegenerateCycle(format!(
            "cycle has {s} columns, need at least 2"
        )));
    }
    let (r1, r2) = rows;
    if r1 == r2 || r1 < 1 || r2 < 1 || r1 > p || r2 > p {
        return Err(DecomposeError::DegenerateCycle(format!(
            "rows ({r1}, {r2}) are not two distinct rows of 1..={p}"
        )));
    }
    let mut seen = vec![false; q];
    for &col in cycle {
        if col < 1 || col > q || seen[col - 1] {
            return Err(DecomposeError::DegenerateCycle(format!(
                "column indices must be distinct and within 1..={q}"
            )));
        }
        seen[col - 1] = true;
    }
    if degree_sum == 0 {
        return Err(DecomposeError::DegenerateCycle("zero degree sum".into()));
    }

    let s32 = s as u32;
    let weight = ratio(2, degree_sum as i64);
    let mut terms = Vec::with_capacity(s);
    for k in 0..s {
        // −ω^{−k} = exp(2πi (s − 2k) / (2s)); reduce modulo 2s.
        let minus_omega_pow = ((2 * s as i64 + s as i64 - 2 * k as i64) % (2 * s as i64)) as u32;
        let vector_a = PhaseVector::new(p, vec![(r1 - 1, 0), (r2 - 1, minus_omega_pow)], 2 * s32);
        let b_entries: Vec<(usize, u32)> = cycle
            .iter()
            .enumerate()
            .map(|(t, &col)| (col - 1, ((k * t) % s) as u32))
            .collect();
        let vector_b = PhaseVector::new(q, b_entries, s32);
        terms.push(ProductTerm {
            weight: weight.clone(),
            vector_a,
            vector_b,
            provenance: TermProvenance::Cycle {
                rows: [r1, r2],
                columns: cycle.to_vec(),
                phase: k,
            },
        });
    }
    Ok(terms)
}

/// The single product term of a row-local, column-local or vertical edge:
/// weight 2/d with the difference vector on the factor the edge lives in and
/// a basis vector on the other. Reconstructs (1/d)·L_edge exactly.
pub fn local_edge_term(
    p: usize,
    q: usize,
    edge: &Edge,
    degree_sum: usize,
) -> Result<ProductTerm, DecomposeError> {
    let (u, v) = edge.endpoints();
    let weight = ratio(2, degree_sum as i64);
    match edge.locality() {
        EdgeLocality::RowLocal => Ok(ProductTerm {
            weight,
            vector_a: PhaseVector::basis(p, u.row - 1),
            vector_b: PhaseVector::difference(q, u.col - 1, v.col - 1),
            provenance: TermProvenance::LocalEdge {
                edge: edge_coords(edge),
            },
        }),
        EdgeLocality::ColumnLocal => Ok(ProductTerm {
            weight,
            vector_a: PhaseVector::difference(p, u.row - 1, v.row - 1),
            vector_b: PhaseVector::basis(q, u.col - 1),
            provenance: TermProvenance::VerticalEdge {
                edge: edge_coords(edge),
            },
        }),
        EdgeLocality::Cross => Err(DecomposeError::EdgeNotSeparableLocal(*edge)),
    }
}

/// Explicit separable decomposition of the density matrix of a 2×q graph
/// satisfying the degree criterion: local terms for row-local and vertical
/// edges, tally-mark terms for each peeled cycle of the cross adjacency.
/// Weights are exact rationals summing to one.
pub fn decompose_2xq(g: &ArrayedGraph, tol: f64) -> Result<SeparableDecomposition, DecomposeError> {
    if g.rows() != 2 {
        return Err(DecomposeError::NotTwoByQ(g.rows(), g.cols()));
    }
    if !degree_criterion_holds(g) {
        return Err(DecomposeError::DegreeCriterionViolated);
    }
    let (p, q) = (2, g.cols());
    let d = g.degree_sum();
    let mut terms = Vec::new();
    for e in g.edges() {
        if e.is_separable() {
            terms.push(local_edge_term(p, q, e, d)?);
        }
    }
    let cross = cross_adjacency(g)?;
    for cycle in cycle_peel(&cross)? {
        terms.extend(tally_mark_terms(p, q, (1, 2), &cycle, d)?);
    }

    finish(g.density_matrix(), p, q, terms, tol)
}

/// Decomposition entry point for any array with a trivial or 2-dimensional
/// factor: handles 1×q and p×1 (all edges local), 2×q directly, and p×2 by
/// swapping the factors and swapping each term back.
pub fn decompose_graph(
    g: &ArrayedGraph,
    tol: f64,
) -> Result<SeparableDecomposition, DecomposeError> {
    let (p, q) = (g.rows(), g.cols());
    if p == 2 {
        return decompose_2xq(g, tol);
    }
    if q == 2 {
        let swapped = g.swap_factors();
        let dec = decompose_2xq(&swapped, tol)?;
        let terms = dec
            .terms
            .into_iter()
            .map(|t| ProductTerm {
                weight: t.weight,
                vector_a: t.vector_b,
                vector_b: t.vector_a,
                provenance: swap_provenance(t.provenance),
            })
            .collect();
        return finish(g.density_matrix(), p, q, terms, tol);
    }
    if p == 1 || q == 1 {
        if !degree_criterion_holds(g) {
            // Cannot happen: every edge is local, hence fixed by the
            // partial transpose.
            return Err(DecomposeError::DegreeCriterionViolated);
        }
        let d = g.degree_sum();
        let terms = g
            .edges()
            .map(|e| local_edge_term(p, q, e, d))
            .collect::<Result<Vec<_>, _>>()?;
        return finish(g.density_matrix(), p, q, terms, tol);
    }
    Err(DecomposeError::NotTwoByQ(p, q))
}

fn swap_provenance(p: TermProvenance) -> TermProvenance {
    let swap_edge = |e: [usize; 4]| [e[1], e[0], e[3], e[2]];
    match p {
        TermProvenance::LocalEdge { edge } => TermProvenance::VerticalEdge {
            edge: swap_edge(edge),
        },
        TermProvenance::VerticalEdge { edge } => TermProvenance::LocalEdge {
            edge: swap_edge(edge),
        },
        TermProvenance::Cycle {
            rows,
            columns,
            phase,
        } => TermProvenance::Cycle {
            rows,
            columns,
            phase,
        },
    }
}

/// Decomposes the density matrix of the matched subgraph (V, E1) on any
/// p×q array: local edges are always matched and decompose edge by edge;
/// matched cross edges come in partner pairs forming criss-crosses, each a
/// 2-column tally-mark on its own two rows.
pub fn decompose_matched_subgraph(
    g: &ArrayedGraph,
) -> Result<SeparableDecomposition, DecomposeError> {
    let classification = g.classify_edges();
    let matched: Vec<Edge> = classification
        .classes
        .iter()
        .filter(|(_, c)| c.matched)
        .map(|(e, _)| *e)
        .collect();
    if matched.is_empty() {
        return Err(DecomposeError::NoMatchedEdges);
    }
    let (p, q) = (g.rows(), g.cols());
    let d = 2 * matched.len();

    let mut terms = Vec::new();
    let mut consumed = std::collections::BTreeSet::new();
    for e in &matched {
        if consumed.contains(e) {
            continue;
        }
        if e.is_separable() {
            consumed.insert(*e);
            terms.push(local_edge_term(p, q, e, d)?);
            continue;
        }
        // Matched cross edge: pair with its partner into a criss-cross.
        let partner = e.partner();
        debug_assert!(matched.contains(&partner) && partner != *e);
        consumed.insert(*e);
        consumed.insert(partner);
        let (u, v) = e.endpoints();
        let cols = if u.col < v.col {
            vec![u.col, v.col]
        } else {
            vec![v.col, u.col]
        };
        terms.extend(tally_mark_terms(p, q, (u.row, v.row), &cols, d)?);
    }

    let matched_graph = ArrayedGraph::from_edges(p, q, matched).expect("matched set is non-empty");
    finish(matched_graph.density_matrix(), p, q, terms, 0.0)
}

fn finish(
    rho: RationalSymmetricMatrix,
    p: usize,
    q: usize,
    terms: Vec<ProductTerm>,
    _tol: f64,
) -> Result<SeparableDecomposition, DecomposeError> {
    let mut dec = SeparableDecomposition {
        p,
        q,
        terms,
        reconstruction_residual: 0.0,
    };
    dec.reconstruction_residual = dec.reconstruct().sub(&rho.to_complex()).frobenius_norm();
    Ok(dec)
}

/// Everything `verify_decomposition` measures; nothing here is an error,
/// callers decide what to assert.
#[derive(Clone, Debug)]
pub struct DecompositionCheck {
    /// ‖ρ − Σ w (a⊗b)(a⊗b)*‖_F.
    pub residual: f64,
    pub weight_sum: BigRational,
    pub all_weights_nonnegative: bool,
    /// Worst relative residual of any term against range(ρ) and range(ρ^Γ).
    pub max_range_residual: f64,
    pub range_conditions_hold: bool,
}

/// Checks a decomposition against an exact density matrix: reconstruction
/// residual, weight bookkeeping, and the per-term range conditions
/// (a⊗b) ∈ range(ρ), (a⊗b̄) ∈ range(ρ^Γ).
pub fn verify_decomposition(
    rho: &RationalSymmetricMatrix,
    dec: &SeparableDecomposition,
    tol: f64,
) -> DecompositionCheck {
    let residual = dec.reconstruct().sub(&rho.to_complex()).frobenius_norm();
    let weight_sum = dec.weight_sum();
    let all_weights_nonnegative = dec.terms.iter().all(|t| !t.weight.is_negative());

    let eig = rho.eigendecomposition();
    let eig_pt = rho
        .partial_transpose(dec.p, dec.q)
        .expect("decomposition split matches the matrix")
        .eigendecomposition();
    let mut max_range_residual: f64 = 0.0;
    for t in &dec.terms {
        let a = t.vector_a.materialize();
        let b = t.vector_b.materialize();
        let b_conj: Vec<Complex64> = b.iter().map(|z| z.conj()).collect();
        let direct = eig.range_residual(&kron_vec(&a, &b), tol);
        let conjugated = eig_pt.range_residual(&kron_vec(&a, &b_conj), tol);
        max_range_residual = max_range_residual.max(direct).max(conjugated);
    }
    DecompositionCheck {
        residual,
        weight_sum,
        all_weights_nonnegative,
        max_range_residual,
        range_conditions_hold: max_range_residual <= tol,
    }
}
