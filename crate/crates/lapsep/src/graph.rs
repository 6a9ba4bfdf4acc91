//! Labeled loop-free graphs whose vertices sit on a p×q array, together with
//! their matrices, the graph partial transpose, and per-edge classification.
//!
//! Vertices are 1-based coordinate pairs (k, l) with 1 ≤ k ≤ p, 1 ≤ l ≤ q,
//! numbered row-major: vertex (k, l) has index (k−1)·q + l. All matrices
//! built here have exact integer or rational entries; no floating arithmetic
//! enters this module.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::linalg::{rat, ratio, RationalSymmetricMatrix};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge set is empty")]
    EmptyEdgeSet,

    #[error("vertex ({0}, {1}) is outside the {2}x{3} array")]
    OutOfBounds(usize, usize, usize, usize),

    #[error("edge endpoints coincide at ({0}, {1})")]
    LoopEdge(usize, usize),

    #[error("permutation is not a bijection on 1..={0}")]
    NotABijection(usize),

    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },

    #[error("{0}")]
    Syntax(String),

    #[error("{0} vertex pairs exceed the 64-bit edge bitmask")]
    BitmaskTooLarge(usize),

    #[error("bitmask hex string does not match {expected} pairs: {detail}")]
    BadBitmaskHex { expected: usize, detail: String },
}

/// A vertex of the p×q array, 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex {
    pub row: usize,
    pub col: usize,
}

impl Vertex {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// Row-major index (k−1)·q + l, in 1..=pq.
    pub fn index(&self, q: usize) -> usize {
        vertex_index(self.row, self.col, q)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Row-major vertex numbering: (k, l) ↦ (k−1)·q + l.
pub fn vertex_index(k: usize, l: usize, q: usize) -> usize {
    debug_assert!(k >= 1 && l >= 1 && l <= q, "coordinates out of range");
    (k - 1) * q + l
}

/// Inverse of [`vertex_index`].
pub fn vertex_at(index: usize, q: usize) -> Vertex {
    debug_assert!(index >= 1, "indices are 1-based");
    Vertex::new((index - 1) / q + 1, (index - 1) % q + 1)
}

/// An unordered pair of distinct vertices, stored with the lower-indexed
/// endpoint first. Lexicographic order on (row, col) coincides with the
/// row-major index order for every q, so edge ordering is array-independent.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    a: Vertex,
    b: Vertex,
}

/// Whether the two endpoints share a row, share a column, or neither.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeLocality {
    RowLocal,
    ColumnLocal,
    Cross,
}

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Result<Self, GraphError> {
        if u == v {
            return Err(GraphError::LoopEdge(u.row, u.col));
        }
        Ok(if u < v {
            Self { a: u, b: v }
        } else {
            Self { a: v, b: u }
        })
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.a, self.b)
    }

    pub fn locality(&self) -> EdgeLocality {
        if self.a.row == self.b.row {
            EdgeLocality::RowLocal
        } else if self.a.col == self.b.col {
            EdgeLocality::ColumnLocal
        } else {
            EdgeLocality::Cross
        }
    }

    /// The image under the graph partial transpose: column coordinates swap
    /// across the edge, {(i,j),(k,l)} ↦ {(i,l),(k,j)}. Row- and column-local
    /// edges are fixed points.
    pub fn partner(&self) -> Edge {
        let u = Vertex::new(self.a.row, self.b.col);
        let v = Vertex::new(self.b.row, self.a.col);
        Edge::new(u, v).expect("partner of a non-loop edge cannot be a loop")
    }

    /// A density matrix supported on one edge is separable exactly when the
    /// edge is row- or column-local.
    pub fn is_separable(&self) -> bool {
        !matches!(self.locality(), EdgeLocality::Cross)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Classification of a single edge relative to the partial transpose.
#[derive(Clone, Copy, Debug)]
pub struct EdgeClass {
    pub locality: EdgeLocality,
    pub matched: bool,
    pub partner: Edge,
}

/// Full per-edge classification plus matched/unmatched counts.
#[derive(Clone, Debug)]
pub struct EdgeClassification {
    pub classes: BTreeMap<Edge, EdgeClass>,
    pub matched_count: usize,
    pub unmatched_count: usize,
}

/// Outcome of parsing the edge-list text format.
#[derive(Clone, Debug)]
pub struct ParsedEdgeList {
    pub graph: ArrayedGraph,
    /// Edges that appeared more than once in the input, in first-seen order.
    pub duplicates: Vec<Edge>,
}

/// An edge given as raw 1-based coordinates ((k1, l1), (k2, l2)).
pub type CoordPair = ((usize, usize), (usize, usize));

/// A labeled loop-free graph on a p×q vertex array.
///
/// The edge set is non-empty by construction; isolated vertices are allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArrayedGraph {
    p: usize,
    q: usize,
    edges: BTreeSet<Edge>,
}

impl ArrayedGraph {
    /// Builds a graph from coordinate pairs, collapsing duplicates.
    pub fn new(p: usize, q: usize, pairs: &[CoordPair]) -> Result<Self, GraphError> {
        let edges = pairs
            .iter()
            .map(|&((k1, l1), (k2, l2))| {
                let u = Vertex::new(k1, l1);
                let v = Vertex::new(k2, l2);
                check_bounds(u, p, q)?;
                check_bounds(v, p, q)?;
                Edge::new(u, v)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_edges(p, q, edges)
    }

    pub fn from_edges(
        p: usize,
        q: usize,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        assert!(p >= 1 && q >= 1, "array dimensions must be positive");
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        for e in &edges {
            check_bounds(e.a, p, q)?;
            check_bounds(e.b, p, q)?;
        }
        if edges.is_empty() {
            return Err(GraphError::EmptyEdgeSet);
        }
        Ok(Self { p, q, edges })
    }

    pub fn rows(&self) -> usize {
        self.p
    }

    pub fn cols(&self) -> usize {
        self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.p * self.q
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Degree-sum d_G = 2|E|.
    pub fn degree_sum(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    /// Vertex degrees in index order (entry i−1 is the degree of vertex i).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count()];
        for e in &self.edges {
            deg[e.a.index(self.q) - 1] += 1;
            deg[e.b.index(self.q) - 1] += 1;
        }
        deg
    }

    /// 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency_matrix(&self) -> RationalSymmetricMatrix {
        let mut m = RationalSymmetricMatrix::zeros(self.vertex_count());
        for e in &self.edges {
            m.set(e.a.index(self.q) - 1, e.b.index(self.q) - 1, rat(1));
        }
        m
    }

    /// Diagonal matrix of vertex degrees.
    pub fn degree_matrix(&self) -> RationalSymmetricMatrix {
        let deg = self.degrees();
        let mut m = RationalSymmetricMatrix::zeros(self.vertex_count());
        for (i, d) in deg.iter().enumerate() {
            m.set(i, i, rat(*d as i64));
        }
        m
    }

    /// Combinatorial laplacian L = Δ − M: integer symmetric, zero row sums,
    /// positive semidefinite.
    pub fn laplacian(&self) -> RationalSymmetricMatrix {
        self.degree_matrix().sub(&self.adjacency_matrix())
    }

    /// Density matrix ρ = L / d_G; exact trace one.
    pub fn density_matrix(&self) -> RationalSymmetricMatrix {
        self.laplacian().scaled(&ratio(1, self.degree_sum() as i64))
    }

    /// The partially transposed graph: every edge replaced by its
    /// [`Edge::partner`]. Same array, same edge count; an involution.
    pub fn partial_transpose(&self) -> ArrayedGraph {
        ArrayedGraph {
            p: self.p,
            q: self.q,
            edges: self.edges.iter().map(Edge::partner).collect(),
        }
    }

    /// Labels every edge as matched/unmatched with its partner edge.
    pub fn classify_edges(&self) -> EdgeClassification {
        let mut classes = BTreeMap::new();
        let mut matched_count = 0;
        for e in &self.edges {
            let partner = e.partner();
            let matched = self.edges.contains(&partner);
            if matched {
                matched_count += 1;
            }
            classes.insert(
                *e,
                EdgeClass {
                    locality: e.locality(),
                    matched,
                    partner,
                },
            );
        }
        EdgeClassification {
            unmatched_count: self.edges.len() - matched_count,
            matched_count,
            classes,
        }
    }

    /// Relabels vertices: the result has an edge {i, j} exactly when
    /// {π(i), π(j)} is an edge here, so M(G′) = Pᵀ M(G) P for the
    /// permutation matrix P of π. `perm` lists π(1), ..., π(n).
    pub fn apply_vertex_permutation(&self, perm: &[usize]) -> Result<ArrayedGraph, GraphError> {
        let n = self.vertex_count();
        if perm.len() != n {
            return Err(GraphError::NotABijection(n));
        }
        let mut seen = vec![false; n];
        for &img in perm {
            if img < 1 || img > n || seen[img - 1] {
                return Err(GraphError::NotABijection(n));
            }
            seen[img - 1] = true;
        }
        // Invert: edge {π(i), π(j)} in G means edge {i, j} in G'.
        let mut inverse = vec![0usize; n];
        for (i, &img) in perm.iter().enumerate() {
            inverse[img - 1] = i + 1;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let u = vertex_at(inverse[e.a.index(self.q) - 1], self.q);
                let v = vertex_at(inverse[e.b.index(self.q) - 1], self.q);
                Edge::new(u, v).expect("permutation preserves non-loops")
            })
            .collect();
        Ok(ArrayedGraph {
            p: self.p,
            q: self.q,
            edges,
        })
    }

    /// Transposes the array: the q×p graph with every vertex (k, l) moved to
    /// (l, k). Exchanging the two tensor factors this way conjugates the
    /// density matrix by the commutation permutation, so separability
    /// verdicts and measure values are unchanged.
    pub fn swap_factors(&self) -> ArrayedGraph {
        ArrayedGraph {
            p: self.q,
            q: self.p,
            edges: self
                .edges
                .iter()
                .map(|e| {
                    Edge::new(Vertex::new(e.a.col, e.a.row), Vertex::new(e.b.col, e.b.row))
                        .expect("swap preserves non-loops")
                })
                .collect(),
        }
    }

    /// All unordered vertex pairs of the array in lexicographic index order;
    /// this is the bit ordering of the edge bitmask.
    pub fn vertex_pairs(p: usize, q: usize) -> Vec<(Vertex, Vertex)> {
        let n = p * q;
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for i in 1..=n {
            for j in (i + 1)..=n {
                pairs.push((vertex_at(i, q), vertex_at(j, q)));
            }
        }
        pairs
    }

    /// Internal bitmask: bit t (least significant = t = 0) is set when the
    /// t-th vertex pair is an edge.
    pub fn edge_bitmask(&self) -> Result<u64, GraphError> {
        let n = self.vertex_count();
        let m = n * (n - 1) / 2;
        if m > 64 {
            return Err(GraphError::BitmaskTooLarge(m));
        }
        let mut mask = 0u64;
        for e in &self.edges {
            mask |= 1u64 << pair_bit(e, self.q, n);
        }
        Ok(mask)
    }

    pub fn from_bitmask(p: usize, q: usize, mask: u64) -> Result<Self, GraphError> {
        let pairs = Self::vertex_pairs(p, q);
        if pairs.len() > 64 {
            return Err(GraphError::BitmaskTooLarge(pairs.len()));
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(t, _)| mask >> t & 1 == 1)
            .map(|(_, &(u, v))| Edge::new(u, v).expect("pairs are non-loops"))
            .collect::<Vec<_>>();
        Self::from_edges(p, q, edges)
    }

    /// Hex serialization of the edge bitmask: pairs in lexicographic order,
    /// most significant bit first, zero-padded to whole nibbles. Works for
    /// any array size.
    pub fn bitmask_hex(&self) -> String {
        let n = self.vertex_count();
        let m = n * (n - 1) / 2;
        let mut bits = vec![false; m];
        for e in &self.edges {
            bits[pair_bit(e, self.q, n) as usize] = true;
        }
        bits_to_hex(&bits)
    }

    pub fn from_bitmask_hex(p: usize, q: usize, hex: &str) -> Result<Self, GraphError> {
        let n = p * q;
        let m = n * (n - 1) / 2;
        let nibbles = m.div_ceil(4);
        if hex.len() != nibbles {
            return Err(GraphError::BadBitmaskHex {
                expected: m,
                detail: format!("expected {} hex digits, got {}", nibbles, hex.len()),
            });
        }
        let pairs = Self::vertex_pairs(p, q);
        let mut edges = Vec::new();
        for (t, &(u, v)) in pairs.iter().enumerate() {
            let digit = hex.as_bytes()[t / 4] as char;
            let value = digit
                .to_digit(16)
                .ok_or_else(|| GraphError::BadBitmaskHex {
                    expected: m,
                    detail: format!("invalid hex digit {digit:?}"),
                })?;
            if value >> (3 - t % 4) & 1 == 1 {
                edges.push(Edge::new(u, v).expect("pairs are non-loops"));
            }
        }
        // Trailing pad bits must be zero.
        for t in m..nibbles * 4 {
            let digit = hex.as_bytes()[t / 4] as char;
            let value = digit
                .to_digit(16)
                .ok_or_else(|| GraphError::BadBitmaskHex {
                    expected: m,
                    detail: format!("invalid hex digit {digit:?}"),
                })?;
            if value >> (3 - t % 4) & 1 == 1 {
                return Err(GraphError::BadBitmaskHex {
                    expected: m,
                    detail: "nonzero padding bits".into(),
                });
            }
        }
        Self::from_edges(p, q, edges)
    }

    /// Parses the edge-list text format: first data line "p q", then one
    /// edge per line as "k1 l1 k2 l2" (1-based); '#' starts a comment.
    /// Duplicate edges collapse, and are reported for caller-side warnings.
    pub fn parse_edge_list(text: &str) -> Result<ParsedEdgeList, GraphError> {
        let mut dims: Option<(usize, usize)> = None;
        let mut edges: BTreeSet<Edge> = BTreeSet::new();
        let mut duplicates: Vec<Edge> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<usize> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| GraphError::Parse {
                        line: line_no,
                        source: Box::new(GraphError::Syntax(format!(
                            "expected an integer, got {tok:?}"
                        ))),
                    })
                })
                .collect::<Result<_, _>>()?;

            match dims {
                None => {
                    if fields.len() != 2 || fields[0] == 0 || fields[1] == 0 {
                        return Err(GraphError::Parse {
                            line: line_no,
                            source: Box::new(GraphError::Syntax(
                                "expected the array header \"p q\"".into(),
                            )),
                        });
                    }
                    dims = Some((fields[0], fields[1]));
                }
                Some((p, q)) => {
                    if fields.len() != 4 {
                        return Err(GraphError::Parse {
                            line: line_no,
                            source: Box::new(GraphError::Syntax(
                                "expected an edge line \"k1 l1 k2 l2\"".into(),
                            )),
                        });
                    }
                    let u = Vertex::new(fields[0], fields[1]);
                    let v = Vertex::new(fields[2], fields[3]);
                    let edge = check_bounds(u, p, q)
                        .and_then(|_| check_bounds(v, p, q))
                        .and_then(|_| Edge::new(u, v))
                        .map_err(|e| GraphError::Parse {
                            line: line_no,
                            source: Box::new(e),
                        })?;
                    if !edges.insert(edge) {
                        duplicates.push(edge);
                    }
                }
            }
        }

        let (p, q) =
            dims.ok_or_else(|| GraphError::Syntax("missing array header \"p q\"".into()))?;
        let graph = ArrayedGraph::from_edges(p, q, edges)?;
        Ok(ParsedEdgeList { graph, duplicates })
    }

    /// Renders the edge-list text format accepted by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.p, self.q);
        for e in &self.edges {
            out.push_str(&format!(
                "{} {} {} {}\n",
                e.a.row, e.a.col, e.b.row, e.b.col
            ));
        }
        out
    }
}

fn check_bounds(v: Vertex, p: usize, q: usize) -> Result<(), GraphError> {
    if v.row < 1 || v.row > p || v.col < 1 || v.col > q {
        return Err(GraphError::OutOfBounds(v.row, v.col, p, q));
    }
    Ok(())
}

/// Bit position of an edge in the lexicographic ordering of the n(n−1)/2
/// vertex pairs.
fn pair_bit(e: &Edge, q: usize, n: usize) -> u64 {
    let (u, v) = e.endpoints();
    let i = u.index(q);
    let j = v.index(q);
    debug_assert!(i < j && j <= n);
    // Pairs with first index below i come first, then (i, i+1), ..., (i, j).
    let before: usize = (1..i).map(|k| n - k).sum();
    (before + (j - i - 1)) as u64
}

fn bits_to_hex(bits: &[bool]) -> String {
    let nibbles = bits.len().div_ceil(4);
    let mut out = String::with_capacity(nibbles);
    for nb in 0..nibbles {
        let mut value = 0u32;
        for k in 0..4 {
            let t = nb * 4 + k;
            if t < bits.len() && bits[t] {
                value |= 1 << (3 - k);
            }
        }
        out.push(char::from_digit(value, 16).unwrap());
    }
    out
}
