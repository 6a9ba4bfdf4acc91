//! Builtin graph families and the 3×3 bound-entangled counterexample.

use std::str::FromStr;

use thiserror::Error;

use crate::graph::{ArrayedGraph, Edge, GraphError, Vertex};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("unknown family {0:?} (expected complete, star, crisscross, tallymark(s), nearest_point_sample)")]
    UnknownFamily(String),

    #[error("family {family} needs {needed} on a {p}x{q} array")]
    DimensionTooSmall {
        family: String,
        needed: String,
        p: usize,
        q: usize,
    },

    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Named graph families with canonical labelings.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    /// Complete graph K_n on the whole array.
    Complete,
    /// Star K_{1,n−1} centered at (1,1).
    Star,
    /// The two partner cross edges on rows 1,2 and columns 1,2.
    CrissCross,
    /// Directed cycle of cross edges on rows 1,2 and columns 1..s.
    TallyMark(usize),
    /// All lattice edges of Euclidean length 1 or √2.
    NearestPointSample,
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "complete" => return Ok(Family::Complete),
            "star" => return Ok(Family::Star),
            "crisscross" => return Ok(Family::CrissCross),
            "nearest_point_sample" => return Ok(Family::NearestPointSample),
            _ => {}
        }
        if let Some(inner) = lower
            .strip_prefix("tallymark(")
            .and_then(|rest| rest.strip_suffix(')'))
        {
            if let Ok(s) = inner.trim().parse::<usize>() {
                return Ok(Family::TallyMark(s));
            }
        }
        Err(FamilyError::UnknownFamily(s.to_string()))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Complete => write!(f, "complete"),
            Family::Star => write!(f, "star"),
            Family::CrissCross => write!(f, "crisscross"),
            Family::TallyMark(s) => write!(f, "tallymark({s})"),
            Family::NearestPointSample => write!(f, "nearest_point_sample"),
        }
    }
}

/// Builds the named family on a p×q array.
pub fn family_graph(family: Family, p: usize, q: usize) -> Result<ArrayedGraph, FamilyError> {
    let n = p * q;
    let too_small = |needed: &str| FamilyError::DimensionTooSmall {
        family: family.to_string(),
        needed: needed.to_string(),
        p,
        q,
    };
    match family {
        Family::Complete => {
            if n < 2 {
                return Err(too_small("at least two vertices"));
            }
            let mut edges = Vec::new();
            for i in 1..=n {
                for j in (i + 1)..=n {
                    edges.push(edge_by_index(i, j, q));
                }
            }
            Ok(ArrayedGraph::from_edges(p, q, edges)?)
        }
        Family::Star => {
            if n < 2 {
                return Err(too_small("at least two vertices"));
            }
            let edges = (2..=n).map(|i| edge_by_index(1, i, q)).collect::<Vec<_>>();
            Ok(ArrayedGraph::from_edges(p, q, edges)?)
        }
        Family::CrissCross => {
            if p < 2 || q < 2 {
                return Err(too_small("two rows and two columns"));
            }
            Ok(ArrayedGraph::new(
                p,
                q,
                &[((1, 1), (2, 2)), ((1, 2), (2, 1))],
            )?)
        }
        Family::TallyMark(s) => {
            if s < 2 {
                return Err(too_small("a cycle of at least two columns"));
            }
            if p < 2 || q < s {
                return Err(too_small(&format!("two rows and {s} columns")));
            }
            let mut pairs = Vec::with_capacity(s);
            for t in 1..=s {
                let next = t % s + 1;
                pairs.push(((1, t), (2, next)));
            }
            Ok(ArrayedGraph::new(p, q, &pairs)?)
        }
        Family::NearestPointSample => {
            if n < 2 {
                return Err(too_small("at least two vertices"));
            }
            let mut edges = Vec::new();
            for k in 1..=p {
                for l in 1..=q {
                    // length-1 neighbors to the right and below; length-√2
                    // diagonals down-right and down-left.
                    let candidates = [
                        (k, l + 1),
                        (k + 1, l),
                        (k + 1, l + 1),
                        (k + 1, l.wrapping_sub(1)),
                    ];
                    for (k2, l2) in candidates {
                        if k2 >= 1 && k2 <= p && l2 >= 1 && l2 <= q {
                            edges.push(
                                Edge::new(Vertex::new(k, l), Vertex::new(k2, l2))
                                    .expect("neighbors are distinct"),
                            );
                        }
                    }
                }
            }
            Ok(ArrayedGraph::from_edges(p, q, edges)?)
        }
    }
}

fn edge_by_index(i: usize, j: usize, q: usize) -> Edge {
    Edge::new(crate::graph::vertex_at(i, q), crate::graph::vertex_at(j, q))
        .expect("distinct indices")
}

/// The 3×3 graph with laplacian [[I₄, 0, −I₄], [0, 0, 0], [−I₄, 0, I₄]]
/// (blocks of size 4, 1, 4 under row-major vertex order; vertex (2,2) is
/// isolated): edges {(1,1),(2,3)}, {(1,2),(3,1)}, {(1,3),(3,2)},
/// {(2,1),(3,3)}. It satisfies the degree criterion — its density matrix is
/// PPT — yet the state is entangled: the realignment trace norm exceeds one.
pub fn counterexample_graph() -> ArrayedGraph {
    ArrayedGraph::new(
        3,
        3,
        &[
            ((1, 1), (2, 3)),
            ((1, 2), (3, 1)),
            ((1, 3), (3, 2)),
            ((2, 1), (3, 3)),
        ],
    )
    .expect("fixed edge list is valid")
}
