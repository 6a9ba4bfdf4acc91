//! Exhaustive enumeration of labeled graphs on a p×q array and brute-force
//! canonical forms for isomorphism-class grouping.

use thiserror::Error;

use crate::graph::{ArrayedGraph, GraphError};

/// Pair-count cap for exhaustive enumeration: 28 bits covers the 2×3 array
/// (15 pairs, 32767 graphs) with headroom; anything larger must be requested
/// explicitly.
pub const ENUMERATION_PAIR_CAP: usize = 28;

/// Default vertex cap for brute-force canonicalization ((pq)! permutations).
pub const CANONICAL_VERTEX_CAP: usize = 6;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("{0} vertex pairs give 2^{0} - 1 graphs, beyond the cap of {1} pairs; pass the explicit override to enumerate anyway")]
    TooLarge(usize, usize),

    #[error("canonical form of a {0}-vertex graph needs {0}! permutations, beyond the cap of {1} vertices")]
    CanonicalTooLarge(usize, usize),

    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Iterator over all non-empty labeled graphs on the array, in increasing
/// edge-bitmask order (bit t = t-th vertex pair). The first graph emitted is
/// the single edge between vertices 1 and 2.
pub struct GraphEnumeration {
    p: usize,
    q: usize,
    next: u64,
    end: u64,
}

impl GraphEnumeration {
    pub fn len(&self) -> u64 {
        self.end - self.next
    }

    pub fn is_empty(&self) -> bool {
        self.next >= self.end
    }

    /// Splits the remaining range for parallel processing.
    pub fn mask_range(&self) -> std::ops::Range<u64> {
        self.next..self.end
    }
}

impl Iterator for GraphEnumeration {
    type Item = ArrayedGraph;

    fn next(&mut self) -> Option<ArrayedGraph> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        Some(ArrayedGraph::from_bitmask(self.p, self.q, mask).expect("mask within range"))
    }
}

/// All 2^(pq(pq−1)/2) − 1 non-empty labeled graphs on the p×q array.
pub fn enumerate_labeled_graphs(
    p: usize,
    q: usize,
    allow_large: bool,
) -> Result<GraphEnumeration, EnumerateError> {
    let n = p * q;
    let pairs = n * (n - 1) / 2;
    if pairs > ENUMERATION_PAIR_CAP && !allow_large {
        return Err(EnumerateError::TooLarge(pairs, ENUMERATION_PAIR_CAP));
    }
    if pairs > 63 {
        return Err(EnumerateError::TooLarge(pairs, 63));
    }
    Ok(GraphEnumeration {
        p,
        q,
        next: 1,
        end: 1u64 << pairs,
    })
}

/// Canonical isomorphism-class id: the minimum serialized bitmask over all
/// (pq)! vertex relabelings, rendered in the same hex form as
/// [`ArrayedGraph::bitmask_hex`]. Labelings of isomorphic graphs share ids;
/// the map is idempotent on its own output.
pub fn canonical_form(g: &ArrayedGraph) -> Result<String, EnumerateError> {
    canonical_form_with_cap(g, CANONICAL_VERTEX_CAP)
}

pub fn canonical_form_with_cap(g: &ArrayedGraph, cap: usize) -> Result<String, EnumerateError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(EnumerateError::CanonicalTooLarge(n, cap));
    }
    let mut best: Option<ArrayedGraph> = None;
    let mut perm: Vec<usize> = (1..=n).collect();
    // Heap's algorithm, iterative.
    let mut c = vec![0usize; n];
    let consider = |perm: &[usize], best: &mut Option<ArrayedGraph>| {
        let relabeled = g
            .apply_vertex_permutation(perm)
            .expect("generated permutations are bijections");
        let better = match best {
            None => true,
            Some(b) => relabeled.bitmask_hex() < b.bitmask_hex(),
        };
        if better {
            *best = Some(relabeled);
        }
    };
    consider(&perm, &mut best);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            consider(&perm, &mut best);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best
        .expect("at least the identity permutation")
        .bitmask_hex())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{family_graph, Family};

    #[test]
    fn counts_for_small_arrays() {
        assert_eq!(enumerate_labeled_graphs(2, 2, false).unwrap().count(), 63);
        assert_eq!(enumerate_labeled_graphs(2, 3, false).unwrap().len(), 32767);
        assert!(matches!(
            enumerate_labeled_graphs(3, 3, false),
            Err(EnumerateError::TooLarge(36, _))
        ));
    }

    #[test]
    fn first_graph_is_the_first_pair() {
        let mut it = enumerate_labeled_graphs(2, 2, false).unwrap();
        let g = it.next().unwrap();
        assert_eq!(g.edge_count(), 1);
        let e = g.edges().next().unwrap();
        assert_eq!(e.endpoints().0.index(2), 1);
        assert_eq!(e.endpoints().1.index(2), 2);
    }

    #[test]
    fn canonical_form_is_permutation_invariant() {
        let star = family_graph(Family::Star, 2, 2).unwrap();
        let id = canonical_form(&star).unwrap();
        // All 24 relabelings share the id.
        let mut perms = Vec::new();
        for a in 1..=4usize {
            for b in 1..=4 {
                for c in 1..=4 {
                    for d in 1..=4 {
                        let p = [a, b, c, d];
                        let mut sorted = p;
                        sorted.sort_unstable();
                        if sorted == [1, 2, 3, 4] {
                            perms.push(p);
                        }
                    }
                }
            }
        }
        assert_eq!(perms.len(), 24);
        for p in perms {
            let relabeled = star.apply_vertex_permutation(&p).unwrap();
            assert_eq!(canonical_form(&relabeled).unwrap(), id);
        }
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let g = ArrayedGraph::new(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 2))]).unwrap();
        let id = canonical_form(&g).unwrap();
        let canon = ArrayedGraph::from_bitmask_hex(2, 2, &id).unwrap();
        assert_eq!(canonical_form(&canon).unwrap(), id);
    }

    #[test]
    fn k4_is_fixed_by_every_permutation() {
        let k4 = family_graph(Family::Complete, 2, 2).unwrap();
        assert_eq!(canonical_form(&k4).unwrap(), k4.bitmask_hex());
    }

    #[test]
    fn ten_classes_with_edges_on_four_vertices() {
        let mut classes = std::collections::BTreeSet::new();
        for g in enumerate_labeled_graphs(2, 2, false).unwrap() {
            classes.insert(canonical_form(&g).unwrap());
        }
        assert_eq!(classes.len(), 10);
    }

    #[test]
    fn canonical_cap_is_enforced() {
        let g = crate::families::counterexample_graph();
        assert!(matches!(
            canonical_form(&g),
            Err(EnumerateError::CanonicalTooLarge(9, _))
        ));
        assert!(canonical_form_with_cap(&g, 9).is_ok());
    }
}
