//! Per-graph records, batch sweeps, the 4-vertex concurrence table, and
//! JSON/CSV rendering.
//!
//! Output is deterministic: records carry fixed field order, JSON floats use
//! the shortest round-trip decimal, CSV floats a fixed 12-significant-digit
//! scientific form, and parallel sweeps merge results back in bitmask order.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::criteria::{self, CriteriaReport};
use crate::decompose::SeparableDecomposition;
use crate::enumerate::{canonical_form_with_cap, enumerate_labeled_graphs, EnumerateError};
use crate::graph::{ArrayedGraph, GraphError};
use crate::measures::{self, rational_string, EntropyBase, MeasureReport};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error(transparent)]
    Enumerate(#[from] EnumerateError),

    #[error(transparent)]
    Criteria(#[from] criteria::CriteriaError),

    #[error(transparent)]
    Measure(#[from] measures::MeasureError),

    #[error("table assertion failed: {0}")]
    AssertionFailure(String),
}

/// Options shared by single-graph analysis and sweeps.
#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub tol: f64,
    pub entropy_base: EntropyBase,
    /// Vertex cap for the brute-force class id; graphs above it get no
    /// `class_id`.
    pub canonical_cap: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            tol: crate::DEFAULT_TOL,
            entropy_base: EntropyBase::Bits,
            canonical_cap: crate::enumerate::CANONICAL_VERTEX_CAP,
        }
    }
}

/// One graph's flat record; field order is the serialization contract.
#[derive(Clone, Debug, Serialize)]
pub struct GraphRecord {
    pub id: String,
    pub p: usize,
    pub q: usize,
    pub edges: Vec<[usize; 4]>,
    pub degree_criterion: bool,
    pub ppt_min_eig: f64,
    pub realignment_trace_norm: f64,
    pub verdict: &'static str,
    pub concurrence: Option<f64>,
    pub concurrence_bound: String,
    pub ef: Option<f64>,
    pub ln: f64,
    pub en: f64,
    pub n1: usize,
    pub n2: usize,
    pub class_id: Option<String>,
}

/// Record plus the full structured results behind it.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub record: GraphRecord,
    pub criteria: CriteriaReport,
    pub measures: MeasureReport,
    pub decomposition: Option<SeparableDecomposition>,
}

/// Runs every criterion and measure on one graph.
pub fn analyze_graph(g: &ArrayedGraph, opts: &AnalyzeOptions) -> Result<Analysis, ReportError> {
    let assessment = criteria::verdict(g, opts.tol)?;
    let measures = measures::measure_report(g, opts.tol, opts.entropy_base)?;
    let class_id = if g.vertex_count() <= opts.canonical_cap {
        Some(canonical_form_with_cap(g, opts.canonical_cap)?)
    } else {
        None
    };
    let record = GraphRecord {
        id: g.bitmask_hex(),
        p: g.rows(),
        q: g.cols(),
        edges: g
            .edges()
            .map(|e| {
                let (u, v) = e.endpoints();
                [u.row, u.col, v.row, v.col]
            })
            .collect(),
        degree_criterion: assessment.report.degree_criterion,
        ppt_min_eig: assessment.report.ppt.min_eigenvalue,
        realignment_trace_norm: assessment.report.realignment.trace_norm,
        verdict: assessment.report.verdict.as_str(),
        concurrence: measures.concurrence,
        concurrence_bound: rational_string(&measures.concurrence_bound),
        ef: measures.entanglement_of_formation,
        ln: measures.logarithmic_negativity,
        en: measures.degree_discrepancy_norm,
        n1: measures.matched_edges,
        n2: measures.unmatched_edges,
        class_id,
    };
    Ok(Analysis {
        record,
        criteria: assessment.report,
        measures,
        decomposition: assessment.decomposition,
    })
}

/// Analyzes every non-empty labeled graph on the array in parallel,
/// returning records in bitmask order regardless of scheduling.
pub fn sweep_records(
    p: usize,
    q: usize,
    opts: &AnalyzeOptions,
    allow_large: bool,
) -> Result<Vec<GraphRecord>, ReportError> {
    let masks = enumerate_labeled_graphs(p, q, allow_large)?.mask_range();
    masks
        .into_par_iter()
        .map(|mask| {
            let g = ArrayedGraph::from_bitmask(p, q, mask)?;
            Ok(analyze_graph(&g, opts)?.record)
        })
        .collect()
}

/// One isomorphism class of 2×2 graphs in the concurrence table.
#[derive(Clone, Debug, Serialize)]
pub struct Table4Class {
    pub class_id: String,
    pub edge_count: usize,
    pub labelings: usize,
    pub entangled_labelings: usize,
    /// Wootters concurrence of the entangled labelings (asserted unique
    /// within the class); absent for always-separable classes.
    pub concurrence: Option<f64>,
}

/// The 4-vertex table: all 63 labeled 2×2 graphs grouped by isomorphism
/// class, with entanglement and concurrence per class.
#[derive(Clone, Debug, Serialize)]
pub struct Table4 {
    pub classes: Vec<Table4Class>,
    pub entangled_class_count: usize,
    /// Concurrences of the entangled-capable classes, descending.
    pub entangled_concurrences: Vec<f64>,
}

/// Builds the 4-vertex table and checks it: exactly seven classes admit
/// entangled labelings, their concurrences are {1, 1/2, 1/3, 1/3, 1/3,
/// 1/4, 1/5} as a multiset, and each equals 1/(edge count). Violations are
/// reported as [`ReportError::AssertionFailure`], never masked.
pub fn table4_report() -> Result<Table4, ReportError> {
    let tol = 1e-9;
    let mut by_class: std::collections::BTreeMap<String, Vec<(bool, f64, usize)>> =
        std::collections::BTreeMap::new();
    for g in enumerate_labeled_graphs(2, 2, false)? {
        let class = canonical_form_with_cap(&g, 4)?;
        let separable = criteria::degree_criterion(&g);
        let c = measures::wootters_concurrence(&g.density_matrix())?;
        by_class
            .entry(class)
            .or_default()
            .push((!separable, c, g.edge_count()));
    }

    let mut classes = Vec::new();
    let mut entangled_concurrences = Vec::new();
    for (class_id, labelings) in &by_class {
        let edge_count = labelings[0].2;
        if labelings.iter().any(|&(_, _, m)| m != edge_count) {
            return Err(ReportError::AssertionFailure(format!(
                "class {class_id} mixes edge counts"
            )));
        }
        let entangled: Vec<f64> = labelings
            .iter()
            .filter(|&&(e, _, _)| e)
            .map(|&(_, c, _)| c)
            .collect();
        let concurrence = if entangled.is_empty() {
            None
        } else {
            let first = entangled[0];
            if entangled.iter().any(|c| (c - first).abs() > tol) {
                return Err(ReportError::AssertionFailure(format!(
                    "class {class_id} has labelings with different concurrences"
                )));
            }
            entangled_concurrences.push(first);
            Some(first)
        };
        // Entangled labelings must have nonzero concurrence and separable
        // ones zero (PPT is conclusive in dimension four).
        for &(e, c, _) in labelings {
            if e && c <= tol {
                return Err(ReportError::AssertionFailure(format!(
                    "entangled labeling in class {class_id} has zero concurrence"
                )));
            }
            if !e && c > tol {
                return Err(ReportError::AssertionFailure(format!(
                    "separable labeling in class {class_id} has concurrence {c}"
                )));
            }
        }
        if let Some(c) = concurrence {
            let expected = 1.0 / edge_count as f64;
            if (c - expected).abs() > tol {
                return Err(ReportError::AssertionFailure(format!(
                    "class {class_id} with {edge_count} edges has concurrence {c}, not 1/{edge_count}"
                )));
            }
        }
        classes.push(Table4Class {
            class_id: class_id.clone(),
            edge_count,
            labelings: labelings.len(),
            entangled_labelings: entangled.len(),
            concurrence,
        });
    }

    entangled_concurrences.sort_by(|a, b| b.total_cmp(a));
    if entangled_concurrences.len() != 7 {
        return Err(ReportError::AssertionFailure(format!(
            "{} classes admit entangled labelings, expected 7",
            entangled_concurrences.len()
        )));
    }
    let expected = [1.0, 0.5, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.25, 0.2];
    for (got, want) in entangled_concurrences.iter().zip(expected) {
        if (got - want).abs() > tol {
            return Err(ReportError::AssertionFailure(format!(
                "concurrence multiset {entangled_concurrences:?} does not match {expected:?}"
            )));
        }
    }

    classes.sort_by(|a, b| (a.edge_count, &a.class_id).cmp(&(b.edge_count, &b.class_id)));
    Ok(Table4 {
        entangled_class_count: 7,
        classes,
        entangled_concurrences,
    })
}

/// Serialized decomposition: terms as weight (decimal string), complex
/// entry pairs for both factors, and provenance.
#[derive(Serialize)]
struct DecompositionJson {
    p: usize,
    q: usize,
    residual: f64,
    terms: Vec<TermJson>,
}

#[derive(Serialize)]
struct TermJson {
    weight: String,
    a: Vec<[f64; 2]>,
    b: Vec<[f64; 2]>,
    provenance: crate::decompose::TermProvenance,
}

pub fn decomposition_json(dec: &SeparableDecomposition) -> String {
    let terms = dec
        .terms
        .iter()
        .map(|t| TermJson {
            weight: format!("{}", t.weight.to_f64().unwrap_or(f64::NAN)),
            a: t.vector_a
                .materialize()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
            b: t.vector_b
                .materialize()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
            provenance: t.provenance.clone(),
        })
        .collect();
    serde_json::to_string_pretty(&DecompositionJson {
        p: dec.p,
        q: dec.q,
        residual: dec.reconstruction_residual,
        terms,
    })
    .expect("decomposition serializes")
}

pub fn record_json(record: &GraphRecord) -> String {
    serde_json::to_string(record).expect("record serializes")
}

pub const CSV_HEADER: &str = "id,p,q,edges,degree_criterion,ppt_min_eig,realignment_trace_norm,verdict,concurrence,concurrence_bound,ef,ln,en,n1,n2,class_id";

/// Fixed 12-significant-digit scientific form for CSV cells.
pub fn csv_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn record_csv_row(r: &GraphRecord) -> String {
    let edges = r
        .edges
        .iter()
        .map(|e| format!("{} {} {} {}", e[0], e[1], e[2], e[3]))
        .collect::<Vec<_>>()
        .join(";");
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.id,
        r.p,
        r.q,
        edges,
        r.degree_criterion,
        csv_float(r.ppt_min_eig),
        csv_float(r.realignment_trace_norm),
        r.verdict,
        r.concurrence.map(csv_float).unwrap_or_default(),
        r.concurrence_bound,
        r.ef.map(csv_float).unwrap_or_default(),
        csv_float(r.ln),
        csv_float(r.en),
        r.n1,
        r.n2,
        r.class_id.clone().unwrap_or_default(),
    )
}

pub fn records_csv(records: &[GraphRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&record_csv_row(r));
        out.push('\n');
    }
    out
}

pub fn records_json_lines(records: &[GraphRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&record_json(r));
        out.push('\n');
    }
    out
}
