//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Tolerances are pinned in code.
//!
//! 1. Degree/PPT equivalence, exhaustive on 2×2 and 2×3.
//! 2. Constructive completeness of the 2×q decomposition on both sweeps.
//! 3. The 4-vertex concurrence table over isomorphism classes.
//! 4. The n₂/(n₁+n₂) concurrence bound, tight on entangled 2×2 states.
//! 5. Certification of the PPT-entangled 3×3 counterexample.
//! 6. Closed-form spot values for the 2×2 star.
//! 7. Structural property suites (involutions, norms, determinism,
//!    factor-swap invariance).

// Index loops below spell out matrix definitions on purpose.
#![allow(clippy::needless_range_loop)]

use lapsep::criteria::{self, Verdict};
use lapsep::decompose::{self, cross_adjacency, cycle_peel, decompose_2xq, verify_decomposition};
use lapsep::enumerate::enumerate_labeled_graphs;
use lapsep::families::counterexample_graph;
use lapsep::graph::ArrayedGraph;
use lapsep::linalg::exact_psd_check;
use lapsep::measures::{concurrence_upper_bound, wootters_concurrence};
use lapsep::report::{analyze_graph, decomposition_json, AnalyzeOptions};

use num_traits::{One, ToPrimitive, Zero};

const TOL: f64 = 1e-9;

fn sweep(p: usize, q: usize) -> impl Iterator<Item = ArrayedGraph> {
    enumerate_labeled_graphs(p, q, false).expect("within cap")
}

#[test]
fn criterion_1_degree_ppt_equivalence_exhaustive() {
    let mut checked = 0u64;
    for (p, q, expected) in [(2, 2, 63u64), (2, 3, 32767u64)] {
        let mut count = 0u64;
        for g in sweep(p, q) {
            let outcome = criteria::degree_ppt_equivalence(&g, TOL).unwrap();
            assert!(
                outcome.consistent,
                "degree={} ppt={} for {p}x{q} graph {}",
                outcome.degree,
                outcome.ppt,
                g.bitmask_hex()
            );
            count += 1;
        }
        assert_eq!(count, expected);
        checked += count;
    }
    println!("acceptance 1: PASS — degree = PPT on all {checked} graphs of the 2x2 and 2x3 sweeps");
}

#[test]
fn criterion_2_decomposition_completeness() {
    let mut decomposed = 0u64;
    let mut failures = 0u64;
    for (p, q) in [(2, 2), (2, 3)] {
        for g in sweep(p, q) {
            if !criteria::degree_criterion(&g) {
                continue;
            }
            let dec = match decompose_2xq(&g, TOL) {
                Ok(dec) => dec,
                Err(e) => {
                    failures += 1;
                    eprintln!("decomposition failed on {}: {e}", g.bitmask_hex());
                    continue;
                }
            };
            let check = verify_decomposition(&g.density_matrix(), &dec, TOL);
            assert!(
                dec.weight_sum().is_one(),
                "weights sum to {} on {}",
                dec.weight_sum(),
                g.bitmask_hex()
            );
            assert!(check.all_weights_nonnegative);
            assert!(
                check.residual <= 1e-9,
                "residual {} on {}",
                check.residual,
                g.bitmask_hex()
            );
            assert!(
                check.range_conditions_hold,
                "range residual {} on {}",
                check.max_range_residual,
                g.bitmask_hex()
            );
            // Soundness: a certified-separable state can never be flagged
            // by the realignment criterion.
            let realignment =
                criteria::realignment_criterion(&g.density_matrix(), p, q, TOL).unwrap();
            assert!(
                realignment.trace_norm <= 1.0 + TOL,
                "realignment {} on separable {}",
                realignment.trace_norm,
                g.bitmask_hex()
            );
            decomposed += 1;
        }
    }
    assert_eq!(failures, 0);
    println!("acceptance 2: PASS — {decomposed} degree-criterion graphs decomposed, 0 failures");
}

#[test]
fn criterion_3_four_vertex_table() {
    let table = lapsep::report::table4_report().unwrap();
    assert_eq!(table.entangled_class_count, 7);
    let expected = [1.0, 0.5, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.25, 0.2];
    assert_eq!(table.entangled_concurrences.len(), 7);
    for (got, want) in table.entangled_concurrences.iter().zip(expected) {
        assert!(
            (got - want).abs() <= TOL,
            "multiset mismatch: {got} vs {want}"
        );
    }
    for class in &table.classes {
        if let Some(c) = class.concurrence {
            assert!((c - 1.0 / class.edge_count as f64).abs() <= TOL);
        }
    }

    // Every entangled labeled 2×2 graph has exactly one unmatched edge and
    // concurrence n2/(n1+n2).
    for g in sweep(2, 2) {
        if criteria::degree_criterion(&g) {
            continue;
        }
        let classification = g.classify_edges();
        assert_eq!(
            classification.unmatched_count,
            1,
            "entangled graph {} has n2 = {}",
            g.bitmask_hex(),
            classification.unmatched_count
        );
        let c = wootters_concurrence(&g.density_matrix()).unwrap();
        let bound = concurrence_upper_bound(&g).to_f64().unwrap();
        assert!((c - bound).abs() <= TOL);
    }
    println!("acceptance 3: PASS — seven entangled classes with concurrences 1, 1/2, 1/3, 1/3, 1/3, 1/4, 1/5; n2 = 1 throughout");
}

#[test]
fn criterion_4_concurrence_bound() {
    for g in sweep(2, 2) {
        let c = wootters_concurrence(&g.density_matrix()).unwrap();
        let bound = concurrence_upper_bound(&g).to_f64().unwrap();
        assert!(
            c <= bound + TOL,
            "bound violated on {}: C = {c}, bound = {bound}",
            g.bitmask_hex()
        );
        if !criteria::degree_criterion(&g) {
            assert!(
                (c - bound).abs() <= TOL,
                "bound not achieved on entangled {}: C = {c}, bound = {bound}",
                g.bitmask_hex()
            );
        }
    }
    println!("acceptance 4: PASS — C ≤ n2/(n1+n2) on all 63 graphs, with equality on every entangled one");
}

#[test]
fn criterion_5_counterexample_certification() {
    let g = counterexample_graph();
    assert!(criteria::degree_criterion(&g), "degree criterion must hold");

    let rho = g.density_matrix();
    let pt = rho.partial_transpose(3, 3).unwrap();
    assert!(
        exact_psd_check(&pt).is_psd(),
        "partial transpose must be PSD exactly"
    );

    // Independent oracle: build the 9×9 realigned matrix straight from the
    // definition (entry ((i,i'),(j,j')) = ρ((i,j),(i',j'))) on a hand-written
    // copy of ρ, and get its singular values from the eigenvalues of RRᵀ.
    let mut rho_f = [[0.0f64; 9]; 9];
    for v in 0..9 {
        if v != 4 {
            rho_f[v][v] = 1.0 / 8.0;
        }
    }
    for (a, b) in [(0, 5), (1, 6), (2, 7), (3, 8)] {
        rho_f[a][b] = -1.0 / 8.0;
        rho_f[b][a] = -1.0 / 8.0;
    }
    let mut realigned = [[0.0f64; 9]; 9];
    for i in 0..3 {
        for i2 in 0..3 {
            for j in 0..3 {
                for j2 in 0..3 {
                    realigned[i * 3 + i2][j * 3 + j2] = rho_f[i * 3 + j][i2 * 3 + j2];
                }
            }
        }
    }
    let gram = lapsep::linalg::ComplexDenseMatrix::from_fn(9, 9, |i, j| {
        let mut acc = 0.0;
        for k in 0..9 {
            acc += realigned[i][k] * realigned[j][k];
        }
        num_complex::Complex64::new(acc, 0.0)
    });
    let oracle_trace_norm: f64 = lapsep::linalg::symmetric_eigenvalues(&gram, TOL)
        .unwrap()
        .eigenvalues
        .iter()
        .map(|&lambda| lambda.max(0.0).sqrt())
        .sum();

    let closed_form = (4.0 * 2.0_f64.sqrt() + 2.0 * 3.0_f64.sqrt()) / 8.0;
    assert!(
        (oracle_trace_norm - closed_form).abs() <= 1e-6,
        "oracle {oracle_trace_norm} vs closed form {closed_form}"
    );

    let check = criteria::realignment_criterion(&rho, 3, 3, TOL).unwrap();
    assert!((check.trace_norm - closed_form).abs() <= 1e-6);
    assert!((check.trace_norm - oracle_trace_norm).abs() <= 1e-9);
    assert!(check.flags_entangled);

    let assessment = criteria::verdict(&g, TOL).unwrap();
    assert_eq!(assessment.report.verdict, Verdict::EntangledPptRealignment);
    println!(
        "acceptance 5: PASS — counterexample is PPT (exact) with realignment trace norm {:.6} > 1",
        check.trace_norm
    );
}

#[test]
fn criterion_6_star_spot_values() {
    let star = ArrayedGraph::new(
        2,
        2,
        &[((1, 1), (1, 2)), ((1, 1), (2, 1)), ((1, 1), (2, 2))],
    )
    .unwrap();
    let rho = star.density_matrix();

    let min_eig = criteria::ppt_criterion(&rho, 2, 2, TOL)
        .unwrap()
        .min_eigenvalue;
    let expected_min = (3.0 - 17.0_f64.sqrt()) / 12.0;
    assert!((min_eig - expected_min).abs() <= TOL);

    let ln = lapsep::measures::logarithmic_negativity(&rho, 2, 2, TOL).unwrap();
    let expected_ln = (1.0 + (17.0_f64.sqrt() - 3.0) / 6.0).log2();
    assert!((ln - expected_ln).abs() <= TOL);

    let en = lapsep::measures::degree_discrepancy_norm(&star);
    assert_eq!(en, 1.0 / 3.0, "EN must be exactly 1/3");

    let c = wootters_concurrence(&rho).unwrap();
    assert!((c - 1.0 / 3.0).abs() <= TOL);
    println!(
        "acceptance 6: PASS — star spot values: min eig {min_eig:.9}, LN {ln:.9}, EN 1/3, C {c:.9}"
    );
}

/// Deterministic xorshift for the randomized property checks.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn chance(&mut self, denom: u64) -> bool {
        self.next().is_multiple_of(denom)
    }
}

fn random_graph(rng: &mut Rng, p: usize, q: usize) -> Option<ArrayedGraph> {
    let n = p * q;
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if rng.chance(3) {
                edges.push((
                    ((i - 1) / q + 1, (i - 1) % q + 1),
                    ((j - 1) / q + 1, (j - 1) % q + 1),
                ));
            }
        }
    }
    if edges.is_empty() {
        return None;
    }
    Some(ArrayedGraph::new(p, q, &edges).unwrap())
}

#[test]
fn criterion_7_property_suites() {
    let mut rng = Rng(0x9e3779b97f4a7c15);

    // Partial-transpose involutivity, graph- and matrix-level, plus
    // laplacian structure, on random graphs up to 4×4.
    let mut graphs = 0;
    while graphs < 200 {
        let p = 1 + (rng.next() % 4) as usize;
        let q = 1 + (rng.next() % 4) as usize;
        let Some(g) = random_graph(&mut rng, p, q) else {
            continue;
        };
        graphs += 1;
        assert_eq!(g.partial_transpose().partial_transpose(), g);
        assert_eq!(g.partial_transpose().edge_count(), g.edge_count());

        let l = g.laplacian();
        for i in 0..g.vertex_count() {
            assert!(l.row_sum(i).is_zero());
        }
        assert!(exact_psd_check(&l).is_psd());

        let rho = g.density_matrix();
        let pt = rho.partial_transpose(p, q).unwrap();
        assert_eq!(pt.partial_transpose(p, q).unwrap(), rho);
        assert_eq!(pt.trace(), rho.trace());

        // Realignment preserves the Frobenius norm.
        let dense = rho.to_complex();
        let realigned = dense.realign(p, q).unwrap();
        assert!((realigned.frobenius_norm() - dense.frobenius_norm()).abs() <= 1e-12);
    }

    // Line-sum symmetry of the cross adjacency is exactly the degree
    // criterion on two-row arrays, and cycle peeling reconstructs the
    // cross adjacency exactly on every degree-criterion graph of the
    // 2×3 sweep.
    let mut peeled = 0u64;
    for g in sweep(2, 3) {
        let degree = criteria::degree_criterion(&g);
        assert_eq!(
            cross_adjacency(&g).unwrap().is_line_sum_symmetric(),
            degree,
            "line-sum/degree mismatch on {}",
            g.bitmask_hex()
        );
        if !degree {
            continue;
        }
        let cross = cross_adjacency(&g).unwrap();
        let cycles = cycle_peel(&cross).unwrap();
        let mut sum = vec![vec![0u8; cross.q]; cross.q];
        for c in &cycles {
            let mut sorted = c.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), c.len(), "repeated column in cycle {c:?}");
            for t in 0..c.len() {
                let from = c[t] - 1;
                let to = c[(t + 1) % c.len()] - 1;
                assert_eq!(sum[from][to], 0, "cycles overlap on {}", g.bitmask_hex());
                sum[from][to] = 1;
            }
        }
        assert_eq!(
            sum,
            cross.matrix,
            "reconstruction failed on {}",
            g.bitmask_hex()
        );
        peeled += 1;
    }
    assert!(peeled > 0);

    // Decomposition reruns are byte-identical.
    let g = ArrayedGraph::new(
        2,
        3,
        &[
            ((1, 1), (2, 2)),
            ((1, 2), (2, 3)),
            ((1, 3), (2, 1)),
            ((1, 1), (1, 2)),
            ((1, 3), (2, 3)),
        ],
    )
    .unwrap();
    let first = decomposition_json(&decompose::decompose_graph(&g, TOL).unwrap());
    let second = decomposition_json(&decompose::decompose_graph(&g, TOL).unwrap());
    assert_eq!(first, second);

    // Analysis reruns are byte-identical too.
    let opts = AnalyzeOptions::default();
    let a = serde_json::to_string(&analyze_graph(&g, &opts).unwrap().record).unwrap();
    let b = serde_json::to_string(&analyze_graph(&g, &opts).unwrap().record).unwrap();
    assert_eq!(a, b);

    // Factor-swap invariance across the full 2×3 sweep: verdicts and
    // measures agree between G and its transpose onto the 3×2 array.
    for g in sweep(2, 3) {
        let swapped = g.swap_factors();
        let direct = criteria::verdict(&g, TOL).unwrap().report;
        let via_swap = criteria::verdict(&swapped, TOL).unwrap().report;
        // A 2-dimensional factor leaves no undecided cases: the degree
        // criterion alone separates certified from NPT.
        if direct.degree_criterion {
            assert_eq!(direct.verdict, Verdict::SeparableCertified);
        } else {
            assert_eq!(direct.verdict, Verdict::EntangledNpt);
        }
        assert_eq!(
            direct.verdict,
            via_swap.verdict,
            "verdict changed under factor swap on {}",
            g.bitmask_hex()
        );
        assert_eq!(direct.degree_criterion, via_swap.degree_criterion);
        assert!((direct.realignment.trace_norm - via_swap.realignment.trace_norm).abs() <= 1e-9);
        assert!((direct.ppt.min_eigenvalue - via_swap.ppt.min_eigenvalue).abs() <= 1e-9);

        let m_direct =
            lapsep::measures::measure_report(&g, TOL, lapsep::measures::EntropyBase::Bits).unwrap();
        let m_swap =
            lapsep::measures::measure_report(&swapped, TOL, lapsep::measures::EntropyBase::Bits)
                .unwrap();
        assert!((m_direct.logarithmic_negativity - m_swap.logarithmic_negativity).abs() <= 1e-9);
        assert_eq!(m_direct.concurrence_bound, m_swap.concurrence_bound);
        assert_eq!(
            m_direct.degree_discrepancy_norm,
            m_swap.degree_discrepancy_norm
        );
    }

    println!("acceptance 7: PASS — involutions, norms, exact peeling, determinism and factor-swap invariance all hold");
}

/// The exact PSD decision agrees with the floating spectrum's sign pattern
/// across both sweeps (supporting check for criteria 1 and 5).
#[test]
fn exact_psd_agrees_with_floating_spectra() {
    for (p, q) in [(2, 2), (2, 3)] {
        for g in sweep(p, q) {
            let pt = g.density_matrix().partial_transpose(p, q).unwrap();
            let exact = exact_psd_check(&pt).is_psd();
            let min_eig = pt.spectrum().min();
            let floating = min_eig >= -1e-9 * pt.frobenius_norm();
            assert_eq!(
                exact,
                floating,
                "PSD disagreement on {} ({p}x{q}): min eig {min_eig}",
                g.bitmask_hex()
            );
        }
    }
}

/// The witness returned for non-PSD partial transposes is exact: its
/// quadratic form really is negative, in rational arithmetic.
#[test]
fn psd_witnesses_are_exact() {
    let mut witnessed = 0;
    for g in sweep(2, 2) {
        let pt = g.density_matrix().partial_transpose(2, 2).unwrap();
        if let lapsep::linalg::PsdCertificate::NotPsd { witness, value } = exact_psd_check(&pt) {
            assert_eq!(pt.quadratic_form(&witness), value);
            assert!(value < num_rational::BigRational::zero());
            witnessed += 1;
        }
    }
    assert!(witnessed > 0);
}
