//! Entanglement measures: pure-state concurrence, the Wootters concurrence
//! and entanglement of formation in dimension four, the matched/unmatched
//! concurrence bound, logarithmic negativity, and the degree-discrepancy
//! norm.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::graph::ArrayedGraph;
use crate::linalg::{ComplexDenseMatrix, LinalgError, RationalSymmetricMatrix};

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix has dimension {0}, the Wootters formula needs 4")]
    DimensionMismatch(usize),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
}

/// Logarithm base for the binary entropy in the entanglement of formation.
///
/// Base two matches the usual entanglement-of-formation normalization
/// (maximal value one); the natural log variant is kept selectable because
/// both appear in the literature. Reports record which base was used.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyBase {
    #[default]
    Bits,
    Nats,
}

/// The spin-flip matrix σ_y ⊗ σ_y: real, anti-diagonal, signs
/// (−1, +1, +1, −1) reading from the (1,4) corner; squares to the identity.
pub const SPIN_FLIP: [[f64; 4]; 4] = [
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
];

/// Binary entropy H(x) = −x log x − (1−x) log(1−x) in the chosen base,
/// extended by continuity with H(0) = H(1) = 0.
pub fn binary_entropy(x: f64, base: EntropyBase) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let h = -x * x.ln() - (1.0 - x) * (1.0 - x).ln();
    match base {
        EntropyBase::Bits => h / std::f64::consts::LN_2,
        EntropyBase::Nats => h,
    }
}

/// Concurrence of a pure state: C(ψ) = √(2(1 − tr ρ_A²)) with
/// ρ_A = tr_B P[ψ]. Zero exactly on product vectors; at most
/// √(2(1 − 1/min(p,q))).
pub fn pure_concurrence(psi: &[Complex64], p: usize, q: usize) -> Result<f64, MeasureError> {
    if psi.len() != p * q {
        return Err(LinalgError::VectorLength {
            len: psi.len(),
            dim: p * q,
        }
        .into());
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(MeasureError::NotNormalized(norm));
    }
    let rho_a = ComplexDenseMatrix::outer(psi).partial_trace_b(p, q)?;
    // tr(ρ_A²) = ‖ρ_A‖_F² for hermitian ρ_A.
    let purity = rho_a.frobenius_norm().powi(2);
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// Wootters concurrence of a 4×4 density matrix:
/// C = max{0, λ₁ − λ₂ − λ₃ − λ₄} where the λ are the square roots of the
/// eigenvalues of ρρ̃ in decreasing order and ρ̃ = (σ_y⊗σ_y) ρᵀ (σ_y⊗σ_y).
///
/// For real symmetric ρ the eigenvalues of ρρ̃ = (ρS)² are the squares of
/// the eigenvalues of the symmetric matrix ρ^{1/2} S ρ^{1/2} (same nonzero
/// spectrum as ρS, and both are 4×4), so the whole computation runs on two
/// symmetric eigensolves; eigenvalues of ρ are clamped at zero before the
/// square root to absorb floating noise.
pub fn wootters_concurrence(rho: &RationalSymmetricMatrix) -> Result<f64, MeasureError> {
    let lambdas = wootters_lambdas(rho)?;
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

fn wootters_lambdas(rho: &RationalSymmetricMatrix) -> Result<[f64; 4], MeasureError> {
    if rho.dim() != 4 {
        return Err(MeasureError::DimensionMismatch(rho.dim()));
    }
    let eig = rho.eigendecomposition();
    let psd_tol = crate::DEFAULT_TOL * rho.frobenius_norm().max(1.0);
    if eig.values[3] < -psd_tol {
        return Err(MeasureError::NotPsd(eig.values[3]));
    }
    // ρ^{1/2} = V diag(√λ) Vᵀ. Eigenvalues at rounding-noise level must be
    // flushed to zero first: √(1e−17) ≈ 3e−9 would otherwise contaminate
    // the square root along kernel directions.
    let n = 4;
    let noise_floor = 1e-12 * eig.values[0].abs().max(1.0);
    let mut sqrt_rho = [[0.0f64; 4]; 4];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                let lam = eig.values[k];
                if lam <= noise_floor {
                    continue;
                }
                acc += eig.vectors[i * n + k] * lam.sqrt() * eig.vectors[j * n + k];
            }
            sqrt_rho[i][j] = acc;
        }
    }
    // T = ρ^{1/2} S ρ^{1/2}, symmetric.
    let mut t = ComplexDenseMatrix::zeros(4, 4);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                for l in 0..n {
                    acc += sqrt_rho[i][k] * SPIN_FLIP[k][l] * sqrt_rho[l][j];
                }
            }
            t.set(i, j, Complex64::new(acc, 0.0));
        }
    }
    let spec = crate::linalg::symmetric_eigenvalues(&t, crate::DEFAULT_TOL)?;
    let mut lambdas: Vec<f64> = spec.eigenvalues.iter().map(|v| v.abs()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok([lambdas[0], lambdas[1], lambdas[2], lambdas[3]])
}

/// The exact rational bound C(ρ_G) ≤ n₂/(n₁+n₂): unmatched edges over all
/// edges. Zero iff every edge is matched; one iff every edge is unmatched.
pub fn concurrence_upper_bound(g: &ArrayedGraph) -> BigRational {
    let c = g.classify_edges();
    BigRational::new(
        BigInt::from(c.unmatched_count),
        BigInt::from(c.matched_count + c.unmatched_count),
    )
}

/// Entanglement of formation in dimension four:
/// E_f = H(1/2 + 1/2 √(1 − C²)), monotone in the concurrence.
pub fn entanglement_of_formation_4dim(
    rho: &RationalSymmetricMatrix,
    base: EntropyBase,
) -> Result<f64, MeasureError> {
    let c = wootters_concurrence(rho)?;
    Ok(ef_from_concurrence(c, base))
}

pub fn ef_from_concurrence(c: f64, base: EntropyBase) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 + 0.5 * (1.0 - c * c).max(0.0).sqrt(), base)
}

/// Logarithmic negativity LN = log₂(1 + 2N) with N the total magnitude of
/// the negative eigenvalues of ρ^Γ; zero exactly when PPT holds within tol.
pub fn logarithmic_negativity(
    rho: &RationalSymmetricMatrix,
    p: usize,
    q: usize,
    tol: f64,
) -> Result<f64, MeasureError> {
    let pt = rho.partial_transpose(p, q)?;
    let negativity: f64 = pt
        .spectrum()
        .eigenvalues
        .iter()
        .filter(|&&v| v < -tol)
        .map(|v| -v)
        .sum();
    Ok((1.0 + 2.0 * negativity).log2())
}

/// The degree-discrepancy norm ‖Δ(G) − Δ(G^Γ)‖_F / d_G. The Frobenius norm
/// of the integer diagonal difference is taken exactly (integer square root
/// when the sum of squares is a perfect square), then normalized by the
/// degree-sum so graphs of different sizes compare on the density-matrix
/// scale. Zero exactly when the degree criterion holds.
pub fn degree_discrepancy_norm(g: &ArrayedGraph) -> f64 {
    let deg = g.degrees();
    let deg_pt = g.partial_transpose().degrees();
    let sum_sq: u64 = deg
        .iter()
        .zip(&deg_pt)
        .map(|(&a, &b)| {
            let d = a.abs_diff(b) as u64;
            d * d
        })
        .sum();
    let d = g.degree_sum() as f64;
    let root = (sum_sq as f64).sqrt();
    let rounded = root.round();
    if (rounded as u64) * (rounded as u64) == sum_sq {
        rounded / d
    } else {
        root / d
    }
}

/// Maximal entanglement means concurrence one. On a 2×2 array the Wootters
/// formula decides; a trivial factor forces concurrence zero; elsewhere a
/// matched edge rules it out through the concurrence bound, and an
/// all-unmatched graph stays undecided (`None`) because no general
/// concurrence formula exists.
pub fn is_maximally_entangled(g: &ArrayedGraph, tol: f64) -> Option<bool> {
    if let Some(c) = exact_concurrence(g).transpose().ok()? {
        return Some(c >= 1.0 - tol);
    }
    let classification = g.classify_edges();
    if classification.matched_count > 0 {
        Some(false)
    } else {
        None
    }
}

/// The concurrence across the declared p/q cut, when a formula exists:
/// the Wootters value on 2×2 arrays, and exactly zero when one factor is
/// trivial (every state on C¹⊗Cⁿ is separable). `None` otherwise.
fn exact_concurrence(g: &ArrayedGraph) -> Option<Result<f64, MeasureError>> {
    if (g.rows(), g.cols()) == (2, 2) {
        return Some(wootters_concurrence(&g.density_matrix()));
    }
    if g.rows() == 1 || g.cols() == 1 {
        return Some(Ok(0.0));
    }
    None
}

/// Measure values for one graph state.
#[derive(Clone, Debug)]
pub struct MeasureReport {
    /// Wootters concurrence; only defined in dimension four.
    pub concurrence: Option<f64>,
    /// Exact rational n₂/(n₁+n₂).
    pub concurrence_bound: BigRational,
    pub entanglement_of_formation: Option<f64>,
    pub entropy_base: EntropyBase,
    pub logarithmic_negativity: f64,
    pub degree_discrepancy_norm: f64,
    pub maximally_entangled: Option<bool>,
    pub matched_edges: usize,
    pub unmatched_edges: usize,
}

pub fn measure_report(
    g: &ArrayedGraph,
    tol: f64,
    base: EntropyBase,
) -> Result<MeasureReport, MeasureError> {
    let classification = g.classify_edges();
    let rho = g.density_matrix();
    let (concurrence, entanglement_of_formation) = match exact_concurrence(g).transpose()? {
        Some(c) => (Some(c), Some(ef_from_concurrence(c, base))),
        None => (None, None),
    };
    Ok(MeasureReport {
        concurrence,
        concurrence_bound: concurrence_upper_bound(g),
        entanglement_of_formation,
        entropy_base: base,
        logarithmic_negativity: logarithmic_negativity(&rho, g.rows(), g.cols(), tol)?,
        degree_discrepancy_norm: degree_discrepancy_norm(g),
        maximally_entangled: is_maximally_entangled(g, tol),
        matched_edges: classification.matched_count,
        unmatched_edges: classification.unmatched_count,
    })
}

/// Formats an exact rational as "num/den" (or "num" for integers).
pub fn rational_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn star() -> ArrayedGraph {
        ArrayedGraph::new(
            2,
            2,
            &[((1, 1), (1, 2)), ((1, 1), (2, 1)), ((1, 1), (2, 2))],
        )
        .unwrap()
    }

    fn bell_state() -> Vec<Complex64> {
        let s = 1.0 / 2.0_f64.sqrt();
        vec![c(s), c(0.0), c(0.0), c(-s)]
    }

    #[test]
    fn pure_concurrence_of_product_vector_is_zero() {
        let s = 1.0 / 2.0_f64.sqrt();
        // (|1⟩ - |2⟩)/√2 on the B factor: a row-local edge state. Near zero
        // the formula amplifies purity noise by a square root, so the
        // achievable accuracy is ~√ε.
        let psi = vec![c(s), c(-s), c(0.0), c(0.0)];
        assert!(pure_concurrence(&psi, 2, 2).unwrap() < 1e-7);
    }

    #[test]
    fn pure_concurrence_of_bell_state_is_one() {
        let value = pure_concurrence(&bell_state(), 2, 2).unwrap();
        assert!((value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_concurrence_rejects_unnormalized() {
        let psi = vec![c(1.0), c(1.0), c(0.0), c(0.0)];
        assert!(matches!(
            pure_concurrence(&psi, 2, 2),
            Err(MeasureError::NotNormalized(_))
        ));
    }

    #[test]
    fn wootters_of_single_entangled_edge_is_one() {
        let g = ArrayedGraph::new(2, 2, &[((1, 1), (2, 2))]).unwrap();
        let value = wootters_concurrence(&g.density_matrix()).unwrap();
        assert!((value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn wootters_of_star_is_one_third() {
        let value = wootters_concurrence(&star().density_matrix()).unwrap();
        assert!((value - 1.0 / 3.0).abs() < 1e-9, "got {value}");
    }

    #[test]
    fn wootters_of_separable_graph_is_zero() {
        let g = ArrayedGraph::new(2, 2, &[((1, 1), (1, 2)), ((2, 1), (2, 2))]).unwrap();
        let value = wootters_concurrence(&g.density_matrix()).unwrap();
        assert!(value < 1e-9);
    }

    #[test]
    fn wootters_rejects_wrong_dimension() {
        let g = ArrayedGraph::new(2, 3, &[((1, 1), (2, 2))]).unwrap();
        assert!(matches!(
            wootters_concurrence(&g.density_matrix()),
            Err(MeasureError::DimensionMismatch(6))
        ));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(concurrence_upper_bound(&star()), ratio(1, 3));
        let crisscross = ArrayedGraph::new(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]).unwrap();
        assert_eq!(concurrence_upper_bound(&crisscross), ratio(0, 1));
        let edge = ArrayedGraph::new(2, 2, &[((1, 1), (2, 2))]).unwrap();
        assert_eq!(concurrence_upper_bound(&edge), ratio(1, 1));
    }

    #[test]
    fn entropy_endpoints() {
        assert_eq!(binary_entropy(0.0, EntropyBase::Bits), 0.0);
        assert_eq!(binary_entropy(1.0, EntropyBase::Bits), 0.0);
        assert!((binary_entropy(0.5, EntropyBase::Bits) - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.5, EntropyBase::Nats) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn ef_of_concurrence_extremes() {
        assert_eq!(ef_from_concurrence(0.0, EntropyBase::Bits), 0.0);
        assert!((ef_from_concurrence(1.0, EntropyBase::Bits) - 1.0).abs() < 1e-15);
        assert!(
            (ef_from_concurrence(1.0, EntropyBase::Nats) - std::f64::consts::LN_2).abs() < 1e-15
        );
    }

    #[test]
    fn ef_at_one_third_matches_direct_evaluation() {
        // Independent scalar route: H₂ evaluated straight from the formula.
        let x = 0.5 + 8.0_f64.sqrt() / 6.0;
        let expected = -(x * x.log2() + (1.0 - x) * (1.0 - x).log2());
        let ef =
            entanglement_of_formation_4dim(&star().density_matrix(), EntropyBase::Bits).unwrap();
        assert!((ef - expected).abs() < 1e-9, "ef {ef} vs direct {expected}");
        assert!((ef - 0.187298598568772).abs() < 1e-12);
    }

    #[test]
    fn ef_is_monotone_in_concurrence() {
        let mut last = -1.0;
        for k in 0..=100 {
            let c = k as f64 / 100.0;
            let ef = ef_from_concurrence(c, EntropyBase::Bits);
            assert!(ef >= last - 1e-15, "not monotone at C = {c}");
            last = ef;
        }
    }

    #[test]
    fn log_negativity_closed_forms() {
        // Star: one negative eigenvalue (3−√17)/12.
        let ln_star = logarithmic_negativity(&star().density_matrix(), 2, 2, 1e-9).unwrap();
        let expected = (1.0 + (17.0_f64.sqrt() - 3.0) / 6.0).log2();
        assert!((ln_star - expected).abs() < 1e-12);

        // Single entangled edge: ρ^Γ eigenvalues {1/2, 1/2, 1/2, −1/2}.
        let edge = ArrayedGraph::new(2, 2, &[((1, 1), (2, 2))]).unwrap();
        let ln_edge = logarithmic_negativity(&edge.density_matrix(), 2, 2, 1e-9).unwrap();
        assert!((ln_edge - 1.0).abs() < 1e-12);

        // Degree-criterion graphs are PPT, hence LN = 0.
        let crisscross = ArrayedGraph::new(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]).unwrap();
        let ln_cc = logarithmic_negativity(&crisscross.density_matrix(), 2, 2, 1e-9).unwrap();
        assert_eq!(ln_cc, 0.0);
    }

    #[test]
    fn degree_discrepancy_of_star_is_one_third() {
        // Δ(G) − Δ(G^Γ) = diag(1,−1,−1,1), Frobenius norm 2, over d_G = 6.
        let en = degree_discrepancy_norm(&star());
        assert_eq!(en, 2.0 / 6.0);
        let crisscross = ArrayedGraph::new(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]).unwrap();
        assert_eq!(degree_discrepancy_norm(&crisscross), 0.0);
    }

    #[test]
    fn trivial_factor_forces_zero_concurrence() {
        // On 1×4 the same 4×4 matrix would read as a Bell state under a
        // 2×2 split, but across the declared cut every state is separable.
        let g = ArrayedGraph::new(1, 4, &[((1, 1), (1, 4))]).unwrap();
        let report = measure_report(&g, 1e-9, EntropyBase::Bits).unwrap();
        assert_eq!(report.concurrence, Some(0.0));
        assert_eq!(report.entanglement_of_formation, Some(0.0));
        assert_eq!(report.maximally_entangled, Some(false));
        assert_eq!(report.logarithmic_negativity, 0.0);
    }

    #[test]
    fn maximal_entanglement_cases() {
        let edge = ArrayedGraph::new(2, 2, &[((1, 1), (2, 2))]).unwrap();
        assert_eq!(is_maximally_entangled(&edge, 1e-9), Some(true));
        assert_eq!(is_maximally_entangled(&star(), 1e-9), Some(false));
        // Larger array with a matched edge: ruled out by the bound.
        let g = ArrayedGraph::new(2, 3, &[((1, 1), (1, 2)), ((1, 1), (2, 3))]).unwrap();
        assert_eq!(is_maximally_entangled(&g, 1e-9), Some(false));
        // Larger array, all edges unmatched: no formula, undecided.
        let g = ArrayedGraph::new(2, 3, &[((1, 1), (2, 3))]).unwrap();
        assert_eq!(is_maximally_entangled(&g, 1e-9), None);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_string(&ratio(1, 3)), "1/3");
        assert_eq!(rational_string(&ratio(2, 1)), "2");
        assert_eq!(rational_string(&ratio(0, 5)), "0");
    }
}
