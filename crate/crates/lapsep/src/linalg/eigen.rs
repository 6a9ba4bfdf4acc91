//! Small dense eigensolves and singular values via Jacobi rotations.
//!
//! Everything here targets matrices of dimension at most a few dozen, where
//! cyclic Jacobi is both simple and extremely accurate; robustness beats
//! asymptotics at these sizes.

use num_complex::Complex64;

use super::{ComplexDenseMatrix, LinalgError, RationalSymmetricMatrix};

/// Convergence threshold on the off-diagonal Frobenius mass, relative to the
/// Frobenius norm of the input.
pub const JACOBI_CONVERGENCE: f64 = 1e-13;

const MAX_SWEEPS: usize = 128;

/// Eigenvalues of a real symmetric matrix, sorted descending, plus the
/// off-diagonal residual the solver actually achieved.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Full eigendecomposition of a real symmetric matrix.
///
/// `values` are sorted descending; column k of `vectors` (row-major n×n) is
/// the eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub n: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub residual: f64,
}

impl SymmetricEigen {
    /// Relative residual of projecting `v` onto the span of eigenvectors
    /// with eigenvalue greater than `support_tol`.
    ///
    /// Real eigenvectors project the real and imaginary parts separately, so
    /// complex vectors are fine.
    pub fn range_residual(&self, v: &[Complex64], support_tol: f64) -> f64 {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let mut projected = vec![Complex64::new(0.0, 0.0); self.n];
        for (k, &lambda) in self.values.iter().enumerate() {
            if lambda <= support_tol {
                continue;
            }
            let mut coeff = Complex64::new(0.0, 0.0);
            for i in 0..self.n {
                coeff += self.vectors[i * self.n + k] * v[i];
            }
            for i in 0..self.n {
                projected[i] += coeff * self.vectors[i * self.n + k];
            }
        }
        let mut diff = 0.0;
        for i in 0..self.n {
            diff += (v[i] - projected[i]).norm_sqr();
        }
        diff.sqrt() / norm
    }
}

/// Cyclic Jacobi on a flat row-major symmetric matrix.
fn jacobi(a_in: &[f64], n: usize, want_vectors: bool) -> (Vec<f64>, Option<Vec<f64>>, f64) {
    let mut a = a_in.to_vec();
    let mut v = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };

    let norm = frob(&a);
    let target = JACOBI_CONVERGENCE * norm.max(f64::MIN_POSITIVE);

    let mut residual = off_diag_norm(&a, n);
    for _ in 0..MAX_SWEEPS {
        if residual <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        a[i * n + p] = c * aip - s * aiq;
                        a[p * n + i] = a[i * n + p];
                        a[i * n + q] = s * aip + c * aiq;
                        a[q * n + i] = a[i * n + q];
                    }
                }
                a[p * n + p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a[q * n + q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                if let Some(vv) = v.as_mut() {
                    for i in 0..n {
                        let vip = vv[i * n + p];
                        let viq = vv[i * n + q];
                        vv[i * n + p] = c * vip - s * viq;
                        vv[i * n + q] = s * vip + c * viq;
                    }
                }
            }
        }
        residual = off_diag_norm(&a, n);
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    (diag, v, residual)
}

fn frob(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diag_norm(a: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    acc.sqrt()
}

fn sort_descending(values: &mut [f64], vectors: Option<&mut Vec<f64>>, n: usize) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let sorted: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    values.copy_from_slice(&sorted);
    if let Some(v) = vectors {
        let old = v.clone();
        for (new_col, &old_col) in order.iter().enumerate() {
            for i in 0..n {
                v[i * n + new_col] = old[i * n + old_col];
            }
        }
    }
}

pub(crate) fn symmetric_eigenvalues_flat(a: &[f64], n: usize) -> Spectrum {
    let (mut diag, _, residual) = jacobi(a, n, false);
    sort_descending(&mut diag, None, n);
    Spectrum {
        eigenvalues: diag,
        residual,
    }
}

pub(crate) fn symmetric_eigendecomposition_flat(a: &[f64], n: usize) -> SymmetricEigen {
    let (mut diag, vectors, residual) = jacobi(a, n, true);
    let mut vectors = vectors.expect("eigenvectors requested");
    sort_descending(&mut diag, Some(&mut vectors), n);
    SymmetricEigen {
        n,
        values: diag,
        vectors,
        residual,
    }
}

/// All eigenvalues of a real symmetric matrix, each accurate to a small
/// multiple of `tol`·‖M‖_F, sorted descending.
pub fn symmetric_eigenvalues(m: &ComplexDenseMatrix, tol: f64) -> Result<Spectrum, LinalgError> {
    let n = m.rows();
    let flat = m.to_real_symmetric_flat(sym_check_tol(m, tol))?;
    Ok(symmetric_eigenvalues_flat(&flat, n))
}

/// Eigendecomposition variant of [`symmetric_eigenvalues`].
pub fn symmetric_eigendecomposition(
    m: &ComplexDenseMatrix,
    tol: f64,
) -> Result<SymmetricEigen, LinalgError> {
    let n = m.rows();
    let flat = m.to_real_symmetric_flat(sym_check_tol(m, tol))?;
    Ok(symmetric_eigendecomposition_flat(&flat, n))
}

fn sym_check_tol(m: &ComplexDenseMatrix, tol: f64) -> f64 {
    tol * m.frobenius_norm().max(1.0)
}

impl RationalSymmetricMatrix {
    /// Spectrum of the floating image of this exact matrix.
    pub fn spectrum(&self) -> Spectrum {
        symmetric_eigenvalues_flat(&self.to_f64_flat(), self.dim())
    }

    pub fn eigendecomposition(&self) -> SymmetricEigen {
        symmetric_eigendecomposition_flat(&self.to_f64_flat(), self.dim())
    }
}

/// Singular values, sorted descending, by one-sided Jacobi (Hestenes)
/// orthogonalization of the columns. Works for any rectangular complex
/// matrix; accuracy is a small multiple of machine epsilon times ‖M‖_F.
pub fn singular_values(m: &ComplexDenseMatrix, tol: f64) -> Vec<f64> {
    // Orthogonalize the columns of the thinner orientation.
    let work = if m.rows() >= m.cols() {
        m.clone()
    } else {
        m.adjoint()
    };
    let (rows, cols) = (work.rows(), work.cols());
    let mut col: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| work.get(i, j)).collect())
        .collect();

    let threshold = tol.min(JACOBI_CONVERGENCE);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let alpha: f64 = col[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = col[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = col[i].iter().zip(&col[j]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g <= threshold * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // Phase that makes the 2×2 Gram real, then a plain Jacobi
                // rotation zeroing its off-diagonal.
                let w = gamma / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..rows {
                    let u = col[i][r];
                    let v = w.conj() * col[j][r];
                    col[i][r] = c * u - s * v;
                    col[j][r] = s * u + c * v;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = col
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
