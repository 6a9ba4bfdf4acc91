//! Exact-arithmetic symmetric matrices and rational PSD certification.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{rat, ComplexDenseMatrix, LinalgError};

/// A symmetric matrix with exact rational entries.
///
/// Only the lower triangle is stored, so symmetry holds structurally rather
/// than by convention. Laplacians, density matrices and their partial
/// transposes all live here; nothing in this type ever rounds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalSymmetricMatrix {
    n: usize,
    /// Lower triangle, row-major: entry (i, j) with j <= i at i(i+1)/2 + j.
    tri: Vec<BigRational>,
}

impl RationalSymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self {
            n,
            tri: vec![BigRational::zero(); n * (n + 1) / 2],
        }
    }

    /// Builds from a generator; only the lower triangle (i >= j) is sampled.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.tri[i * (i + 1) / 2 + j] = f(i, j);
            }
        }
        m
    }

    /// Builds from full integer rows, checking symmetry.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(n > 0 && rows.iter().all(|r| r.len() == n), "not square");
        for i in 0..n {
            for j in 0..i {
                assert_eq!(rows[i][j], rows[j][i], "rows are not symmetric");
            }
        }
        Self::from_fn(n, |i, j| rat(rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn tri_index(&self, i: usize, j: usize) -> usize {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        hi * (hi + 1) / 2 + lo
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.tri[self.tri_index(i, j)]
    }

    /// Sets entry (i, j) and, structurally, (j, i).
    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        let idx = self.tri_index(i, j);
        self.tri[idx] = value;
    }

    pub fn add_at(&mut self, i: usize, j: usize, delta: &BigRational) {
        let idx = self.tri_index(i, j);
        self.tri[idx] = &self.tri[idx] + delta;
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn row_sum(&self, i: usize) -> BigRational {
        (0..self.n).map(|j| self.get(i, j)).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        Self {
            n: self.n,
            tri: self.tri.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self {
            n: self.n,
            tri: self
                .tri
                .iter()
                .zip(&other.tri)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self {
            n: self.n,
            tri: self
                .tri
                .iter()
                .zip(&other.tri)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.tri.iter().all(|v| v.is_zero())
    }

    /// Transposes each q×q block of the p×p block grid.
    ///
    /// The partial transpose of a symmetric matrix is again symmetric, so the
    /// result stays in this type. Applying it twice gives back the input.
    pub fn partial_transpose(&self, p: usize, q: usize) -> Result<Self, LinalgError> {
        if p * q != self.n {
            return Err(LinalgError::DimensionMismatch { n: self.n, p, q });
        }
        Ok(Self::from_fn(self.n, |r, c| {
            let (i, j) = (r / q, r % q);
            let (i2, j2) = (c / q, c % q);
            self.get(i * q + j2, i2 * q + j).clone()
        }))
    }

    /// Exact quadratic form xᵀ M x.
    pub fn quadratic_form(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.n, "vector length mismatch");
        let mut acc = BigRational::zero();
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if x[j].is_zero() {
                    continue;
                }
                acc += self.get(i, j) * &x[i] * &x[j];
            }
        }
        acc
    }

    pub fn mat_vec(&self, x: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.n, "vector length mismatch");
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    /// Full row-major n×n floating copy.
    pub fn to_f64_flat(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                out[i * self.n + j] = self.get(i, j).to_f64().unwrap_or(f64::NAN);
            }
        }
        out
    }

    pub fn to_complex(&self) -> ComplexDenseMatrix {
        ComplexDenseMatrix::from_fn(self.n, self.n, |i, j| {
            num_complex::Complex64::new(self.get(i, j).to_f64().unwrap_or(f64::NAN), 0.0)
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j).to_f64().unwrap_or(0.0);
                acc += v * v;
            }
        }
        acc.sqrt()
    }
}

/// Outcome of the exact PSD decision.
#[derive(Clone, Debug, PartialEq)]
pub enum PsdCertificate {
    Psd,
    /// `witness` is an exact rational vector with xᵀ M x = `value` < 0.
    NotPsd {
        witness: Vec<BigRational>,
        value: BigRational,
    },
}

impl PsdCertificate {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCertificate::Psd)
    }
}

/// Decides positive semidefiniteness exactly by pivoted rational elimination.
///
/// Pivot rule: always eliminate on the largest remaining diagonal entry
/// (smallest index on ties). A zero diagonal whose row is otherwise zero is
/// skipped; a zero diagonal with a nonzero off-diagonal entry is indefinite
/// and yields a witness from the corresponding 2×2 principal submatrix. Any
/// negative diagonal yields a witness directly. Witness vectors are mapped
/// back through the recorded elimination so that xᵀ M x is evaluated against
/// the *original* matrix, which the caller can re-verify independently.
pub fn exact_psd_check(m: &RationalSymmetricMatrix) -> PsdCertificate {
    let n = m.dim();
    // Working Schur complement, full storage for easy indexing.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut active: Vec<bool> = vec![true; n];
    // (pivot index, multipliers a[j][p]/a[p][p] for j active at that step)
    let mut eliminated: Vec<(usize, Vec<(usize, BigRational)>)> = Vec::new();

    loop {
        // Largest remaining diagonal.
        let mut pivot: Option<usize> = None;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            match pivot {
                None => pivot = Some(i),
                Some(p) if a[i][i] > a[p][p] => pivot = Some(i),
                _ => {}
            }
        }
        let Some(p) = pivot else {
            return PsdCertificate::Psd;
        };

        if a[p][p].is_negative() {
            let mut y = vec![BigRational::zero(); n];
            y[p] = rat(1);
            let value = a[p][p].clone();
            let witness = back_substitute(y, &eliminated);
            debug_assert_eq!(m.quadratic_form(&witness), value);
            return PsdCertificate::NotPsd { witness, value };
        }

        if a[p][p].is_zero() {
            // p maximizes the diagonal, so every remaining diagonal is <= 0
            // here; a nonzero entry in row p makes the matrix indefinite.
            let off = (0..n).find(|&j| active[j] && j != p && !a[p][j].is_zero());
            match off {
                Some(j) => {
                    // On span{e_p, e_j} the form is t²·0 + 2t·c + a_jj with
                    // c = a[p][j]; t = -(a_jj + 1)/(2c) gives value -1.
                    let c = a[p][j].clone();
                    let t = -(&a[j][j] + rat(1)) / (rat(2) * &c);
                    let mut y = vec![BigRational::zero(); n];
                    y[p] = t;
                    y[j] = rat(1);
                    let value = rat(-1);
                    let witness = back_substitute(y, &eliminated);
                    debug_assert_eq!(m.quadratic_form(&witness), value);
                    return PsdCertificate::NotPsd { witness, value };
                }
                None => {
                    active[p] = false;
                    continue;
                }
            }
        }

        // Positive pivot: eliminate.
        let d = a[p][p].clone();
        let mut multipliers = Vec::new();
        for j in 0..n {
            if j == p || !active[j] {
                continue;
            }
            if !a[j][p].is_zero() {
                multipliers.push((j, &a[j][p] / &d));
            }
        }
        for &(j, ref mj) in &multipliers {
            for k in 0..n {
                if !active[k] || k == p {
                    continue;
                }
                let delta = mj * &a[p][k];
                a[j][k] = &a[j][k] - &delta;
            }
        }
        active[p] = false;
        eliminated.push((p, multipliers));
    }
}

/// Solves Lᵀ x = y over the recorded unit-triangular elimination, newest
/// pivot first, so that xᵀ M x equals the Schur-complement quadratic form.
fn back_substitute(
    mut x: Vec<BigRational>,
    eliminated: &[(usize, Vec<(usize, BigRational)>)],
) -> Vec<BigRational> {
    for (p, multipliers) in eliminated.iter().rev() {
        let mut acc = BigRational::zero();
        for (j, mj) in multipliers {
            if !x[*j].is_zero() {
                acc += mj * &x[*j];
            }
        }
        x[*p] = -acc;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    #[test]
    fn triangle_storage_is_symmetric() {
        let mut m = RationalSymmetricMatrix::zeros(3);
        m.set(2, 0, rat(5));
        assert_eq!(m.get(0, 2), &rat(5));
        assert_eq!(m.get(2, 0), &rat(5));
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let m = RationalSymmetricMatrix::from_int_rows(&[
            vec![3, -1, -1, -1],
            vec![-1, 1, 0, 0],
            vec![-1, 0, 1, 0],
            vec![-1, 0, 0, 1],
        ]);
        let pt = m.partial_transpose(2, 2).unwrap();
        assert_eq!(pt.partial_transpose(2, 2).unwrap(), m);
        assert_eq!(pt.trace(), m.trace());
    }

    #[test]
    fn partial_transpose_rejects_bad_split() {
        let m = RationalSymmetricMatrix::zeros(5);
        assert!(matches!(
            m.partial_transpose(2, 2),
            Err(LinalgError::DimensionMismatch { n: 5, p: 2, q: 2 })
        ));
    }

    #[test]
    fn psd_check_diag_indefinite() {
        let m = RationalSymmetricMatrix::from_int_rows(&[vec![1, 0], vec![0, -1]]);
        match exact_psd_check(&m) {
            PsdCertificate::NotPsd { witness, value } => {
                assert!(value.is_negative());
                assert_eq!(m.quadratic_form(&witness), value);
                assert_eq!(witness, vec![rat(0), rat(1)]);
            }
            PsdCertificate::Psd => panic!("diag(1,-1) certified PSD"),
        }
    }

    #[test]
    fn psd_check_zero_diagonal_with_coupling() {
        // [[0, 1], [1, 0]] is indefinite with both diagonals zero.
        let m = RationalSymmetricMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        match exact_psd_check(&m) {
            PsdCertificate::NotPsd { witness, value } => {
                assert_eq!(m.quadratic_form(&witness), value);
                assert!(value.is_negative());
            }
            PsdCertificate::Psd => panic!("indefinite matrix certified PSD"),
        }
    }

    #[test]
    fn psd_check_accepts_singular_psd() {
        // 1-edge laplacian block: PSD with a kernel.
        let m = RationalSymmetricMatrix::from_int_rows(&[
            vec![1, -1, 0],
            vec![-1, 1, 0],
            vec![0, 0, 0],
        ]);
        assert!(exact_psd_check(&m).is_psd());
    }

    #[test]
    fn psd_check_witness_survives_elimination() {
        // Leading block is PSD; indefiniteness only appears after pivoting.
        let m =
            RationalSymmetricMatrix::from_int_rows(&[vec![4, 2, 0], vec![2, 1, 3], vec![0, 3, 1]]);
        match exact_psd_check(&m) {
            PsdCertificate::NotPsd { witness, value } => {
                assert_eq!(m.quadratic_form(&witness), value);
                assert!(value.is_negative());
            }
            PsdCertificate::Psd => panic!("indefinite matrix certified PSD"),
        }
    }

    #[test]
    fn quadratic_form_matches_direct_expansion() {
        let m = RationalSymmetricMatrix::from_int_rows(&[vec![2, -1], vec![-1, 2]]);
        let x = vec![ratio(1, 2), ratio(-1, 3)];
        // 2·(1/2)² + 2·(-1)·(1/2)(-1/3) + 2·(1/3)² = 1/2 + 1/3 + 2/9
        assert_eq!(m.quadratic_form(&x), ratio(19, 18));
    }
}
