//! Complex floating matrices: the working representation for spectra,
//! singular values, realignment and partial traces.

use num_complex::Complex64;

use super::LinalgError;

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexDenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexDenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    /// Projector |v⟩⟨v| onto a (not necessarily normalized) vector.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, factor: Complex64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        Self::from_fn(r1 * r2, c1 * c2, |i, j| {
            self.get(i / r2, j / c2) * other.get(i % r2, j % c2)
        })
    }

    /// Transposes each q×q block of the p×p block grid.
    pub fn partial_transpose(&self, p: usize, q: usize) -> Result<Self, LinalgError> {
        let n = self.square_dim()?;
        if p * q != n {
            return Err(LinalgError::DimensionMismatch { n, p, q });
        }
        Ok(Self::from_fn(n, n, |r, c| {
            let (i, j) = (r / q, r % q);
            let (i2, j2) = (c / q, c % q);
            self.get(i * q + j2, i2 * q + j)
        }))
    }

    /// The realignment reshuffle: the p²×q² matrix whose ((i,i'),(j,j'))
    /// entry is the ((i,j),(i',j')) entry of a pq×pq input. Row index (i,i')
    /// packs as i·p + i', column index (j,j') as j·q + j'; equivalently, row
    /// (i,i') of the result is the row-vectorization of block A_{ii'}.
    ///
    /// This is a bijective entry permutation, so it preserves the Frobenius
    /// norm, and a separable state has realignment trace norm at most one.
    pub fn realign(&self, p: usize, q: usize) -> Result<Self, LinalgError> {
        let n = self.square_dim()?;
        if p * q != n {
            return Err(LinalgError::DimensionMismatch { n, p, q });
        }
        Ok(Self::from_fn(p * p, q * q, |r, c| {
            let (i, i2) = (r / p, r % p);
            let (j, j2) = (c / q, c % q);
            self.get(i * q + j, i2 * q + j2)
        }))
    }

    /// Traces out the second tensor factor: (i,i') ↦ Σ_j entry((i,j),(i',j)).
    pub fn partial_trace_b(&self, p: usize, q: usize) -> Result<Self, LinalgError> {
        let n = self.square_dim()?;
        if p * q != n {
            return Err(LinalgError::DimensionMismatch { n, p, q });
        }
        Ok(Self::from_fn(p, p, |i, i2| {
            (0..q).map(|j| self.get(i * q + j, i2 * q + j)).sum()
        }))
    }

    fn square_dim(&self) -> Result<usize, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// Real symmetric content as a flat row-major copy; fails when the
    /// matrix has imaginary parts or asymmetry beyond `tol`.
    pub fn to_real_symmetric_flat(&self, tol: f64) -> Result<Vec<f64>, LinalgError> {
        let n = self.square_dim()?;
        let mut deviation: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                deviation = deviation.max(self.get(i, j).im.abs());
                deviation = deviation.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        if deviation > tol {
            return Err(LinalgError::NotSymmetric(deviation));
        }
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = 0.5 * (self.get(i, j).re + self.get(j, i).re);
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        Ok(out)
    }
}

/// Kronecker product of two vectors.
pub(crate) fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn partial_trace_of_product_state() {
        // P[x] ⊗ P[y] with unit y traces down to P[x].
        let x = [c(0.6, 0.0), c(0.8, 0.0)];
        let y = [c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)];
        let rho = ComplexDenseMatrix::outer(&kron_vec(&x, &y));
        let reduced = rho.partial_trace_b(2, 3).unwrap();
        let expected = ComplexDenseMatrix::outer(&x);
        assert!(reduced.sub(&expected).frobenius_norm() < 1e-14);
        assert!((reduced.trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn realign_product_state_is_rank_one_with_unit_trace_norm() {
        let x = [c(1.0 / 2.0_f64.sqrt(), 0.0), c(1.0 / 2.0_f64.sqrt(), 0.0)];
        let y = [c(1.0, 0.0), c(0.0, 0.0)];
        let rho = ComplexDenseMatrix::outer(&kron_vec(&x, &y));
        let r = rho.realign(2, 2).unwrap();
        // Frobenius norm preserved, and for a pure product state the
        // realignment is rank one with singular value exactly one.
        assert!((r.frobenius_norm() - rho.frobenius_norm()).abs() < 1e-14);
        assert!((r.frobenius_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kron_dimensions() {
        let a = ComplexDenseMatrix::identity(2);
        let b = ComplexDenseMatrix::zeros(3, 4);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 8));
    }

    #[test]
    fn partial_trace_of_entangled_edge_state() {
        // ρ of the single cross edge {(1,1),(2,2)}: tracing out B leaves the
        // maximally mixed qubit.
        let rho = ComplexDenseMatrix::from_real_rows(&[
            vec![0.5, 0.0, 0.0, -0.5],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![-0.5, 0.0, 0.0, 0.5],
        ]);
        let reduced = rho.partial_trace_b(2, 2).unwrap();
        let expected = ComplexDenseMatrix::from_real_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]);
        assert!(reduced.sub(&expected).frobenius_norm() < 1e-15);
    }

    #[test]
    fn realign_rejects_bad_split() {
        let m = ComplexDenseMatrix::zeros(5, 5);
        assert!(m.realign(2, 2).is_err());
    }
}
