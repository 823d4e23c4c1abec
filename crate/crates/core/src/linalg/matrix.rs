use std::fmt;

use serde_json::{json, Value};

use super::complex::Complex;
use super::eigen;
use super::LinalgError;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self, LinalgError> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex::real(x)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Matrix unit `E_ij` of the given shape.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.data[i * cols + j] = Complex::ONE;
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m.data[i * n + i] = Complex::real(x);
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to basis vector `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * n + j] = Complex::ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: Complex) {
        self.data[i * self.cols + j] += v;
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, k: Complex) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * k).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        self.same_shape(other)?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        self.same_shape(other)?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    /// `self += k * other`
    pub fn axpy(&mut self, k: Complex, other: &ComplexMatrix) -> Result<(), LinalgError> {
        self.same_shape(other)?;
        for (d, &b) in self.data.iter_mut().zip(&other.data) {
            *d += k * b;
        }
        Ok(())
    }

    fn same_shape(&self, other: &ComplexMatrix) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Kronecker product: `(A⊗B)[i·rB+k, j·cB+l] = A[i,j]·B[k,l]`.
    pub fn kron(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * b.rows;
        let cols = self.cols * b.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        out.data[(i * b.rows + k) * cols + j * b.cols + l] = a * b.get(k, l);
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal `[[A, 0], [0, B]]`.
    pub fn direct_sum(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows + b.rows;
        let cols = self.cols + b.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j);
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.data[(self.rows + i) * cols + self.cols + j] = b.get(i, j);
            }
        }
        out
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).fold(Complex::ZERO, |acc, i| acc + self.get(i, i))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation; shapes must agree.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64, LinalgError> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }

    /// `U†U = UU† = I` up to `tol` entrywise.
    pub fn is_unitary(&self, tol: f64) -> Result<bool, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let id = Self::identity(self.rows);
        let a = self.adjoint();
        let left = a.mul(self)?;
        let right = self.mul(&a)?;
        Ok(left.max_abs_diff(&id)? <= tol && right.max_abs_diff(&id)? <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && matches!(self.max_abs_diff(&self.adjoint()), Ok(d) if d <= tol)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        Ok(eigen::hermitian_eigenvalues(self))
    }

    pub fn min_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(self
            .hermitian_eigenvalues()?
            .first()
            .copied()
            .unwrap_or(f64::INFINITY))
    }

    /// Whether `self + shift·I` admits a Cholesky factorisation, i.e. every
    /// eigenvalue of the Hermitian part exceeds `-shift`. Cubic with a small
    /// constant, so it is the cheap way to test positivity of large Choi
    /// matrices.
    pub fn is_psd(&self, shift: f64) -> Result<bool, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut l = vec![Complex::ZERO; n * n];
        for j in 0..n {
            let h = |r: usize, c: usize| (self.get(r, c) + self.get(c, r).conj()).scale(0.5);
            let mut diag = h(j, j).re + shift;
            for k in 0..j {
                diag -= l[j * n + k].norm_sqr();
            }
            if diag <= 0.0 || !diag.is_finite() {
                return Ok(false);
            }
            let pivot = diag.sqrt();
            l[j * n + j] = Complex::real(pivot);
            for i in j + 1..n {
                let mut acc = h(i, j);
                for k in 0..j {
                    acc -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = acc.scale(1.0 / pivot);
            }
        }
        Ok(true)
    }

    /// Hermitian, positive semidefinite within `psd_tol`, trace at most `1 + tol`.
    pub fn is_density(&self, tol: f64, psd_tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let tr = self.trace();
        if tr.re > 1.0 + tol || tr.im.abs() > tol {
            return false;
        }
        matches!(self.min_eigenvalue(), Ok(m) if m >= -psd_tol)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.data.iter().map(|c| json!([c.re, c.im])).collect();
        json!({ "rows": self.rows, "cols": self.cols, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self, LinalgError> {
        let bad = |m: &str| LinalgError::Json(m.to_string());
        let rows = v["rows"].as_u64().ok_or_else(|| bad("missing rows"))? as usize;
        let cols = v["cols"].as_u64().ok_or_else(|| bad("missing cols"))? as usize;
        let entries = v["entries"].as_array().ok_or_else(|| bad("missing entries"))?;
        let data = entries
            .iter()
            .map(|e| {
                let pair = e.as_array().filter(|p| p.len() == 2);
                let pair = pair.ok_or_else(|| bad("entry must be [re, im]"))?;
                let re = pair[0].as_f64().ok_or_else(|| bad("non-numeric entry"))?;
                let im = pair[1].as_f64().ok_or_else(|| bad("non-numeric entry"))?;
                Ok(Complex::new(re, im))
            })
            .collect::<Result<Vec<_>, LinalgError>>()?;
        Self::from_vec(rows, cols, data)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                let c = self.get(i, j);
                write!(f, "{:.4}{:+.4}i", c.re, c.im)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn hadamard() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).unwrap()
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
        let a = hadamard();
        let one = ComplexMatrix::identity(1);
        assert_eq!(a.kron(&one), a);
    }

    #[test]
    fn kron_x_identity_all_entries() {
        let k = pauli_x().kron(&ComplexMatrix::identity(2));
        // hand-evaluated: rows 0,1 pick up the lower block and vice versa
        let expect = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ];
        for (i, row) in expect.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(k.get(i, j), Complex::real(x), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn direct_sums() {
        let one = ComplexMatrix::identity(1);
        assert_eq!(one.direct_sum(&one), ComplexMatrix::identity(2));
        let d = ComplexMatrix::identity(2).direct_sum(&pauli_x());
        let expect = ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(d, expect);
        let a = hadamard();
        assert_eq!(a.direct_sum(&ComplexMatrix::zeros(0, 0)), a);
    }

    #[test]
    fn unitarity() {
        assert!(pauli_x().is_unitary(1e-12).unwrap());
        assert!(hadamard().is_unitary(1e-12).unwrap());
        let shear = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(!shear.is_unitary(1e-9).unwrap());
        assert!(ComplexMatrix::zeros(2, 3).is_unitary(1e-9).is_err());
        assert!(ComplexMatrix::zeros(0, 0).is_unitary(1e-9).unwrap());
    }

    #[test]
    fn hadamard_conjugation() {
        let h = hadamard();
        let rho = ComplexMatrix::diag(&[1.0, 0.0]);
        let out = h.mul(&rho).unwrap().mul(&h.adjoint()).unwrap();
        let expect = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(out.approx_eq(&expect, 1e-12));
    }

    #[test]
    fn permutation_matrix_maps_columns() {
        let p = ComplexMatrix::permutation(&[2, 0, 1]);
        assert_eq!(p.get(2, 0), Complex::ONE);
        assert_eq!(p.get(0, 1), Complex::ONE);
        assert!(p.is_unitary(0.0).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::from_vec(
            1,
            2,
            vec![Complex::new(0.5, -1.0), Complex::new(0.0, 2.0)],
        )
        .unwrap();
        let back = ComplexMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn density_predicate() {
        let plus = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(plus.is_density(1e-9, 1e-7));
        let bad = ComplexMatrix::from_real(2, 2, &[0.5, 0.9, 0.9, 0.5]).unwrap();
        assert!(!bad.is_density(1e-9, 1e-7));
    }
}
