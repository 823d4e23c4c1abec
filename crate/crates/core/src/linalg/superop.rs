//! Superoperators stored as the images of all matrix units of the source space.

use super::complex::Complex;
use super::matrix::ComplexMatrix;
use super::LinalgError;

#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    src_dim: usize,
    dst_dim: usize,
    /// `table[i * src_dim + j]` is the image of `E_ij`.
    table: Vec<ComplexMatrix>,
}

/// Largest entrywise discrepancy between two superoperators.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub magnitude: f64,
    /// Input matrix unit `E_(i,j)`.
    pub input: (usize, usize),
    /// Output entry `(row, col)`.
    pub output: (usize, usize),
    pub left: Complex,
    pub right: Complex,
}

impl Superoperator {
    pub fn from_table(
        src_dim: usize,
        dst_dim: usize,
        table: Vec<ComplexMatrix>,
    ) -> Result<Self, LinalgError> {
        if table.len() != src_dim * src_dim
            || table
                .iter()
                .any(|m| m.rows() != dst_dim || m.cols() != dst_dim)
        {
            return Err(LinalgError::Shape(format!(
                "transfer table does not match {src_dim} -> {dst_dim}"
            )));
        }
        Ok(Superoperator {
            src_dim,
            dst_dim,
            table,
        })
    }

    pub fn src_dim(&self) -> usize {
        self.src_dim
    }

    pub fn dst_dim(&self) -> usize {
        self.dst_dim
    }

    pub fn image(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.table[i * self.src_dim + j]
    }

    pub fn table(&self) -> &[ComplexMatrix] {
        &self.table
    }

    pub fn identity(d: usize) -> Self {
        let table = (0..d * d)
            .map(|k| ComplexMatrix::unit(d, d, k / d.max(1), k % d.max(1)))
            .collect();
        Superoperator {
            src_dim: d,
            dst_dim: d,
            table,
        }
    }

    pub fn zero(src_dim: usize, dst_dim: usize) -> Self {
        Superoperator {
            src_dim,
            dst_dim,
            table: vec![ComplexMatrix::zeros(dst_dim, dst_dim); src_dim * src_dim],
        }
    }

    /// `ρ ↦ tr(ρ)·σ`.
    pub fn constant(src_dim: usize, state: &ComplexMatrix) -> Result<Self, LinalgError> {
        if !state.is_square() {
            return Err(LinalgError::NotSquare(state.rows(), state.cols()));
        }
        let d = state.rows();
        let table = (0..src_dim * src_dim)
            .map(|k| {
                if k / src_dim == k % src_dim {
                    state.clone()
                } else {
                    ComplexMatrix::zeros(d, d)
                }
            })
            .collect();
        Ok(Superoperator {
            src_dim,
            dst_dim: d,
            table,
        })
    }

    /// `ρ ↦ KρK†` for any (not necessarily unitary) `K`.
    pub fn conjugation(k: &ComplexMatrix) -> Self {
        let src = k.cols();
        let dst = k.rows();
        let mut table = Vec::with_capacity(src * src);
        for i in 0..src {
            for j in 0..src {
                // K E_ij K† = (column i of K)(column j of K)†
                table.push(ComplexMatrix::from_fn(dst, dst, |r, c| {
                    k.get(r, i) * k.get(c, j).conj()
                }));
            }
        }
        Superoperator {
            src_dim: src,
            dst_dim: dst,
            table,
        }
    }

    /// `ρ ↦ UρU†`; rejects non-unitary input.
    pub fn from_unitary(u: &ComplexMatrix, tol: f64) -> Result<Self, LinalgError> {
        if !u.is_unitary(tol)? {
            return Err(LinalgError::NotUnitary);
        }
        Ok(Self::conjugation(u))
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if rho.rows() != self.src_dim || rho.cols() != self.src_dim {
            return Err(LinalgError::Shape(format!(
                "input is {}x{}, superoperator expects dimension {}",
                rho.rows(),
                rho.cols(),
                self.src_dim
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dst_dim, self.dst_dim);
        for i in 0..self.src_dim {
            for j in 0..self.src_dim {
                let c = rho.get(i, j);
                if !c.is_zero() {
                    out.axpy(c, self.image(i, j))?;
                }
            }
        }
        Ok(out)
    }

    /// `g ∘ f`
    pub fn compose(g: &Superoperator, f: &Superoperator) -> Result<Self, LinalgError> {
        if f.dst_dim != g.src_dim {
            return Err(LinalgError::Shape(format!(
                "cannot compose: inner output {} vs outer input {}",
                f.dst_dim, g.src_dim
            )));
        }
        let table = f
            .table
            .iter()
            .map(|m| g.apply(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Superoperator {
            src_dim: f.src_dim,
            dst_dim: g.dst_dim,
            table,
        })
    }

    /// Tensor product; composite indices are left-major.
    pub fn tensor(f: &Superoperator, g: &Superoperator) -> Self {
        let (sf, sg) = (f.src_dim, g.src_dim);
        let src = sf * sg;
        let mut table = Vec::with_capacity(src * src);
        for r in 0..src {
            let (i, k) = (r / sg, r % sg);
            for c in 0..src {
                let (j, l) = (c / sg, c % sg);
                table.push(f.image(i, j).kron(g.image(k, l)));
            }
        }
        Superoperator {
            src_dim: src,
            dst_dim: f.dst_dim * g.dst_dim,
            table,
        }
    }

    pub fn sum(fs: &[Superoperator]) -> Result<Self, LinalgError> {
        let first = fs
            .first()
            .ok_or_else(|| LinalgError::Shape("empty sum has no shape".into()))?;
        let mut out = first.clone();
        for f in &fs[1..] {
            out.add_assign(f)?;
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, f: &Superoperator) -> Result<(), LinalgError> {
        if f.src_dim != self.src_dim || f.dst_dim != self.dst_dim {
            return Err(LinalgError::Shape(format!(
                "cannot add {}->{} to {}->{}",
                f.src_dim, f.dst_dim, self.src_dim, self.dst_dim
            )));
        }
        for (a, b) in self.table.iter_mut().zip(&f.table) {
            a.axpy(Complex::ONE, b)?;
        }
        Ok(())
    }

    /// The entry where `self` and `other` differ most; `None` for empty spaces.
    pub fn max_discrepancy(&self, other: &Superoperator) -> Result<Option<Discrepancy>, LinalgError> {
        if self.src_dim != other.src_dim || self.dst_dim != other.dst_dim {
            return Err(LinalgError::Shape(format!(
                "cannot compare {}->{} with {}->{}",
                self.src_dim, self.dst_dim, other.src_dim, other.dst_dim
            )));
        }
        let mut best: Option<Discrepancy> = None;
        let d = self.dst_dim;
        for (k, (a, b)) in self.table.iter().zip(&other.table).enumerate() {
            for r in 0..d {
                for c in 0..d {
                    let (x, y) = (a.get(r, c), b.get(r, c));
                    let mag = (x - y).abs();
                    if best.as_ref().is_none_or(|bd| mag > bd.magnitude) {
                        best = Some(Discrepancy {
                            magnitude: mag,
                            input: (k / self.src_dim, k % self.src_dim),
                            output: (r, c),
                            left: x,
                            right: y,
                        });
                    }
                }
            }
        }
        Ok(best)
    }

    pub fn equal(&self, other: &Superoperator, tol: f64) -> Result<bool, LinalgError> {
        Ok(self
            .max_discrepancy(other)?
            .is_none_or(|d| d.magnitude <= tol))
    }

    /// Choi matrix `Σ_ij E_ij ⊗ f(E_ij)`.
    pub fn choi(&self) -> ComplexMatrix {
        let (s, d) = (self.src_dim, self.dst_dim);
        let n = s * d;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..s {
            for j in 0..s {
                let img = self.image(i, j);
                for r in 0..d {
                    for c in 0..d {
                        out.set(i * d + r, j * d + c, img.get(r, c));
                    }
                }
            }
        }
        out
    }

    pub fn choi_min_eigenvalue(&self) -> f64 {
        self.choi().min_eigenvalue().unwrap_or(f64::INFINITY)
    }

    pub fn is_completely_positive(&self, psd_tol: f64) -> bool {
        matches!(self.choi().is_psd(psd_tol), Ok(true))
    }

    /// Largest output trace over all density-matrix inputs.
    pub fn max_output_trace(&self) -> f64 {
        let s = self.src_dim;
        if s == 0 {
            return 0.0;
        }
        // tr f(ρ) = tr(Mρ) with M_ji = tr f(E_ij)
        let m = ComplexMatrix::from_fn(s, s, |j, i| self.image(i, j).trace());
        let herm = ComplexMatrix::from_fn(s, s, |a, b| (m.get(a, b) + m.get(b, a).conj()).scale(0.5));
        herm.hermitian_eigenvalues()
            .ok()
            .and_then(|e| e.last().copied())
            .unwrap_or(0.0)
    }

    pub fn is_trace_nonincreasing(&self, tol: f64) -> bool {
        // (1 + tol)·I - M must be positive semidefinite
        let s = self.src_dim;
        let slack = ComplexMatrix::from_fn(s, s, |a, b| {
            let m = self.image(b, a).trace();
            let id = if a == b { Complex::ONE } else { Complex::ZERO };
            id - m
        });
        matches!(slack.is_psd(tol), Ok(true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn h() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).unwrap()
    }

    fn projector(a: usize) -> ComplexMatrix {
        ComplexMatrix::unit(2, 2, a, a)
    }

    #[test]
    fn unitary_conjugation_examples() {
        let id = Superoperator::from_unitary(&ComplexMatrix::identity(2), 1e-12).unwrap();
        let rho = ComplexMatrix::from_real(2, 2, &[0.3, 0.1, 0.1, 0.7]).unwrap();
        assert!(id.apply(&rho).unwrap().approx_eq(&rho, 1e-12));

        let xs = Superoperator::from_unitary(&x(), 1e-12).unwrap();
        let out = xs.apply(&ComplexMatrix::diag(&[1.0, 0.0])).unwrap();
        assert!(out.approx_eq(&ComplexMatrix::diag(&[0.0, 1.0]), 1e-12));

        let hs = Superoperator::from_unitary(&h(), 1e-12).unwrap();
        let out = hs.apply(&ComplexMatrix::diag(&[1.0, 0.0])).unwrap();
        let plus = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(out.approx_eq(&plus, 1e-12));

        let shear = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            Superoperator::from_unitary(&shear, 1e-9),
            Err(LinalgError::NotUnitary)
        );
    }

    #[test]
    fn composition_laws() {
        let xs = Superoperator::from_unitary(&x(), 1e-12).unwrap();
        let id = Superoperator::identity(2);
        assert!(Superoperator::compose(&id, &xs).unwrap().equal(&xs, 0.0).unwrap());
        let xx = Superoperator::compose(&xs, &xs).unwrap();
        assert!(xx.equal(&id, 1e-12).unwrap());
        assert!(!xs.equal(&id, 1e-9).unwrap());
        let d = xs.max_discrepancy(&id).unwrap().unwrap();
        assert!((d.magnitude - 1.0).abs() < 1e-12);
    }

    #[test]
    fn discard_then_prepare_is_constant() {
        // trace out a qubit, then prepare |1><1| from the one-dimensional space
        let trace = Superoperator::from_table(
            2,
            1,
            (0..4)
                .map(|k| {
                    let v = if k == 0 || k == 3 { 1.0 } else { 0.0 };
                    ComplexMatrix::from_real(1, 1, &[v]).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let prep = Superoperator::constant(1, &projector(1)).unwrap();
        let both = Superoperator::compose(&prep, &trace).unwrap();
        assert!(both.image(0, 0).approx_eq(&projector(1), 1e-12));
        assert!(both.image(0, 1).approx_eq(&ComplexMatrix::zeros(2, 2), 1e-12));
    }

    #[test]
    fn tensor_examples() {
        let id2 = Superoperator::identity(2);
        let id4 = Superoperator::identity(4);
        assert!(Superoperator::tensor(&id2, &id2).equal(&id4, 0.0).unwrap());

        let xs = Superoperator::from_unitary(&x(), 1e-12).unwrap();
        let f = Superoperator::tensor(&xs, &id2);
        let out = f.apply(&ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(out.approx_eq(&ComplexMatrix::diag(&[0.0, 0.0, 1.0, 0.0]), 1e-12));

        let hs = Superoperator::from_unitary(&h(), 1e-12).unwrap();
        let r1 = ComplexMatrix::from_real(2, 2, &[0.25, 0.1, 0.1, 0.75]).unwrap();
        let r2 = ComplexMatrix::from_real(2, 2, &[0.6, -0.2, -0.2, 0.4]).unwrap();
        let lhs = Superoperator::tensor(&hs, &xs).apply(&r1.kron(&r2)).unwrap();
        let rhs = hs.apply(&r1).unwrap().kron(&xs.apply(&r2).unwrap());
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn measurement_branches_sum_to_dephasing() {
        let branches: Vec<Superoperator> = (0..2)
            .map(|a| Superoperator::conjugation(&projector(a)))
            .collect();
        let deph = Superoperator::sum(&branches).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                // oracle: Σ_a <a|E_ij|a> δ_a
                let expect = if i == j { projector(i) } else { ComplexMatrix::zeros(2, 2) };
                assert!(deph.image(i, j).approx_eq(&expect, 1e-12));
            }
        }
        let zero = Superoperator::zero(2, 2);
        let same = Superoperator::sum(&[deph.clone(), zero]).unwrap();
        assert!(same.equal(&deph, 0.0).unwrap());
        assert!(Superoperator::sum(std::slice::from_ref(&deph)).unwrap().equal(&deph, 0.0).unwrap());
    }

    #[test]
    fn hygiene_checks() {
        let hs = Superoperator::from_unitary(&h(), 1e-12).unwrap();
        assert!(hs.is_completely_positive(1e-7));
        assert!((hs.max_output_trace() - 1.0).abs() < 1e-12);
        // transpose is positive but not completely positive
        let transpose = Superoperator::from_table(
            2,
            2,
            (0..4)
                .map(|k| ComplexMatrix::unit(2, 2, k % 2, k / 2))
                .collect(),
        )
        .unwrap();
        assert!(!transpose.is_completely_positive(1e-7));
        let doubled = Superoperator::sum(&[hs.clone(), hs]).unwrap();
        assert!(!doubled.is_trace_nonincreasing(1e-9));
    }

    #[test]
    fn zero_dimensional_spaces() {
        let z = Superoperator::identity(0);
        assert!(z.table().is_empty());
        assert!(z.equal(&Superoperator::zero(0, 0), 0.0).unwrap());
        assert!(z.is_completely_positive(1e-7));
        let t = Superoperator::tensor(&z, &Superoperator::identity(2));
        assert_eq!(t.src_dim(), 0);
    }
}
