//! Cyclic Jacobi eigenvalue iteration.
//!
//! A Hermitian `n×n` matrix `A + iB` is embedded as the real symmetric
//! `2n×2n` matrix `[[A, -B], [B, A]]`, whose spectrum is that of the original
//! with every eigenvalue doubled in multiplicity.

use super::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 64;

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    let big = 2 * n;
    let mut a = vec![0.0; big * big];
    for i in 0..n {
        for j in 0..n {
            // symmetrize to absorb rounding noise in the input
            let c = m.get(i, j);
            let d = m.get(j, i).conj();
            let re = 0.5 * (c.re + d.re);
            let im = 0.5 * (c.im + d.im);
            a[i * big + j] = re;
            a[(i + n) * big + (j + n)] = re;
            a[i * big + (j + n)] = -im;
            a[(i + n) * big + j] = im;
        }
    }
    let mut eig = symmetric_eigenvalues(&mut a, big);
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig.into_iter().step_by(2).collect()
}

/// Eigenvalues of a real symmetric matrix stored row-major in `a` (destroyed).
pub fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    let scale = a.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-15 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Complex;

    #[test]
    fn diagonal_spectrum() {
        let m = ComplexMatrix::diag(&[3.0, -1.0, 2.0]);
        let e = hermitian_eigenvalues(&m);
        assert_eq!(e.len(), 3);
        for (x, y) in e.iter().zip([-1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_hermitian_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                Complex::real(2.0),
                Complex::I,
                -Complex::I,
                Complex::real(2.0),
            ],
        )
        .unwrap();
        let e = hermitian_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_projector() {
        let m = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let e = hermitian_eigenvalues(&m);
        assert!(e[0].abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    }
}
