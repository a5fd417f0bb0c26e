//! Hermitian matrix helpers shared by the embedding and detection code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Gram eigenvalues in `[-CLAMP_TOLERANCE, 0)` are treated as zero; anything
/// lower is reported as an ill-conditioned ensemble.
pub const CLAMP_TOLERANCE: f64 = 1e-8;

/// Eigendecomposition `H = U diag(w) U†` of a Hermitian matrix.
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(matrix: &CMatrix) -> Self {
        let eig = SymmetricEigen::new(hermitize(matrix));
        HermitianEigen {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Rebuild `U f(w) U†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let mut out = CMatrix::zeros(n, n);
        for (k, &w) in self.eigenvalues.iter().enumerate() {
            let fw = f(w);
            if fw == 0.0 {
                continue;
            }
            let col = u.column(k);
            for j in 0..n {
                let cj = col[j].conj() * fw;
                for i in 0..n {
                    out[(i, j)] += col[i] * cj;
                }
            }
        }
        out
    }
}

/// Symmetrize away round-off so the eigensolver sees an exactly Hermitian input.
pub fn hermitize(matrix: &CMatrix) -> CMatrix {
    let adjoint = matrix.adjoint();
    (matrix + adjoint).map(|z| z * 0.5)
}

/// Principal square root of a PSD matrix.
///
/// Negative eigenvalues down to `-CLAMP_TOLERANCE` are clamped to zero, and so
/// are positive ones below the round-off floor `16 n ε λ_max`, which would
/// otherwise leak `√ε`-sized garbage into the root of a rank-deficient matrix.
pub fn psd_sqrt(matrix: &CMatrix) -> Result<CMatrix> {
    let eig = HermitianEigen::new(matrix);
    let min = eig.min_eigenvalue();
    if min < -CLAMP_TOLERANCE {
        return Err(Error::IllConditioned { min_eigenvalue: min });
    }
    let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let floor = 16.0 * eig.eigenvalues.len() as f64 * f64::EPSILON * max;
    Ok(eig.map(|w| if w > floor { w.sqrt() } else { 0.0 }))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(matrix: &CMatrix) -> f64 {
    HermitianEigen::new(matrix).eigenvalues.iter().map(|w| w.abs()).sum()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `⟨u|M|u⟩` for Hermitian `M`, real part.
pub fn expectation(matrix: &CMatrix, u: &CVector) -> f64 {
    (u.adjoint() * matrix * u)[(0, 0)].re
}

/// Kronecker product of two column vectors.
pub fn kron(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_squares_back() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.5, 0.3),
                Complex64::new(0.5, -0.3),
                Complex64::new(1.0, 0.0),
            ],
        );
        let s = psd_sqrt(&m).unwrap();
        assert!(max_abs_diff(&(&s * &s), &m) < 1e-13);
    }

    #[test]
    fn negative_definite_rejected() {
        let m = CMatrix::from_diagonal_element(2, 2, Complex64::new(-1.0, 0.0));
        assert!(matches!(psd_sqrt(&m), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn trace_norm_of_diagonal() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.25, 0.0),
        ]));
        assert!((trace_norm(&m) - 0.75).abs() < 1e-15);
    }
}
