//! Dense symmetric positive-definite solves for small D x D systems
//! (D is the number of objectives, typically single digits). Matrices are
//! row-major `Vec<f64>` of length n * n.

use crate::error::{Error, Result};

pub struct CholFactor {
    l: Vec<f64>,
    n: usize,
}

/// Lower-triangular Cholesky factorization A = L L^T. Fails on a
/// non-positive pivot, which signals a singular or indefinite matrix.
pub fn cholesky(a: &[f64], n: usize) -> Result<CholFactor> {
    debug_assert_eq!(a.len(), n * n);
    // Exactly singular inputs can round to a pivot a few ulps either side of
    // zero, so pivots are tested against a floor relative to the matrix
    // scale instead of against zero itself.
    let scale = (0..n).fold(0.0f64, |m, j| m.max(a[j * n + j].abs()));
    let floor = scale * n as f64 * f64::EPSILON;
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut diag = a[j * n + j];
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        if !diag.is_finite() || diag <= floor {
            return Err(Error::NotPositiveDefinite { col: j, pivot: diag });
        }
        let root = diag.sqrt();
        l[j * n + j] = root;
        for i in (j + 1)..n {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = sum / root;
        }
    }
    Ok(CholFactor { l, n })
}

impl CholFactor {
    /// Solves A x = b via the two triangular solves.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut sum = b[i];
            for (k, yk) in y.iter().enumerate().take(i) {
                sum -= self.l[i * n + k] * yk;
            }
            y[i] = sum / self.l[i * n + i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut sum = y[i];
            for (k, xk) in x.iter().enumerate().skip(i + 1) {
                sum -= self.l[k * n + i] * xk;
            }
            x[i] = sum / self.l[i * n + i];
        }
        x
    }

    /// sqrt(x^T A^{-1} x), the norm used by ellipsoid bonuses.
    pub fn inv_norm(&self, x: &[f64]) -> f64 {
        let y = self.solve(x);
        x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt()
    }
}

pub fn mat_vec(a: &[f64], x: &[f64], n: usize) -> Vec<f64> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(x.len(), n);
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum())
        .collect()
}

/// Solves A x = b with one step of iterative refinement, which keeps the
/// residual near machine precision even for ill-conditioned accumulations.
pub fn solve_refined(a: &[f64], b: &[f64], n: usize) -> Result<Vec<f64>> {
    let factor = cholesky(a, n)?;
    let mut x = factor.solve(b);
    let ax = mat_vec(a, &x, n);
    let residual: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
    let correction = factor.solve(&residual);
    for (xi, ci) in x.iter_mut().zip(&correction) {
        *xi += ci;
    }
    Ok(x)
}
