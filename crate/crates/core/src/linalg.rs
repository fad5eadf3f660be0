//! Small dense linear algebra helpers shared by the landscape machinery.

use nalgebra::{DMatrix, DVector};

/// Minimum eigenvalue of a symmetric matrix given in row-major storage.
pub fn min_symmetric_eigenvalue(entries: &[f64], n: usize) -> f64 {
    debug_assert_eq!(entries.len(), n * n);
    let m = DMatrix::from_row_slice(n, n, entries);
    let eig = m.symmetric_eigenvalues();
    eig.iter().copied().fold(f64::INFINITY, f64::min)
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(entries: &[f64], n: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, entries);
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Solve `H dx = -g` through an SVD pseudo-inverse, dropping singular values
/// below `cutoff`. Returns the step with its norm clipped to `max_norm`.
pub fn damped_newton_step(h: &[f64], g: &[f64], n: usize, cutoff: f64, max_norm: f64) -> Vec<f64> {
    let hm = DMatrix::from_row_slice(n, n, h);
    let gv = DVector::from_column_slice(g);
    let svd = hm.svd(true, true);
    let step = svd
        .solve(&(-gv), cutoff)
        .unwrap_or_else(|_| DVector::zeros(n));
    let norm = step.norm();
    let scale = if norm > max_norm { max_norm / norm } else { 1.0 };
    step.iter().map(|v| v * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_eigenvalue_of_diag() {
        let m = [3.0, 0.0, 0.0, -2.0];
        assert!((min_symmetric_eigenvalue(&m, 2) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn newton_step_solves_quadratic() {
        // H = diag(2, 4), g = (2, 4) -> step = (-1, -1)
        let h = [2.0, 0.0, 0.0, 4.0];
        let g = [2.0, 4.0];
        let s = damped_newton_step(&h, &g, 2, 1e-12, 10.0);
        assert!((s[0] + 1.0).abs() < 1e-12 && (s[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn newton_step_clips_norm() {
        let h = [1e-30, 0.0, 0.0, 1e-30];
        let g = [1.0, 0.0];
        let s = damped_newton_step(&h, &g, 2, 1e-10, 1.0);
        let norm = (s[0] * s[0] + s[1] * s[1]).sqrt();
        assert!(norm <= 1.0 + 1e-12);
    }
}
