use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Result};

/// Largest absolute asymmetry `|a_ij - a_ji|`.
pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub(crate) fn check_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(invalid(format!("{what} is {}x{}, not square", m.nrows(), m.ncols())));
    }
    let scale = m.amax().max(1.0);
    if max_asymmetry(m) > 1e-9 * scale {
        return Err(invalid(format!("{what} is not symmetric")));
    }
    Ok(())
}

/// `(A + Aᵀ) / 2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigendecomposition of a symmetric matrix, eigenvalues in ascending order
/// with matching eigenvector columns.
pub fn sorted_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(symmetrize(m));
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Positive-semidefinite transform `[H]⁺`: same eigenvectors, absolute
/// eigenvalues.
pub fn psd_abs(h: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_symmetric(h, "matrix")?;
    let eig = SymmetricEigen::new(symmetrize(h));
    let abs = eig.eigenvalues.map(f64::abs);
    let out = &eig.eigenvectors * DMatrix::from_diagonal(&abs) * eig.eigenvectors.transpose();
    Ok(symmetrize(&out))
}
