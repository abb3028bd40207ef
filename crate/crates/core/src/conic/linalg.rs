//! Small dense helpers on top of faer.

use faer::{Mat, Side};

/// Eigenvalues (ascending) and eigenvectors of a symmetric matrix.
pub fn sym_eigen(m: &Mat<f64>) -> (Vec<f64>, Mat<f64>) {
    let e = m
        .self_adjoint_eigen(Side::Lower)
        .expect("symmetric eigendecomposition converges");
    let vals: Vec<f64> = (0..m.nrows()).map(|i| e.S()[i]).collect();
    (vals, e.U().to_owned())
}

pub fn min_eigenvalue(m: &Mat<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let vals = m
        .self_adjoint_eigenvalues(Side::Lower)
        .expect("symmetric eigenvalues converge");
    vals.into_iter().fold(f64::INFINITY, f64::min)
}

/// Lower Cholesky factor, or `None` if `m` is not numerically positive definite.
pub fn cholesky(m: &Mat<f64>) -> Option<Mat<f64>> {
    let llt = m.llt(Side::Lower).ok()?;
    Some(llt.L().to_owned())
}
