//! Dense symmetric generalized eigensolver A v = nu B v with B positive
//! definite, reduced to a standard symmetric problem through the Cholesky
//! factor of B.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Lowest `count` eigenpairs of A v = nu B v, eigenvalues ascending.
///
/// A must be symmetric to within 1e-10 (relative, Frobenius) and is
/// symmetrized before the reduction; B must admit a Cholesky factorization.
/// Returned vectors have unit Euclidean norm and satisfy
/// ||A v - nu B v|| <= 1e-8 ||A||_F.
pub fn sym_generalized_eig(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    count: usize,
) -> Result<(Vec<f64>, Vec<DVector<f64>>)> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::Input("sym_generalized_eig: matrices must be square and conformable".into()));
    }
    if count > n {
        return Err(Error::Input(format!("requested {count} eigenpairs from a {n}x{n} problem")));
    }

    let a_norm = a.norm();
    let asym = (a - a.transpose()).norm();
    if asym > 1e-10 * a_norm.max(1e-300) {
        return Err(Error::Input(format!(
            "matrix A is not symmetric: ||A - A^T|| = {asym:e} vs ||A|| = {a_norm:e}"
        )));
    }
    let a_sym = (a + a.transpose()) * 0.5;
    let b_sym = (b + b.transpose()) * 0.5;

    let chol = b_sym
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Conditioning("matrix B is not positive definite (Cholesky failed)".into()))?;
    let l = chol.l();

    // C = L^{-1} A L^{-T}, kept symmetric explicitly.
    let m1 = l
        .solve_lower_triangular(&a_sym)
        .ok_or_else(|| Error::Conditioning("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&m1.transpose())
        .ok_or_else(|| Error::Conditioning("singular Cholesky factor".into()))?;
    let c = (&c + c.transpose()) * 0.5;

    let eig = c.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());

    let lt = l.transpose();
    let mut values = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for &idx in order.iter().take(count) {
        let nu = eig.eigenvalues[idx];
        let y = eig.eigenvectors.column(idx).into_owned();
        let mut v = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Conditioning("singular Cholesky factor".into()))?;
        let norm = v.norm();
        if norm > 0.0 {
            v /= norm;
        }
        let residual = (&a_sym * &v - &b_sym * &v * nu).norm();
        if residual > 1e-8 * a_norm.max(1e-300) {
            return Err(Error::Conditioning(format!(
                "eigenpair residual {residual:e} exceeds 1e-8 ||A|| = {:e}",
                1e-8 * a_norm
            )));
        }
        values.push(nu);
        vectors.push(v);
    }
    Ok((values, vectors))
}
