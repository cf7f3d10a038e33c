//! Small dense helpers shared by the checkers and solvers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Orthonormal basis (as columns) of the orthogonal complement of
/// `span(trivial)` in `R^d`.
pub fn complement_basis(d: usize, trivial: &[DVector<f64>]) -> DMatrix<f64> {
    let mut kept: Vec<DVector<f64>> = Vec::with_capacity(d);
    let mut fixed: Vec<DVector<f64>> = Vec::new();
    for t in trivial {
        if let Some(u) = orthonormalize(t.clone(), &fixed) {
            fixed.push(u);
        }
    }
    for k in 0..d {
        let mut e = DVector::zeros(d);
        e[k] = 1.0;
        let all: Vec<_> = fixed.iter().chain(kept.iter()).cloned().collect();
        if let Some(u) = orthonormalize(e, &all) {
            kept.push(u);
        }
        if kept.len() + fixed.len() == d {
            break;
        }
    }
    if kept.is_empty() {
        return DMatrix::zeros(d, 0);
    }
    DMatrix::from_columns(&kept)
}

fn orthonormalize(mut v: DVector<f64>, basis: &[DVector<f64>]) -> Option<DVector<f64>> {
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&v);
            v.axpy(-c, b, 1.0);
        }
    }
    let n = v.norm();
    if n < 1e-10 {
        None
    } else {
        Some(v / n)
    }
}

/// Eigenvalues of a symmetric matrix, ascending, with matching eigenvectors
/// as columns.
pub fn sorted_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors =
        DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (values, vectors)
}

/// Least eigenvalue of a symmetric matrix (`+inf` for an empty matrix).
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    sorted_eigen(m).0.first().copied().unwrap_or(f64::INFINITY)
}

/// Numerical rank: singular values above `rel_tol * max(1, sigma_max)`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let cut = rel_tol * smax.max(1.0);
    sv.iter().filter(|&&s| s > cut).count()
}

/// `Q^T A Q`.
pub fn restrict(a: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    q.transpose() * a * q
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn complement_of_constants() {
        let ones = DVector::from_element(4, 1.0);
        let q = complement_basis(4, std::slice::from_ref(&ones));
        assert_eq!(q.ncols(), 3);
        assert_abs_diff_eq!((q.transpose() * &q), DMatrix::identity(3, 3), epsilon = 1e-14);
        assert_abs_diff_eq!((q.transpose() * ones).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn complement_without_trivial_is_identity_span() {
        let q = complement_basis(2, &[]);
        assert_abs_diff_eq!(q, DMatrix::identity(2, 2), epsilon = 0.0);
    }

    #[test]
    fn eigen_sorted_and_rank() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = sorted_eigen(&m);
        assert_abs_diff_eq!(vals[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 3.0, epsilon = 1e-14);
        let v0 = vecs.column(0);
        assert_abs_diff_eq!((&m * v0 - v0 * 1.0).norm(), 0.0, epsilon = 1e-14);
        let r = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        assert_eq!(numerical_rank(&r, 1e-9), 1);
        assert_eq!(numerical_rank(&DMatrix::zeros(3, 2), 1e-9), 0);
    }
}
