use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = if m.nrows() == 2 {
        // closed form keeps the hot two-level paths (discord) allocation-light
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = m[(0, 1)];
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        vec![mean + rad, mean - rad]
    } else {
        SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect()
    };
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// `W` with `W W† = m` for a Hermitian positive semidefinite `m`: the
/// eigenvectors scaled by the roots of their (clamped) eigenvalues.
pub(crate) fn psd_factor(m: &DMatrix<C64>) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(m.clone());
    let mut w = eig.eigenvectors;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        w.column_mut(k).scale_mut(lam.max(0.0).sqrt());
    }
    w
}

pub(crate) fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

pub(crate) fn sigma_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO])
}

#[cfg(test)]
pub(crate) fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
