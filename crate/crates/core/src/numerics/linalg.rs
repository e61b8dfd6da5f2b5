//! SPD Cholesky and sorted symmetric eigendecomposition.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
///
/// Reports the failing pivot index when the matrix is not positive definite.
pub fn cholesky(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension(format!(
            "cholesky needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / dj;
        }
    }
    Ok(l)
}

/// Solve L z = b for lower-triangular L.
pub fn forward_substitute(l: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = l.nrows();
    let mut z = DVector::zeros(n);
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * z[k];
        }
        z[i] = s / l[(i, i)];
    }
    z
}

/// Solve L L^T x = b given the lower factor L.
pub fn cholesky_solve(l: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = l.nrows();
    let z = forward_substitute(l, b);
    let mut x = DVector::zeros(n);
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Log-determinant of the factored matrix, from the factor diagonal.
pub fn logdet_from_cholesky(l: &DMatrix<f64>) -> f64 {
    2.0 * l.diagonal().iter().map(|d| d.ln()).sum::<f64>()
}

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
/// Column `i` of the returned matrix is the eigenvector for eigenvalue `i`.
pub fn symmetric_eigen_sorted(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = a.clone().symmetric_eigen();
    let d = a.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(d, d);
    for (new, &old) in order.iter().enumerate() {
        vectors.set_column(new, &eig.eigenvectors.column(old));
    }
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::RngStream;
    use rand::Rng;

    fn random_spd(dim: usize, rng: &mut rand_chacha::ChaCha8Rng) -> DMatrix<f64> {
        let b = DMatrix::from_fn(dim, dim, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
        &b * b.transpose() + DMatrix::identity(dim, dim) * 0.5
    }

    #[test]
    fn cholesky_round_trip() {
        let mut rng = RngStream::new(101).rng();
        for _ in 0..50 {
            let dim = 1 + rng.gen_range(0..8usize);
            let a = random_spd(dim, &mut rng);
            let l = cholesky(&a).unwrap();
            let back = &l * l.transpose();
            let rel = (&back - &a).norm() / a.norm();
            assert!(rel < 1e-10, "round-trip error {rel} at dim {dim}");
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        match cholesky(&a) {
            Err(Error::NotPositiveDefinite { pivot }) => assert_eq!(pivot, 1),
            other => panic!("expected pivot error, got {other:?}"),
        }
    }

    #[test]
    fn cholesky_solve_inverts() {
        let mut rng = RngStream::new(55).rng();
        let a = random_spd(5, &mut rng);
        let l = cholesky(&a).unwrap();
        let b = DVector::from_fn(5, |_, _| rng.gen::<f64>());
        let x = cholesky_solve(&l, &b);
        assert!((&a * &x - &b).norm() < 1e-10);
    }

    #[test]
    fn eigen_sorted_descending() {
        let mut rng = RngStream::new(7).rng();
        let a = random_spd(6, &mut rng);
        let (vals, vecs) = symmetric_eigen_sorted(&a);
        for w in vals.windows(2) {
            assert!(w[0] >= w[1]);
        }
        // reconstruction
        let d = DMatrix::from_diagonal(&DVector::from_vec(vals.clone()));
        let back = &vecs * d * vecs.transpose();
        assert!((&back - &a).norm() / a.norm() < 1e-10);
    }
}
