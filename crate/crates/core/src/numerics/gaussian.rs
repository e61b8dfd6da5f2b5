//! Gaussian log-densities in nats.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::linalg::{cholesky, forward_substitute, logdet_from_cholesky};

pub const LN_2PI: f64 = 1.8378770664093453;

/// log N(x; mean, cov) via Cholesky factorization.
pub fn mvn_logpdf(x: &DVector<f64>, mean: &DVector<f64>, cov: &DMatrix<f64>) -> Result<f64> {
    let d = x.len();
    if mean.len() != d || cov.nrows() != d || cov.ncols() != d {
        return Err(Error::Dimension(format!(
            "mvn_logpdf: x has {d} entries, mean {}, cov {}x{}",
            mean.len(),
            cov.nrows(),
            cov.ncols()
        )));
    }
    let l = cholesky(cov)?;
    let z = forward_substitute(&l, &(x - mean));
    let logdet = logdet_from_cholesky(&l);
    Ok(-0.5 * (d as f64 * LN_2PI + logdet + z.norm_squared()))
}

/// Negative log-likelihood of `data` under entrywise N(mean, sigma^2), summed
/// over all entries.
pub fn iso_gaussian_nll(data: &DMatrix<f64>, mean: &DMatrix<f64>, sigma: f64) -> Result<f64> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "iso_gaussian_nll: sigma must be positive, got {sigma}"
        )));
    }
    if data.shape() != mean.shape() {
        return Err(Error::Dimension(format!(
            "iso_gaussian_nll: data is {:?}, mean is {:?}",
            data.shape(),
            mean.shape()
        )));
    }
    let count = data.len() as f64;
    let inv2 = 0.5 / (sigma * sigma);
    let mut ssq = 0.0;
    for (x, m) in data.iter().zip(mean.iter()) {
        let r = x - m;
        ssq += r * r;
    }
    Ok(count * (0.5 * LN_2PI + sigma.ln()) + inv2 * ssq)
}

/// Code length of a matrix under the fixed standard normal, entry by entry.
/// This is `iso_gaussian_nll(data, 0, 1)` without allocating the zero mean.
pub fn standard_normal_code_length(data: &DMatrix<f64>) -> f64 {
    let ssq: f64 = data.iter().map(|x| x * x).sum();
    data.len() as f64 * 0.5 * LN_2PI + 0.5 * ssq
}

/// Numerically safe log of the mean of exponentials: log(sum(exp(v))/n).
pub fn log_mean_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max; // all -inf, or a NaN/inf made it through
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + (sum / values.len() as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::RngStream;
    use rand::Rng;

    /// Determinant by cofactor expansion; independent of the Cholesky path.
    fn det_cofactor(a: &DMatrix<f64>) -> f64 {
        let n = a.nrows();
        if n == 0 {
            return 1.0;
        }
        if n == 1 {
            return a[(0, 0)];
        }
        let mut det = 0.0;
        for j in 0..n {
            let minor = a.clone().remove_row(0).remove_column(j);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            det += sign * a[(0, j)] * det_cofactor(&minor);
        }
        det
    }

    /// Inverse via the adjugate; independent oracle for small matrices.
    fn inverse_adjugate(a: &DMatrix<f64>) -> DMatrix<f64> {
        let n = a.nrows();
        let det = det_cofactor(a);
        let mut inv = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = a.clone().remove_row(j).remove_column(i);
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                inv[(i, j)] = sign * det_cofactor(&minor) / det;
            }
        }
        inv
    }

    fn mvn_logpdf_bruteforce(x: &DVector<f64>, mean: &DVector<f64>, cov: &DMatrix<f64>) -> f64 {
        let d = x.len() as f64;
        let inv = inverse_adjugate(cov);
        let det = det_cofactor(cov);
        let r = x - mean;
        -0.5 * (d * LN_2PI + det.ln() + (&inv * &r).dot(&r))
    }

    #[test]
    fn standard_normal_at_mode() {
        let x = DVector::from_vec(vec![0.0]);
        let cov = DMatrix::from_vec(1, 1, vec![1.0]);
        let lp = mvn_logpdf(&x, &x, &cov).unwrap();
        assert!((lp - (-0.5 * LN_2PI)).abs() < 1e-12); // -0.91894
    }

    #[test]
    fn bivariate_standard_normal() {
        let x = DVector::from_vec(vec![0.0, 0.0]);
        let cov = DMatrix::identity(2, 2);
        let lp = mvn_logpdf(&x, &x, &cov).unwrap();
        assert!((lp - (-LN_2PI)).abs() < 1e-12); // -1.83788
    }

    #[test]
    fn matches_bruteforce_oracle() {
        let mut rng = RngStream::new(31).rng();
        for _ in 0..100 {
            let d = 1 + rng.gen_range(0..5usize);
            let b = DMatrix::from_fn(d, d, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
            let cov = &b * b.transpose() + DMatrix::identity(d, d) * 0.3;
            let x = DVector::from_fn(d, |_, _| rng.gen::<f64>() * 4.0 - 2.0);
            let mean = DVector::from_fn(d, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
            let fast = mvn_logpdf(&x, &mean, &cov).unwrap();
            let slow = mvn_logpdf_bruteforce(&x, &mean, &cov);
            let rel = (fast - slow).abs() / slow.abs().max(1e-300);
            assert!(rel < 1e-10, "relative error {rel} at d={d}");
        }
    }

    #[test]
    fn rejects_indefinite_cov() {
        let x = DVector::from_vec(vec![0.0, 0.0]);
        let cov = DMatrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 1.0]);
        match mvn_logpdf(&x, &x, &cov) {
            Err(Error::NotPositiveDefinite { pivot }) => assert_eq!(pivot, 1),
            other => panic!("expected factorization error, got {other:?}"),
        }
    }

    #[test]
    fn nll_zero_residuals() {
        let data = DMatrix::from_element(2, 3, 1.5);
        let nll = iso_gaussian_nll(&data, &data, 1.0).unwrap();
        assert!((nll - 6.0 * 0.5 * LN_2PI).abs() < 1e-12); // 5.51365
    }

    #[test]
    fn nll_single_unit_residual() {
        let data = DMatrix::from_element(1, 1, 1.0);
        let mean = DMatrix::from_element(1, 1, 0.0);
        let nll = iso_gaussian_nll(&data, &mean, 1.0).unwrap();
        assert!((nll - (0.5 * LN_2PI + 0.5)).abs() < 1e-12); // 1.41894
    }

    #[test]
    fn nll_composes_per_entry_logpdfs() {
        let mut rng = RngStream::new(77).rng();
        let data = DMatrix::from_fn(5, 3, |_, _| rng.gen::<f64>() * 4.0 - 2.0);
        let mean = DMatrix::from_fn(5, 3, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
        let sigma = 0.7;
        let nll = iso_gaussian_nll(&data, &mean, sigma).unwrap();
        let cov = DMatrix::from_vec(1, 1, vec![sigma * sigma]);
        let mut acc = 0.0;
        for (x, m) in data.iter().zip(mean.iter()) {
            acc -= mvn_logpdf(
                &DVector::from_vec(vec![*x]),
                &DVector::from_vec(vec![*m]),
                &cov,
            )
            .unwrap();
        }
        assert!((nll - acc).abs() < 1e-12);
    }

    #[test]
    fn nll_permutation_invariant() {
        let mut rng = RngStream::new(78).rng();
        let data = DMatrix::from_fn(4, 4, |_, _| rng.gen::<f64>());
        let mean = DMatrix::from_fn(4, 4, |_, _| rng.gen::<f64>());
        let base = iso_gaussian_nll(&data, &mean, 1.3).unwrap();
        // joint permutation: reverse entry order in both
        let rd: Vec<f64> = data.iter().rev().copied().collect();
        let rm: Vec<f64> = mean.iter().rev().copied().collect();
        let data_r = DMatrix::from_vec(4, 4, rd);
        let mean_r = DMatrix::from_vec(4, 4, rm);
        let perm = iso_gaussian_nll(&data_r, &mean_r, 1.3).unwrap();
        assert!((base - perm).abs() < 1e-12);
    }

    #[test]
    fn nll_rejects_bad_sigma() {
        let data = DMatrix::zeros(1, 1);
        assert!(matches!(
            iso_gaussian_nll(&data, &data, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            iso_gaussian_nll(&data, &data, -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn log_mean_exp_stability() {
        let vals = vec![-1000.0, -1000.0, -1000.0];
        let lme = log_mean_exp(&vals);
        assert!((lme - (-1000.0)).abs() < 1e-12);
        let vals = vec![0.0, (2.0f64).ln()];
        assert!((log_mean_exp(&vals) - 1.5f64.ln()).abs() < 1e-12);
    }
}
