//! Column-wise z-scoring applied to every dataset before scoring, so the unit
//! prior scales are meaningful regardless of the raw measurement units.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Per-column mean and scale recovered during standardization.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardization {
    pub means: Vec<f64>,
    /// Sample standard deviations (denominator n-1); all strictly positive.
    pub scales: Vec<f64>,
}

/// Z-score every column: subtract the column mean, divide by the sample
/// standard deviation. Errors on constant columns, naming the column.
pub fn standardize(data: &DMatrix<f64>) -> Result<(DMatrix<f64>, Standardization)> {
    let (n, m) = data.shape();
    if n < 3 {
        return Err(Error::DegenerateInput(format!(
            "standardize needs at least 3 rows, got {n}"
        )));
    }
    let mut out = data.clone();
    let mut means = Vec::with_capacity(m);
    let mut scales = Vec::with_capacity(m);
    for j in 0..m {
        let col = data.column(j);
        if col.iter().any(|x| !x.is_finite()) {
            return Err(Error::DegenerateInput(format!(
                "column {} contains a non-finite value",
                j + 1
            )));
        }
        let mean = col.sum() / n as f64;
        let ssq: f64 = col.iter().map(|x| (x - mean) * (x - mean)).sum();
        let sd = (ssq / (n as f64 - 1.0)).sqrt();
        if sd == 0.0 {
            return Err(Error::DegenerateInput(format!(
                "column {} is constant and cannot be standardized",
                j + 1
            )));
        }
        for i in 0..n {
            out[(i, j)] = (data[(i, j)] - mean) / sd;
        }
        means.push(mean);
        scales.push(sd);
    }
    Ok((out, Standardization { means, scales }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_column() {
        let data = DMatrix::from_vec(3, 1, vec![1.0, 2.0, 3.0]);
        let (z, st) = standardize(&data).unwrap();
        assert!((z[(0, 0)] + 1.0).abs() < 1e-12);
        assert!(z[(1, 0)].abs() < 1e-12);
        assert!((z[(2, 0)] - 1.0).abs() < 1e-12);
        assert!((st.means[0] - 2.0).abs() < 1e-12);
        assert!((st.scales[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_column_is_rejected() {
        let data = DMatrix::from_vec(3, 2, vec![1.0, 2.0, 3.0, 5.0, 5.0, 5.0]);
        match standardize(&data) {
            Err(Error::DegenerateInput(msg)) => assert!(msg.contains("column 2"), "{msg}"),
            other => panic!("expected degenerate-input error, got {other:?}"),
        }
    }

    #[test]
    fn output_moments() {
        let mut rng = crate::numerics::rng::RngStream::new(2).rng();
        use rand::Rng;
        let data = DMatrix::from_fn(40, 3, |_, _| rng.gen::<f64>() * 10.0 - 3.0);
        let (z, _) = standardize(&data).unwrap();
        let n = 40.0;
        for j in 0..3 {
            let col = z.column(j);
            let mean = col.sum() / n;
            let sd = (col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt();
            assert!(mean.abs() < 1e-10);
            assert!((sd - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn idempotent() {
        let mut rng = crate::numerics::rng::RngStream::new(3).rng();
        use rand::Rng;
        let data = DMatrix::from_fn(25, 2, |_, _| rng.gen::<f64>() * 4.0);
        let (once, _) = standardize(&data).unwrap();
        let (twice, _) = standardize(&once).unwrap();
        for (a, b) in once.iter().zip(twice.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_rows() {
        let data = DMatrix::from_vec(2, 1, vec![1.0, 2.0]);
        assert!(matches!(
            standardize(&data),
            Err(Error::DegenerateInput(_))
        ));
    }
}
