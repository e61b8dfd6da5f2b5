//! The (X, Y) sample pair that every operation consumes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::standardize::{standardize, Standardization};

/// An n×m covariate matrix with an n-vector response, plus bookkeeping used
/// by the benchmark harness.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetPair {
    pub name: String,
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    /// Benchmark weight; 1.0 unless a corpus definition says otherwise.
    pub weight: f64,
}

impl DatasetPair {
    pub fn new(name: impl Into<String>, x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        Self::with_weight(name, x, y, 1.0)
    }

    pub fn with_weight(
        name: impl Into<String>,
        x: DMatrix<f64>,
        y: DVector<f64>,
        weight: f64,
    ) -> Result<Self> {
        let name = name.into();
        if name.contains(',') || name.contains('\n') || name.contains('\r') {
            return Err(Error::Domain(format!(
                "dataset name '{name}' may not contain commas or line breaks"
            )));
        }
        let (n, m) = x.shape();
        if n < 3 {
            return Err(Error::DegenerateInput(format!(
                "dataset '{name}' has {n} rows; at least 3 required"
            )));
        }
        if m < 1 {
            return Err(Error::DegenerateInput(format!(
                "dataset '{name}' has no covariate columns"
            )));
        }
        if y.len() != n {
            return Err(Error::Dimension(format!(
                "dataset '{name}': X has {n} rows but Y has {} entries",
                y.len()
            )));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::DegenerateInput(format!(
                "dataset '{name}' contains non-finite values"
            )));
        }
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::Domain(format!(
                "dataset '{name}': weight must be positive, got {weight}"
            )));
        }
        Ok(DatasetPair { name, x, y, weight })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn dim_x(&self) -> usize {
        self.x.ncols()
    }

    /// The n×(m+1) matrix [X | Y].
    pub fn joint(&self) -> DMatrix<f64> {
        let (n, m) = self.x.shape();
        let mut j = DMatrix::zeros(n, m + 1);
        j.view_mut((0, 0), (n, m)).copy_from(&self.x);
        j.set_column(m, &self.y);
        j
    }

    /// Z-score all columns of [X | Y] jointly; Y is the last column.
    pub fn standardize_joint(&self) -> Result<(DatasetPair, Standardization)> {
        let (z, st) = standardize(&self.joint()).map_err(|e| e.in_dataset(&self.name))?;
        let m = self.dim_x();
        let x = z.columns(0, m).into_owned();
        let y = DVector::from_column_slice(z.column(m).as_slice());
        Ok((
            DatasetPair {
                name: self.name.clone(),
                x,
                y,
                weight: self.weight,
            },
            st,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let x = DMatrix::from_vec(3, 1, vec![1.0, 2.0, 3.0]);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        assert!(DatasetPair::new("ok", x.clone(), y.clone()).is_ok());
        assert!(DatasetPair::new("bad,name", x.clone(), y.clone()).is_err());
        assert!(DatasetPair::with_weight("w", x.clone(), y.clone(), 0.0).is_err());
        let y_short = DVector::from_vec(vec![1.0, 2.0]);
        assert!(DatasetPair::new("short", x.clone(), y_short).is_err());
        let x_nan = DMatrix::from_vec(3, 1, vec![1.0, f64::NAN, 3.0]);
        assert!(DatasetPair::new("nan", x_nan, y).is_err());
    }

    #[test]
    fn joint_layout() {
        let x = DMatrix::from_vec(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let y = DVector::from_vec(vec![7.0, 8.0, 9.0]);
        let pair = DatasetPair::new("j", x, y).unwrap();
        let j = pair.joint();
        assert_eq!(j.shape(), (3, 3));
        assert_eq!(j[(0, 2)], 7.0);
        assert_eq!(j[(2, 1)], 6.0);
    }

    #[test]
    fn standardize_joint_centers_all_columns() {
        let x = DMatrix::from_vec(4, 1, vec![1.0, 2.0, 3.0, 10.0]);
        let y = DVector::from_vec(vec![5.0, 6.0, 9.0, 20.0]);
        let pair = DatasetPair::new("s", x, y).unwrap();
        let (std, st) = pair.standardize_joint().unwrap();
        assert_eq!(st.means.len(), 2);
        assert!(std.x.column(0).sum().abs() < 1e-10);
        assert!(std.y.sum().abs() < 1e-10);
    }

    #[test]
    fn degenerate_errors_carry_dataset_name() {
        let x = DMatrix::from_vec(3, 1, vec![5.0, 5.0, 5.0]);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let pair = DatasetPair::new("flat", x, y).unwrap();
        match pair.standardize_joint() {
            Err(Error::InDataset { name, .. }) => assert_eq!(name, "flat"),
            other => panic!("expected dataset-tagged error, got {other:?}"),
        }
    }
}
