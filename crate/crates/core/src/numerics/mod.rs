//! Deterministic sampling, Gaussian densities, SPD factorizations, and
//! standardization. Everything here is pure given its inputs and safe to call
//! from any number of workers.

pub mod gaussian;
pub mod linalg;
pub mod rng;
pub mod standardize;

pub use gaussian::{iso_gaussian_nll, log_mean_exp, mvn_logpdf, standard_normal_code_length, LN_2PI};
pub use linalg::{cholesky, forward_substitute, logdet_from_cholesky, symmetric_eigen_sorted};
pub use rng::{sample_source, RngStream, SourceDistribution};
pub use standardize::{standardize, Standardization};
