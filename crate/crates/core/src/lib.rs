//! Decide whether X causally drives Y or both are driven by an unobserved
//! confounder, by comparing code lengths of two Bayesian model classes: a
//! linear-Gaussian regression of Y on X, and a probabilistic-PCA factor model
//! of the joint. The shorter code wins; the normalized gap is a signed
//! confidence in [-1, 1] with positive values favoring causality.
//!
//! The crate also ships the synthetic benchmark generators, the
//! decision-rate/AUDR evaluation kit, and readers for cause-effect pair
//! corpora.
//!
//! ```no_run
//! use coca_core::{infer, GenKind, GenSpec, ModelConfig, SourceDistribution};
//!
//! let spec = GenSpec {
//!     kind: GenKind::Confounded,
//!     dim_x: 6,
//!     dim_z: 3,
//!     n: 500,
//!     p_x: SourceDistribution::Normal,
//!     p_z: SourceDistribution::Normal,
//!     p_w: SourceDistribution::Normal,
//!     seed: 1,
//! };
//! let pair = spec.generate().unwrap();
//! let verdict = infer(&pair, &ModelConfig::default(), 7).unwrap();
//! println!("{} (C = {:.3})", verdict.label, verdict.confidence);
//! ```

pub mod dataio;
pub mod dataset;
pub mod decision;
pub mod error;
pub mod evalkit;
pub mod models;
pub mod numerics;
pub mod synthgen;

pub use dataset::DatasetPair;
pub use decision::{confidence, infer, Label, Verdict};
pub use error::{Error, Result};
pub use evalkit::{
    audr_grid, binomial_band, decision_rate_curve, infer_labeled, run_benchmark, AudrGrid,
    BenchSpec, DrCurve, LabeledVerdict, Truth,
};
pub use models::{CodeLengths, ModelConfig, ViSettings};
pub use numerics::{RngStream, SourceDistribution};
pub use synthgen::{gen_causal, gen_confounded, GenKind, GenSpec, SourcePolicy};
