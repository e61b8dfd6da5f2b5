//! The two competing model classes and their code-length estimators.

pub mod causal;
pub mod config;
pub mod ppca;
pub mod vi;

pub use causal::{
    fit_causal, ridge_weights, score_causal_closed, score_causal_mc, score_causal_mc_prior,
    CausalObjective, CausalPosterior,
};
pub use config::{CodeLengths, ModelConfig, ViSettings};
pub use ppca::{
    fit_ppca, ppca_closed_mle, ppca_mle_from_cov, score_confounded_mc, PpcaObjective,
    PpcaPosterior,
};
pub use vi::{elbo_grad_with_noise, elbo_with_noise, maximize_elbo, ElboModel, ElboTrace, MeanField};
