//! Model and optimizer configuration.

use crate::error::{Error, Result};

/// Optimizer settings for the variational fits.
#[derive(Debug, Clone, PartialEq)]
pub struct ViSettings {
    /// Base step size of the adaptive gradient optimizer.
    pub step_size: f64,
    /// Hard cap on optimization steps.
    pub max_steps: usize,
    /// Reparameterized gradient samples averaged per step.
    pub mc_grad_samples: usize,
    /// Steps per convergence window.
    pub convergence_window: usize,
    /// Stop when the windowed-average ELBO changes by less than this,
    /// relative to its magnitude.
    pub rel_tol: f64,
}

impl Default for ViSettings {
    fn default() -> Self {
        ViSettings {
            step_size: 0.01,
            max_steps: 10_000,
            mc_grad_samples: 8,
            convergence_window: 100,
            rel_tol: 1e-4,
        }
    }
}

/// Priors, latent dimension, and Monte-Carlo budget for both model classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    /// Prior scale of the latent factors.
    pub sigma_z: f64,
    /// Prior scale of the loading and regression weights.
    pub sigma_w: f64,
    /// Dimension of the inferred latent factor.
    pub latent_dim: usize,
    /// Samples used to estimate each code length.
    pub mc_samples: usize,
    pub vi: ViSettings,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            sigma_z: 1.0,
            sigma_w: 1.0,
            latent_dim: 1,
            mc_samples: 500,
            vi: ViSettings::default(),
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sigma_z <= 0.0 || self.sigma_w <= 0.0 {
            return Err(Error::Domain(format!(
                "prior scales must be positive (sigma_z={}, sigma_w={})",
                self.sigma_z, self.sigma_w
            )));
        }
        if self.latent_dim < 1 {
            return Err(Error::Domain("latent_dim must be at least 1".into()));
        }
        if self.mc_samples < 1 {
            return Err(Error::Domain("mc_samples must be at least 1".into()));
        }
        if self.vi.step_size <= 0.0 || self.vi.rel_tol <= 0.0 {
            return Err(Error::Domain(
                "step_size and rel_tol must be positive".into(),
            ));
        }
        if self.vi.mc_grad_samples < 1 || self.vi.convergence_window < 1 {
            return Err(Error::Domain(
                "mc_grad_samples and convergence_window must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// The two code lengths in nats. `l_causal` pays for X under the fixed
/// standard normal plus Y under the regression; `l_confounded` pays for the
/// joint under the factor model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeLengths {
    pub l_causal: f64,
    pub l_confounded: f64,
}
