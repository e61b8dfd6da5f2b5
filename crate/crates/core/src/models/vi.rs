//! Mean-field variational inference with reparameterized stochastic
//! gradients and an adaptive first-order optimizer.
//!
//! A model exposes the log-joint of data and latents together with its
//! gradient; the engine maximizes the ELBO
//!
//! ```text
//!   E_q[ log p(data, theta) ] + H(q),   q = N(mean, diag(exp(log_sd))^2)
//! ```
//!
//! using `theta = mean + exp(log_sd) * eps`. The entropy and its gradient are
//! analytic, so only the log-joint is sampled.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::models::ViSettings;
use crate::numerics::rng::fill_standard_normal;

/// Log-joint objective over a flat latent vector.
pub trait ElboModel {
    /// Number of latent coordinates.
    fn latent_dim(&self) -> usize;

    /// Returns `log p(data, theta)` and writes its gradient into `grad`.
    fn log_joint_grad(&self, theta: &[f64], grad: &mut [f64]) -> f64;

    /// `log p(data, theta)` alone. The default recomputes through the
    /// gradient path; models may override with a cheaper route.
    fn log_joint(&self, theta: &[f64]) -> f64 {
        let mut grad = vec![0.0; theta.len()];
        self.log_joint_grad(theta, &mut grad)
    }
}

/// A diagonal Gaussian over the latent vector, parameterized by mean and
/// log standard deviation per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanField {
    pub mean: Vec<f64>,
    pub log_sd: Vec<f64>,
}

impl MeanField {
    pub fn new(mean: Vec<f64>, log_sd: Vec<f64>) -> Self {
        assert_eq!(mean.len(), log_sd.len());
        MeanField { mean, log_sd }
    }

    /// All means at the given value, all log sds at `log_sd`.
    pub fn constant(dim: usize, mean: f64, log_sd: f64) -> Self {
        MeanField {
            mean: vec![mean; dim],
            log_sd: vec![log_sd; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Entropy of the diagonal Gaussian, in nats.
    pub fn entropy(&self) -> f64 {
        let half_ln_2pi_e = 0.5 * (crate::numerics::LN_2PI + 1.0);
        self.log_sd.len() as f64 * half_ln_2pi_e + self.log_sd.iter().sum::<f64>()
    }

    /// theta = mean + exp(log_sd) * eps
    pub fn transform(&self, eps: &[f64], theta: &mut [f64]) {
        for i in 0..self.mean.len() {
            theta[i] = self.mean[i] + self.log_sd[i].exp() * eps[i];
        }
    }
}

/// Windowed ELBO averages recorded during a fit.
#[derive(Debug, Clone)]
pub struct ElboTrace {
    /// Average ELBO estimate per convergence window, in order.
    pub window_averages: Vec<f64>,
    /// Steps actually run.
    pub steps: usize,
    /// Whether the windowed relative-change test fired before `max_steps`.
    pub converged: bool,
}

/// ELBO estimate under fixed reparameterization noise.
///
/// `noise` holds `S` blocks of `dim` standard-normal draws; the estimate is
/// the sample average of the log-joint at the transformed points plus the
/// exact entropy. Deterministic in `(q, noise)`, which makes it suitable for
/// finite-difference checks of [`elbo_grad_with_noise`].
pub fn elbo_with_noise<M: ElboModel + ?Sized>(model: &M, q: &MeanField, noise: &[f64]) -> f64 {
    let dim = q.dim();
    assert!(!noise.is_empty() && noise.len() % dim == 0);
    let samples = noise.len() / dim;
    let mut theta = vec![0.0; dim];
    let mut acc = 0.0;
    for s in 0..samples {
        q.transform(&noise[s * dim..(s + 1) * dim], &mut theta);
        acc += model.log_joint(&theta);
    }
    acc / samples as f64 + q.entropy()
}

/// ELBO estimate and its analytic gradient under fixed noise.
///
/// Returns `(elbo, d/d mean, d/d log_sd)`.
pub fn elbo_grad_with_noise<M: ElboModel + ?Sized>(
    model: &M,
    q: &MeanField,
    noise: &[f64],
) -> (f64, Vec<f64>, Vec<f64>) {
    let dim = q.dim();
    assert!(!noise.is_empty() && noise.len() % dim == 0);
    let samples = noise.len() / dim;
    let mut theta = vec![0.0; dim];
    let mut grad = vec![0.0; dim];
    let mut g_mean = vec![0.0; dim];
    let mut g_log_sd = vec![0.0; dim];
    let mut acc = 0.0;
    for s in 0..samples {
        let eps = &noise[s * dim..(s + 1) * dim];
        q.transform(eps, &mut theta);
        acc += model.log_joint_grad(&theta, &mut grad);
        for i in 0..dim {
            g_mean[i] += grad[i];
            g_log_sd[i] += grad[i] * q.log_sd[i].exp() * eps[i];
        }
    }
    let inv = 1.0 / samples as f64;
    for i in 0..dim {
        g_mean[i] *= inv;
        g_log_sd[i] = g_log_sd[i] * inv + 1.0; // + d entropy / d log_sd
    }
    (acc * inv + q.entropy(), g_mean, g_log_sd)
}

/// Maximize the ELBO from `init`, reporting the fitted posterior and trace.
///
/// Terminates at `max_steps` or when the relative change between consecutive
/// windowed-average ELBO values falls below `rel_tol`. A non-finite ELBO
/// estimate aborts with [`Error::Divergence`].
pub fn maximize_elbo<M: ElboModel + ?Sized>(
    model: &M,
    init: MeanField,
    settings: &ViSettings,
    rng: &mut ChaCha8Rng,
) -> Result<(MeanField, ElboTrace)> {
    let dim = model.latent_dim();
    assert_eq!(init.dim(), dim);
    let mut q = init;
    let mut adam = Adam::new(2 * dim, settings.step_size);
    let mut noise = vec![0.0; settings.mc_grad_samples * dim];

    let mut trace = ElboTrace {
        window_averages: Vec::new(),
        steps: 0,
        converged: false,
    };
    let mut window_sum = 0.0;
    // iterate averaging over the current window damps the optimizer's
    // stationary noise; the returned posterior is the average over the last
    // completed window
    let mut param_sum = vec![0.0; 2 * dim];
    let mut averaged: Option<MeanField> = None;

    for step in 0..settings.max_steps {
        fill_standard_normal(rng, &mut noise);
        let (elbo, g_mean, g_log_sd) = elbo_grad_with_noise(model, &q, &noise);
        if !elbo.is_finite() {
            return Err(Error::Divergence { step });
        }
        adam.ascend(&mut q.mean, &g_mean, 0);
        adam.ascend(&mut q.log_sd, &g_log_sd, dim);
        adam.step += 1;
        window_sum += elbo;
        for i in 0..dim {
            param_sum[i] += q.mean[i];
            param_sum[dim + i] += q.log_sd[i];
        }
        trace.steps = step + 1;

        if (step + 1) % settings.convergence_window == 0 {
            let win = settings.convergence_window as f64;
            let avg = window_sum / win;
            window_sum = 0.0;
            averaged = Some(MeanField::new(
                param_sum[..dim].iter().map(|s| s / win).collect(),
                param_sum[dim..].iter().map(|s| s / win).collect(),
            ));
            param_sum.iter_mut().for_each(|s| *s = 0.0);
            if let Some(&prev) = trace.window_averages.last() {
                let rel = (avg - prev).abs() / prev.abs().max(1.0);
                trace.window_averages.push(avg);
                if rel < settings.rel_tol {
                    trace.converged = true;
                    break;
                }
            } else {
                trace.window_averages.push(avg);
            }
        }
    }
    Ok((averaged.unwrap_or(q), trace))
}

/// Adam over a flat parameter vector, split into slices by offset.
struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    step_size: f64,
    step: usize,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(dim: usize, step_size: f64) -> Self {
        Adam {
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            step_size,
            step: 0,
        }
    }

    /// Gradient-ascent update of `params` using moments stored at `offset`.
    fn ascend(&mut self, params: &mut [f64], grad: &[f64], offset: usize) {
        let t = (self.step + 1) as f64;
        let bc1 = 1.0 - Self::BETA1.powf(t);
        let bc2 = 1.0 - Self::BETA2.powf(t);
        for i in 0..params.len() {
            let k = offset + i;
            self.m[k] = Self::BETA1 * self.m[k] + (1.0 - Self::BETA1) * grad[i];
            self.v[k] = Self::BETA2 * self.v[k] + (1.0 - Self::BETA2) * grad[i] * grad[i];
            let m_hat = self.m[k] / bc1;
            let v_hat = self.v[k] / bc2;
            params[i] += self.step_size * m_hat / (v_hat.sqrt() + Self::EPS);
        }
    }
}
