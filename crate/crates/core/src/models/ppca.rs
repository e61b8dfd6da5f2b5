//! The confounder model class: every column of the joint [X | Y] is a linear
//! readout of a shared latent factor, i.e. probabilistic PCA.
//!
//! Latent vector layout: `[W row-major (k*d), Z row-major (n*k), t]` with
//! `t = log sigma_x`, for an n×d data matrix and k factors.

use nalgebra::DMatrix;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::models::vi::{maximize_elbo, ElboModel, ElboTrace, MeanField};
use crate::models::ModelConfig;
use crate::numerics::gaussian::{log_mean_exp, LN_2PI};
use crate::numerics::linalg::{cholesky, cholesky_solve, logdet_from_cholesky, symmetric_eigen_sorted};
use crate::numerics::rng::RngStream;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Mean-field Gaussian posterior over loadings, per-sample factors, and the
/// log noise scale.
#[derive(Debug, Clone, PartialEq)]
pub struct PpcaPosterior {
    /// k×(m+1) loading means (one row per factor).
    pub loading_mean: DMatrix<f64>,
    pub loading_log_sd: DMatrix<f64>,
    /// n×k factor means (one row per sample).
    pub factor_mean: DMatrix<f64>,
    pub factor_log_sd: DMatrix<f64>,
    pub log_sigma_x_mean: f64,
    pub log_sigma_x_log_sd: f64,
}

impl PpcaPosterior {
    fn from_mean_field(q: &MeanField, n: usize, k: usize, d: usize) -> Self {
        let kd = k * d;
        PpcaPosterior {
            loading_mean: DMatrix::from_row_slice(k, d, &q.mean[..kd]),
            loading_log_sd: DMatrix::from_row_slice(k, d, &q.log_sd[..kd]),
            factor_mean: DMatrix::from_row_slice(n, k, &q.mean[kd..kd + n * k]),
            factor_log_sd: DMatrix::from_row_slice(n, k, &q.log_sd[kd..kd + n * k]),
            log_sigma_x_mean: q.mean[kd + n * k],
            log_sigma_x_log_sd: q.log_sd[kd + n * k],
        }
    }
}

/// ELBO objective for the factor model on a standardized joint matrix.
pub struct PpcaObjective<'a> {
    data: &'a DMatrix<f64>,
    k: usize,
    sigma_z: f64,
    sigma_w: f64,
}

impl<'a> PpcaObjective<'a> {
    pub fn new(data: &'a DMatrix<f64>, k: usize, sigma_z: f64, sigma_w: f64) -> Self {
        PpcaObjective {
            data,
            k,
            sigma_z,
            sigma_w,
        }
    }
}

impl ElboModel for PpcaObjective<'_> {
    fn latent_dim(&self) -> usize {
        let (n, d) = self.data.shape();
        self.k * d + n * self.k + 1
    }

    fn log_joint_grad(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        let (n, d) = self.data.shape();
        let k = self.k;
        let kd = k * d;
        let w = DMatrix::from_row_slice(k, d, &theta[..kd]);
        let z = DMatrix::from_row_slice(n, k, &theta[kd..kd + n * k]);
        let t = theta[kd + n * k];
        let prec = (-2.0 * t).exp();

        let resid = self.data - &z * &w;
        let rss = resid.norm_squared();

        let inv_w2 = 1.0 / (self.sigma_w * self.sigma_w);
        let inv_z2 = 1.0 / (self.sigma_z * self.sigma_z);

        // d/dW = prec * Z^T R - W / sigma_w^2   (k×d)
        let gw = z.tr_mul(&resid) * prec - &w * inv_w2;
        // d/dZ = prec * R W^T - Z / sigma_z^2   (n×k)
        let gz = &resid * w.transpose() * prec - &z * inv_z2;
        for r in 0..k {
            for c in 0..d {
                grad[r * d + c] = gw[(r, c)];
            }
        }
        for r in 0..n {
            for c in 0..k {
                grad[kd + r * k + c] = gz[(r, c)];
            }
        }
        grad[kd + n * k] = -((n * d) as f64) + prec * rss - t;

        let ll = -((n * d) as f64) * (0.5 * LN_2PI + t) - 0.5 * prec * rss;
        let lp_z = -((n * k) as f64) * (0.5 * LN_2PI + self.sigma_z.ln())
            - 0.5 * z.norm_squared() * inv_z2;
        let lp_w = -(kd as f64) * (0.5 * LN_2PI + self.sigma_w.ln())
            - 0.5 * w.norm_squared() * inv_w2;
        let lp_t = -0.5 * LN_2PI - 0.5 * t * t;
        ll + lp_z + lp_w + lp_t
    }
}

/// Classical closed-form PPCA maximum likelihood from the sample covariance:
/// loading row i is `u_i * sqrt(lambda_i - sigma^2)` for the top-k eigenpairs
/// and `sigma^2` is the mean of the trailing eigenvalues.
pub fn ppca_closed_mle(joint: &DMatrix<f64>, k: usize) -> Result<(DMatrix<f64>, f64)> {
    let n = joint.nrows();
    if n < 2 {
        return Err(Error::DegenerateInput(
            "ppca_closed_mle needs at least 2 rows".into(),
        ));
    }
    let means = joint.row_mean();
    let mut centered = joint.clone();
    for mut row in centered.row_iter_mut() {
        row -= &means;
    }
    let cov = centered.tr_mul(&centered) / (n as f64 - 1.0);
    ppca_mle_from_cov(&cov, k)
}

/// [`ppca_closed_mle`] starting from an explicit covariance matrix.
pub fn ppca_mle_from_cov(cov: &DMatrix<f64>, k: usize) -> Result<(DMatrix<f64>, f64)> {
    let d = cov.nrows();
    if k >= d {
        return Err(Error::Dimension(format!(
            "latent dimension k={k} must be smaller than the data dimension d={d}"
        )));
    }
    let (values, vectors) = symmetric_eigen_sorted(cov);
    let tol = values[0].abs().max(1.0) * 1e-12;
    let positive = values.iter().filter(|&&v| v > tol).count();
    if positive < k + 1 {
        return Err(Error::DegenerateInput(format!(
            "sample covariance has only {positive} positive eigenvalues; need at least {}",
            k + 1
        )));
    }
    let sigma2 = values[k..].iter().map(|v| v.max(0.0)).sum::<f64>() / (d - k) as f64;
    let mut loadings = DMatrix::zeros(k, d);
    for i in 0..k {
        let gap = values[i] - sigma2;
        if gap > 0.0 {
            let scale = gap.sqrt();
            for j in 0..d {
                loadings[(i, j)] = vectors[(j, i)] * scale;
            }
        }
    }
    Ok((loadings, sigma2.sqrt()))
}

/// Fit the mean-field posterior over `(W, Z, log sigma_x)` on a standardized
/// joint matrix. Initialized from the closed-form maximum likelihood: loading
/// means at the MLE loadings, factor means at the posterior-mean projections
/// of the data, and the noise mean at the log MLE scale.
pub fn fit_ppca(
    joint: &DMatrix<f64>,
    config: &ModelConfig,
    stream: RngStream,
) -> Result<(PpcaPosterior, ElboTrace)> {
    config.validate()?;
    let (n, d) = joint.shape();
    if n <= d + 1 {
        return Err(Error::DegenerateInput(format!(
            "need n > d + 1 for a stable factor fit, got n={n}, d={d}"
        )));
    }
    let k = config.latent_dim;
    let (loadings, sigma_mle) = ppca_closed_mle(joint, k)?;

    // E[z | x] = M^-1 L x with M = L L^T + sigma^2 I  (k×k)
    let m_mat = &loadings * loadings.transpose()
        + DMatrix::identity(k, k) * (sigma_mle * sigma_mle).max(1e-12);
    let m_inv = m_mat
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateInput("factor projection matrix is singular".into()))?;
    let z0 = joint * loadings.transpose() * m_inv.transpose();

    let kd = k * d;
    let dim = kd + n * k + 1;
    let mut init = MeanField::constant(dim, 0.0, -2.0);
    for r in 0..k {
        for c in 0..d {
            init.mean[r * d + c] = loadings[(r, c)];
        }
    }
    for r in 0..n {
        for c in 0..k {
            init.mean[kd + r * k + c] = z0[(r, c)];
        }
    }
    init.mean[kd + n * k] = sigma_mle.max(1e-3).ln();
    // curvature-matched posterior scales (diagonal Laplace at the MLE init)
    let var0 = (sigma_mle * sigma_mle).max(1e-6);
    let inv_w2 = 1.0 / (config.sigma_w * config.sigma_w);
    let inv_z2 = 1.0 / (config.sigma_z * config.sigma_z);
    for r in 0..k {
        let h_w = z0.column(r).norm_squared() / var0 + inv_w2;
        for c in 0..d {
            init.log_sd[r * d + c] = -0.5 * h_w.ln();
        }
    }
    for c in 0..k {
        let h_z = loadings.row(c).norm_squared() / var0 + inv_z2;
        for r in 0..n {
            init.log_sd[kd + r * k + c] = -0.5 * h_z.ln();
        }
    }
    init.log_sd[kd + n * k] = -0.5 * (2.0 * (n * d) as f64 + 1.0).ln();

    let objective = PpcaObjective::new(joint, k, config.sigma_z, config.sigma_w);
    let mut rng = stream.rng();
    let (q, trace) = maximize_elbo(&objective, init, &config.vi, &mut rng)?;
    Ok((PpcaPosterior::from_mean_field(&q, n, k, d), trace))
}

/// Code length of the joint under the confounder class:
///
/// ```text
///   -log[ N^-1 sum_j p(X, Y | W_j, sigma_x_j) * p(W_j, sigma_x_j) / q(W_j, sigma_x_j) ]
/// ```
///
/// `(W_j, sigma_x_j)` are drawn from the fitted posterior `q` and weighted by
/// prior over proposal, so the average estimates the Bayesian evidence. The
/// factors are integrated out analytically: each likelihood term is the exact
/// row-wise Gaussian `N(0, W^T W + sigma_x^2 I)`. Aggregated by log-sum-exp.
pub fn score_confounded_mc(
    joint: &DMatrix<f64>,
    posterior: &PpcaPosterior,
    config: &ModelConfig,
    stream: RngStream,
) -> f64 {
    let (n, d) = joint.shape();
    let k = posterior.loading_mean.nrows();
    let mut rng = stream.rng();
    let mut noise = crate::models::causal::AntitheticNormals::new();
    let gram = joint.tr_mul(joint); // sum_i d_i d_i^T, computed once
    let mut terms = Vec::with_capacity(config.mc_samples);
    let mut w = DMatrix::zeros(k, d);
    for j in 0..config.mc_samples {
        noise.begin_sample(j);
        let mut log_weight = 0.0;
        for r in 0..k {
            log_weight += draw_loading_row(posterior, config, r, &mut w, &mut noise, &mut rng);
        }
        let (t, lw) = crate::models::causal::draw_weighted(
            posterior.log_sigma_x_mean,
            posterior.log_sigma_x_log_sd,
            1.0,
            &mut noise,
            &mut rng,
        );
        log_weight += lw;

        let cov = w.tr_mul(&w) + DMatrix::identity(d, d) * (2.0 * t).exp();
        let ll = match cholesky(&cov) {
            Ok(l) => {
                // sum_i d_i^T C^-1 d_i = tr(C^-1 gram)
                let mut quad = 0.0;
                for c in 0..d {
                    let col = DVector::from_column_slice(gram.column(c).as_slice());
                    quad += cholesky_solve(&l, &col)[c];
                }
                -0.5 * ((n * d) as f64 * LN_2PI
                    + n as f64 * logdet_from_cholesky(&l)
                    + quad)
            }
            // a singular draw has no density; it contributes nothing
            Err(_) => f64::NEG_INFINITY,
        };
        terms.push(ll + log_weight);
    }
    -log_mean_exp(&terms)
}

/// Draw loading row `r` into `w` and return its prior-over-proposal log
/// weight.
///
/// The likelihood depends on W only through W^T W, so the posterior carries a
/// mirror mode at -row. The proposal is therefore the symmetrized mixture
/// q_sym(v) = (q(v) + q(-v)) / 2: draw from q, flip the whole row with
/// probability one half, and weight against the mixture density. Rows with
/// zero posterior spread count as fixed constants, as in `draw_weighted`.
fn draw_loading_row(
    posterior: &PpcaPosterior,
    config: &ModelConfig,
    r: usize,
    w: &mut DMatrix<f64>,
    noise: &mut crate::models::causal::AntitheticNormals,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> f64 {
    let d = w.ncols();
    let widen = crate::models::causal::PROPOSAL_WIDEN;
    let degenerate = (0..d).all(|c| posterior.loading_log_sd[(r, c)] == f64::NEG_INFINITY);
    for c in 0..d {
        let eps = noise.next(rng);
        w[(r, c)] = posterior.loading_mean[(r, c)]
            + (posterior.loading_log_sd[(r, c)] + widen.ln()).exp() * eps;
    }
    let flip: bool = rng.gen();
    if degenerate {
        return 0.0;
    }
    if flip {
        for c in 0..d {
            w[(r, c)] = -w[(r, c)];
        }
    }
    let log_q_row = |sign: f64| -> f64 {
        let mut acc = 0.0;
        for c in 0..d {
            let log_sd = posterior.loading_log_sd[(r, c)] + widen.ln();
            let z = (sign * w[(r, c)] - posterior.loading_mean[(r, c)]) / log_sd.exp();
            acc += -0.5 * LN_2PI - log_sd - 0.5 * z * z;
        }
        acc
    };
    let (qa, qb) = (log_q_row(1.0), log_q_row(-1.0));
    let log_q_sym = qa.max(qb) + ((qa - qa.max(qb)).exp() + (qb - qa.max(qb)).exp()).ln()
        - std::f64::consts::LN_2;
    let mut log_prior = 0.0;
    for c in 0..d {
        let v = w[(r, c)] / config.sigma_w;
        log_prior += -0.5 * LN_2PI - config.sigma_w.ln() - 0.5 * v * v;
    }
    log_prior - log_q_sym
}
