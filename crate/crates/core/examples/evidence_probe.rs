//! Scratch probe: exact evidences at dim_x = 1 by nested quadrature, vs the
//! importance-sampled scores, plus effective sample sizes.

use coca_core::models::{fit_causal, fit_ppca, score_causal_mc, score_confounded_mc, ModelConfig};
use coca_core::numerics::{standard_normal_code_length, RngStream, LN_2PI};
use coca_core::{GenKind, GenSpec, SourceDistribution};
use nalgebra::DMatrix;

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    // plain composite Simpson; integrands here are smooth and localized
    let h = (b - a) / steps as f64;
    let mut acc = f(a) + f(b);
    for i in 1..steps {
        let x = a + i as f64 * h;
        acc += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn main() {
    let cfg = ModelConfig::default();
    for kind in [GenKind::Causal, GenKind::Confounded] {
        println!("== {kind:?}");
        for seed in 0..6u64 {
            let spec = GenSpec {
                kind,
                dim_x: 1,
                dim_z: 3,
                n: 500,
                p_x: SourceDistribution::Normal,
                p_z: SourceDistribution::Normal,
                p_w: SourceDistribution::Normal,
                seed: 500 + seed,
            };
            let pair = spec.generate().unwrap();
            let (std_pair, _) = pair.standardize_joint().unwrap();
            let joint = std_pair.joint();
            let n = std_pair.n() as f64;
            let gram = joint.tr_mul(&joint);
            let r = gram[(0, 1)] / (n - 1.0);

            // exact causal evidence: integrate over (w, t), X-part analytic
            let sxx = gram[(0, 0)];
            let sxy = gram[(0, 1)];
            let syy = gram[(1, 1)];
            let ll_causal = |w: f64, t: f64| -> f64 {
                let rss = syy - 2.0 * w * sxy + w * w * sxx;
                -n * (0.5 * LN_2PI + t) - 0.5 * (-2.0 * t).exp() * rss
            };
            let log_prior_1d = |v: f64| -0.5 * LN_2PI - 0.5 * v * v;
            // peak for stabilization
            let w_hat = sxy / (sxx + 1.0);
            let t_hat = 0.5 * ((syy - 2.0 * w_hat * sxy + w_hat * w_hat * sxx) / n).ln();
            let shift_ca = ll_causal(w_hat, t_hat) + log_prior_1d(w_hat) + log_prior_1d(t_hat);
            let inner = |w: f64| {
                simpson(
                    &|t| (ll_causal(w, t) + log_prior_1d(w) + log_prior_1d(t) - shift_ca).exp(),
                    t_hat - 0.6,
                    t_hat + 0.6,
                    400,
                )
            };
            let ev = simpson(&inner, w_hat - 0.6, w_hat + 0.6, 400);
            let l_ca_exact = standard_normal_code_length(&std_pair.x) - (ev.ln() + shift_ca);

            // exact confounded evidence: integrate over (W1, W2, t)
            let ll_conf = |w1: f64, w2: f64, t: f64| -> f64 {
                let s2 = (2.0 * t).exp();
                // C = [[w1^2+s2, w1 w2],[w1 w2, w2^2+s2]]
                let det = (w1 * w1 + s2) * (w2 * w2 + s2) - (w1 * w2) * (w1 * w2);
                let inv = [
                    (w2 * w2 + s2) / det,
                    -(w1 * w2) / det,
                    (w1 * w1 + s2) / det,
                ];
                let quad =
                    inv[0] * gram[(0, 0)] + 2.0 * inv[1] * gram[(0, 1)] + inv[2] * gram[(1, 1)];
                -0.5 * (n * 2.0 * LN_2PI + n * det.ln() + quad)
            };
            // peak: PPCA mle
            let lam1 = (1.0 + r.abs()) * (n - 1.0) / n;
            let lam2 = (1.0 - r.abs()) * (n - 1.0) / n;
            let s2_hat = lam2;
            let load = (lam1 - s2_hat).max(1e-6).sqrt() / (2.0f64).sqrt();
            let (w1_hat, w2_hat) = (load, load * r.signum());
            let t_hat_co = 0.5 * s2_hat.ln();
            let shift_co = ll_conf(w1_hat, w2_hat, t_hat_co)
                + log_prior_1d(w1_hat)
                + log_prior_1d(w2_hat)
                + log_prior_1d(t_hat_co);
            let span = 0.45;
            let inner2 = |w1: f64, w2: f64| {
                simpson(
                    &|t| {
                        (ll_conf(w1, w2, t)
                            + log_prior_1d(w1)
                            + log_prior_1d(w2)
                            + log_prior_1d(t)
                            - shift_co)
                            .exp()
                    },
                    t_hat_co - span,
                    t_hat_co + span,
                    120,
                )
            };
            let inner1 = |w1: f64| {
                simpson(
                    &|w2| inner2(w1, w2),
                    w2_hat - span,
                    w2_hat + span,
                    120,
                )
            };
            // integrate around one mode and double (mirror mode at -W)
            let ev_co = 2.0 * simpson(&inner1, w1_hat - span, w1_hat + span, 120);
            let l_co_exact = -(ev_co.ln() + shift_co);

            // IS estimates
            let stream = RngStream::new(seed);
            let (cpost, _) = fit_causal(&std_pair, &cfg, stream.substream(1)).unwrap();
            let (ppost, _) = fit_ppca(&joint, &cfg, stream.substream(2)).unwrap();
            let l_ca_is = score_causal_mc(&std_pair, &cpost, &cfg, stream.substream(3));
            let l_co_is = score_confounded_mc(&joint, &ppost, &cfg, stream.substream(4));

            println!(
                "seed {seed}: r {r:+.3} | exact margin {:+8.3} (L_ca {l_ca_exact:.2} L_co {l_co_exact:.2}) | IS margin {:+8.3} (L_ca {l_ca_is:.2} L_co {l_co_is:.2})",
                l_co_exact - l_ca_exact,
                l_co_is - l_ca_is,
            );
        }
    }
    let _ = DMatrix::<f64>::zeros(1, 1);
}
