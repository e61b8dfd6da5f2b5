//! Scratch probe: the information ceiling of the univariate regime.
//!
//! At dim_x = 1 both model classes see the data only through the 2x2 gram
//! matrix, so the exact-evidence decision is a function of the sample
//! correlation alone. This computes exact margins by quadrature over the
//! criterion-4 dataset mix and reports the resulting decision-rate profile.

use coca_core::numerics::{standard_normal_code_length, LN_2PI};
use coca_core::{GenKind, GenSpec, SourceDistribution, SourcePolicy, RngStream};

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    let h = (b - a) / steps as f64;
    let mut acc = f(a) + f(b);
    for i in 1..steps {
        let x = a + i as f64 * h;
        acc += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn exact_margin(joint_gram: &[f64; 3], n: f64, x_code: f64) -> f64 {
    let (sxx, sxy, syy) = (joint_gram[0], joint_gram[1], joint_gram[2]);
    let log_prior = |v: f64| -0.5 * LN_2PI - 0.5 * v * v;

    let ll_ca = |w: f64, t: f64| {
        let rss = syy - 2.0 * w * sxy + w * w * sxx;
        -n * (0.5 * LN_2PI + t) - 0.5 * (-2.0 * t).exp() * rss
    };
    let w_hat = sxy / (sxx + 1.0);
    let t_hat = 0.5 * (((syy - 2.0 * w_hat * sxy + w_hat * w_hat * sxx) / n).max(1e-12)).ln();
    let shift_ca = ll_ca(w_hat, t_hat) + log_prior(w_hat) + log_prior(t_hat);
    let inner = |w: f64| {
        simpson(
            &|t| (ll_ca(w, t) + log_prior(w) + log_prior(t) - shift_ca).exp(),
            t_hat - 0.7,
            t_hat + 0.7,
            160,
        )
    };
    let l_ca = x_code - (simpson(&inner, w_hat - 0.7, w_hat + 0.7, 160).ln() + shift_ca);

    let ll_co = |w1: f64, w2: f64, t: f64| {
        let s2 = (2.0 * t).exp();
        let det = (w1 * w1 + s2) * (w2 * w2 + s2) - (w1 * w2) * (w1 * w2);
        let quad = ((w2 * w2 + s2) * sxx - 2.0 * (w1 * w2) * sxy + (w1 * w1 + s2) * syy) / det;
        -0.5 * (n * 2.0 * LN_2PI + n * det.ln() + quad)
    };
    let r = sxy / ((sxx * syy).sqrt());
    let lam1 = (1.0 + r.abs()) * (n - 1.0) / n;
    let lam2 = (1.0 - r.abs()) * (n - 1.0) / n;
    let load = (lam1 - lam2).max(1e-9).sqrt() / (2.0f64).sqrt();
    let (w1_hat, w2_hat) = (load, load * r.signum());
    let t_hat2 = 0.5 * lam2.max(1e-9).ln();
    let shift_co =
        ll_co(w1_hat, w2_hat, t_hat2) + log_prior(w1_hat) + log_prior(w2_hat) + log_prior(t_hat2);
    let span = 0.5;
    let inner2 = |w1: f64, w2: f64| {
        simpson(
            &|t| {
                (ll_co(w1, w2, t) + log_prior(w1) + log_prior(w2) + log_prior(t) - shift_co).exp()
            },
            t_hat2 - span,
            t_hat2 + span,
            60,
        )
    };
    let inner1 =
        |w1: f64| simpson(&|w2| inner2(w1, w2), w2_hat - span, w2_hat + span, 60);
    let ev_co = 2.0 * simpson(&inner1, w1_hat - span, w1_hat + span, 60);
    let l_co = -(ev_co.ln() + shift_co);
    l_co - l_ca
}

fn main() {
    let n_sets = 200;
    let mut items: Vec<(f64, bool, f64)> = Vec::new(); // |margin|, correct, r
    for i in 0..n_sets {
        let kind = if i % 2 == 0 {
            GenKind::Causal
        } else {
            GenKind::Confounded
        };
        let (p, _, _) = SourcePolicy::Cycle.sources_for(i / 2, RngStream::new(1));
        let gen_seed = RngStream::new(1).substream_named(&format!("{i:04}")).stream;
        let spec = GenSpec {
            kind,
            dim_x: 1,
            dim_z: 3,
            n: 500,
            p_x: p,
            p_z: p,
            p_w: p,
            seed: gen_seed,
        };
        let pair = spec.generate().unwrap();
        let (std_pair, _) = pair.standardize_joint().unwrap();
        let joint = std_pair.joint();
        let gram = joint.tr_mul(&joint);
        let g = [gram[(0, 0)], gram[(0, 1)], gram[(1, 1)]];
        let n_f = std_pair.n() as f64;
        let x_code = standard_normal_code_length(&std_pair.x);
        let margin = exact_margin(&g, n_f, x_code);
        let correct = match kind {
            GenKind::Causal => margin > 0.0,
            GenKind::Confounded => margin < 0.0,
        };
        let r = g[1] / ((g[0] * g[2]).sqrt());
        items.push((margin.abs(), correct, r));
        let _ = SourceDistribution::Normal;
    }
    items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut correct_so_far = 0;
    for (j, item) in items.iter().enumerate() {
        if item.1 {
            correct_so_far += 1;
        }
        let rate = (j + 1) as f64 / n_sets as f64;
        if [0.25f64, 0.5, 0.75, 1.0]
            .iter()
            .any(|&t| (rate - t).abs() < 1e-9)
        {
            println!(
                "rate {rate:.2}: accuracy {:.3}",
                correct_so_far as f64 / (j + 1) as f64
            );
        }
    }
}
