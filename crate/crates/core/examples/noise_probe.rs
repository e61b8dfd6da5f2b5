//! Scratch probe: score noise across MC streams vs the decision margin.

use coca_core::models::{fit_causal, fit_ppca, score_causal_mc, score_confounded_mc, ModelConfig};
use coca_core::numerics::RngStream;
use coca_core::{GenKind, GenSpec, SourceDistribution};

fn main() {
    let cfg = ModelConfig::default();
    let spec = GenSpec {
        kind: GenKind::Causal,
        dim_x: 1,
        dim_z: 3,
        n: 500,
        p_x: SourceDistribution::Normal,
        p_z: SourceDistribution::Normal,
        p_w: SourceDistribution::Normal,
        seed: 501, // |r| ~ 0.84
    };
    let pair = spec.generate().unwrap();
    let (std_pair, _) = pair.standardize_joint().unwrap();
    let joint = std_pair.joint();
    let (cpost, _) = fit_causal(&std_pair, &cfg, RngStream::new(1)).unwrap();
    let (ppost, _) = fit_ppca(&joint, &cfg, RngStream::new(2)).unwrap();

    let margins: Vec<f64> = (0..30)
        .map(|i| {
            let l_ca = score_causal_mc(&std_pair, &cpost, &cfg, RngStream::new(1000 + i));
            let l_co = score_confounded_mc(&joint, &ppost, &cfg, RngStream::new(2000 + i));
            l_co - l_ca
        })
        .collect();
    let mean = margins.iter().sum::<f64>() / margins.len() as f64;
    let sd = (margins.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / 29.0).sqrt();
    println!("margin mean {mean:+.4}, sd across score streams {sd:.4}");

    // refit with different stream: fit-stage noise
    let refit_margins: Vec<f64> = (0..10)
        .map(|i| {
            let (cp, _) = fit_causal(&std_pair, &cfg, RngStream::new(100 + i)).unwrap();
            let (pp, _) = fit_ppca(&joint, &cfg, RngStream::new(200 + i)).unwrap();
            let l_ca = score_causal_mc(&std_pair, &cp, &cfg, RngStream::new(9999));
            let l_co = score_confounded_mc(&joint, &pp, &cfg, RngStream::new(8888));
            l_co - l_ca
        })
        .collect();
    let rmean = refit_margins.iter().sum::<f64>() / refit_margins.len() as f64;
    let rsd = (refit_margins
        .iter()
        .map(|m| (m - rmean) * (m - rmean))
        .sum::<f64>()
        / 9.0)
        .sqrt();
    println!("margin mean {rmean:+.4}, sd across fit streams {rsd:.4}");
}
