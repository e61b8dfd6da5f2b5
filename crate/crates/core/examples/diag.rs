//! Scratch diagnostics for score components on known generators.

use coca_core::models::{
    fit_causal, fit_ppca, score_causal_mc, score_confounded_mc, ModelConfig,
};
use coca_core::numerics::{standard_normal_code_length, RngStream};
use coca_core::{GenKind, GenSpec, SourceDistribution};

fn main() {
    let cfg = ModelConfig::default();
    for kind in [GenKind::Causal, GenKind::Confounded] {
        println!("== {:?}", kind);
        for seed in 0..10u64 {
            let spec = GenSpec {
                kind,
                dim_x: 6,
                dim_z: 3,
                n: 500,
                p_x: SourceDistribution::Normal,
                p_z: SourceDistribution::Normal,
                p_w: SourceDistribution::Normal,
                seed: 100 + seed,
            };
            let pair = spec.generate().unwrap();
            let (std_pair, _) = pair.standardize_joint().unwrap();
            let joint = std_pair.joint();

            let stream = RngStream::new(seed);
            let (cpost, ctrace) = fit_causal(&std_pair, &cfg, stream.substream(1)).unwrap();
            let (ppost, ptrace) = fit_ppca(&joint, &cfg, stream.substream(2)).unwrap();
            let l_ca = score_causal_mc(&std_pair, &cpost, &cfg, stream.substream(3));
            let l_co = score_confounded_mc(&joint, &ppost, &cfg, stream.substream(4));
            let x_part = standard_normal_code_length(&std_pair.x);

            let sigma_y = cpost.log_sigma_y_mean.exp();
            let sigma_x = ppost.log_sigma_x_mean.exp();
            let mean_sz = ppost
                .factor_log_sd
                .iter()
                .map(|v| v.exp())
                .sum::<f64>()
                / ppost.factor_log_sd.len() as f64;
            let w_norm = ppost.loading_mean.norm();
            let c = (l_co - l_ca) / l_co.max(l_ca);
            println!(
                "seed {seed}: L_ca {l_ca:.1} (x {x_part:.1}, y {:.1}) L_co {l_co:.1} C {c:+.4} | sy {sigma_y:.3} sx {sigma_x:.3} |W| {w_norm:.3} sz {mean_sz:.3} steps {}/{}",
                l_ca - x_part,
                ctrace.steps,
                ptrace.steps,
            );
        }
    }
}
