//! Scratch probe for the univariate-X regime.

use coca_core::models::{fit_causal, fit_ppca, score_causal_mc, score_confounded_mc, ModelConfig};
use coca_core::numerics::RngStream;
use coca_core::{GenKind, GenSpec, SourceDistribution};

fn main() {
    let cfg = ModelConfig::default();
    for kind in [GenKind::Causal, GenKind::Confounded] {
        println!("== {:?}", kind);
        let mut wins = 0;
        for seed in 0..30u64 {
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
            let r = std_pair.x.column(0).dot(&std_pair.y) / (std_pair.n() as f64 - 1.0);

            let stream = RngStream::new(seed);
            let (cpost, _) = fit_causal(&std_pair, &cfg, stream.substream(1)).unwrap();
            let (ppost, _) = fit_ppca(&joint, &cfg, stream.substream(2)).unwrap();
            let l_ca = score_causal_mc(&std_pair, &cpost, &cfg, stream.substream(3));
            let l_co = score_confounded_mc(&joint, &ppost, &cfg, stream.substream(4));
            let margin = l_co - l_ca; // positive favors causal
            let correct = match kind {
                GenKind::Causal => margin > 0.0,
                GenKind::Confounded => margin < 0.0,
            };
            if correct {
                wins += 1;
            }
            let w_sd = (ppost.loading_log_sd[(0, 0)].exp()
                + ppost.loading_log_sd[(0, 1)].exp())
                / 2.0;
            let cw_sd = cpost.weight_log_sd[0].exp();
            if seed < 12 {
                println!(
                    "seed {seed}: r {r:+.3} margin {margin:+8.3} | w_sd(ca) {cw_sd:.4} W_sd(co) {w_sd:.4} sy {:.3} sx {:.3}",
                    cpost.log_sigma_y_mean.exp(),
                    ppost.log_sigma_x_mean.exp(),
                );
            }
        }
        println!("correct: {wins}/30");
    }
}
