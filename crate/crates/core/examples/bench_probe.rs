//! Scratch probe: criterion-scale benchmark statistics.

use coca_core::{
    decision_rate_curve, run_benchmark, BenchSpec, Label, ModelConfig, SourceDistribution,
    SourcePolicy, Truth,
};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let dim_x: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let dim_z: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(3);
    let datasets: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(200);
    let policy = match args.get(4).map(|s| s.as_str()) {
        Some("cycle") => SourcePolicy::Cycle,
        _ => SourcePolicy::Fixed(SourceDistribution::Normal),
    };
    let start = std::time::Instant::now();
    let spec = BenchSpec {
        dim_x,
        dim_z,
        datasets,
        n: 500,
        sources: policy,
        seed: 1,
    };
    let labeled = run_benchmark(&spec, &ModelConfig::default()).unwrap();
    let curve = decision_rate_curve(&labeled).unwrap();
    let causal_frac = labeled
        .iter()
        .filter(|l| l.verdict.label == Label::Causal)
        .count() as f64
        / labeled.len() as f64;
    let acc = |t: Truth| {
        let of_class: Vec<_> = labeled.iter().filter(|l| l.truth == t).collect();
        of_class.iter().filter(|l| l.correct()).count() as f64 / of_class.len() as f64
    };
    println!(
        "dx={dim_x} dz={dim_z} J={datasets}: AUDR {:.4}, top25% {:.3}, top75% {:.3}, overall {:.3}, causal-frac {:.3}, acc(causal) {:.3}, acc(conf) {:.3}, {:.0}s",
        curve.audr,
        curve.accuracy_at(0.25),
        curve.accuracy_at(0.75),
        curve.points.last().unwrap().1,
        causal_frac,
        acc(Truth::Causal),
        acc(Truth::Confounded),
        start.elapsed().as_secs_f64()
    );
}
