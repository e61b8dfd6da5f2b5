//! Decision-rate curves, AUDR, grid sweeps, and significance bands.

use rayon::prelude::*;

use crate::dataset::DatasetPair;
use crate::decision::{infer, Label, Verdict};
use crate::error::{Error, Result};
use crate::models::ModelConfig;
use crate::numerics::rng::RngStream;
use crate::synthgen::{GenKind, GenSpec, SourcePolicy};

/// Ground truth of a benchmark dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    Causal,
    Confounded,
}

impl Truth {
    pub fn label(&self) -> Label {
        match self {
            Truth::Causal => Label::Causal,
            Truth::Confounded => Label::Confounded,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Truth::Causal => "causal",
            Truth::Confounded => "confounded",
        }
    }
}

/// A verdict paired with its ground truth and benchmark weight.
#[derive(Debug, Clone)]
pub struct LabeledVerdict {
    pub name: String,
    pub verdict: Verdict,
    pub truth: Truth,
    pub weight: f64,
}

impl LabeledVerdict {
    pub fn correct(&self) -> bool {
        // Undecided never matches a truth label
        self.verdict.label == self.truth.label()
    }
}

/// Accuracy over the top-k fraction of verdicts ranked by |confidence|,
/// plus the area under that curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DrCurve {
    /// (rate, weighted accuracy) with rates strictly increasing to 1.0.
    pub points: Vec<(f64, f64)>,
    pub audr: f64,
}

impl DrCurve {
    /// Weighted accuracy over the most-confident `rate` fraction, i.e. the
    /// last curve point with rate at most `rate`.
    pub fn accuracy_at(&self, rate: f64) -> f64 {
        let mut acc = self.points[0].1;
        for &(r, a) in &self.points {
            if r <= rate + 1e-12 {
                acc = a;
            } else {
                break;
            }
        }
        acc
    }
}

/// Sort order for the decision-rate ranking: descending |confidence|,
/// undecided verdicts last, ties broken by name.
fn rank_order(items: &[LabeledVerdict]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let (va, vb) = (&items[a], &items[b]);
        let ua = va.verdict.label == Label::Undecided;
        let ub = vb.verdict.label == Label::Undecided;
        ua.cmp(&ub)
            .then(
                vb.verdict
                    .confidence
                    .abs()
                    .partial_cmp(&va.verdict.confidence.abs())
                    .unwrap(),
            )
            .then_with(|| va.name.cmp(&vb.name))
    });
    order
}

/// Build the decision-rate curve: point `j` is the weighted accuracy over the
/// `j` most confident verdicts, at rate `j / J`. The AUDR is the trapezoidal
/// integral over the curve, normalized to unit width.
pub fn decision_rate_curve(items: &[LabeledVerdict]) -> Result<DrCurve> {
    if items.is_empty() {
        return Err(Error::DegenerateInput(
            "decision_rate_curve needs at least one verdict".into(),
        ));
    }
    let order = rank_order(items);
    let total = items.len();
    let mut points = Vec::with_capacity(total);
    let mut weight_sum = 0.0;
    let mut correct_sum = 0.0;
    for (j, &idx) in order.iter().enumerate() {
        let item = &items[idx];
        weight_sum += item.weight;
        if item.correct() {
            correct_sum += item.weight;
        }
        let rate = (j + 1) as f64 / total as f64;
        points.push((rate, correct_sum / weight_sum));
    }
    let audr = if total == 1 {
        points[0].1
    } else {
        let mut integral = 0.0;
        for w in points.windows(2) {
            let ((r0, a0), (r1, a1)) = (w[0], w[1]);
            integral += (r1 - r0) * 0.5 * (a0 + a1);
        }
        integral / (1.0 - points[0].0)
    };
    Ok(DrCurve { points, audr })
}

/// Two-sided 95% normal-approximation band around `p0` for `n` fair-coin
/// decisions, clamped to [0, 1].
pub fn binomial_band(n_decisions: usize, p0: f64) -> (f64, f64) {
    assert!(n_decisions >= 1);
    let half = 1.96 * (p0 * (1.0 - p0) / n_decisions as f64).sqrt();
    ((p0 - half).max(0.0), (p0 + half).min(1.0))
}

/// One balanced synthetic benchmark: `datasets` pairs, classes interleaved,
/// sources assigned per [`SourcePolicy`].
#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub dim_x: usize,
    pub dim_z: usize,
    /// Total dataset count; must be even so the classes stay balanced.
    pub datasets: usize,
    /// Samples per dataset.
    pub n: usize,
    pub sources: SourcePolicy,
    pub seed: u64,
}

/// Generate, infer, and label every dataset of a benchmark. Runs on the
/// current rayon pool; results are ordered by dataset index regardless of
/// worker count.
pub fn run_benchmark(spec: &BenchSpec, config: &ModelConfig) -> Result<Vec<LabeledVerdict>> {
    if spec.datasets < 2 || spec.datasets % 2 != 0 {
        return Err(Error::Domain(format!(
            "dataset count must be even and at least 2, got {}",
            spec.datasets
        )));
    }
    labeled_run("", spec, config)
}

fn labeled_run(
    prefix: &str,
    spec: &BenchSpec,
    config: &ModelConfig,
) -> Result<Vec<LabeledVerdict>> {
    let source_stream = RngStream::new(spec.seed).substream_named("sources");
    (0..spec.datasets)
        .into_par_iter()
        .map(|i| run_one(prefix, spec, config, source_stream, i))
        .collect()
}

fn run_one(
    prefix: &str,
    spec: &BenchSpec,
    config: &ModelConfig,
    source_stream: RngStream,
    i: usize,
) -> Result<LabeledVerdict> {
    let kind = if i % 2 == 0 {
        GenKind::Causal
    } else {
        GenKind::Confounded
    };
    let name = format!("{prefix}{i:04}-{}", kind.name());
    // both members of an interleaved pair share the same sources
    let (p_x, p_z, p_w) = spec.sources.sources_for(i / 2, source_stream);
    let gen_seed = RngStream::new(spec.seed).substream_named(&name).stream;
    let gen = GenSpec {
        kind,
        dim_x: spec.dim_x,
        dim_z: spec.dim_z,
        n: spec.n,
        p_x,
        p_z,
        p_w,
        seed: gen_seed,
    };
    let mut pair = gen.generate().map_err(|e| e.in_dataset(&name))?;
    pair.name = name.clone();
    let verdict = infer(&pair, config, spec.seed)?;
    Ok(LabeledVerdict {
        name,
        verdict,
        truth: match kind {
            GenKind::Causal => Truth::Causal,
            GenKind::Confounded => Truth::Confounded,
        },
        weight: 1.0,
    })
}

/// AUDR per (dim_x, dim_z) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AudrGrid {
    pub dims_x: Vec<usize>,
    pub dims_z: Vec<usize>,
    /// `values[ix][iz]` is the AUDR of cell `(dims_x[ix], dims_z[iz])`.
    pub values: Vec<Vec<f64>>,
}

/// Run a balanced benchmark in every cell of the `dims_x` × `dims_z` grid and
/// report each cell's AUDR. Cell seeds derive from the cell name, so results
/// are independent of evaluation order and worker count.
pub fn audr_grid(
    dims_x: &[usize],
    dims_z: &[usize],
    per_cell: usize,
    base: &BenchSpec,
    config: &ModelConfig,
) -> Result<AudrGrid> {
    if per_cell < 2 || per_cell % 2 != 0 {
        return Err(Error::Domain(format!(
            "per_cell must be even and at least 2, got {per_cell}"
        )));
    }
    let mut values = Vec::with_capacity(dims_x.len());
    for &dx in dims_x {
        let mut row = Vec::with_capacity(dims_z.len());
        for &dz in dims_z {
            let cell_spec = BenchSpec {
                dim_x: dx,
                dim_z: dz,
                datasets: per_cell,
                ..base.clone()
            };
            let prefix = format!("dx{dx}-dz{dz}-");
            let labeled =
                labeled_run(&prefix, &cell_spec, config).map_err(|e| e.in_cell(dx, dz))?;
            let curve = decision_rate_curve(&labeled).map_err(|e| e.in_cell(dx, dz))?;
            row.push(curve.audr);
        }
        values.push(row);
    }
    Ok(AudrGrid {
        dims_x: dims_x.to_vec(),
        dims_z: dims_z.to_vec(),
        values,
    })
}

/// Run `infer` over arbitrary labeled pairs (e.g. a real-world corpus).
/// Preserves input order; errors carry the dataset name.
pub fn infer_labeled(
    pairs: &[(DatasetPair, Truth)],
    config: &ModelConfig,
    seed: u64,
) -> Result<Vec<LabeledVerdict>> {
    pairs
        .par_iter()
        .map(|(pair, truth)| {
            let verdict = infer(pair, config, seed)?;
            Ok(LabeledVerdict {
                name: pair.name.clone(),
                verdict,
                truth: *truth,
                weight: pair.weight,
            })
        })
        .collect()
}
