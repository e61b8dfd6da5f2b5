//! Ground-truth labeled synthetic benchmark generators.
//!
//! Causal recipe: `X[i,j] ~ p_x`, one weight vector `w ~ p_w` per dataset,
//! `Y = X w + eps` with fresh standard-normal noise per sample.
//!
//! Confounded recipe: factors `Z (n×k) ~ p_z`, one loading matrix
//! `W (k×(m+1)) ~ p_w` per dataset, and the joint `Z W + eps` is split into
//! X (first m columns) and Y (last column).

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::DatasetPair;
use crate::error::{Error, Result};
use crate::numerics::rng::{RngStream, SourceDistribution};

/// Which structural recipe generated a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Causal,
    Confounded,
}

impl GenKind {
    pub fn name(&self) -> &'static str {
        match self {
            GenKind::Causal => "causal",
            GenKind::Confounded => "confounded",
        }
    }
}

/// Full description of one synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub dim_x: usize,
    /// Latent dimension of the confounder; ignored for the causal recipe.
    pub dim_z: usize,
    pub n: usize,
    pub p_x: SourceDistribution,
    pub p_z: SourceDistribution,
    pub p_w: SourceDistribution,
    pub seed: u64,
}

impl GenSpec {
    fn validate(&self) -> Result<()> {
        if self.dim_x < 1 {
            return Err(Error::Domain("dim_x must be at least 1".into()));
        }
        if self.kind == GenKind::Confounded && self.dim_z < 1 {
            return Err(Error::Domain(
                "dim_z must be at least 1 for the confounded recipe".into(),
            ));
        }
        if self.n < 3 {
            return Err(Error::Domain("n must be at least 3".into()));
        }
        Ok(())
    }

    fn default_name(&self) -> String {
        format!(
            "{}-m{}-n{}-s{}",
            self.kind.name(),
            self.dim_x,
            self.n,
            self.seed
        )
    }

    /// Generate according to `kind`.
    pub fn generate(&self) -> Result<DatasetPair> {
        match self.kind {
            GenKind::Causal => gen_causal(self),
            GenKind::Confounded => gen_confounded(self),
        }
    }
}

/// Draw an n×m matrix of i.i.d. values from `dist`, row by row.
fn draw_matrix(
    dist: SourceDistribution,
    rows: usize,
    cols: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = dist.draw(rng);
        }
    }
    out
}

/// `Y = X w + eps`. Deterministic in the spec seed.
pub fn gen_causal(spec: &GenSpec) -> Result<DatasetPair> {
    if spec.kind != GenKind::Causal {
        return Err(Error::Domain("gen_causal requires kind = Causal".into()));
    }
    spec.validate()?;
    let mut rng = RngStream::new(spec.seed).rng();
    let x = draw_matrix(spec.p_x, spec.n, spec.dim_x, &mut rng);
    let w = DVector::from_fn(spec.dim_x, |_, _| spec.p_w.draw(&mut rng));
    let mut y = &x * &w;
    for v in y.iter_mut() {
        let eps: f64 = StandardNormal.sample(&mut rng);
        *v += eps;
    }
    DatasetPair::new(spec.default_name(), x, y)
}

/// `[X | Y] = Z W + eps`. Deterministic in the spec seed.
pub fn gen_confounded(spec: &GenSpec) -> Result<DatasetPair> {
    let (pair, _, _) = gen_confounded_parts(spec, None)?;
    Ok(pair)
}

/// Confounded generator that also returns the latent parts, with an optional
/// loading override used by validation tests.
pub(crate) fn gen_confounded_parts(
    spec: &GenSpec,
    forced_loadings: Option<&DMatrix<f64>>,
) -> Result<(DatasetPair, DMatrix<f64>, DMatrix<f64>)> {
    if spec.kind != GenKind::Confounded {
        return Err(Error::Domain(
            "gen_confounded requires kind = Confounded".into(),
        ));
    }
    spec.validate()?;
    let d = spec.dim_x + 1;
    let mut rng = RngStream::new(spec.seed).rng();
    let z = draw_matrix(spec.p_z, spec.n, spec.dim_z, &mut rng);
    let w = match forced_loadings {
        Some(f) => {
            // keep the draw sequence identical to the unforced path
            let _ = draw_matrix(spec.p_w, spec.dim_z, d, &mut rng);
            f.clone()
        }
        None => draw_matrix(spec.p_w, spec.dim_z, d, &mut rng),
    };
    let mut joint = &z * &w;
    for v in joint.iter_mut() {
        let eps: f64 = StandardNormal.sample(&mut rng);
        *v += eps;
    }
    let x = joint.columns(0, spec.dim_x).into_owned();
    let y = DVector::from_column_slice(joint.column(spec.dim_x).as_slice());
    let pair = DatasetPair::new(spec.default_name(), x, y)?;
    Ok((pair, z, w))
}

/// How a sweep assigns source distributions to dataset indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourcePolicy {
    /// Same distribution for p_x, p_z, and p_w on every dataset.
    Fixed(SourceDistribution),
    /// Cycle the four distributions over dataset indices, p_x = p_z = p_w.
    Cycle,
    /// Draw p_x, p_z, p_w independently at random per dataset.
    IndependentRandom,
}

impl SourcePolicy {
    /// Distributions for the dataset at `index`.
    pub fn sources_for(
        &self,
        index: usize,
        stream: RngStream,
    ) -> (SourceDistribution, SourceDistribution, SourceDistribution) {
        match self {
            SourcePolicy::Fixed(d) => (*d, *d, *d),
            SourcePolicy::Cycle => {
                let d = SourceDistribution::ALL[index % 4];
                (d, d, d)
            }
            SourcePolicy::IndependentRandom => {
                let mut rng = stream.substream(index as u64).rng();
                use rand::Rng;
                let mut pick = || SourceDistribution::ALL[rng.gen_range(0..4usize)];
                (pick(), pick(), pick())
            }
        }
    }
}
