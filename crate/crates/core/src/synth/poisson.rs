use rand::RngExt;
use rand_distr::{Distribution, Poisson};

use super::{check_decay, link_pairs, rng, NetworkGenerator};
use crate::error::{Error, Result};
use crate::model::{Node, SpatialNetwork};

/// Homogeneous Poisson point process on the unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSpec {
    /// Expected node count over the unit square.
    pub intensity: f64,
    pub decay_scale: f64,
    pub base_prob: f64,
    pub seed: u64,
}

impl Default for PoissonSpec {
    fn default() -> Self {
        Self {
            intensity: 100.0,
            decay_scale: 0.15,
            base_prob: 0.9,
            seed: 0,
        }
    }
}

impl PoissonSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.intensity.is_finite() && self.intensity > 0.0) {
            return Err(Error::InvalidSpec(format!("intensity must be > 0, got {}", self.intensity)));
        }
        check_decay(self.decay_scale, self.base_prob)
    }
}

impl NetworkGenerator for PoissonSpec {
    fn name(&self) -> &'static str {
        "poisson"
    }

    fn generate(&self) -> SpatialNetwork {
        generate_poisson(self).expect("spec validated at construction")
    }
}

pub fn generate_poisson(spec: &PoissonSpec) -> Result<SpatialNetwork> {
    spec.validate()?;
    let mut rng = rng(spec.seed);
    let count = Poisson::new(spec.intensity)
        .map_err(|e| Error::InvalidSpec(e.to_string()))?
        .sample(&mut rng) as usize;
    let nodes = (0..count)
        .map(|i| {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            Node::new(format!("n{i}"), x, y)
        })
        .collect();
    Ok(link_pairs(nodes, &mut rng, spec.base_prob, spec.decay_scale))
}
