use rand_distr::{Distribution, Normal, Poisson};

use super::{check_decay, link_pairs, rng, NetworkGenerator};
use crate::error::{Error, Result};
use crate::model::{Node, SpatialNetwork};

/// Gaussian clusters on the unit square.
///
/// The default centers form a near-equilateral triangle whose vertices sit
/// mid-sector (N, SW and SE) relative to the center of the generated extent.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSpec {
    pub centers: Vec<(f64, f64)>,
    pub per_cluster_mean: f64,
    /// Standard deviation of node positions around their center.
    pub spread: f64,
    pub decay_scale: f64,
    pub base_prob: f64,
    pub seed: u64,
}

impl Default for ClusterSpec {
    fn default() -> Self {
        Self {
            centers: vec![(0.50, 0.80), (0.20, 0.275), (0.80, 0.275)],
            per_cluster_mean: 15.0,
            spread: 0.03,
            decay_scale: 0.15,
            base_prob: 0.9,
            seed: 0,
        }
    }
}

impl ClusterSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.centers.is_empty() {
            return Err(Error::InvalidSpec("at least one cluster center is required".into()));
        }
        if self.centers.iter().any(|c| !c.0.is_finite() || !c.1.is_finite()) {
            return Err(Error::InvalidSpec("cluster centers must be finite".into()));
        }
        if !(self.per_cluster_mean.is_finite() && self.per_cluster_mean > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "per-cluster mean must be > 0, got {}",
                self.per_cluster_mean
            )));
        }
        if !(self.spread.is_finite() && self.spread > 0.0) {
            return Err(Error::InvalidSpec(format!("spread must be > 0, got {}", self.spread)));
        }
        check_decay(self.decay_scale, self.base_prob)
    }

    /// The network plus the cluster index of every node.
    pub fn generate_labeled(&self) -> Result<(SpatialNetwork, Vec<usize>)> {
        self.validate()?;
        let mut rng = rng(self.seed);
        let count_dist = Poisson::new(self.per_cluster_mean).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let mut nodes = Vec::new();
        let mut labels = Vec::new();
        for (k, &(cx, cy)) in self.centers.iter().enumerate() {
            let count = count_dist.sample(&mut rng) as usize;
            let gx = Normal::new(cx, self.spread).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            let gy = Normal::new(cy, self.spread).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            for i in 0..count {
                let x = gx.sample(&mut rng).clamp(0.0, 1.0);
                let y = gy.sample(&mut rng).clamp(0.0, 1.0);
                nodes.push(Node::new(format!("c{k}-{i}"), x, y));
                labels.push(k);
            }
        }
        Ok((link_pairs(nodes, &mut rng, self.base_prob, self.decay_scale), labels))
    }
}

impl NetworkGenerator for ClusterSpec {
    fn name(&self) -> &'static str {
        "clustered"
    }

    fn generate(&self) -> SpatialNetwork {
        generate_clustered(self).expect("spec validated at construction")
    }
}

pub fn generate_clustered(spec: &ClusterSpec) -> Result<SpatialNetwork> {
    spec.generate_labeled().map(|(net, _)| net)
}
