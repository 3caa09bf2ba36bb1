//! Seeded synthetic benchmark networks with distance-decay linking.
//!
//! Every generator draws from [`Pcg64`] (PCG XSL RR 128/64, the reference
//! `pcg64` generator) seeded through `SeedableRng::seed_from_u64`, so a
//! `(spec, seed)` pair yields the same network on every platform. Draw order
//! is fixed: node counts and positions first, then one uniform draw per
//! unordered pair in index order `(0,1), (0,2), ... (n-2,n-1)`.

mod clustered;
mod poisson;
mod registry;

pub use clustered::{generate_clustered, ClusterSpec};
pub use poisson::{generate_poisson, PoissonSpec};
pub use registry::{GeneratorFactory, GeneratorOptions, GeneratorRegistry};

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;

use crate::model::{Edge, Node, SpatialNetwork};

/// A synthetic network family whose parameters (including seed) are fixed at
/// construction.
pub trait NetworkGenerator: Send + Sync {
    fn name(&self) -> &'static str;

    fn generate(&self) -> SpatialNetwork;
}

pub(crate) fn rng(seed: u64) -> Pcg64 {
    Pcg64::seed_from_u64(seed)
}

/// Link probability `base_prob * exp(-d / decay_scale)`.
pub fn link_probability(distance: f64, base_prob: f64, decay_scale: f64) -> f64 {
    base_prob * (-distance / decay_scale).exp()
}

/// Samples each unordered pair once and builds an undirected planar network.
pub(crate) fn link_pairs(nodes: Vec<Node>, rng: &mut Pcg64, base_prob: f64, decay_scale: f64) -> SpatialNetwork {
    let mut edges = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let d = (nodes[j].x - nodes[i].x).hypot(nodes[j].y - nodes[i].y);
            let u: f64 = rng.random();
            if u < link_probability(d, base_prob, decay_scale) {
                edges.push(Edge::new(nodes[i].id.clone(), nodes[j].id.clone()));
            }
        }
    }
    SpatialNetwork::new(nodes, edges, false, false).expect("generated ids are unique")
}

pub(crate) fn check_decay(decay_scale: f64, base_prob: f64) -> crate::Result<()> {
    if !(decay_scale.is_finite() && decay_scale > 0.0) {
        return Err(crate::Error::InvalidSpec(format!("decay scale must be > 0, got {decay_scale}")));
    }
    if !(base_prob > 0.0 && base_prob <= 1.0) {
        return Err(crate::Error::InvalidSpec(format!("base probability must be in (0, 1], got {base_prob}")));
    }
    Ok(())
}
