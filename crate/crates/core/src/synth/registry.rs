use std::collections::BTreeMap;

use super::{ClusterSpec, NetworkGenerator, PoissonSpec};
use crate::error::{Error, Result};

/// Loosely-typed generator parameters as they arrive from a CLI or config.
/// Unset fields fall back to the family's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeneratorOptions {
    pub seed: u64,
    pub intensity: Option<f64>,
    pub centers: Option<Vec<(f64, f64)>>,
    pub per_cluster_mean: Option<f64>,
    pub spread: Option<f64>,
    pub decay_scale: Option<f64>,
    pub base_prob: Option<f64>,
}

pub type GeneratorFactory = fn(&GeneratorOptions) -> Result<Box<dyn NetworkGenerator>>;

/// Generator families by name.
pub struct GeneratorRegistry {
    factories: BTreeMap<&'static str, GeneratorFactory>,
}

impl GeneratorRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// Registry with the `poisson` and `clustered` families.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register("poisson", poisson_factory);
        r.register("clustered", clustered_factory);
        r
    }

    pub fn register(&mut self, name: &'static str, factory: GeneratorFactory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn create(&self, name: &str, options: &GeneratorOptions) -> Result<Box<dyn NetworkGenerator>> {
        let factory = self.factories.get(name).ok_or_else(|| Error::UnknownStrategy {
            kind: "generator",
            name: name.to_string(),
            available: self.names().join(", "),
        })?;
        factory(options)
    }
}

impl Default for GeneratorRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

fn reject(family: &str, flags: &[(&str, bool)]) -> Result<()> {
    match flags.iter().find(|(_, set)| *set) {
        Some((name, _)) => Err(Error::InvalidSpec(format!("{name} does not apply to the {family} generator"))),
        None => Ok(()),
    }
}

fn poisson_factory(o: &GeneratorOptions) -> Result<Box<dyn NetworkGenerator>> {
    reject(
        "poisson",
        &[
            ("centers", o.centers.is_some()),
            ("per-cluster mean", o.per_cluster_mean.is_some()),
            ("spread", o.spread.is_some()),
        ],
    )?;
    let d = PoissonSpec::default();
    let spec = PoissonSpec {
        intensity: o.intensity.unwrap_or(d.intensity),
        decay_scale: o.decay_scale.unwrap_or(d.decay_scale),
        base_prob: o.base_prob.unwrap_or(d.base_prob),
        seed: o.seed,
    };
    spec.validate()?;
    Ok(Box::new(spec))
}

fn clustered_factory(o: &GeneratorOptions) -> Result<Box<dyn NetworkGenerator>> {
    reject("clustered", &[("intensity", o.intensity.is_some())])?;
    let d = ClusterSpec::default();
    let spec = ClusterSpec {
        centers: o.centers.clone().unwrap_or(d.centers),
        per_cluster_mean: o.per_cluster_mean.unwrap_or(d.per_cluster_mean),
        spread: o.spread.unwrap_or(d.spread),
        decay_scale: o.decay_scale.unwrap_or(d.decay_scale),
        base_prob: o.base_prob.unwrap_or(d.base_prob),
        seed: o.seed,
    };
    spec.validate()?;
    Ok(Box::new(spec))
}
