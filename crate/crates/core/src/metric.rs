//! Edge length strategies.
//!
//! A network is either planar (Euclidean distance in its own units) or
//! geographic (lon/lat degrees, great-circle metres). Each mode is a
//! [`DistanceMetric`] registered by name.

use crate::error::{Error, Result};
use crate::model::Node;

/// Mean Earth radius in metres (IUGG).
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

pub trait DistanceMetric: Send + Sync {
    fn name(&self) -> &'static str;

    fn distance(&self, a: (f64, f64), b: (f64, f64)) -> Result<f64>;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Planar;

impl DistanceMetric for Planar {
    fn name(&self) -> &'static str {
        "planar"
    }

    fn distance(&self, a: (f64, f64), b: (f64, f64)) -> Result<f64> {
        Ok((b.0 - a.0).hypot(b.1 - a.1))
    }
}

/// Haversine great-circle distance; points are `(lon, lat)` in degrees.
#[derive(Debug, Default, Clone, Copy)]
pub struct Haversine;

impl DistanceMetric for Haversine {
    fn name(&self) -> &'static str {
        "haversine"
    }

    fn distance(&self, a: (f64, f64), b: (f64, f64)) -> Result<f64> {
        for lat in [a.1, b.1] {
            if !(-90.0..=90.0).contains(&lat) {
                return Err(Error::LatitudeOutOfRange(lat));
            }
        }
        let (lat1, lat2) = (a.1.to_radians(), b.1.to_radians());
        let dlat = lat2 - lat1;
        let dlon = (b.0 - a.0).to_radians();
        let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
        Ok(2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin())
    }
}

static PLANAR: Planar = Planar;
static HAVERSINE: Haversine = Haversine;
static METRICS: [&dyn DistanceMetric; 2] = [&PLANAR, &HAVERSINE];

pub fn metrics() -> &'static [&'static dyn DistanceMetric] {
    &METRICS
}

pub fn metric_by_name(name: &str) -> Result<&'static dyn DistanceMetric> {
    METRICS
        .iter()
        .copied()
        .find(|m| m.name() == name)
        .ok_or_else(|| Error::UnknownStrategy {
            kind: "distance metric",
            name: name.to_string(),
            available: METRICS.iter().map(|m| m.name()).collect::<Vec<_>>().join(", "),
        })
}

/// Metric matching a network's coordinate mode.
pub fn metric_for(geographic: bool) -> &'static dyn DistanceMetric {
    if geographic {
        &HAVERSINE
    } else {
        &PLANAR
    }
}

pub fn edge_length(a: &Node, b: &Node, geographic: bool) -> Result<f64> {
    metric_for(geographic).distance(a.position(), b.position())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_three_four_five() {
        let a = Node::new("a", 0.0, 0.0);
        let b = Node::new("b", 3.0, 4.0);
        assert_eq!(edge_length(&a, &b, false).unwrap(), 5.0);
        assert_eq!(edge_length(&a, &a, false).unwrap(), 0.0);
        assert_eq!(edge_length(&b, &b, true).unwrap(), 0.0);
    }

    #[test]
    fn haversine_quarter_circumference() {
        let a = Node::new("a", 0.0, 0.0);
        let b = Node::new("b", 90.0, 0.0);
        let quarter = 2.0 * std::f64::consts::PI * EARTH_RADIUS_M / 4.0;
        let d = edge_length(&a, &b, true).unwrap();
        assert!((d - quarter).abs() <= 1.0, "{d} vs {quarter}");
        assert!((d - 10_007_557.0).abs() <= 1.0);
    }

    #[test]
    fn haversine_rejects_bad_latitude() {
        let a = Node::new("a", 0.0, 91.0);
        let b = Node::new("b", 0.0, 0.0);
        assert_eq!(edge_length(&a, &b, true).unwrap_err(), Error::LatitudeOutOfRange(91.0));
        // planar mode does not care
        assert!(edge_length(&a, &b, false).is_ok());
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(metric_by_name("planar").unwrap().name(), "planar");
        assert_eq!(metric_by_name("haversine").unwrap().name(), "haversine");
        assert!(matches!(
            metric_by_name("manhattan"),
            Err(Error::UnknownStrategy { .. })
        ));
        assert_eq!(metrics().len(), 2);
    }
}
