//! Viewport selection, sector assignment, length normalization and bucketing.
//!
//! The pipeline is `select_contributions -> normalize_lengths -> bucket_of`,
//! composed by [`aggregate_donut`]. Sectors are 45° wedges about the viewport
//! center with half-open boundaries at odd multiples of 22.5°. An edge is
//! attributed to the sector of its origin node, and its length is always the
//! full edge length even when the far endpoint lies outside the viewport.
//! Normalization is min-max over the current selection only, so zooming in
//! re-classifies edges relative to the region being looked at.

use crate::error::Result;
use crate::metric::metric_for;
use crate::model::{
    Direction, DistanceBucket, DonutAggregate, SpatialNetwork, Thresholds, Viewport,
};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AggregationConfig {
    pub thresholds: Thresholds,
    pub include_self_loops: bool,
}

impl AggregationConfig {
    pub fn new(thresholds: Thresholds) -> Self {
        Self {
            thresholds,
            include_self_loops: false,
        }
    }

    pub fn with_self_loops(mut self, include: bool) -> Self {
        self.include_self_loops = include;
        self
    }
}

/// One directed counting event for an edge whose origin is inside the viewport.
#[derive(Debug, Clone, PartialEq)]
pub struct Contribution {
    pub edge_index: usize,
    /// Index of the origin node in [`SpatialNetwork::nodes`].
    pub origin: usize,
    pub direction: Direction,
    /// Raw edge length in network units (metres in geographic mode).
    pub length: f64,
}

/// A contribution after normalization and bucketing.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedContribution {
    pub contribution: Contribution,
    pub normalized_length: f64,
    pub bucket: DistanceBucket,
}

/// Min and max raw length over a contribution set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthRange {
    pub min: f64,
    pub max: f64,
}

/// Sector of `point` as seen from `center`.
///
/// Sector k (E=0, NE=1, ... SE=7) covers `[45k - 22.5°, 45k + 22.5°)`.
/// A point exactly at the center maps to E.
pub fn direction_of(point: (f64, f64), center: (f64, f64)) -> Direction {
    let (dx, dy) = (point.0 - center.0, point.1 - center.1);
    if dx == 0.0 && dy == 0.0 {
        return Direction::E;
    }
    let mut theta = dy.atan2(dx).to_degrees();
    if theta < 0.0 {
        theta += 360.0;
    }
    // atan2 of a tiny negative dy can round up to exactly 360
    let k = ((theta + 22.5) / 45.0).floor() as usize % 8;
    Direction::from_sector(k)
}

pub fn select_contributions(
    network: &SpatialNetwork,
    viewport: &Viewport,
    config: &AggregationConfig,
) -> Result<Vec<Contribution>> {
    let nodes = network.nodes();
    let center = viewport.center();
    let metric = metric_for(network.geographic());
    let inside: Vec<bool> = nodes.iter().map(|n| viewport.contains(n.x, n.y)).collect();

    let mut out = Vec::new();
    for (edge_index, &(u, v)) in network.endpoints().iter().enumerate() {
        let self_loop = u == v;
        if self_loop && !config.include_self_loops {
            continue;
        }
        let origins: &[usize] = if network.directed() || self_loop {
            &[u]
        } else {
            &[u, v]
        };
        let mut length = None;
        for &origin in origins {
            if !inside[origin] {
                continue;
            }
            let length = match length {
                Some(l) => l,
                None => *length.insert(metric.distance(nodes[u].position(), nodes[v].position())?),
            };
            out.push(Contribution {
                edge_index,
                origin,
                direction: direction_of(nodes[origin].position(), center),
                length,
            });
        }
    }
    Ok(out)
}

/// Min-max normalizes `lengths` into `[0, 1]`.
///
/// When every length is equal (including a single length) all results are 0.
pub fn normalize_lengths(lengths: &[f64]) -> (Vec<f64>, Option<LengthRange>) {
    let Some(range) = length_range(lengths) else {
        return (Vec::new(), None);
    };
    let span = range.max - range.min;
    let normalized = if span > 0.0 {
        lengths
            .iter()
            .map(|&l| ((l - range.min) / span).clamp(0.0, 1.0))
            .collect()
    } else {
        vec![0.0; lengths.len()]
    };
    (normalized, Some(range))
}

fn length_range(lengths: &[f64]) -> Option<LengthRange> {
    let (&first, rest) = lengths.split_first()?;
    Some(rest.iter().fold(LengthRange { min: first, max: first }, |r, &l| LengthRange {
        min: r.min.min(l),
        max: r.max.max(l),
    }))
}

/// Near iff `x <= near_max`, Medium iff `near_max < x <= medium_max`, else Far.
pub fn bucket_of(normalized_length: f64, thresholds: &Thresholds) -> DistanceBucket {
    if normalized_length <= thresholds.near_max() {
        DistanceBucket::Near
    } else if normalized_length <= thresholds.medium_max() {
        DistanceBucket::Medium
    } else {
        DistanceBucket::Far
    }
}

/// Normalizes and buckets a selection against its own length range.
pub fn classify(
    contributions: Vec<Contribution>,
    thresholds: &Thresholds,
) -> (Vec<ClassifiedContribution>, Option<LengthRange>) {
    let lengths: Vec<f64> = contributions.iter().map(|c| c.length).collect();
    let (normalized, range) = normalize_lengths(&lengths);
    let classified = contributions
        .into_iter()
        .zip(normalized)
        .map(|(contribution, normalized_length)| ClassifiedContribution {
            contribution,
            normalized_length,
            bucket: bucket_of(normalized_length, thresholds),
        })
        .collect();
    (classified, range)
}

pub fn aggregate_donut(
    network: &SpatialNetwork,
    viewport: &Viewport,
    config: &AggregationConfig,
) -> Result<DonutAggregate> {
    let contributions = select_contributions(network, viewport, config)?;
    let (classified, range) = classify(contributions, &config.thresholds);

    let mut donut = DonutAggregate::empty(*viewport, config.thresholds, network.directed());
    donut.node_count = network
        .nodes()
        .iter()
        .filter(|n| viewport.contains(n.x, n.y))
        .count() as u64;
    for c in &classified {
        donut.counts[c.contribution.direction.index()][c.bucket.index()] += 1;
    }
    donut.contribution_total = classified.len() as u64;
    donut.length_min = range.map(|r| r.min);
    donut.length_max = range.map(|r| r.max);
    Ok(donut)
}

/// Aggregates over `viewport`, or over the network extent when `None`.
pub fn aggregate_in(
    network: &SpatialNetwork,
    viewport: Option<Viewport>,
    config: &AggregationConfig,
) -> Result<DonutAggregate> {
    let viewport = match viewport {
        Some(v) => v,
        None => network.extent()?,
    };
    aggregate_donut(network, &viewport, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, Node};
    use Direction::*;
    use DistanceBucket::*;

    fn pair(directed: bool) -> SpatialNetwork {
        SpatialNetwork::new(
            vec![Node::new("A", 0.0, 0.0), Node::new("B", 1.0, 0.0)],
            vec![Edge::new("A", "B")],
            directed,
            false,
        )
        .unwrap()
    }

    fn vp(a: f64, b: f64, c: f64, d: f64) -> Viewport {
        Viewport::new(a, b, c, d).unwrap()
    }

    #[test]
    fn axis_and_diagonal_directions() {
        let o = (0.0, 0.0);
        assert_eq!(direction_of((1.0, 0.0), o), E);
        assert_eq!(direction_of((1.0, 1.0), o), NE);
        assert_eq!(direction_of((0.0, 1.0), o), N);
        assert_eq!(direction_of((-1.0, 1.0), o), NW);
        assert_eq!(direction_of((-1.0, 0.0), o), W);
        assert_eq!(direction_of((-1.0, -1.0), o), SW);
        assert_eq!(direction_of((0.0, -1.0), o), S);
        assert_eq!(direction_of((1.0, -1.0), o), SE);
        assert_eq!(direction_of(o, o), E);
        assert_eq!(direction_of((2.0, 3.0), (2.0, 3.0)), E);
    }

    #[test]
    fn half_open_boundaries() {
        let at = |deg: f64| {
            let r = deg.to_radians();
            direction_of((r.cos(), r.sin()), (0.0, 0.0))
        };
        assert_eq!(at(22.5), NE);
        assert_eq!(at(337.5), E);
        // no float point lies exactly on the other boundaries; straddle them
        for k in 0..8 {
            let edge = 45.0 * k as f64 + 22.5;
            assert_eq!(at(edge - 1e-9), Direction::from_sector(k), "below {edge}");
            assert_eq!(at(edge + 1e-9), Direction::from_sector(k + 1), "above {edge}");
        }
        assert_eq!(at(22.4), E);
        assert_eq!(at(-0.0001), E);
        // negative zero y stays east
        assert_eq!(direction_of((1.0, -0.0), (0.0, 0.0)), E);
        assert_eq!(direction_of((1.0, -1e-300), (0.0, 0.0)), E);
    }

    #[test]
    fn undirected_both_inside() {
        let net = pair(false);
        let c = select_contributions(&net, &vp(-1.0, -1.0, 2.0, 1.0), &AggregationConfig::default()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!((c[0].origin, c[0].direction, c[0].length), (0, W, 1.0));
        assert_eq!((c[1].origin, c[1].direction, c[1].length), (1, E, 1.0));
    }

    #[test]
    fn undirected_one_inside_keeps_full_length() {
        let net = pair(false);
        let c = select_contributions(&net, &vp(-1.0, -1.0, 0.4, 1.0), &AggregationConfig::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].origin, 0);
        assert_eq!(c[0].length, 1.0);
    }

    #[test]
    fn directed_needs_origin_inside() {
        let net = pair(true);
        let only_b = vp(0.5, -1.0, 2.0, 1.0);
        assert!(select_contributions(&net, &only_b, &AggregationConfig::default())
            .unwrap()
            .is_empty());
        let only_a = vp(-1.0, -1.0, 0.5, 1.0);
        assert_eq!(select_contributions(&net, &only_a, &AggregationConfig::default()).unwrap().len(), 1);
    }

    #[test]
    fn self_loops_excluded_by_default_and_counted_once() {
        let net = SpatialNetwork::new(
            vec![Node::new("A", 0.0, 0.0), Node::new("B", 1.0, 0.0)],
            vec![Edge::new("A", "A"), Edge::new("A", "B")],
            false,
            false,
        )
        .unwrap();
        let v = vp(-1.0, -1.0, 2.0, 1.0);
        let default = select_contributions(&net, &v, &AggregationConfig::default()).unwrap();
        assert_eq!(default.len(), 2);
        let with = select_contributions(&net, &v, &AggregationConfig::default().with_self_loops(true)).unwrap();
        assert_eq!(with.len(), 3);
        assert_eq!(with.iter().filter(|c| c.edge_index == 0).count(), 1);
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_lengths(&[2.0, 4.0, 6.0]).0, vec![0.0, 0.5, 1.0]);
        assert_eq!(normalize_lengths(&[5.0, 5.0, 5.0]).0, vec![0.0; 3]);
        assert_eq!(normalize_lengths(&[3.0]).0, vec![0.0]);
        let (n, r) = normalize_lengths(&[1.0, 2.0, 4.0, 8.0]);
        assert_eq!(n, vec![0.0, 1.0 / 7.0, 3.0 / 7.0, 1.0]);
        assert_eq!(r, Some(LengthRange { min: 1.0, max: 8.0 }));
        let (n, r) = normalize_lengths(&[]);
        assert!(n.is_empty());
        assert_eq!(r, None);
    }

    #[test]
    fn bucket_boundaries() {
        let t = Thresholds::default();
        assert_eq!(bucket_of(0.35, &t), Near);
        assert_eq!(bucket_of(0.355, &t), Medium);
        assert_eq!(bucket_of(0.60, &t), Medium);
        assert_eq!(bucket_of(0.61, &t), Far);
        assert_eq!(bucket_of(0.0, &t), Near);
        assert_eq!(bucket_of(1.0, &t), Far);
        let all_near = Thresholds::new(1.0, 1.0).unwrap();
        assert_eq!(bucket_of(1.0, &all_near), Near);
    }

    #[test]
    fn two_node_aggregate() {
        let d = aggregate_donut(&pair(false), &vp(-1.0, -1.0, 2.0, 1.0), &AggregationConfig::default()).unwrap();
        assert_eq!(d.count(W, Near), 1);
        assert_eq!(d.count(E, Near), 1);
        assert_eq!(d.cell_sum(), 2);
        assert_eq!(d.node_count, 2);
        assert_eq!(d.contribution_total, 2);
        assert_eq!((d.length_min, d.length_max), (Some(1.0), Some(1.0)));
    }

    #[test]
    fn disjoint_viewport_is_empty() {
        let d = aggregate_donut(&pair(false), &vp(10.0, 10.0, 11.0, 11.0), &AggregationConfig::default()).unwrap();
        assert_eq!(d.counts, [[0; 3]; 8]);
        assert_eq!(d.node_count, 0);
        assert_eq!(d.contribution_total, 0);
        assert_eq!((d.length_min, d.length_max), (None, None));
    }

    #[test]
    fn default_viewport_is_extent() {
        let net = pair(false);
        let d = aggregate_in(&net, None, &AggregationConfig::default()).unwrap();
        assert_eq!(d.viewport, vp(0.0, 0.0, 1.0, 0.0));
        assert_eq!(d.node_count, 2);
    }

    #[test]
    fn geographic_lengths_use_haversine() {
        let net = SpatialNetwork::new(
            vec![Node::new("A", 0.0, 0.0), Node::new("B", 90.0, 0.0), Node::new("C", 1.0, 0.0)],
            vec![Edge::new("A", "B"), Edge::new("A", "C")],
            true,
            true,
        )
        .unwrap();
        let d = aggregate_in(&net, None, &AggregationConfig::default()).unwrap();
        assert!((d.length_max.unwrap() - 10_007_557.0).abs() < 1.0);
        assert_eq!(d.contribution_total, 2);
    }
}
