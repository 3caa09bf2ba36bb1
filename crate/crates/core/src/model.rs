//! Domain types shared by aggregation, ingestion, rendering and the service.
//!
//! Everything here is immutable once constructed. Constructors validate their
//! invariants, so a `SpatialNetwork`, `Viewport` or `Thresholds` in hand is
//! always well formed.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub x: f64,
    pub y: f64,
}

impl Node {
    pub fn new(id: impl Into<String>, x: f64, y: f64) -> Self {
        Self {
            id: id.into(),
            x,
            y,
        }
    }

    pub fn position(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: String,
    pub dst: String,
}

impl Edge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>) -> Self {
        Self {
            src: src.into(),
            dst: dst.into(),
        }
    }

    pub fn is_self_loop(&self) -> bool {
        self.src == self.dst
    }
}

/// A geolocated node/edge graph.
///
/// Edges form a multiset: duplicates are kept and counted separately.
/// Endpoints are resolved to node indices at construction time.
#[derive(Debug, Clone)]
pub struct SpatialNetwork {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    endpoints: Vec<(usize, usize)>,
    directed: bool,
    geographic: bool,
}

impl SpatialNetwork {
    /// Validates raw nodes and edges into a network.
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>, directed: bool, geographic: bool) -> Result<Self> {
        let mut index: HashMap<&str, usize> = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if node.id.is_empty() {
                return Err(Error::EmptyNodeId(i));
            }
            if !node.x.is_finite() || !node.y.is_finite() {
                return Err(Error::NonFiniteCoordinate(node.id.clone()));
            }
            if index.insert(node.id.as_str(), i).is_some() {
                return Err(Error::DuplicateNodeId(node.id.clone()));
            }
        }

        let resolve = |id: &str, edge_index: usize| {
            index.get(id).copied().ok_or_else(|| Error::DanglingEdge {
                id: id.to_string(),
                edge_index,
            })
        };
        let endpoints = edges
            .iter()
            .enumerate()
            .map(|(i, e)| Ok((resolve(&e.src, i)?, resolve(&e.dst, i)?)))
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            nodes,
            edges,
            endpoints,
            directed,
            geographic,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Resolved `(src, dst)` node indices, parallel to [`Self::edges`].
    pub fn endpoints(&self) -> &[(usize, usize)] {
        &self.endpoints
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn geographic(&self) -> bool {
        self.geographic
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Tight bounding box of all node coordinates.
    pub fn extent(&self) -> Result<Viewport> {
        let first = self.nodes.first().ok_or(Error::EmptyNetwork)?;
        let init = (first.x, first.y, first.x, first.y);
        let (min_x, min_y, max_x, max_y) = self.nodes.iter().fold(init, |(a, b, c, d), n| {
            (a.min(n.x), b.min(n.y), c.max(n.x), d.max(n.y))
        });
        Viewport::new(min_x, min_y, max_x, max_y)
    }

    /// Same content with a different directedness flag.
    pub fn with_directed(&self, directed: bool) -> Self {
        Self {
            directed,
            ..self.clone()
        }
    }
}

/// Structural equality: same nodes in order, same edge multiset, same flags.
impl PartialEq for SpatialNetwork {
    fn eq(&self, other: &Self) -> bool {
        if self.nodes != other.nodes
            || self.directed != other.directed
            || self.geographic != other.geographic
            || self.edges.len() != other.edges.len()
        {
            return false;
        }
        let mut a: Vec<_> = self.edges.iter().collect();
        let mut b: Vec<_> = other.edges.iter().collect();
        a.sort_by(|l, r| (&l.src, &l.dst).cmp(&(&r.src, &r.dst)));
        b.sort_by(|l, r| (&l.src, &l.dst).cmp(&(&r.src, &r.dst)));
        a == b
    }
}

/// Alias kept for callers that think in terms of the validation step.
pub fn validate_network(
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    directed: bool,
    geographic: bool,
) -> Result<SpatialNetwork> {
    SpatialNetwork::new(nodes, edges, directed, geographic)
}

pub fn extent_of(network: &SpatialNetwork) -> Result<Viewport> {
    network.extent()
}

/// Axis-aligned region of interest. Containment is closed on all four sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Viewport {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self> {
        if ![min_x, min_y, max_x, max_y].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidViewport("coordinates must be finite".into()));
        }
        if min_x > max_x || min_y > max_y {
            return Err(Error::InvalidViewport(format!(
                "min must not exceed max (got {min_x},{min_y},{max_x},{max_y})"
            )));
        }
        Ok(Self {
            min_x,
            min_y,
            max_x,
            max_y,
        })
    }

    pub fn center(&self) -> (f64, f64) {
        ((self.min_x + self.max_x) / 2.0, (self.min_y + self.max_y) / 2.0)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.min_x <= x && x <= self.max_x && self.min_y <= y && y <= self.max_y
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.min_x, self.min_y, self.max_x, self.max_y]
    }
}

impl std::str::FromStr for Viewport {
    type Err = Error;

    /// Parses `minx,miny,maxx,maxy`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidViewport(format!("expected minx,miny,maxx,maxy, got {s:?}")))?;
        match parts[..] {
            [a, b, c, d] => Viewport::new(a, b, c, d),
            _ => Err(Error::InvalidViewport(format!(
                "expected 4 comma-separated numbers, got {}",
                parts.len()
            ))),
        }
    }
}

/// One of the eight 45° sectors around the viewport center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Direction {
    /// Serialization order.
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::NE,
        Direction::E,
        Direction::SE,
        Direction::S,
        Direction::SW,
        Direction::W,
        Direction::NW,
    ];

    /// Counter-clockwise from east, matching the angular sector index.
    const BY_SECTOR: [Direction; 8] = [
        Direction::E,
        Direction::NE,
        Direction::N,
        Direction::NW,
        Direction::W,
        Direction::SW,
        Direction::S,
        Direction::SE,
    ];

    /// Position in [`Direction::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    /// Sector number k: the sector is centered on 45·k degrees from east.
    pub fn sector(self) -> usize {
        (10 - self.index()) % 8
    }

    pub fn from_sector(k: usize) -> Direction {
        Self::BY_SECTOR[k % 8]
    }

    /// Center angle of the sector in degrees, counter-clockwise from east.
    pub fn center_degrees(self) -> f64 {
        45.0 * self.sector() as f64
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::N => "N",
            Direction::NE => "NE",
            Direction::E => "E",
            Direction::SE => "SE",
            Direction::S => "S",
            Direction::SW => "SW",
            Direction::W => "W",
            Direction::NW => "NW",
        }
    }

    pub fn opposite(self) -> Direction {
        Self::from_sector(self.sector() + 4)
    }

    /// The next sector counter-clockwise (E -> NE -> N ...).
    pub fn rotated_ccw(self) -> Direction {
        Self::from_sector(self.sector() + 1)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistanceBucket {
    Near,
    Medium,
    Far,
}

impl DistanceBucket {
    pub const ALL: [DistanceBucket; 3] = [DistanceBucket::Near, DistanceBucket::Medium, DistanceBucket::Far];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            DistanceBucket::Near => "near",
            DistanceBucket::Medium => "medium",
            DistanceBucket::Far => "far",
        }
    }
}

impl fmt::Display for DistanceBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Upper bounds (inclusive) of the near and medium buckets on normalized length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    near_max: f64,
    medium_max: f64,
}

impl Thresholds {
    pub const DEFAULT_NEAR_MAX: f64 = 0.35;
    pub const DEFAULT_MEDIUM_MAX: f64 = 0.60;

    pub fn new(near_max: f64, medium_max: f64) -> Result<Self> {
        let ok = near_max.is_finite()
            && medium_max.is_finite()
            && (0.0..=1.0).contains(&near_max)
            && (0.0..=1.0).contains(&medium_max)
            && near_max <= medium_max;
        if !ok {
            return Err(Error::InvalidThresholds { near_max, medium_max });
        }
        Ok(Self { near_max, medium_max })
    }

    pub fn near_max(&self) -> f64 {
        self.near_max
    }

    pub fn medium_max(&self) -> f64 {
        self.medium_max
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            near_max: Self::DEFAULT_NEAR_MAX,
            medium_max: Self::DEFAULT_MEDIUM_MAX,
        }
    }
}

/// Per-direction bucket counts, indexed by [`Direction::index`] then
/// [`DistanceBucket::index`].
pub type CountMatrix = [[u64; 3]; 8];

/// The aggregated donut: 8 sectors x 3 distance buckets plus the center count.
#[derive(Debug, Clone, PartialEq)]
pub struct DonutAggregate {
    pub counts: CountMatrix,
    pub node_count: u64,
    pub contribution_total: u64,
    pub length_min: Option<f64>,
    pub length_max: Option<f64>,
    pub thresholds: Thresholds,
    pub viewport: Viewport,
    pub directed: bool,
}

impl DonutAggregate {
    pub fn empty(viewport: Viewport, thresholds: Thresholds, directed: bool) -> Self {
        Self {
            counts: [[0; 3]; 8],
            node_count: 0,
            contribution_total: 0,
            length_min: None,
            length_max: None,
            thresholds,
            viewport,
            directed,
        }
    }

    pub fn count(&self, direction: Direction, bucket: DistanceBucket) -> u64 {
        self.counts[direction.index()][bucket.index()]
    }

    pub fn sector_total(&self, direction: Direction) -> u64 {
        self.counts[direction.index()].iter().sum()
    }

    pub fn bucket_total(&self, bucket: DistanceBucket) -> u64 {
        self.counts.iter().map(|row| row[bucket.index()]).sum()
    }

    pub fn max_cell(&self) -> u64 {
        self.counts.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn cell_sum(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}
