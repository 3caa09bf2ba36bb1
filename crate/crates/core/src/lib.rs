//! Directional donut summaries of spatial social networks.
//!
//! A donut condenses the edges of a geolocated graph into eight compass
//! sectors around the center of the current viewport, each split into near,
//! medium and far buckets by min-max normalized edge length. Only nodes
//! inside the viewport participate, which makes the same chart usable for a
//! whole network or for one zoomed-in region.

pub mod aggregate;
pub mod error;
pub mod ingest;
pub mod metric;
pub mod model;
pub mod render;
pub mod synth;

pub use aggregate::{aggregate_donut, aggregate_in, bucket_of, direction_of, AggregationConfig};
pub use error::{Error, Result};
pub use model::{
    Direction, DistanceBucket, DonutAggregate, Edge, Node, SpatialNetwork, Thresholds, Viewport,
};
pub use render::{render_donut, DonutStyle};
