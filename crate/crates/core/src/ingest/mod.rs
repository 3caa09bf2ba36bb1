//! On-disk formats: CSV node/edge pairs, GeoJSON feature collections and the
//! `.donut.json` aggregate document.

mod aggregate_json;
mod csv_pair;
mod geojson_doc;

pub use aggregate_json::{parse_aggregate, write_aggregate};
pub use csv_pair::{parse_csv_network, write_csv_network};
pub use geojson_doc::{parse_geojson_network, write_geojson_network};

pub const NODES_CSV_SUFFIX: &str = ".nodes.csv";
pub const EDGES_CSV_SUFFIX: &str = ".edges.csv";
pub const GEOJSON_SUFFIX: &str = ".geojson";
pub const DONUT_JSON_SUFFIX: &str = ".donut.json";
