//! GeoJSON networks.
//!
//! Nodes are `Point` features carrying an `id` property. Edges are any
//! features carrying `src` and `dst` properties; their geometry is ignored
//! and node coordinates are authoritative.

use geojson::{Feature, FeatureCollection, GeoJson, Geometry, JsonObject, JsonValue, Value};

use crate::error::{Error, Result};
use crate::model::{Edge, Node, SpatialNetwork};

pub fn parse_geojson_network(text: &str, directed: bool) -> Result<SpatialNetwork> {
    let mut value: JsonValue = serde_json::from_str(text)?;
    if value.get("type").and_then(JsonValue::as_str) != Some("FeatureCollection") {
        return Err(Error::NotFeatureCollection);
    }
    // edge features may omit geometry entirely
    if let Some(features) = value.get_mut("features").and_then(JsonValue::as_array_mut) {
        for f in features.iter_mut().filter_map(JsonValue::as_object_mut) {
            f.entry("geometry").or_insert(JsonValue::Null);
        }
    }
    let collection = FeatureCollection::try_from(value).map_err(|e| Error::Json(e.to_string()))?;

    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (i, feature) in collection.features.iter().enumerate() {
        let point = match feature.geometry.as_ref().map(|g| &g.value) {
            Some(Value::Point(p)) => Some(p),
            _ => None,
        };
        match point {
            Some(p) if !has_edge_props(feature) => {
                let id = id_property(feature, i, "id")?;
                let (x, y) = match p[..] {
                    [x, y, ..] => (x, y),
                    _ => return Err(Error::Json(format!("feature {i}: point needs two coordinates"))),
                };
                nodes.push(Node::new(id, x, y));
            }
            _ => {
                let src = id_property(feature, i, "src")?;
                let dst = id_property(feature, i, "dst")?;
                edges.push(Edge::new(src, dst));
            }
        }
    }
    SpatialNetwork::new(nodes, edges, directed, true)
}

fn has_edge_props(feature: &Feature) -> bool {
    feature.contains_property("src") && feature.contains_property("dst")
}

/// String ids are taken verbatim; numeric ids use their JSON spelling.
fn id_property(feature: &Feature, index: usize, name: &str) -> Result<String> {
    let missing = || Error::MissingProperty {
        feature: index,
        name: name.to_string(),
    };
    match feature.property(name) {
        Some(JsonValue::String(s)) => Ok(s.clone()),
        Some(JsonValue::Number(n)) => Ok(n.to_string()),
        _ => Err(missing()),
    }
}

/// Nodes as `Point` features, then edges as two-point `LineString` features.
pub fn write_geojson_network(network: &SpatialNetwork) -> String {
    let nodes = network.nodes();
    let node_features = nodes.iter().map(|n| {
        let mut props = JsonObject::new();
        props.insert("id".into(), JsonValue::String(n.id.clone()));
        feature(Value::Point(vec![n.x, n.y]), props)
    });
    let edge_features = network.edges().iter().zip(network.endpoints()).map(|(e, &(u, v))| {
        let mut props = JsonObject::new();
        props.insert("src".into(), JsonValue::String(e.src.clone()));
        props.insert("dst".into(), JsonValue::String(e.dst.clone()));
        let line = vec![vec![nodes[u].x, nodes[u].y], vec![nodes[v].x, nodes[v].y]];
        feature(Value::LineString(line), props)
    });
    let fc = FeatureCollection {
        bbox: None,
        features: node_features.chain(edge_features).collect(),
        foreign_members: None,
    };
    GeoJson::FeatureCollection(fc).to_string()
}

fn feature(value: Value, properties: JsonObject) -> Feature {
    Feature {
        bbox: None,
        geometry: Some(Geometry::new(value)),
        id: None,
        properties: Some(properties),
        foreign_members: None,
    }
}
