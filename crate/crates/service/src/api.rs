use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{FromRequest, Multipart, Path, Query, Request, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use donut_core::aggregate::{aggregate_in, AggregationConfig};
use donut_core::ingest::{parse_csv_network, parse_geojson_network, write_aggregate};
use donut_core::model::{DonutAggregate, Thresholds, Viewport};
use donut_core::render::{render_donut, DonutStyle};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::ApiError;
use crate::store::{NetworkMeta, StoredNetwork};
use crate::AppState;

pub async fn healthz() -> &'static str {
    "ok"
}

pub async fn list_networks(State(state): State<AppState>) -> Json<Vec<NetworkMeta>> {
    Json(state.store.list())
}

#[derive(Debug, Default, Deserialize)]
pub struct UploadParams {
    directed: Option<bool>,
    /// Only consulted for CSV uploads; GeoJSON is always lon/lat.
    geographic: Option<bool>,
    name: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Created {
    id: String,
    node_count: usize,
    edge_count: usize,
}

pub async fn upload(
    State(state): State<AppState>,
    params: Result<Query<UploadParams>, QueryRejection>,
    request: Request,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let Query(params) = params.map_err(|r| ApiError::bad_request(r.body_text()))?;
    let directed = params.directed.unwrap_or(false);
    let is_multipart = request
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("multipart/form-data"));

    let network = if is_multipart {
        let multipart = Multipart::from_request(request, &())
            .await
            .map_err(|r| ApiError::new(r.status(), r.body_text()))?;
        let (nodes, edges) = csv_parts(multipart).await?;
        parse_csv_network(&nodes, &edges, directed, params.geographic.unwrap_or(false))?
    } else {
        let body = Bytes::from_request(request, &())
            .await
            .map_err(|r| ApiError::new(r.status(), r.body_text()))?;
        let text = std::str::from_utf8(&body).map_err(|_| ApiError::bad_request("body is not valid UTF-8"))?;
        parse_geojson_network(text, directed)?
    };

    let stored = state.store.insert(params.name, network)?;
    tracing::info!(id = %stored.meta.id, nodes = stored.meta.node_count, edges = stored.meta.edge_count, "stored network");
    Ok((
        StatusCode::CREATED,
        Json(Created {
            id: stored.meta.id.clone(),
            node_count: stored.meta.node_count,
            edge_count: stored.meta.edge_count,
        }),
    ))
}

/// Accepts parts named `nodes`/`edges` or files named `*nodes.csv`/`*edges.csv`.
async fn csv_parts(mut multipart: Multipart) -> Result<(String, String), ApiError> {
    let multipart_err = |e: axum::extract::multipart::MultipartError| ApiError::new(e.status(), e.body_text());
    let (mut nodes, mut edges) = (None, None);
    while let Some(field) = multipart.next_field().await.map_err(multipart_err)? {
        let label = field
            .file_name()
            .or(field.name())
            .unwrap_or_default()
            .to_ascii_lowercase();
        let slot = if label == "nodes" || label.ends_with("nodes.csv") {
            &mut nodes
        } else if label == "edges" || label.ends_with("edges.csv") {
            &mut edges
        } else {
            continue;
        };
        *slot = Some(field.text().await.map_err(multipart_err)?);
    }
    match (nodes, edges) {
        (Some(n), Some(e)) => Ok((n, e)),
        (None, _) => Err(ApiError::bad_request("multipart upload is missing the nodes.csv part")),
        (_, None) => Err(ApiError::bad_request("multipart upload is missing the edges.csv part")),
    }
}

#[derive(Serialize)]
struct NodeDoc<'a> {
    id: &'a str,
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct EdgeDoc<'a> {
    src: &'a str,
    dst: &'a str,
}

#[derive(Serialize)]
struct GeometryDoc<'a> {
    nodes: Vec<NodeDoc<'a>>,
    edges: Vec<EdgeDoc<'a>>,
    directed: bool,
    /// Absent for a network without nodes.
    extent: Option<[f64; 4]>,
}

pub async fn geometry(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let stored = lookup(&state, &id)?;
    let net = &stored.network;
    let doc = GeometryDoc {
        nodes: net.nodes().iter().map(|n| NodeDoc { id: &n.id, x: n.x, y: n.y }).collect(),
        edges: net.edges().iter().map(|e| EdgeDoc { src: &e.src, dst: &e.dst }).collect(),
        directed: net.directed(),
        extent: net.extent().ok().map(|v| v.to_array()),
    };
    Ok(Json(doc).into_response())
}

#[derive(Debug, Default, Deserialize)]
pub struct DonutParams {
    bbox: Option<String>,
    near: Option<f64>,
    medium: Option<f64>,
    self_loops: Option<bool>,
}

impl DonutParams {
    fn aggregate(&self, stored: &StoredNetwork) -> Result<DonutAggregate, ApiError> {
        let viewport = self.bbox.as_deref().map(str::parse::<Viewport>).transpose()?;
        let thresholds = Thresholds::new(
            self.near.unwrap_or(Thresholds::DEFAULT_NEAR_MAX),
            self.medium.unwrap_or(Thresholds::DEFAULT_MEDIUM_MAX),
        )?;
        let config = AggregationConfig::new(thresholds).with_self_loops(self.self_loops.unwrap_or(false));
        Ok(aggregate_in(&stored.network, viewport, &config)?)
    }
}

pub async fn donut_json(
    State(state): State<AppState>,
    Path(id): Path<String>,
    params: Result<Query<DonutParams>, QueryRejection>,
    headers: HeaderMap,
) -> Result<Response, ApiError> {
    let stored = lookup(&state, &id)?;
    let Query(params) = params.map_err(|r| ApiError::bad_request(r.body_text()))?;
    let body = write_aggregate(&params.aggregate(&stored)?);
    Ok(cacheable(&headers, "application/json", body))
}

pub async fn donut_svg(
    State(state): State<AppState>,
    Path(id): Path<String>,
    params: Result<Query<DonutParams>, QueryRejection>,
    headers: HeaderMap,
) -> Result<Response, ApiError> {
    let stored = lookup(&state, &id)?;
    let Query(params) = params.map_err(|r| ApiError::bad_request(r.body_text()))?;
    let body = render_donut(&params.aggregate(&stored)?, &DonutStyle::default());
    Ok(cacheable(&headers, "image/svg+xml", body))
}

fn lookup(state: &AppState, id: &str) -> Result<Arc<StoredNetwork>, ApiError> {
    state.store.get(id).ok_or_else(|| ApiError::not_found(id))
}

/// Strong ETag over the exact body bytes.
pub fn etag_of(body: &[u8]) -> String {
    format!("\"{}\"", hex::encode(Sha256::digest(body)))
}

fn if_none_match_hits(headers: &HeaderMap, etag: &str) -> bool {
    headers
        .get_all(header::IF_NONE_MATCH)
        .iter()
        .filter_map(|v| v.to_str().ok())
        .flat_map(|v| v.split(','))
        .map(str::trim)
        .any(|tag| tag == "*" || tag == etag)
}

fn cacheable(request_headers: &HeaderMap, content_type: &'static str, body: String) -> Response {
    let etag = etag_of(body.as_bytes());
    let etag_value = HeaderValue::from_str(&etag).expect("hex etag is a valid header");
    let cache = HeaderValue::from_static("no-cache");
    if if_none_match_hits(request_headers, &etag) {
        return (
            StatusCode::NOT_MODIFIED,
            [(header::ETAG, etag_value), (header::CACHE_CONTROL, cache)],
        )
            .into_response();
    }
    (
        [
            (header::CONTENT_TYPE, HeaderValue::from_static(content_type)),
            (header::ETAG, etag_value),
            (header::CACHE_CONTROL, cache),
        ],
        body,
    )
        .into_response()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn etag_is_quoted_sha256() {
        // sha256("") is a well-known constant
        assert_eq!(
            etag_of(b""),
            "\"e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855\""
        );
    }

    #[test]
    fn if_none_match_lists() {
        let mut h = HeaderMap::new();
        h.insert(header::IF_NONE_MATCH, HeaderValue::from_static("\"a\", \"b\""));
        assert!(if_none_match_hits(&h, "\"b\""));
        assert!(!if_none_match_hits(&h, "\"c\""));
        h.insert(header::IF_NONE_MATCH, HeaderValue::from_static("*"));
        assert!(if_none_match_hits(&h, "\"c\""));
    }
}
