//! HTTP API over stored spatial networks.
//!
//! | route | |
//! |---|---|
//! | `GET /healthz` | liveness, body `ok` |
//! | `POST /networks` | GeoJSON body or multipart `nodes.csv` + `edges.csv` |
//! | `GET /networks` | metadata of stored networks |
//! | `GET /networks/{id}/geometry` | nodes, edges, directed flag, extent |
//! | `GET /networks/{id}/donut` | aggregate JSON for `bbox`, `near`, `medium`, `self_loops` |
//! | `GET /networks/{id}/donut.svg` | the same aggregate rendered |
//!
//! Everything else is served from the viewer asset directory, if one is
//! configured, or a small placeholder page.

pub mod api;
pub mod error;
pub mod store;

use std::future::Future;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use axum::extract::{DefaultBodyLimit, Request};
use axum::middleware::{self, Next};
use axum::response::{Html, Response};
use axum::routing::get;
use axum::Router;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

pub use error::ApiError;
pub use store::{NetworkMeta, NetworkStore, StoreError, StoredNetwork};

pub const DEFAULT_BODY_LIMIT: usize = 50 * 1024 * 1024;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Upload size limit in bytes; larger bodies get 413.
    pub body_limit: usize,
    /// Built viewer assets served at `/`.
    pub assets_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            body_limit: DEFAULT_BODY_LIMIT,
            assets_dir: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AppState {
    pub store: Arc<NetworkStore>,
}

pub fn router(store: Arc<NetworkStore>, config: &ServiceConfig) -> Router {
    let api = Router::new()
        .route("/healthz", get(api::healthz))
        .route("/networks", get(api::list_networks).post(api::upload))
        .route("/networks/{id}/geometry", get(api::geometry))
        .route("/networks/{id}/donut", get(api::donut_json))
        .route("/networks/{id}/donut.svg", get(api::donut_svg))
        .layer(DefaultBodyLimit::max(config.body_limit))
        .with_state(AppState { store });

    let app = match &config.assets_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(placeholder)),
    };
    app.layer(middleware::from_fn(log_request))
}

/// Serves `app` on `listener` until `shutdown` resolves, then drains
/// in-flight requests.
pub async fn serve(
    listener: TcpListener,
    app: Router,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, app).with_graceful_shutdown(shutdown).await
}

async fn log_request(request: Request, next: Next) -> Response {
    let method = request.method().clone();
    let uri = request.uri().clone();
    let start = Instant::now();
    let response = next.run(request).await;
    tracing::info!(
        "{method} {uri} {} {:.1}ms",
        response.status().as_u16(),
        start.elapsed().as_secs_f64() * 1e3
    );
    response
}

async fn placeholder() -> Html<&'static str> {
    Html(include_str!("placeholder.html"))
}
