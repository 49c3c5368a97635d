//! HTTP service.
//!
//! | Method | Path | Body / query | Response |
//! |---|---|---|---|
//! | POST | `/route` | route request JSON | route response, or an error body with status 400, 404 or 422 |
//! | GET | `/network` | `bbox=minlon,minlat,maxlon,maxlat` | GeoJSON FeatureCollection of edges touching the box |
//! | GET | `/profiles` | | JSON array of the preset profiles |
//! | GET | `/health` | | `{"status":"ok","nodes":n,"edges":m}` |
//!
//! The graph is loaded once and shared read-only between requests.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use serde_json::json;
use tower_http::cors::CorsLayer;
use walkgraph_core::geometry::{point_segment_distance, segment_intersection, EPS};
use walkgraph_core::network::GraphEdge;
use walkgraph_core::router::presets;
use walkgraph_core::{GeoPoint, LocalPoint};

use crate::api::{parse_route_request, render, ApiError, RouteContext};
use crate::graph_io::edges_geojson;

fn json_response(status: StatusCode, body: String) -> Response {
    let mut r = (status, body).into_response();
    r.headers_mut().insert(header::CONTENT_TYPE, HeaderValue::from_static("application/json"));
    r
}

fn error_response(e: &ApiError) -> Response {
    json_response(StatusCode::from_u16(e.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR), render(&e.body()))
}

async fn route(State(ctx): State<Arc<RouteContext>>, body: Bytes) -> Response {
    let today = chrono::Local::now().date_naive();
    match parse_route_request(&body).and_then(|req| ctx.route(&req, today)) {
        Ok(resp) => json_response(StatusCode::OK, render(&resp)),
        Err(e) => error_response(&e),
    }
}

#[derive(Debug, Deserialize)]
struct NetworkQuery {
    bbox: Option<String>,
}

/// Parses `minlon,minlat,maxlon,maxlat`.
pub fn parse_bbox(s: &str) -> Result<(GeoPoint, GeoPoint), ApiError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(ApiError::bad_request("bbox: expected minlon,minlat,maxlon,maxlat"));
    }
    let mut v = [0.0; 4];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse::<f64>().map_err(|_| ApiError::bad_request(format!("bbox: {p:?} is not a number")))?;
    }
    let min = GeoPoint::new(v[0], v[1]).map_err(|e| ApiError::bad_request(format!("bbox: {e}")))?;
    let max = GeoPoint::new(v[2], v[3]).map_err(|e| ApiError::bad_request(format!("bbox: {e}")))?;
    if min.lon > max.lon || min.lat > max.lat {
        return Err(ApiError::bad_request("bbox: minimum exceeds maximum"));
    }
    Ok((min, max))
}

fn inside(p: &LocalPoint, min: &LocalPoint, max: &LocalPoint) -> bool {
    p.x >= min.x - EPS && p.x <= max.x + EPS && p.y >= min.y - EPS && p.y <= max.y + EPS
}

/// Whether any part of the edge lies in the closed box.
pub fn edge_touches_box(e: &GraphEdge, min: &LocalPoint, max: &LocalPoint) -> bool {
    let (lo, hi) = e.geometry.bbox();
    if lo.x > max.x + EPS || hi.x < min.x - EPS || lo.y > max.y + EPS || hi.y < min.y - EPS {
        return false;
    }
    if e.geometry.points().iter().any(|p| inside(p, min, max)) {
        return true;
    }
    let corners = [*min, LocalPoint::new(max.x, min.y), *max, LocalPoint::new(min.x, max.y)];
    let sides: Vec<(LocalPoint, LocalPoint)> =
        (0..4).map(|i| (corners[i], corners[(i + 1) % 4])).filter(|(a, b)| a.distance(b) > EPS).collect();
    e.geometry.segments().any(|(a, b)| {
        if sides.is_empty() {
            point_segment_distance(min, &a, &b) <= EPS
        } else {
            sides.iter().any(|(c, d)| segment_intersection(&a, &b, c, d).is_some())
        }
    })
}

async fn network(State(ctx): State<Arc<RouteContext>>, Query(q): Query<NetworkQuery>) -> Response {
    let edges: Vec<&GraphEdge> = match q.bbox.as_deref() {
        None => ctx.graph.edges().iter().collect(),
        Some(s) => match parse_bbox(s) {
            Ok((min, max)) => {
                let (lo, hi) = (ctx.projection.project_unchecked(min), ctx.projection.project_unchecked(max));
                ctx.graph.edges().iter().filter(|e| edge_touches_box(e, &lo, &hi)).collect()
            }
            Err(e) => return error_response(&e),
        },
    };
    json_response(StatusCode::OK, render(&edges_geojson(edges, &ctx.projection)))
}

async fn profiles() -> Response {
    json_response(StatusCode::OK, render(&presets()))
}

async fn health(State(ctx): State<Arc<RouteContext>>) -> Response {
    json_response(
        StatusCode::OK,
        render(&json!({ "status": "ok", "nodes": ctx.graph.nodes().len(), "edges": ctx.graph.edges().len() })),
    )
}

/// The service's router. `cors_origin` restricts CORS to one origin;
/// without it any origin is allowed.
pub fn app(ctx: Arc<RouteContext>, cors_origin: Option<&str>) -> Router {
    let cors = match cors_origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(origin) => CorsLayer::new()
            .allow_origin(origin)
            .allow_methods([axum::http::Method::GET, axum::http::Method::POST])
            .allow_headers([header::CONTENT_TYPE]),
        None => CorsLayer::permissive(),
    };
    Router::new()
        .route("/route", post(route))
        .route("/network", get(network))
        .route("/profiles", get(profiles))
        .route("/health", get(health))
        .layer(cors)
        .with_state(ctx)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(ctx: Arc<RouteContext>, addr: SocketAddr, cors_origin: Option<&str>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app(ctx, cors_origin)).await
}
