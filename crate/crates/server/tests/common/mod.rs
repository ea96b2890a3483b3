#![allow(dead_code)]

use std::sync::Arc;

use axum::body::{Body, Bytes};
use axum::http::{HeaderMap, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use phemotion_ai::Pipeline;
use phemotion_core::{Binding, EmotionToken, MappingMatrix, Palette, ShapeParameterId};
use phemotion_server::{router, AppState, ServerConfig};
use serde_json::Value;
use tower::ServiceExt;

pub fn app(pipeline: Option<Pipeline>) -> Router {
    app_with(ServerConfig::default(), pipeline)
}

pub fn app_with(config: ServerConfig, pipeline: Option<Pipeline>) -> Router {
    router(Arc::new(AppState::new(config, pipeline)))
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: Bytes,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body).expect("JSON body")
    }
}

pub async fn call(
    app: &Router,
    method: Method,
    uri: &str,
    body: Option<Value>,
    accept: Option<&str>,
) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(a) = accept {
        req = req.header("accept", a);
    }
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let res = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = res.status();
    let headers = res.headers().clone();
    let body = res.into_body().collect().await.unwrap().to_bytes();
    Reply {
        status,
        headers,
        body,
    }
}

pub async fn post(app: &Router, uri: &str, body: Value) -> Reply {
    call(app, Method::POST, uri, Some(body), None).await
}

/// Reference palette from the worked example: five tokens, one per
/// parameter.
pub fn reference_matrix() -> MappingMatrix {
    let tokens = [
        ("Nostalgia", 4.0, ShapeParameterId::NumberOfWaves),
        ("Happiness", 3.5, ShapeParameterId::SurfaceFrequency),
        ("Anticipation", 3.0, ShapeParameterId::GlobalFrequency),
        ("Worry", 2.0, ShapeParameterId::GlobalDistortion),
        ("Satisfaction", 3.0, ShapeParameterId::SurfaceDistortion),
    ];
    let palette = Palette::from_initial(
        tokens
            .iter()
            .map(|(l, v, _)| EmotionToken::suggested(l, *v).unwrap())
            .collect(),
    )
    .unwrap();
    let bindings = tokens
        .iter()
        .map(|(l, _, id)| Binding::new(l, *id).unwrap())
        .collect();
    MappingMatrix::new(palette, bindings).unwrap()
}

/// `lo + t/45 (hi - lo)` written out per parameter, waves rounded half-up.
pub fn reference_expected() -> [f64; 5] {
    [
        (40.0f64 * 12.0 / 45.0 + 0.5).floor(),
        0.0 + 20.0 / 45.0 * 0.5,
        0.5 + 30.0 / 45.0 * 3.5,
        0.0 + 30.0 / 45.0 * 0.25,
        2.0 + 35.0 / 45.0 * 8.0,
    ]
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}
