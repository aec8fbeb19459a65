//! HTTP service exposing simulation and indicator computation under `/api/v1`.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use negawatt_core::api::{
    handle_indicators, handle_presets, handle_simulate, schemas, ApiError, ErrorKind,
    IndicatorsRequest, SimulateRequest, ENGINE_VERSION,
};
use negawatt_core::Config;
use serde_json::json;
use tokio::net::TcpListener;
use tower_http::cors::{Any, CorsLayer};

/// Error body plus status code.
pub struct ErrorResponse(pub ApiError);

impl IntoResponse for ErrorResponse {
    fn into_response(self) -> Response {
        let status = match self.0.kind {
            ErrorKind::BadRequest => StatusCode::BAD_REQUEST,
            ErrorKind::Unprocessable => StatusCode::UNPROCESSABLE_ENTITY,
        };
        (status, Json(self.0)).into_response()
    }
}

impl From<JsonRejection> for ErrorResponse {
    fn from(r: JsonRejection) -> Self {
        // axum answers unparseable bodies with 422; every schema violation is a 400 here
        ErrorResponse(ApiError::bad_request(None, r.body_text()))
    }
}

type ApiResult<T> = Result<Json<T>, ErrorResponse>;

#[derive(Clone)]
struct AppState {
    config: Arc<Config>,
}

/// Which origins may call the API from a browser.
#[derive(Debug, Clone, Default)]
pub enum CorsOrigin {
    #[default]
    Any,
    Exact(HeaderValue),
}

impl CorsOrigin {
    pub fn exact(origin: &str) -> Result<Self, String> {
        HeaderValue::from_str(origin)
            .map(CorsOrigin::Exact)
            .map_err(|_| format!("invalid origin `{origin}`"))
    }
}

pub fn router(config: Config) -> Router {
    router_with_cors(config, CorsOrigin::Any)
}

pub fn router_with_cors(config: Config, origin: CorsOrigin) -> Router {
    let cors = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    let cors = match origin {
        CorsOrigin::Any => cors.allow_origin(Any),
        CorsOrigin::Exact(v) => cors.allow_origin(v),
    };
    Router::new()
        .route("/healthz", get(healthz))
        .route("/api/v1/simulate", post(simulate))
        .route("/api/v1/indicators", post(indicators))
        .route("/api/v1/presets", get(presets))
        .route("/api/v1/schema", get(schema))
        .layer(cors)
        .with_state(AppState {
            config: Arc::new(config),
        })
}

async fn healthz() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "engine_version": ENGINE_VERSION }))
}

async fn simulate(
    State(state): State<AppState>,
    body: Result<Json<SimulateRequest>, JsonRejection>,
) -> ApiResult<negawatt_core::api::SimulateResponse> {
    let Json(req) = body?;
    // a year of hourly steps is CPU work; keep it off the reactor threads
    let res = tokio::task::spawn_blocking(move || handle_simulate(&state.config, &req))
        .await
        .map_err(|e| ErrorResponse(ApiError::unprocessable(None, format!("simulation aborted: {e}"))))?;
    res.map(Json).map_err(ErrorResponse)
}

async fn indicators(
    State(state): State<AppState>,
    body: Result<Json<IndicatorsRequest>, JsonRejection>,
) -> ApiResult<negawatt_core::api::IndicatorsResponse> {
    let Json(req) = body?;
    handle_indicators(&state.config, &req)
        .map(Json)
        .map_err(ErrorResponse)
}

async fn presets(State(state): State<AppState>) -> Json<negawatt_core::api::PresetsResponse> {
    Json(handle_presets(&state.config))
}

async fn schema() -> Json<serde_json::Value> {
    Json(schemas())
}

/// Serves `app` until Ctrl-C.
pub async fn serve(listener: TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

/// Binds `addr` and serves in a background task. Returns the bound address,
/// which differs from `addr` when port 0 was requested.
pub async fn spawn(addr: SocketAddr, config: Config) -> std::io::Result<SocketAddr> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    tokio::spawn(async move {
        let _ = axum::serve(listener, router(config)).await;
    });
    Ok(local)
}
