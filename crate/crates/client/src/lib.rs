//! Async HTTP client for the negawatt service.

use negawatt_core::api::{
    ApiError, IndicatorsRequest, IndicatorsResponse, PresetsResponse, SimulateRequest,
    SimulateResponse,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    /// Connection, timeout or body transfer failure.
    #[error("request to {url} failed: {source}")]
    Transport {
        url: String,
        #[source]
        source: reqwest::Error,
    },
    /// The service rejected the request.
    #[error("service answered {status}: {error}")]
    Api { status: u16, error: ApiError },
    #[error("unexpected response from {url} ({status}): {message}")]
    Decode {
        url: String,
        status: u16,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is the service root, e.g. `http://127.0.0.1:8080`.
    pub fn new(base: impl Into<String>) -> Self {
        Self::with_http(base, reqwest::Client::new())
    }

    pub fn with_http(base: impl Into<String>, http: reqwest::Client) -> Self {
        let base = base.into().trim_end_matches('/').to_string();
        Self { base, http }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    pub async fn simulate(&self, req: &SimulateRequest) -> Result<SimulateResponse> {
        self.post("/api/v1/simulate", req).await
    }

    pub async fn indicators(&self, req: &IndicatorsRequest) -> Result<IndicatorsResponse> {
        self.post("/api/v1/indicators", req).await
    }

    pub async fn presets(&self) -> Result<PresetsResponse> {
        self.get("/api/v1/presets").await
    }

    pub async fn schema(&self) -> Result<Value> {
        self.get("/api/v1/schema").await
    }

    pub async fn health(&self) -> Result<Value> {
        self.get("/healthz").await
    }

    async fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        let url = format!("{}{path}", self.base);
        let res = self.http.post(&url).json(body).send().await;
        decode(url, res).await
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T> {
        let url = format!("{}{path}", self.base);
        let res = self.http.get(&url).send().await;
        decode(url, res).await
    }
}

async fn decode<T: DeserializeOwned>(
    url: String,
    res: std::result::Result<reqwest::Response, reqwest::Error>,
) -> Result<T> {
    let res = res.map_err(|source| ClientError::Transport {
        url: url.clone(),
        source,
    })?;
    let status = res.status().as_u16();
    let bytes = res.bytes().await.map_err(|source| ClientError::Transport {
        url: url.clone(),
        source,
    })?;
    let decode_err = |e: serde_json::Error| ClientError::Decode {
        url: url.clone(),
        status,
        message: e.to_string(),
    };
    if (200..300).contains(&status) {
        serde_json::from_slice(&bytes).map_err(decode_err)
    } else {
        let error: ApiError = serde_json::from_slice(&bytes).map_err(decode_err)?;
        Err(ClientError::Api { status, error })
    }
}
