use std::collections::BTreeMap;
use std::sync::Arc;

use negawatt_client::{Client, ClientError};
use negawatt_core::api::{
    handle_indicators, run_simulation, IndicatorsRequest, IndicatorsResponse, SimulateRequest,
    SimulateResponse,
};
use negawatt_core::config::City;
use negawatt_core::Config;

use crate::Failure;

/// Where requests are answered: in-process or by a running service.
#[derive(Clone)]
pub enum Backend {
    Local(Arc<Config>),
    Remote(Client),
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        match e {
            ClientError::Api { .. } => Failure::Config(e.to_string()),
            ClientError::Transport { .. } | ClientError::Decode { .. } => Failure::Io(e.to_string()),
        }
    }
}

impl Backend {
    pub fn local(config: Config) -> Self {
        Backend::Local(Arc::new(config))
    }

    pub fn remote(url: &str) -> Self {
        Backend::Remote(Client::new(url))
    }

    pub fn is_remote(&self) -> bool {
        matches!(self, Backend::Remote(_))
    }

    /// The response, plus the hourly trace CSV when requested (local only).
    pub async fn simulate(
        &self,
        req: &SimulateRequest,
        keep_trace: bool,
    ) -> Result<(SimulateResponse, Option<String>), Failure> {
        match self {
            Backend::Local(cfg) => {
                let (cfg, req) = (cfg.clone(), req.clone());
                let run = tokio::task::spawn_blocking(move || run_simulation(&cfg, &req, keep_trace))
                    .await
                    .map_err(|e| Failure::Io(format!("simulation task failed: {e}")))?
                    .map_err(|e| Failure::Config(e.message))?;
                let trace = run.result.trace_csv();
                Ok((run.response, trace))
            }
            Backend::Remote(c) => Ok((c.simulate(req).await?, None)),
        }
    }

    pub async fn indicators(&self, req: &IndicatorsRequest) -> Result<IndicatorsResponse, Failure> {
        match self {
            Backend::Local(cfg) => handle_indicators(cfg, req).map_err(|e| Failure::Config(e.message)),
            Backend::Remote(c) => Ok(c.indicators(req).await?),
        }
    }

    pub async fn cities(&self) -> Result<BTreeMap<String, City>, Failure> {
        match self {
            Backend::Local(cfg) => Ok(cfg.cities.clone()),
            Backend::Remote(c) => Ok(c.presets().await?.cities),
        }
    }
}
