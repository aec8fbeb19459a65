use negawatt_client::{Client, ClientError};
use negawatt_core::api::{
    handle_indicators, handle_simulate, ErrorKind, IndicatorsRequest, PriceBookRef, SavingsInput,
    SimulateRequest,
};
use negawatt_core::Config;

async fn client() -> Client {
    let addr = negawatt_server::spawn("127.0.0.1:0".parse().unwrap(), Config::default())
        .await
        .unwrap();
    Client::new(format!("http://{addr}/"))
}

#[tokio::test]
async fn simulate_matches_library() {
    let c = client().await;
    let req = SimulateRequest {
        preset: Some("stuttgart-cfb".into()),
        scenario: "extended".into(),
        ..Default::default()
    };
    let remote = c.simulate(&req).await.unwrap();
    let local = handle_simulate(&Config::default(), &req).unwrap();
    assert_eq!(remote, local);
}

#[tokio::test]
async fn indicators_match_library() {
    let c = client().await;
    let req = IndicatorsRequest {
        scenario: Some("low-cost".into()),
        investment_eur: None,
        savings: Some(SavingsInput {
            heating_kwh: 3281.0,
            cooling_kwh: 3243.0,
            lighting_kwh: 0.0,
        }),
        reference_consumption: None,
        reference: None,
        candidate: None,
        price_book: PriceBookRef::Named("algeria-2019".into()),
        econ: None,
    };
    let remote = c.indicators(&req).await.unwrap();
    let local = handle_indicators(&Config::default(), &req).unwrap();
    assert_eq!(remote, local);
    assert!((remote.report.payback_years.unwrap() - 2.34).abs() < 0.01);
}

#[tokio::test]
async fn api_errors_are_typed() {
    let c = client().await;
    let req = SimulateRequest {
        preset: Some("algiers-csa".into()),
        scenario: "smart".into(),
        ..Default::default()
    };
    match c.simulate(&req).await {
        Err(ClientError::Api { status, error }) => {
            assert_eq!(status, 400);
            assert_eq!(error.kind, ErrorKind::BadRequest);
            assert!(error.valid.contains(&"low-cost".to_string()));
        }
        other => panic!("expected an API error, got {other:?}"),
    }
}

#[tokio::test]
async fn presets_schema_health() {
    let c = client().await;
    assert!(!c.base_url().ends_with('/'));
    let p = c.presets().await.unwrap();
    assert!(p.price_books.contains_key("algeria-2019"));
    assert!(c.schema().await.unwrap()["indicators_request"].is_object());
    assert_eq!(c.health().await.unwrap()["status"], "ok");
}

#[tokio::test]
async fn unreachable_service_is_a_transport_error() {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    drop(listener);
    let c = Client::new(format!("http://{addr}"));
    assert!(matches!(c.health().await, Err(ClientError::Transport { .. })));
}
