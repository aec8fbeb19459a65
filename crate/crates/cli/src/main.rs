//! `negawatt` command-line interface.

mod backend;

use std::collections::BTreeMap;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use backend::Backend;
use clap::{Args, Parser, Subcommand, ValueEnum};
use negawatt_core::api::{
    simulate_with_weather, EconOverrides, EndUseEnergy, IndicatorsRequest, IndicatorsResponse,
    PriceBookRef, SavingsInput, SimulateRequest, SimulateResponse,
};
use negawatt_core::control::ScenarioKind;
use negawatt_core::fixtures::compare_published;
use negawatt_core::report::{
    compare_csv, compare_published_rows, consumption_rows, fixtures_table, indicator_rows,
    report_csv, simulation_csv, CompareRow,
};
use negawatt_core::tariff::EnergyByCarrier;
use negawatt_core::weather::load_weather_csv;
use negawatt_core::{Config, Error};

#[derive(Parser)]
#[command(name = "negawatt", version, about = "Smart-home retrofit energy and cost-benefit calculator")]
struct Cli {
    /// TOML file overlaid on the built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Send requests to a running service instead of computing locally.
    #[arg(long, global = true, value_name = "URL")]
    server: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario for a year.
    Simulate(SimulateArgs),
    /// Compute savings, payback, NPV, IRR, ADI and avoided emissions.
    Indicators(IndicatorsArgs),
    /// Long-format indicator table for every city and scenario.
    Compare(CompareArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Weather preset name or path to an hourly CSV file.
    #[arg(long)]
    weather: String,
    #[arg(long)]
    scenario: String,
    /// Also write the hourly trace as CSV.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct EconArgs {
    #[arg(long)]
    discount_rate: Option<f64>,
    /// Evaluation horizon, years.
    #[arg(long)]
    horizon: Option<u32>,
}

impl EconArgs {
    fn overrides(&self) -> Option<EconOverrides> {
        (self.discount_rate.is_some() || self.horizon.is_some()).then_some(EconOverrides {
            discount_rate: self.discount_rate,
            horizon_years: self.horizon,
        })
    }
}

#[derive(Args)]
struct IndicatorsArgs {
    /// Replay the published savings of both cities and compare with the published indicators.
    #[arg(long, conflicts_with_all = ["inject_savings", "reference", "candidate"])]
    paper_fixtures: bool,
    /// Annual savings as `HEATING,COOLING,LIGHTING` kWh, or a JSON file holding them.
    #[arg(long, value_name = "SAVINGS", conflicts_with_all = ["reference", "candidate"])]
    inject_savings: Option<String>,
    /// Pre-retrofit consumption `ELECTRICITY,GAS` kWh for block tariffs.
    #[arg(long, value_name = "KWH", requires = "inject_savings")]
    reference_consumption: Option<String>,
    /// `simulate` output of the reference case.
    #[arg(long, requires = "candidate")]
    reference: Option<PathBuf>,
    /// `simulate` output of the candidate case.
    #[arg(long, requires = "reference")]
    candidate: Option<PathBuf>,
    /// Scenario whose device cost is the investment.
    #[arg(long)]
    scenario: Option<String>,
    /// Investment, EUR. Overrides the scenario's catalog cost.
    #[arg(long)]
    investment: Option<f64>,
    /// Price book name; inferred from the candidate's weather when omitted.
    #[arg(long)]
    price_book: Option<String>,
    #[command(flatten)]
    econ: EconArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated city names; all configured cities by default.
    #[arg(long, value_delimiter = ',')]
    cities: Vec<String>,
    /// Use the published savings instead of simulating.
    #[arg(long)]
    paper_fixtures: bool,
    #[command(flatten)]
    econ: EconArgs,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Only allow browser calls from this origin.
    #[arg(long)]
    cors_origin: Option<String>,
}

/// Process exit status with its message.
#[derive(Debug)]
enum Failure {
    Config(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Io(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

#[tokio::main]
async fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

async fn run(cli: Cli) -> Outcome {
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if cli.server.is_some() && cli.config.is_some() {
        return Err(Failure::Config(
            "--config applies to local runs only; the service uses its own configuration".into(),
        ));
    }
    let backend = match &cli.server {
        Some(url) => Backend::remote(url),
        None => Backend::local(config.clone()),
    };

    match &cli.command {
        Command::Simulate(args) => simulate(&cli, &config, &backend, args).await,
        Command::Indicators(args) => indicators(&cli, &config, &backend, args).await,
        Command::Compare(args) => compare(&cli, &config, &backend, args).await,
        Command::Serve(args) => serve(&cli, config, args).await,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("responses serialize");
    s.push('\n');
    s
}

fn is_csv_path(weather: &str) -> bool {
    weather.ends_with(".csv") || Path::new(weather).is_file()
}

async fn simulate(cli: &Cli, config: &Config, backend: &Backend, args: &SimulateArgs) -> Outcome {
    let mut req = SimulateRequest {
        preset: None,
        scenario: args.scenario.clone(),
        seed: cli.seed,
        ..Default::default()
    };
    let keep_trace = args.trace.is_some();
    let (response, trace) = if is_csv_path(&args.weather) {
        if backend.is_remote() {
            return Err(Failure::Config("CSV weather files can only be simulated locally".into()));
        }
        negawatt_core::api::parse_scenario(&args.scenario).map_err(|e| Failure::Config(e.message))?;
        let weather = load_weather_csv(Path::new(&args.weather))?;
        let label = format!("csv:{}", args.weather);
        let run = simulate_with_weather(config, &req, &weather, &label, keep_trace)
            .map_err(|e| Failure::Config(e.message))?;
        (run.response, run.result.trace_csv())
    } else {
        req.preset = Some(args.weather.clone());
        if keep_trace && backend.is_remote() {
            return Err(Failure::Config("--trace is only available for local runs".into()));
        }
        backend.simulate(&req, keep_trace).await?
    };

    if let (Some(path), Some(csv)) = (&args.trace, trace) {
        std::fs::write(path, csv)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&response),
        Format::Csv => simulation_csv(std::slice::from_ref(&response)),
    };
    emit(cli.out.as_deref(), &text)
}

fn read_input(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn read_simulation(path: &Path) -> Outcome<SimulateResponse> {
    serde_json::from_str(&read_input(path)?)
        .map_err(|e| Failure::Config(format!("{}: not a simulate output: {e}", path.display())))
}

fn parse_numbers<const N: usize>(flag: &str, text: &str) -> Outcome<[f64; N]> {
    let values: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Config(format!("{flag}: {e}")))?;
    values
        .try_into()
        .map_err(|_| Failure::Config(format!("{flag}: expected {N} comma-separated numbers, got `{text}`")))
}

/// `H,C,L` or a JSON file holding the three end uses, either bare or as the
/// `result` of a `simulate` output.
fn parse_savings(text: &str) -> Outcome<SavingsInput> {
    if !Path::new(text).is_file() {
        let [heating_kwh, cooling_kwh, lighting_kwh] = parse_numbers::<3>("--inject-savings", text)?;
        return Ok(SavingsInput {
            heating_kwh,
            cooling_kwh,
            lighting_kwh,
        });
    }
    let value: serde_json::Value = serde_json::from_str(&read_input(Path::new(text))?)
        .map_err(|e| Failure::Config(format!("{text}: {e}")))?;
    let body = value.get("result").unwrap_or(&value);
    let field = |k: &str| {
        body.get(k)
            .and_then(|v| v.as_f64())
            .ok_or_else(|| Failure::Config(format!("{text}: missing number `{k}`")))
    };
    Ok(SavingsInput {
        heating_kwh: field("heating_kwh")?,
        cooling_kwh: field("cooling_kwh")?,
        lighting_kwh: field("lighting_kwh")?,
    })
}

async fn indicators(cli: &Cli, config: &Config, backend: &Backend, args: &IndicatorsArgs) -> Outcome {
    if args.paper_fixtures {
        // the published figures are replayed locally against the configured price books
        let text = match cli.format {
            None => fixtures_table(&compare_published(config)?),
            Some(Format::Json) => to_json(&compare_published(config)?),
            Some(Format::Csv) => {
                compare_csv(&compare_published_rows(config).map_err(|e| Failure::Config(e.message))?)
            }
        };
        return emit(cli.out.as_deref(), &text);
    }

    let mut req = IndicatorsRequest {
        scenario: args.scenario.clone(),
        investment_eur: args.investment,
        savings: None,
        reference_consumption: None,
        reference: None,
        candidate: None,
        price_book: PriceBookRef::Named(String::new()),
        econ: args.econ.overrides(),
    };
    let mut weather_hint = None;
    if let Some(s) = &args.inject_savings {
        req.savings = Some(parse_savings(s)?);
        if let Some(rc) = &args.reference_consumption {
            let [e, g] = parse_numbers::<2>("--reference-consumption", rc)?;
            req.reference_consumption = Some(EnergyByCarrier::new(e, g));
        }
    } else if let (Some(r), Some(c)) = (&args.reference, &args.candidate) {
        let (r, c) = (read_simulation(r)?, read_simulation(c)?);
        req.reference = Some(EndUseEnergy::from(&r.result));
        req.candidate = Some(EndUseEnergy::from(&c.result));
        if req.scenario.is_none() && req.investment_eur.is_none() {
            req.scenario = Some(c.config.scenario.as_str().to_string());
        }
        weather_hint = Some(c.config.weather);
    } else {
        return Err(Failure::Config(
            "give --inject-savings, --reference with --candidate, or --paper-fixtures".into(),
        ));
    }

    let book = match (&args.price_book, weather_hint) {
        (Some(b), _) => b.clone(),
        (None, Some(w)) => {
            let cities = backend.cities().await?;
            cities
                .values()
                .find(|c| c.weather == w)
                .map(|c| c.price_book.clone())
                .ok_or_else(|| Failure::Config(format!("no city uses weather `{w}`; pass --price-book")))?
        }
        (None, None) => return Err(Failure::Config("--price-book is required with --inject-savings".into())),
    };
    req.price_book = PriceBookRef::Named(book);

    let res: IndicatorsResponse = backend.indicators(&req).await?;
    if res.report.degenerate {
        eprintln!("warning: {}; report marked degenerate", zero_savings_note());
    }
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&res),
        Format::Csv => report_csv(&res.report),
    };
    emit(cli.out.as_deref(), &text)
}

fn zero_savings_note() -> String {
    negawatt_core::indicators::PaybackError::ZeroSavings.to_string()
}

async fn compare(cli: &Cli, config: &Config, backend: &Backend, args: &CompareArgs) -> Outcome {
    let rows = if args.paper_fixtures {
        let mut cfg = config.clone();
        if let Some(r) = args.econ.discount_rate {
            cfg.econ.discount_rate = r;
        }
        if let Some(h) = args.econ.horizon {
            cfg.econ.horizon_years = h;
        }
        cfg.validate()?;
        compare_published_rows(&cfg).map_err(|e| Failure::Config(e.message))?
    } else {
        compare_simulated(cli, backend, args).await?
    };
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => compare_csv(&rows),
        Format::Json => to_json(&rows),
    };
    emit(cli.out.as_deref(), &text)
}

async fn compare_simulated(cli: &Cli, backend: &Backend, args: &CompareArgs) -> Outcome<Vec<CompareRow>> {
    let all = backend.cities().await?;
    let names: Vec<String> = if args.cities.is_empty() {
        all.keys().cloned().collect()
    } else {
        args.cities.clone()
    };
    let mut cities = BTreeMap::new();
    for n in &names {
        let city = all.get(n).ok_or_else(|| {
            Failure::Config(format!(
                "unknown city `{n}`; valid: {}",
                all.keys().cloned().collect::<Vec<_>>().join(", ")
            ))
        })?;
        cities.insert(n.clone(), city.clone());
    }

    // every (city, scenario) run is independent
    let mut runs = tokio::task::JoinSet::new();
    for (i, name) in names.iter().enumerate() {
        for (j, kind) in ScenarioKind::ALL.into_iter().enumerate() {
            let req = SimulateRequest {
                preset: Some(cities[name].weather.clone()),
                scenario: kind.as_str().to_string(),
                seed: cli.seed,
                ..Default::default()
            };
            let backend = backend.clone();
            runs.spawn(async move { ((i, j), backend.simulate(&req, false).await.map(|r| r.0)) });
        }
    }
    let mut results = BTreeMap::new();
    while let Some(joined) = runs.join_next().await {
        let (key, res) = joined.map_err(|e| Failure::Io(format!("simulation task failed: {e}")))?;
        results.insert(key, res?);
    }

    let mut rows = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let baseline = EndUseEnergy::from(&results[&(i, 0)].result);
        for (j, kind) in ScenarioKind::ALL.into_iter().enumerate() {
            let run = &results[&(i, j)];
            rows.extend(consumption_rows(name, kind, &run.result.to_result()));
            let req = IndicatorsRequest {
                scenario: Some(kind.as_str().to_string()),
                investment_eur: None,
                savings: None,
                reference_consumption: None,
                reference: Some(baseline),
                candidate: Some(EndUseEnergy::from(&run.result)),
                price_book: PriceBookRef::Named(cities[name].price_book.clone()),
                econ: args.econ.overrides(),
            };
            let res = backend.indicators(&req).await?;
            rows.extend(indicator_rows(name, kind, &res.report));
        }
    }
    Ok(rows)
}

async fn serve(cli: &Cli, config: Config, args: &ServeArgs) -> Outcome {
    if cli.server.is_some() {
        return Err(Failure::Config("serve runs the service itself; drop --server".into()));
    }
    let origin = match &args.cors_origin {
        Some(o) => negawatt_server::CorsOrigin::exact(o).map_err(Failure::Config)?,
        None => negawatt_server::CorsOrigin::Any,
    };
    let addr = SocketAddr::new(args.host, args.port);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Failure::Io(format!("cannot bind {addr}: {e}")))?;
    let local = listener
        .local_addr()
        .map_err(|e| Failure::Io(e.to_string()))?;
    eprintln!("listening on http://{local}");
    negawatt_server::serve(listener, negawatt_server::router_with_cors(config, origin))
        .await
        .map_err(|e| Failure::Io(format!("server error: {e}")))
}
