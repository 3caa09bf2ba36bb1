//! `donut-ssn` command line: generate synthetic networks, aggregate and
//! render donuts, and run the HTTP service.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, CommandFactory, Parser, Subcommand};
use donut_core::aggregate::{aggregate_in, AggregationConfig};
use donut_core::ingest::{
    parse_csv_network, parse_geojson_network, write_aggregate, write_csv_network, EDGES_CSV_SUFFIX,
    NODES_CSV_SUFFIX,
};
use donut_core::model::{DonutAggregate, Thresholds, Viewport};
use donut_core::render::{render_donut, DonutStyle};
use donut_core::synth::{GeneratorOptions, GeneratorRegistry};
use donut_core::{Error, SpatialNetwork};
use donut_service::{NetworkStore, ServiceConfig};

#[derive(Debug, Parser)]
#[command(name = "donut-ssn", version, about = "Directional donut summaries of spatial social networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic network and write it as a CSV pair.
    Generate(GenerateArgs),
    /// Aggregate a network into a donut and write JSON and/or SVG.
    Donut(DonutArgs),
    /// Run the HTTP API and serve the viewer.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Generator family (poisson or clustered).
    pub kind: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output prefix; writes <prefix>.nodes.csv and <prefix>.edges.csv.
    #[arg(long)]
    pub out: PathBuf,
    /// Expected node count (poisson).
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Cluster centers as "x,y;x,y;..." (clustered).
    #[arg(long, value_parser = parse_centers, allow_hyphen_values = true)]
    pub centers: Option<Centers>,
    /// Expected nodes per cluster (clustered).
    #[arg(long)]
    pub per_cluster_mean: Option<f64>,
    /// Gaussian standard deviation around each center (clustered).
    #[arg(long)]
    pub spread: Option<f64>,
    /// Distance at which link probability falls by a factor e.
    #[arg(long)]
    pub decay_scale: Option<f64>,
    /// Link probability at distance zero.
    #[arg(long)]
    pub base_prob: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Centers(pub Vec<(f64, f64)>);

fn parse_centers(s: &str) -> Result<Centers, String> {
    s.split(';')
        .map(|pair| {
            let (x, y) = pair.split_once(',').ok_or_else(|| format!("expected x,y, got {pair:?}"))?;
            let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("not a number: {v:?}"));
            Ok((num(x)?, num(y)?))
        })
        .collect::<Result<_, _>>()
        .map(Centers)
}

#[derive(Debug, Args)]
pub struct DonutArgs {
    /// Nodes CSV (id,x,y); requires --edges.
    #[arg(long, requires = "edges", conflicts_with = "geojson")]
    pub nodes: Option<PathBuf>,
    /// Edges CSV (src,dst); requires --nodes.
    #[arg(long, requires = "nodes")]
    pub edges: Option<PathBuf>,
    /// GeoJSON FeatureCollection (always lon/lat).
    #[arg(long, required_unless_present = "nodes")]
    pub geojson: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    /// Treat CSV coordinates as lon/lat degrees.
    #[arg(long)]
    pub geographic: bool,
    /// Viewport as minx,miny,maxx,maxy; defaults to the network extent.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_bbox)]
    pub bbox: Option<Viewport>,
    #[arg(long, default_value_t = Thresholds::DEFAULT_NEAR_MAX)]
    pub near: f64,
    #[arg(long, default_value_t = Thresholds::DEFAULT_MEDIUM_MAX)]
    pub medium: f64,
    /// Count self-loop edges (once each).
    #[arg(long)]
    pub self_loops: bool,
    /// Aggregate JSON output path ("-" for stdout).
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// SVG output path ("-" for stdout).
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

fn parse_bbox(s: &str) -> Result<Viewport, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Persist uploads here and reload them on start.
    #[arg(long, env = "DONUT_SSN_DATA_DIR")]
    pub data_dir: Option<PathBuf>,
    /// Built viewer assets to serve at /.
    #[arg(long)]
    pub assets: Option<PathBuf>,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments; exit 2.
    Usage(String),
    /// Anything that went wrong while doing the work; exit 1.
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Donut(args) => cmd_donut(&args),
        Command::Serve(args) => cmd_serve(&args),
    }
}

fn usage_with_help(message: String, subcommand: &str) -> CliError {
    let mut cmd = Cli::command();
    cmd.build();
    let help = cmd
        .find_subcommand_mut(subcommand)
        .map(|c| c.render_usage().to_string())
        .unwrap_or_default();
    CliError::Usage(format!("{message}\n\n{help}"))
}

fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let registry = GeneratorRegistry::builtin();
    let options = GeneratorOptions {
        seed: args.seed,
        intensity: args.intensity,
        centers: args.centers.clone().map(|c| c.0),
        per_cluster_mean: args.per_cluster_mean,
        spread: args.spread,
        decay_scale: args.decay_scale,
        base_prob: args.base_prob,
    };
    let generator = registry.create(&args.kind, &options).map_err(|e| match e {
        Error::UnknownStrategy { .. } => usage_with_help(e.to_string(), "generate"),
        other => CliError::Usage(other.to_string()),
    })?;
    let network = generator.generate();
    let (nodes, edges) = write_csv_network(&network);
    let nodes_path = prefixed(&args.out, NODES_CSV_SUFFIX);
    let edges_path = prefixed(&args.out, EDGES_CSV_SUFFIX);
    write_file(&nodes_path, &nodes)?;
    write_file(&edges_path, &edges)?;
    println!(
        "{} network (seed {}): {} nodes, {} edges -> {}, {}",
        generator.name(),
        args.seed,
        network.node_count(),
        network.edge_count(),
        nodes_path.display(),
        edges_path.display()
    );
    Ok(())
}

fn write_file(path: &Path, body: &str) -> anyhow::Result<()> {
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn read_file(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_network(args: &DonutArgs) -> anyhow::Result<SpatialNetwork> {
    let network = match (&args.nodes, &args.edges, &args.geojson) {
        (Some(n), Some(e), None) => parse_csv_network(&read_file(n)?, &read_file(e)?, args.directed, args.geographic)
            .with_context(|| format!("parsing {} / {}", n.display(), e.display()))?,
        (None, None, Some(g)) => {
            parse_geojson_network(&read_file(g)?, args.directed).with_context(|| format!("parsing {}", g.display()))?
        }
        _ => anyhow::bail!("give either --nodes and --edges, or --geojson"),
    };
    Ok(network)
}

/// Thresholds from flags; invalid ones are a usage error.
pub fn thresholds_from(near: f64, medium: f64) -> Result<Thresholds, CliError> {
    if near.is_finite() && medium.is_finite() && near > medium {
        return Err(CliError::Usage("thresholds must satisfy near_max ≤ medium_max".into()));
    }
    Thresholds::new(near, medium).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn donut_of(args: &DonutArgs) -> Result<DonutAggregate, CliError> {
    let thresholds = thresholds_from(args.near, args.medium)?;
    let network = load_network(args)?;
    let config = AggregationConfig::new(thresholds).with_self_loops(args.self_loops);
    Ok(aggregate_in(&network, args.bbox, &config).context("aggregating")?)
}

pub fn cmd_donut(args: &DonutArgs) -> Result<(), CliError> {
    let aggregate = donut_of(args)?;
    let json_target = match (&args.json, &args.svg) {
        (None, None) => Some(Path::new("-")),
        (j, _) => j.as_deref(),
    };
    if let Some(target) = json_target {
        emit(target, &write_aggregate(&aggregate))?;
    }
    if let Some(target) = &args.svg {
        emit(target, &render_donut(&aggregate, &DonutStyle::default()))?;
    }
    if json_target != Some(Path::new("-")) && args.svg.as_deref() != Some(Path::new("-")) {
        println!(
            "{} nodes in view, {} contributions",
            aggregate.node_count, aggregate.contribution_total
        );
    }
    Ok(())
}

fn emit(target: &Path, body: &str) -> anyhow::Result<()> {
    if target == Path::new("-") {
        println!("{body}");
        Ok(())
    } else {
        write_file(target, body)
    }
}

pub fn cmd_serve(args: &ServeArgs) -> Result<(), CliError> {
    let store = match &args.data_dir {
        Some(dir) => NetworkStore::open(dir).context("opening data directory")?,
        None => NetworkStore::in_memory(),
    };
    let config = ServiceConfig {
        assets_dir: args.assets.clone(),
        ..ServiceConfig::default()
    };
    let app = donut_service::router(Arc::new(store), &config);
    let runtime = tokio::runtime::Runtime::new().context("starting runtime")?;
    runtime.block_on(async {
        let addr = format!("{}:{}", args.host, args.port);
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .with_context(|| format!("cannot bind {addr}"))?;
        eprintln!("listening on http://{}", listener.local_addr().context("local address")?);
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
            eprintln!("shutting down");
        };
        donut_service::serve(listener, app, shutdown).await.context("serving")?;
        Ok::<_, anyhow::Error>(())
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers_parse() {
        assert_eq!(
            parse_centers("0.5,0.85;0.2,0.75;0.25,0.25").unwrap(),
            Centers(vec![(0.5, 0.85), (0.2, 0.75), (0.25, 0.25)])
        );
        assert!(parse_centers("0.5").is_err());
        assert!(parse_centers("0.5,x").is_err());
    }

    #[test]
    fn threshold_order_is_a_usage_error() {
        let e = thresholds_from(0.5, 0.4).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(e.to_string(), "thresholds must satisfy near_max ≤ medium_max");
        assert_eq!(thresholds_from(1.2, 1.5).unwrap_err().exit_code(), 2);
        assert!(thresholds_from(0.35, 0.6).is_ok());
    }

    #[test]
    fn prefix_keeps_dots() {
        assert_eq!(prefixed(Path::new("out/net.v1"), ".nodes.csv"), PathBuf::from("out/net.v1.nodes.csv"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bbox_accepts_negative_values() {
        let cli = Cli::try_parse_from(["donut-ssn", "donut", "--geojson", "g.json", "--bbox", "-1,-2,3,4"]).unwrap();
        let Command::Donut(args) = cli.command else { panic!() };
        assert_eq!(args.bbox, Some(Viewport::new(-1.0, -2.0, 3.0, 4.0).unwrap()));
    }
}
