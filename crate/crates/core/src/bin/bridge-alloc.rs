use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bridge_alloc::allocator::TrimConfig;
use bridge_alloc::pipeline::{pipeline, AssetListing, PipelineConfig, PipelineOutcome};
use bridge_alloc::router::{round_robin_route, BridgeMap, MultiAsset, RouteConfig, RouteOutcome};
use bridge_alloc::sim::{
    format_amount, intermediate_values, primary_values, run_batch, SimulationParams,
    INTERMEDIATE_COLUMNS, PRIMARY_COLUMNS,
};
use bridge_alloc::types::{AssetWeightBand, BridgeLink, NetworkState};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(name = "bridge-alloc", version, about = "Cross-network rebalancing transfer calculator")]
struct Cli {
    /// TOML configuration for the chosen command.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the random seed of `simulate`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory that receives the `simulate` tables.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Print amounts in whole dollars.
    #[arg(long, global = true)]
    round: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the manual and random scenario batch and write the three tables.
    Simulate {
        #[arg(long)]
        n_scenarios: Option<usize>,
    },
    /// Evaluate one two-network scenario.
    Transfer(TransferArgs),
    /// Route transfers between several networks.
    Route {
        #[arg(long)]
        max_iterations: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct TransferArgs {
    /// Pending deposits (positive) or withdrawals (negative) on P.
    #[arg(long, allow_hyphen_values = true)]
    tbd_p: Option<f64>,
    /// Invested amount on P.
    #[arg(long)]
    curr_p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tbd_q: Option<f64>,
    #[arg(long)]
    curr_q: Option<f64>,
    /// Bridge capacity from P to Q.
    #[arg(long)]
    cap_pq: Option<f64>,
    /// Bridge capacity from Q to P.
    #[arg(long)]
    cap_qp: Option<f64>,
    /// TOML file with `[[assets]]` entries (id, min, ideal, max, on_p, on_q).
    #[arg(long)]
    bands_file: Option<PathBuf>,
    /// Inline asset as ID:MIN:IDEAL:MAX:NETWORKS with NETWORKS one of p, q, pq.
    #[arg(long = "asset")]
    assets: Vec<String>,
    /// Cap on the bridge stretch [default: 0.2].
    #[arg(long)]
    max_stretch: Option<f64>,
    /// Width of the positivity indicator [default: 0.0001].
    #[arg(long)]
    delta: Option<f64>,
    /// Lower bound on a dual-listed asset's P share [default: 0].
    #[arg(long)]
    min_trim: Option<f64>,
    /// Upper bound on a dual-listed asset's P share [default: 1].
    #[arg(long)]
    max_trim: Option<f64>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct AssetEntry {
    id: String,
    min: f64,
    ideal: f64,
    max: f64,
    #[serde(default)]
    on_p: bool,
    #[serde(default)]
    on_q: bool,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct BandsFile {
    #[serde(default)]
    assets: Vec<AssetEntry>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields)]
struct TransferFile {
    tbd_p: Option<f64>,
    curr_p: Option<f64>,
    tbd_q: Option<f64>,
    curr_q: Option<f64>,
    cap_pq: Option<f64>,
    cap_qp: Option<f64>,
    max_bridge_stretch: Option<f64>,
    delta: Option<f64>,
    min_network_weight_trim: Option<f64>,
    max_network_weight_trim: Option<f64>,
    assets: Vec<AssetEntry>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RouteNetwork {
    id: String,
    current: f64,
    #[serde(default)]
    tbd: f64,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RouteAsset {
    id: String,
    min: f64,
    ideal: f64,
    max: f64,
    networks: Vec<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RouteBridge {
    from: String,
    to: String,
    capacity: f64,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RouteFile {
    max_iterations: Option<usize>,
    max_bridge_stretch: Option<f64>,
    delta: Option<f64>,
    min_network_weight_trim: Option<f64>,
    max_network_weight_trim: Option<f64>,
    networks: Vec<RouteNetwork>,
    #[serde(default)]
    assets: Vec<RouteAsset>,
    #[serde(default)]
    bridges: Vec<RouteBridge>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { n_scenarios } => simulate(&cli, *n_scenarios),
        Command::Transfer(args) => transfer(&cli, args),
        Command::Route { max_iterations } => route(&cli, *max_iterations),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn read_config(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))
}

fn parse_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = read_config(path)?;
    toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

fn err(e: impl Display) -> String {
    e.to_string()
}

fn simulate(cli: &Cli, n_scenarios: Option<usize>) -> Result<(), String> {
    let mut params = match &cli.config {
        Some(path) => SimulationParams::from_toml(&read_config(path)?)
            .map_err(|e| format!("invalid config {}: {e}", path.display()))?,
        None => SimulationParams::default(),
    };
    if let Some(seed) = cli.seed {
        params.rng_seed = seed;
    }
    if let Some(n) = n_scenarios {
        params.n_scenarios = n;
    }
    let batch = run_batch(&params).map_err(err)?;
    let paths = batch
        .write_tables(&cli.out, cli.round)
        .map_err(|e| format!("cannot write tables to {}: {e}", cli.out.display()))?;

    let mut nonzero = 0usize;
    let mut failed = 0usize;
    let mut max_abs: f64 = 0.0;
    for row in &batch.rows {
        match &row.outcome {
            Ok(o) => {
                let d = o.decision;
                let amounts = [d.delta_pq, d.delta_qp, d.simple_pq, d.simple_qp];
                if amounts.iter().any(|&a| a != 0.0) {
                    nonzero += 1;
                }
                max_abs = amounts.iter().fold(max_abs, |m, a| m.max(a.abs()));
            }
            Err(_) => failed += 1,
        }
    }

    match cli.format {
        Format::Plain => {
            println!("# configuration");
            print!("{}", params.to_toml());
            println!("# summary");
            println!("scenarios = {}", batch.rows.len());
            println!("failed = {failed}");
            println!("nonzero_transfers = {nonzero}");
            println!("max_abs_transfer = {}", format_amount(max_abs, cli.round));
            for p in &paths {
                println!("wrote {}", p.display());
            }
        }
        Format::Csv => {
            let table: toml::Table = toml::from_str(&params.to_toml()).map_err(err)?;
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["key", "value"]).map_err(err)?;
            for (k, v) in &table {
                w.write_record([k.as_str(), &v.to_string()]).map_err(err)?;
            }
            w.write_record(["scenarios", &batch.rows.len().to_string()]).map_err(err)?;
            w.write_record(["failed", &failed.to_string()]).map_err(err)?;
            w.write_record(["nonzero_transfers", &nonzero.to_string()]).map_err(err)?;
            w.write_record(["max_abs_transfer", &format_amount(max_abs, cli.round)])
                .map_err(err)?;
            w.flush().map_err(err)?;
        }
    }
    Ok(())
}

fn parse_inline_asset(raw: &str) -> Result<AssetEntry, String> {
    let parts: Vec<&str> = raw.split(':').collect();
    let [id, min, ideal, max, nets] = parts[..] else {
        return Err(format!("asset '{raw}': expected ID:MIN:IDEAL:MAX:NETWORKS"));
    };
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| format!("asset '{raw}': bad number '{s}': {e}"))
    };
    let nets = nets.to_ascii_lowercase();
    if nets.is_empty() || !nets.chars().all(|c| c == 'p' || c == 'q') {
        return Err(format!("asset '{raw}': networks must be p, q or pq"));
    }
    Ok(AssetEntry {
        id: id.to_string(),
        min: num(min)?,
        ideal: num(ideal)?,
        max: num(max)?,
        on_p: nets.contains('p'),
        on_q: nets.contains('q'),
    })
}

fn transfer(cli: &Cli, args: &TransferArgs) -> Result<(), String> {
    let file: TransferFile = match &cli.config {
        Some(path) => parse_toml(path)?,
        None => TransferFile::default(),
    };
    let required = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
        flag.or(from_file)
            .ok_or_else(|| format!("missing --{name} (flag or config key {})", name.replace('-', "_")))
    };
    let curr_p = required(args.curr_p, file.curr_p, "curr-p")?;
    let curr_q = required(args.curr_q, file.curr_q, "curr-q")?;
    let tbd_p = args.tbd_p.or(file.tbd_p).unwrap_or(0.0);
    let tbd_q = args.tbd_q.or(file.tbd_q).unwrap_or(0.0);
    let cap_pq = required(args.cap_pq, file.cap_pq, "cap-pq")?;
    let cap_qp = required(args.cap_qp, file.cap_qp, "cap-qp")?;

    let defaults = PipelineConfig::default();
    let cfg = PipelineConfig {
        trim: TrimConfig::new(
            args.min_trim
                .or(file.min_network_weight_trim)
                .unwrap_or(defaults.trim.min_weight),
            args.max_trim
                .or(file.max_network_weight_trim)
                .unwrap_or(defaults.trim.max_weight),
        )
        .map_err(err)?,
        max_stretch: args.max_stretch.or(file.max_bridge_stretch).unwrap_or(defaults.max_stretch),
        delta: args.delta.or(file.delta).unwrap_or(defaults.delta),
    };

    // Flags replace the file's asset list rather than extending it.
    let mut entries = Vec::new();
    if let Some(path) = &args.bands_file {
        entries.extend(parse_toml::<BandsFile>(path)?.assets);
    }
    for raw in &args.assets {
        entries.push(parse_inline_asset(raw)?);
    }
    if entries.is_empty() {
        entries = file.assets;
    }
    if entries.is_empty() {
        return Err("no asset bands given (use --bands-file, --asset or [[assets]] in --config)".into());
    }
    let assets = entries
        .into_iter()
        .map(|a| AssetListing::new(&a.id, a.min, a.ideal, a.max, a.on_p, a.on_q))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;

    let p = NetworkState::new("P", curr_p, tbd_p);
    let q = NetworkState::new("Q", curr_q, tbd_q);
    let bridge = BridgeLink::new(cap_pq, cap_qp);
    let outcome = pipeline(&p, &q, &bridge, &assets, &cfg).map_err(err)?;
    let inputs = [tbd_p, curr_p, tbd_q, curr_q, cap_pq, cap_qp];
    print_transfer(cli, &inputs, &outcome)
}

const TRANSFER_INPUT_COLUMNS: [&str; 6] = [
    "TBDAmount_P",
    "CurrentAmount_P",
    "TBDAmount_Q",
    "CurrentAmount_Q",
    "BridgeCapacity_PQ",
    "BridgeCapacity_QP",
];

const TRANSFER_EXTRA_COLUMNS: [&str; 3] = ["BridgeStretchCapped", "NetTransfer_PQ", "MultiRound"];

fn print_transfer(cli: &Cli, inputs: &[f64; 6], o: &PipelineOutcome) -> Result<(), String> {
    let amount = |v: f64| format_amount(v, cli.round);
    let mut names: Vec<&str> = TRANSFER_INPUT_COLUMNS.to_vec();
    names.extend(PRIMARY_COLUMNS);
    names.extend(INTERMEDIATE_COLUMNS);
    names.extend(TRANSFER_EXTRA_COLUMNS);
    let mut values: Vec<String> = inputs.iter().map(|&v| format_amount(v, false)).collect();
    let primary = primary_values(o);
    // Stretch and ratio are fractions, never rounded to whole dollars.
    values.extend(primary.iter().enumerate().map(|(k, &v)| {
        if k == 4 || k == 5 {
            format_amount(v, false)
        } else {
            amount(v)
        }
    }));
    let intermediate = intermediate_values(o);
    values.extend(intermediate.iter().enumerate().map(|(k, &v)| {
        if k == 4 || k == 5 {
            format_amount(v, false)
        } else {
            amount(v)
        }
    }));
    values.push(format_amount(o.stretch.capped_stretch, false));
    values.push(amount(o.netting.net_pq));
    values.push(o.netting.multi_round.to_string());

    match cli.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(&names).map_err(err)?;
            w.write_record(&values).map_err(err)?;
            w.flush().map_err(err)?;
        }
        Format::Plain => {
            let width = names.iter().map(|n| n.len()).max().unwrap_or(0);
            for (n, v) in names.iter().zip(&values) {
                println!("{n:<width$}  {v}");
            }
            let d = o.diagnostics;
            if d.min_above_other_max {
                println!("warning: one network's minimum capacity exceeds the other's maximum");
            }
            if d.band_range_too_narrow {
                println!("warning: the pooled total cannot satisfy both bands");
            }
        }
    }
    Ok(())
}

fn route(cli: &Cli, max_iterations: Option<usize>) -> Result<(), String> {
    let path = cli
        .config
        .as_ref()
        .ok_or("route needs --config with [[networks]], [[assets]] and [[bridges]]")?;
    let file: RouteFile = parse_toml(path)?;

    let networks: Vec<NetworkState> = file
        .networks
        .iter()
        .map(|n| NetworkState::new(n.id.clone(), n.current, n.tbd))
        .collect();
    let assets = file
        .assets
        .iter()
        .map(|a| {
            Ok(MultiAsset {
                asset_id: a.id.clone(),
                band: AssetWeightBand::raw(a.min, a.ideal, a.max)?,
                networks: a.networks.clone(),
            })
        })
        .collect::<bridge_alloc::Result<Vec<_>>>()
        .map_err(err)?;
    let mut bridges = BridgeMap::new();
    for b in &file.bridges {
        bridges.set(b.from.clone(), b.to.clone(), b.capacity).map_err(err)?;
    }
    let defaults = PipelineConfig::default();
    let cfg = RouteConfig {
        pipeline: PipelineConfig {
            trim: TrimConfig::new(
                file.min_network_weight_trim.unwrap_or(defaults.trim.min_weight),
                file.max_network_weight_trim.unwrap_or(defaults.trim.max_weight),
            )
            .map_err(err)?,
            max_stretch: file.max_bridge_stretch.unwrap_or(defaults.max_stretch),
            delta: file.delta.unwrap_or(defaults.delta),
        },
        max_iterations: max_iterations.or(file.max_iterations),
    };
    let outcome = round_robin_route(&networks, &assets, &bridges, &cfg).map_err(err)?;
    print_route(cli, &outcome)
}

fn print_route(cli: &Cli, o: &RouteOutcome) -> Result<(), String> {
    let amount = |v: f64| format_amount(v, cli.round);
    match cli.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["Kind", "From", "To", "Amount", "TotalAfter", "OutsideBand"])
                .map_err(err)?;
            for t in &o.transfers {
                w.write_record(["transfer", &t.from, &t.to, &amount(t.amount), "", ""])
                    .map_err(err)?;
            }
            for r in &o.residuals {
                w.write_record([
                    "residual",
                    &r.network_id,
                    "",
                    "",
                    &amount(r.total_after),
                    &amount(r.outside_band),
                ])
                .map_err(err)?;
            }
            w.flush().map_err(err)?;
        }
        Format::Plain => {
            println!("transfers:");
            if o.transfers.is_empty() {
                println!("  none");
            }
            for t in &o.transfers {
                println!("  {} -> {}  {}", t.from, t.to, amount(t.amount));
            }
            println!("residuals:");
            for r in &o.residuals {
                println!(
                    "  {}  total {}  outside {}",
                    r.network_id,
                    amount(r.total_after),
                    amount(r.outside_band)
                );
            }
        }
    }
    Ok(())
}
