//! Command-line front end for the 1-bit massive MIMO simulator: scenario
//! configuration, parameter sweeps, and machine-readable CSV/JSON results.
//!
//! Exit codes: 0 success, 2 argument error, 3 runtime/IO error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use onebit_mimo::analytics::{
    scheme1_chernoff_bound, scheme1_union_bound, scheme2_asymptotic_error,
};
use onebit_mimo::montecarlo::{
    estimate_pilot_error, run_trials, Diagnostics, SystemConfig,
};
use onebit_mimo::{p_eps_majority, DecoderVariant, PilotConfig, SchemeKind};

use onebit_mimo_cli::rows::{to_csv, to_json, ResultRow};
use onebit_mimo_cli::scenario::{decoder_token, scheme_token, Scenario, ScenarioSpec};

#[derive(Parser)]
#[command(
    name = "onebit-mimo",
    version,
    about = "Link-level simulator and analytic error bounds for massive MIMO \
             with 1-bit quantized symbols and CSI"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo link simulation over one scenario or a sweep
    Simulate(SimulateArgs),
    /// Analytic bounds and CSI error probabilities, no trials
    Bound(BoundArgs),
    /// Measured pilot CSI error rate against the analytic majority formula
    PilotError(PilotErrorArgs),
    /// Mutual-information estimate (same trial engine as simulate)
    Mi(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    /// Massive transmit array, CSI at the transmitter (requires N | M)
    TxBeamform,
    /// Massive receive array, CSI at the receiver
    RxCombine,
}

impl From<SchemeArg> for SchemeKind {
    fn from(v: SchemeArg) -> SchemeKind {
        match v {
            SchemeArg::TxBeamform => SchemeKind::TxBeamform,
            SchemeArg::RxCombine => SchemeKind::RxCombine,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    /// Sign-combine both receive quadratures against the real CSI part
    Paper,
    /// Full conjugate matched filter
    Matched,
}

impl From<DecoderArg> for DecoderVariant {
    fn from(v: DecoderArg) -> DecoderVariant {
        match v {
            DecoderArg::Paper => DecoderVariant::RealCombining,
            DecoderArg::Matched => DecoderVariant::MatchedFilter,
        }
    }
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Transmission scheme
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Decoder variant (rx-combine only)
    #[arg(long, value_enum, default_value = "paper")]
    decoder: DecoderArg,
    /// Transmit antennas M
    #[arg(long)]
    m: Option<usize>,
    /// Receive antennas N
    #[arg(long)]
    n: Option<usize>,
    /// Total transmit power P, linear (or dB with --db)
    #[arg(long)]
    power: Option<f64>,
    /// Pilot power P_p, linear (or dB with --db)
    #[arg(long)]
    pilot_power: Option<f64>,
    /// Pilot rounds K per antenna
    #[arg(long)]
    pilots: Option<usize>,
    /// Interpret --power/--pilot-power (and their sweep lists) in dB
    #[arg(long)]
    db: bool,
    /// Sweep M over comma-separated values
    #[arg(long, value_delimiter = ',')]
    m_list: Option<Vec<usize>>,
    /// Sweep N over comma-separated values
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    /// Sweep P over comma-separated values
    #[arg(long, value_delimiter = ',')]
    p_list: Option<Vec<f64>>,
    /// Sweep P_p over comma-separated values
    #[arg(long, value_delimiter = ',')]
    pp_list: Option<Vec<f64>>,
    /// Sweep K over comma-separated values
    #[arg(long, value_delimiter = ',')]
    k_list: Option<Vec<usize>>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct SimulateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Trials per sweep point
    #[arg(long)]
    trials: Option<u64>,
    /// Sweep trial counts over comma-separated values
    #[arg(long, value_delimiter = ',')]
    trials_list: Option<Vec<u64>>,
    /// Master seed; required so every run is reproducible
    #[arg(long)]
    seed: u64,
    /// Worker threads (default: ONEBIT_MIMO_WORKERS, then all cores);
    /// never changes results
    #[arg(long)]
    workers: Option<usize>,
    /// Diagnostic, non-physical: disable data noise
    #[arg(long)]
    diag_noise_off: bool,
    /// Diagnostic, non-physical: error-free quantized CSI
    #[arg(long)]
    diag_exact_csi: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone)]
struct BoundArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone)]
struct PilotErrorArgs {
    /// Pilot power P_p, linear (or dB with --db)
    #[arg(long)]
    pilot_power: Option<f64>,
    /// Pilot rounds K per antenna
    #[arg(long)]
    pilots: Option<usize>,
    /// Interpret --pilot-power (and --pp-list) in dB
    #[arg(long)]
    db: bool,
    /// Sweep P_p over comma-separated values
    #[arg(long, value_delimiter = ',')]
    pp_list: Option<Vec<f64>>,
    /// Sweep K over comma-separated values
    #[arg(long, value_delimiter = ',')]
    k_list: Option<Vec<usize>>,
    /// Scalar channels to estimate (two quadrature observations each)
    #[arg(long)]
    samples: u64,
    /// Master seed
    #[arg(long)]
    seed: u64,
    /// Worker threads (default: ONEBIT_MIMO_WORKERS, then all cores)
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) | Command::Mi(args) => cmd_simulate(args),
        Command::Bound(args) => cmd_bound(args),
        Command::PilotError(args) => cmd_pilot_error(args),
    }
}

fn db_to_linear(v: f64) -> f64 {
    10f64.powf(v / 10.0)
}

fn scenario_spec(args: &ScenarioArgs, trials: Option<u64>, trials_list: Option<Vec<u64>>) -> ScenarioSpec {
    let conv = |v: f64| if args.db { db_to_linear(v) } else { v };
    ScenarioSpec {
        scheme: Some(args.scheme.into()),
        decoder: args.decoder.into(),
        m: args.m,
        n: args.n,
        power: args.power.map(conv),
        pilot_power: args.pilot_power.map(conv),
        pilots: args.pilots,
        trials,
        m_list: args.m_list.clone(),
        n_list: args.n_list.clone(),
        p_list: args.p_list.as_ref().map(|l| l.iter().map(|&v| conv(v)).collect()),
        pp_list: args.pp_list.as_ref().map(|l| l.iter().map(|&v| conv(v)).collect()),
        k_list: args.k_list.clone(),
        trials_list,
    }
}

/// Worker override: --workers beats ONEBIT_MIMO_WORKERS beats rayon default.
fn resolve_workers(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("ONEBIT_MIMO_WORKERS") {
        Ok(raw) => match raw.parse::<usize>() {
            Ok(w) if w > 0 => Ok(Some(w)),
            _ => usage(format!("ONEBIT_MIMO_WORKERS must be a positive integer (got {raw:?})")),
        },
        Err(_) => Ok(None),
    }
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| CliError::Runtime(format!("cannot build worker pool: {e}")))
            .map(|pool| pool.install(f)),
    }
}

/// Analytic columns for a scenario; shared by simulate and bound so joined
/// rows carry identical values.
fn analytic_columns(point: &Scenario, row: &mut ResultRow) -> Result<(), CliError> {
    let pilot = point.pilot().map_err(CliError::Usage)?;
    let p_eps = p_eps_majority(&pilot);
    row.p_eps = Some(p_eps);
    match point.scheme {
        SchemeKind::TxBeamform => {
            let union = scheme1_union_bound(point.power, &pilot, point.m, point.n)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let chernoff = scheme1_chernoff_bound(point.power, &pilot, point.m, point.n)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            row.bound_union = Some(union.value);
            row.bound_chernoff = Some(chernoff.value);
        }
        SchemeKind::RxCombine => {
            // Undefined at p_eps >= 1/2 (possible for even K at low pilot
            // power); the column is left empty there.
            row.bound_asymptotic =
                scheme2_asymptotic_error(p_eps, point.n, point.m).ok().map(|r| r.value);
        }
    }
    Ok(())
}

fn scenario_row(point: &Scenario) -> ResultRow {
    ResultRow {
        scheme: scheme_token(point.scheme).to_string(),
        decoder: decoder_token(point.decoder).to_string(),
        m: Some(point.m as u64),
        n: Some(point.n as u64),
        p: Some(point.power),
        pp: Some(point.pilot_power),
        k: Some(point.pilots as u64),
        ..ResultRow::default()
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    if args.trials.is_none() && args.trials_list.is_none() {
        return usage("--trials is required (or --trials-list)");
    }
    let spec = scenario_spec(&args.scenario, args.trials, args.trials_list.clone());
    let points = spec.expand().map_err(CliError::Usage)?;
    let workers = resolve_workers(args.workers)?;

    let mut out = Vec::with_capacity(points.len());
    for point in &points {
        let cfg = SystemConfig {
            scheme: point.scheme,
            decoder: point.decoder,
            tx_antennas: point.m,
            rx_antennas: point.n,
            power: point.power,
            pilot: point.pilot().map_err(CliError::Usage)?,
            trials: point.trials.expect("trials enforced above"),
            seed: args.seed,
            diagnostics: Diagnostics {
                noise_off: args.diag_noise_off,
                exact_csi: args.diag_exact_csi,
            },
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let stats = with_workers(workers, || run_trials(&cfg))?
            .map_err(|e| CliError::Runtime(e.to_string()))?;

        let mut row = scenario_row(point);
        row.trials = Some(cfg.trials);
        row.seed = Some(args.seed);
        row.block_errors = Some(stats.block_errors);
        row.block_error_rate = Some(stats.block_error_rate);
        row.bit_error_rate = Some(stats.bit_error_rate);
        row.ci95_halfwidth = Some(stats.block_ci95_halfwidth);
        row.mi_bits_per_use = stats.mutual_information_bits;
        analytic_columns(point, &mut row)?;
        out.push(row);
    }
    emit(&args.output, &out)
}

fn cmd_bound(args: BoundArgs) -> Result<(), CliError> {
    let spec = scenario_spec(&args.scenario, None, None);
    let points = spec.expand().map_err(CliError::Usage)?;
    let mut out = Vec::with_capacity(points.len());
    for point in &points {
        let mut row = scenario_row(point);
        analytic_columns(point, &mut row)?;
        out.push(row);
    }
    emit(&args.output, &out)
}

fn cmd_pilot_error(args: PilotErrorArgs) -> Result<(), CliError> {
    if args.pp_list.is_some() && args.k_list.is_some() {
        return usage("at most one sweep list may be given (--pp-list, --k-list)");
    }
    if args.samples == 0 {
        return usage("--samples must be at least 1");
    }
    let conv = |v: f64| if args.db { db_to_linear(v) } else { v };
    let powers: Vec<f64> = match (&args.pp_list, args.pilot_power) {
        (Some(list), _) => list.iter().map(|&v| conv(v)).collect(),
        (None, Some(v)) => vec![conv(v)],
        (None, None) => return usage("--pilot-power is required"),
    };
    let pilot_counts: Vec<usize> = match (&args.k_list, args.pilots) {
        (Some(list), _) => list.clone(),
        (None, Some(k)) => vec![k],
        (None, None) => return usage("--pilots is required"),
    };
    let workers = resolve_workers(args.workers)?;

    let mut out = Vec::new();
    for &pp in &powers {
        for &k in &pilot_counts {
            let pilot = PilotConfig::new(pp, k).map_err(|e| CliError::Usage(e.to_string()))?;
            let est = with_workers(workers, || estimate_pilot_error(&pilot, args.samples, args.seed))?;
            out.push(ResultRow {
                pp: Some(pp),
                k: Some(k as u64),
                trials: Some(args.samples),
                seed: Some(args.seed),
                block_errors: Some(est.errors),
                bit_error_rate: Some(est.rate),
                ci95_halfwidth: Some(est.ci95_halfwidth),
                p_eps: Some(est.analytic),
                ..ResultRow::default()
            });
        }
    }
    emit(&args.output, &out)
}

fn emit(output: &OutputArgs, rows: &[ResultRow]) -> Result<(), CliError> {
    let text = match output.format {
        FormatArg::Csv => to_csv(rows),
        FormatArg::Json => to_json(rows),
    };
    match &output.out {
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}")))?;
        }
        Some(path) => {
            std::fs::write(path, text.as_bytes()).map_err(|e| {
                CliError::Runtime(format!("cannot write {}: {e}", path.display()))
            })?;
        }
    }
    Ok(())
}
