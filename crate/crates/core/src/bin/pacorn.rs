use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, ValueEnum};

use pacorn::aco::ColonyParams;
use pacorn::bench::{format_report, run_experiment, ExperimentSpec, ReportFormat};
use pacorn::dynamics::DynamicsConfig;
use pacorn::local_search::LocalSearchKind;
use pacorn::orchestrator::{Budget, ExchangeMode, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Serial,
    Sr,
    Gs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ls {
    None,
    #[value(name = "2opt")]
    TwoOpt,
    #[value(name = "3opt")]
    ThreeOpt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Ant colony solver for the TSP with moving cities.
#[derive(Debug, Parser)]
#[command(name = "pacorn", version)]
#[command(group(ArgGroup::new("budget").required(true).args(["time_s", "iters"])))]
struct Cli {
    /// TSPLIB file (EUC_2D).
    #[arg(long)]
    instance: PathBuf,
    /// Worker count; defaults to 1 for serial and 2 otherwise.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "serial")]
    mode: Mode,
    #[arg(long = "copy-ant", value_enum, default_value = "off")]
    copy_ant: Switch,
    #[arg(long, default_value_t = 50)]
    ants: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 5.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.2)]
    rho: f64,
    #[arg(long, value_enum, default_value = "3opt")]
    ls: Ls,
    /// Iterations per cycle; one city moves per cycle.
    #[arg(long = "interval-mod", default_value_t = 100)]
    interval_mod: u64,
    #[arg(long, value_enum, default_value = "on")]
    dynamic: Switch,
    /// Wall-clock budget in seconds.
    #[arg(long = "time-s")]
    time_s: Option<f64>,
    /// Iteration budget per worker.
    #[arg(long)]
    iters: Option<u64>,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// File of `name optimum` lines used for gaps.
    #[arg(long = "optimum-file")]
    optimum_file: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Synthetic delay per message, in milliseconds.
    #[arg(long = "latency-ms", default_value_t = 0.0)]
    latency_ms: f64,
}

fn spec_from(cli: &Cli) -> Result<ExperimentSpec, String> {
    let workers = cli
        .workers
        .unwrap_or(if cli.mode == Mode::Serial { 1 } else { 2 });
    match (cli.mode, workers) {
        (Mode::Serial, w) if w != 1 => {
            return Err(format!("--mode serial needs --workers 1, got {w}"))
        }
        (Mode::Sr | Mode::Gs, w) if w < 2 => {
            return Err(format!("--mode sr/gs needs at least 2 workers, got {w}"))
        }
        _ => {}
    }
    let budget = match (cli.time_s, cli.iters) {
        (Some(s), None) => Budget::Seconds(s),
        (None, Some(i)) => Budget::Iterations(i),
        _ => return Err("give exactly one of --time-s and --iters".into()),
    };
    let params = ColonyParams {
        alpha: cli.alpha,
        beta: cli.beta,
        rho: cli.rho,
        ants: cli.ants,
        local_search: match cli.ls {
            Ls::None => LocalSearchKind::None,
            Ls::TwoOpt => LocalSearchKind::TwoOpt,
            Ls::ThreeOpt => LocalSearchKind::ThreeOpt,
        },
        seed: cli.seed,
        ..ColonyParams::default()
    };
    let run = RunConfig {
        workers,
        exchange_mode: if cli.mode == Mode::Gs {
            ExchangeMode::Gs
        } else {
            ExchangeMode::Sr
        },
        copy_ant: cli.copy_ant.on(),
        budget,
        params,
        dynamics: DynamicsConfig {
            enabled: cli.dynamic.on(),
            interval_mod: cli.interval_mod,
            rad: None,
            rng_seed: cli.seed,
        },
        latency_ms: cli.latency_ms,
        ..RunConfig::default()
    };
    run.validate().map_err(|e| e.to_string())?;
    Ok(ExperimentSpec {
        instance: cli.instance.clone(),
        repetitions: cli.reps,
        run,
        optimum_file: cli.optimum_file.clone(),
        out: cli.out.clone(),
        format: match cli.format {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match spec_from(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("pacorn: {e}");
            return ExitCode::from(2);
        }
    };
    let agg = match run_experiment(&spec) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("pacorn: {e}");
            return ExitCode::FAILURE;
        }
    };
    if spec.out.is_none() {
        match format_report(&agg, spec.format) {
            Ok(text) => {
                let _ = std::io::stdout().write_all(text.as_bytes());
            }
            Err(e) => {
                eprintln!("pacorn: {e}");
                return ExitCode::FAILURE;
            }
        }
    }
    ExitCode::SUCCESS
}
