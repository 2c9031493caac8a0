//! Master/slave runs over a dynamic instance, and the serial baseline.

mod parallel;
pub mod pool;
pub mod protocol;
pub mod runlog;
mod serial;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::aco::ColonyParams;
use crate::dynamics::{CityMove, DynamicsConfig};
use crate::error::{Error, Result};
use crate::instance::{Cost, Instance};

pub use parallel::run_parallel;
pub use pool::{pool_insert, pool_restore, PoolEntry, SolutionPool, POOL_CAPACITY};
pub use protocol::{exchange_gs, exchange_sr, BestReport, Message};
pub use runlog::{EventKind, LogEvent};
pub use serial::{run_serial, run_serial_worker, WorkerOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExchangeMode {
    Sr,
    Gs,
}

impl FromStr for ExchangeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sr" => Ok(ExchangeMode::Sr),
            "gs" => Ok(ExchangeMode::Gs),
            other => Err(Error::InvalidArgument(format!(
                "unknown exchange mode `{other}`"
            ))),
        }
    }
}

/// How a run is labelled in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Serial,
    Sr,
    Gs,
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunMode::Serial => "serial",
            RunMode::Sr => "sr",
            RunMode::Gs => "gs",
        })
    }
}

impl FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "serial" => Ok(RunMode::Serial),
            "sr" => Ok(RunMode::Sr),
            "gs" => Ok(RunMode::Gs),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    /// Iterations per worker. Deterministic for fixed seeds.
    Iterations(u64),
    /// Wall-clock seconds.
    Seconds(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub workers: usize,
    pub exchange_mode: ExchangeMode,
    pub copy_ant: bool,
    pub budget: Budget,
    pub params: ColonyParams,
    pub dynamics: DynamicsConfig,
    pub optimum: Option<Cost>,
    /// Synthetic delay paid by the sender of every message.
    pub latency_ms: f64,
    /// Probability of dropping a best report or a pool-best reply.
    pub loss_rate: f64,
    pub exchange_timeout_ms: u64,
    /// Slaves keep their own best-so-far when it beats the pool best.
    pub adopt_if_better: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            workers: 1,
            exchange_mode: ExchangeMode::Sr,
            copy_ant: false,
            budget: Budget::Iterations(1000),
            params: ColonyParams::default(),
            dynamics: DynamicsConfig::default(),
            optimum: None,
            latency_ms: 0.0,
            loss_rate: 0.0,
            exchange_timeout_ms: 600_000,
            adopt_if_better: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::InvalidArgument(
                "at least one worker is required".into(),
            ));
        }
        if !(self.latency_ms >= 0.0 && self.latency_ms.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "latency must be >= 0, got {}",
                self.latency_ms
            )));
        }
        if !(0.0..1.0).contains(&self.loss_rate) {
            return Err(Error::InvalidArgument(format!(
                "loss rate must be in [0, 1), got {}",
                self.loss_rate
            )));
        }
        if let Budget::Seconds(s) = self.budget {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "time budget must be >= 0, got {s}"
                )));
            }
        }
        if let Some(opt) = self.optimum {
            if opt <= 0 {
                return Err(Error::InvalidArgument(format!(
                    "optimum must be > 0, got {opt}"
                )));
            }
        }
        self.params.validate()?;
        self.dynamics.validate()
    }

    pub fn interval_mod(&self) -> u64 {
        self.dynamics.interval_mod
    }

    pub fn interval_update(&self) -> u64 {
        self.dynamics.interval_update()
    }

    pub fn mode(&self) -> RunMode {
        match (self.workers, self.exchange_mode) {
            (1, _) => RunMode::Serial,
            (_, ExchangeMode::Sr) => RunMode::Sr,
            (_, ExchangeMode::Gs) => RunMode::Gs,
        }
    }

    pub(crate) fn latency(&self) -> Duration {
        Duration::from_secs_f64(self.latency_ms / 1000.0)
    }

    pub(crate) fn exchange_timeout(&self) -> Duration {
        Duration::from_millis(self.exchange_timeout_ms)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub mode: RunMode,
    pub workers: usize,
    pub copy_ant: bool,
    pub seed: u64,
    pub pool: Vec<PoolEntry>,
    /// Iterations completed by each worker, master first.
    pub iterations: Vec<u64>,
    pub best_gap: Option<f64>,
    pub avg3_gap: Option<f64>,
    pub avg10_gap: Option<f64>,
    pub avg_time3_s: Option<f64>,
    pub avg_time10_s: Option<f64>,
    pub moves: Vec<CityMove>,
    pub move_log: Option<PathBuf>,
    pub events: Vec<LogEvent>,
    pub elapsed_s: f64,
    pub config: RunConfig,
}

impl RunReport {
    pub fn iterations_total(&self) -> u64 {
        self.iterations.iter().sum()
    }

    pub fn best_length(&self) -> Option<Cost> {
        self.pool.first().map(|e| e.length)
    }
}

/// Signed percentage excess of `length` over `optimum`.
pub fn gap(length: Cost, optimum: Cost) -> Result<f64> {
    if optimum <= 0 {
        return Err(Error::InvalidArgument(format!(
            "optimum must be > 0, got {optimum}"
        )));
    }
    Ok(100.0 * (length - optimum) as f64 / optimum as f64)
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub(crate) struct RunParts {
    pub pool: SolutionPool,
    pub iterations: Vec<u64>,
    pub moves: Vec<CityMove>,
    pub events: Vec<LogEvent>,
    pub elapsed_s: f64,
}

pub(crate) fn build_report(inst: &Instance, cfg: &RunConfig, parts: RunParts) -> Result<RunReport> {
    let pool = parts.pool.entries().to_vec();
    let gaps = |k: usize| -> Result<Option<f64>> {
        match cfg.optimum {
            None => Ok(None),
            Some(opt) => {
                let g: Vec<f64> = pool
                    .iter()
                    .take(k)
                    .map(|e| gap(e.length, opt))
                    .collect::<Result<_>>()?;
                Ok(mean(g.into_iter()))
            }
        }
    };
    let times = |k: usize| mean(pool.iter().take(k).map(|e| e.found_at));
    let mut events = parts.events;
    events.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.worker.cmp(&b.worker)));

    let mut report = RunReport {
        instance: inst.name().to_string(),
        mode: cfg.mode(),
        workers: cfg.workers,
        copy_ant: cfg.copy_ant,
        seed: cfg.params.seed,
        best_gap: gaps(1)?,
        avg3_gap: gaps(3)?,
        avg10_gap: gaps(POOL_CAPACITY)?,
        avg_time3_s: times(3),
        avg_time10_s: times(POOL_CAPACITY),
        pool,
        iterations: parts.iterations,
        moves: parts.moves,
        move_log: None,
        events,
        elapsed_s: parts.elapsed_s,
        config: cfg.clone(),
    };
    if let Some(dir) = std::env::var_os(runlog::LOG_DIR_ENV) {
        let stem = format!(
            "{}-{}-w{}-seed{}-{}",
            report.instance,
            report.mode,
            report.workers,
            report.seed,
            std::process::id()
        );
        let stem = unique_stem(std::path::Path::new(&dir), &stem);
        let (_, moves) = runlog::write_logs(
            std::path::Path::new(&dir),
            &stem,
            &report.events,
            &report.moves,
        )?;
        report.move_log = Some(moves);
    }
    Ok(report)
}

fn unique_stem(dir: &std::path::Path, stem: &str) -> String {
    let mut k = 0;
    loop {
        let candidate = if k == 0 {
            stem.to_string()
        } else {
            format!("{stem}-{k}")
        };
        if !dir.join(format!("{candidate}.events.csv")).exists() {
            return candidate;
        }
        k += 1;
    }
}

/// Runs the serial baseline for one worker, the master/slave protocol
/// otherwise.
pub fn run(inst: &Instance, cfg: &RunConfig) -> Result<RunReport> {
    if cfg.workers == 1 {
        run_serial(inst, cfg)
    } else {
        run_parallel(inst, cfg)
    }
}
