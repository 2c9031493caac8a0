//! Experiment harness: repetitions, aggregation, report output and the
//! exact oracles used by the tests.

pub mod oracle;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{read_tsplib, Cost, Instance};
use crate::orchestrator::{run, RunConfig, RunMode, RunReport};

pub use oracle::{exact_optimum, generate_random_instance, EXACT_MAX_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown report format `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub instance: PathBuf,
    pub repetitions: usize,
    /// Template for every repetition; seeds are offset per repetition.
    pub run: RunConfig,
    pub optimum_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: ReportFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub instance: String,
    pub mode: RunMode,
    pub workers: usize,
    pub copy_ant: bool,
    pub seed: u64,
    pub best_gap: Option<f64>,
    pub avg3_gap: Option<f64>,
    pub avg10_gap: Option<f64>,
    pub avg_time3_s: Option<f64>,
    pub avg_time10_s: Option<f64>,
    /// Mean over repetitions of the iterations summed across workers.
    pub iterations_total: f64,
    pub runs: Vec<RunReport>,
}

pub const CSV_HEADER: &str =
    "instance,mode,workers,copy_ant,best_gap,avg3_gap,avg10_gap,avg_time3_s,avg_time10_s,iterations_total,seed";

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let got: Vec<f64> = values.flatten().collect();
    (!got.is_empty()).then(|| got.iter().sum::<f64>() / got.len() as f64)
}

/// Arithmetic means over the repetitions.
pub fn aggregate(runs: Vec<RunReport>, base_seed: u64) -> Result<AggregateReport> {
    let first = runs
        .first()
        .ok_or_else(|| Error::InvalidArgument("nothing to aggregate".into()))?;
    let n = runs.len() as f64;
    Ok(AggregateReport {
        instance: first.instance.clone(),
        mode: first.mode,
        workers: first.workers,
        copy_ant: first.copy_ant,
        seed: base_seed,
        best_gap: mean_of(runs.iter().map(|r| r.best_gap)),
        avg3_gap: mean_of(runs.iter().map(|r| r.avg3_gap)),
        avg10_gap: mean_of(runs.iter().map(|r| r.avg10_gap)),
        avg_time3_s: mean_of(runs.iter().map(|r| r.avg_time3_s)),
        avg_time10_s: mean_of(runs.iter().map(|r| r.avg_time10_s)),
        iterations_total: runs
            .iter()
            .map(|r| r.iterations_total() as f64)
            .sum::<f64>()
            / n,
        runs,
    })
}

/// `name optimum` per line; `#` starts a comment.
pub fn parse_optima(text: &str) -> Result<BTreeMap<String, Cost>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected `name optimum`, got `{raw}`"),
            });
        };
        let value: Cost = value.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("bad optimum `{value}`"),
        })?;
        if value <= 0 {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("optimum must be positive, got {value}"),
            });
        }
        out.insert(name.to_string(), value);
    }
    Ok(out)
}

pub fn load_optima(path: impl AsRef<Path>) -> Result<BTreeMap<String, Cost>> {
    parse_optima(&fs::read_to_string(path)?)
}

/// Looks `inst` up by name, falling back to the file stem of `path`.
pub fn optimum_for(optima: &BTreeMap<String, Cost>, inst: &Instance, path: &Path) -> Option<Cost> {
    optima.get(inst.name()).copied().or_else(|| {
        path.file_stem()
            .and_then(|s| s.to_str())
            .and_then(|s| optima.get(s).copied())
    })
}

/// Per-repetition configuration: colony and move seeds are `base + index`.
pub fn repetition_config(template: &RunConfig, index: usize) -> RunConfig {
    let mut cfg = template.clone();
    let seed = template.params.seed + index as u64;
    cfg.params.seed = seed;
    cfg.dynamics.rng_seed = seed;
    cfg
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<AggregateReport> {
    if spec.repetitions == 0 {
        return Err(Error::InvalidArgument(
            "at least one repetition is required".into(),
        ));
    }
    let inst = read_tsplib(&spec.instance)?;
    let mut template = spec.run.clone();
    if template.optimum.is_none() {
        if let Some(path) = &spec.optimum_file {
            template.optimum = optimum_for(&load_optima(path)?, &inst, &spec.instance);
        }
    }
    let runs = (0..spec.repetitions)
        .map(|i| run(&inst, &repetition_config(&template, i)))
        .collect::<Result<Vec<_>>>()?;
    let agg = aggregate(runs, spec.run.params.seed)?;
    if let Some(out) = &spec.out {
        fs::write(out, format_report(&agg, spec.format)?)?;
    }
    Ok(agg)
}

fn fixed2(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_default()
}

fn whole_seconds(v: Option<f64>) -> String {
    v.map(|x| format!("{:.0}", x.round())).unwrap_or_default()
}

pub fn format_report(agg: &AggregateReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(agg)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Io(e.to_string())),
        ReportFormat::Csv => {
            let mut s = String::new();
            writeln!(s, "{CSV_HEADER}").expect("write to string");
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{:.0},{}",
                agg.instance,
                agg.mode,
                agg.workers,
                if agg.copy_ant { "on" } else { "off" },
                fixed2(agg.best_gap),
                fixed2(agg.avg3_gap),
                fixed2(agg.avg10_gap),
                whole_seconds(agg.avg_time3_s),
                whole_seconds(agg.avg_time10_s),
                agg.iterations_total,
                agg.seed
            )
            .expect("write to string");
            Ok(s)
        }
    }
}

pub fn parse_json_report(text: &str) -> Result<AggregateReport> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })
}
