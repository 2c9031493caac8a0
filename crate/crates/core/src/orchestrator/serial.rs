use std::time::{Duration, Instant};

use crate::aco::{seeded_rng, Colony};
use crate::dynamics::{CityMove, MoveStream};
use crate::error::{Error, Result};
use crate::instance::Instance;

use super::pool::SolutionPool;
use super::runlog::{EventKind, LogEvent, RunLog};
use super::{build_report, Budget, RunConfig, RunParts, RunReport};

/// What one worker hands back when it stops.
#[derive(Debug, Clone)]
pub struct WorkerOutcome {
    pub worker: usize,
    pub pool: SolutionPool,
    pub iterations: u64,
    pub moves: Vec<CityMove>,
    pub events: Vec<LogEvent>,
    pub colony: Colony,
}

pub(crate) fn budget_left(budget: Budget, done: u64, start: Instant) -> bool {
    match budget {
        Budget::Iterations(b) => done < b,
        Budget::Seconds(s) => start.elapsed() < Duration::from_secs_f64(s),
    }
}

/// A stand-alone colony on RNG stream `worker`, moving cities itself from
/// the shared move stream.
pub fn run_serial_worker(inst: &Instance, cfg: &RunConfig, worker: usize) -> Result<WorkerOutcome> {
    serial_worker(inst, cfg, worker, Instant::now())
}

fn serial_worker(
    inst: &Instance,
    cfg: &RunConfig,
    worker: usize,
    start: Instant,
) -> Result<WorkerOutcome> {
    cfg.validate()?;
    let rng = seeded_rng(cfg.params.seed, worker as u64);
    let mut colony = Colony::with_rng(inst.clone(), cfg.params.clone(), rng)?;
    let mut stream = MoveStream::new(&cfg.dynamics);
    let mut pool = SolutionPool::default();
    let mut log = RunLog::new(worker, start);
    let mut moves = Vec::new();
    let period = cfg.interval_mod();
    let mut done = 0u64;
    while budget_left(cfg.budget, done, start) {
        if cfg.dynamics.enabled && done > 0 && done.is_multiple_of(period) {
            let mv = colony.modify_instance(|i| stream.next_move(i))?;
            pool.restore(colony.instance());
            let bs = colony.best_so_far();
            log.record(EventKind::Move, None, done, &bs.order, bs.length);
            moves.push(mv);
        }
        let r = colony.run_iteration();
        done += 1;
        if r.improved || done == 1 {
            let bs = colony.best_so_far();
            pool.insert(
                bs.order.clone(),
                bs.length,
                start.elapsed().as_secs_f64(),
                worker,
            );
            log.record(EventKind::Improve, None, done, &bs.order, bs.length);
        }
    }
    Ok(WorkerOutcome {
        worker,
        pool,
        iterations: done,
        moves,
        events: log.into_events(),
        colony,
    })
}

/// One colony, cities moved every `interval_mod` iterations, no messages.
pub fn run_serial(inst: &Instance, cfg: &RunConfig) -> Result<RunReport> {
    if cfg.workers != 1 {
        return Err(Error::InvalidArgument(format!(
            "the serial run needs exactly one worker, got {}",
            cfg.workers
        )));
    }
    let start = Instant::now();
    let out = serial_worker(inst, cfg, 0, start)?;
    build_report(
        out.colony.instance(),
        cfg,
        RunParts {
            pool: out.pool,
            iterations: vec![out.iterations],
            moves: out.moves,
            events: out.events,
            elapsed_s: start.elapsed().as_secs_f64(),
        },
    )
}
