use serde::{Deserialize, Serialize};

use crate::dynamics::CityMove;
use crate::instance::{closed_length, Cost, Instance};

use super::pool::SolutionPool;

/// Traffic between the master and its slaves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Message {
    MoveBroadcast(CityMove),
    BestReport(BestReport),
    /// `round` echoes the iteration of the report being answered.
    PoolBest {
        order: Vec<usize>,
        length: Cost,
        cycle_index: u64,
        round: u64,
    },
    Terminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestReport {
    pub order: Vec<usize>,
    pub length: Cost,
    pub worker: usize,
    pub iteration: u64,
}

/// Point-to-point round: reports are folded in worker-id order, each one
/// inserted, the pool restored, and that worker answered with the pool head
/// at that moment.
pub fn exchange_sr(
    pool: &mut SolutionPool,
    inst: &Instance,
    reports: &[BestReport],
    now: f64,
) -> Vec<(usize, Vec<usize>)> {
    let mut sorted: Vec<&BestReport> = reports.iter().collect();
    sorted.sort_by_key(|r| r.worker);
    let mut replies = Vec::with_capacity(sorted.len());
    for r in sorted {
        absorb(pool, inst, r, now);
        pool.restore(inst);
        let head = pool.head().expect("pool holds the report just absorbed");
        replies.push((r.worker, head.order.clone()));
    }
    replies
}

/// Collective round: the whole batch is folded in worker-id order, the pool
/// restored once, and one head returned for every worker.
pub fn exchange_gs(
    pool: &mut SolutionPool,
    inst: &Instance,
    reports: &[BestReport],
    now: f64,
) -> Option<Vec<usize>> {
    let mut sorted: Vec<&BestReport> = reports.iter().collect();
    sorted.sort_by_key(|r| r.worker);
    for r in sorted {
        absorb(pool, inst, r, now);
    }
    pool.restore(inst);
    pool.head().map(|h| h.order.clone())
}

/// Inserts a report with its length under the receiver's coordinates.
fn absorb(pool: &mut SolutionPool, inst: &Instance, r: &BestReport, now: f64) -> bool {
    let length = closed_length(inst, &r.order);
    pool.insert(r.order.clone(), length, now, r.worker)
}
