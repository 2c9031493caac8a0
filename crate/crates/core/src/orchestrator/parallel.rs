use std::sync::mpsc::{self, Receiver, RecvTimeoutError, Sender, TryRecvError};
use std::thread;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::aco::{seeded_rng, Colony};
use crate::dynamics::{apply_move, MoveStream};
use crate::error::{Error, Result};
use crate::instance::Instance;

use super::pool::SolutionPool;
use super::protocol::{exchange_gs, exchange_sr, BestReport, Message};
use super::runlog::{EventKind, RunLog};
use super::serial::{budget_left, WorkerOutcome};
use super::{build_report, Budget, ExchangeMode, RunConfig, RunParts, RunReport};

const LOSS_SALT: u64 = 0x6c6f_7373;

/// Sending side of one worker: synthetic latency and loss.
struct Link {
    latency: Duration,
    loss_rate: f64,
    rng: ChaCha8Rng,
}

impl Link {
    fn new(cfg: &RunConfig, worker: usize) -> Self {
        Link {
            latency: cfg.latency(),
            loss_rate: cfg.loss_rate,
            rng: seeded_rng(cfg.params.seed ^ LOSS_SALT, worker as u64),
        }
    }

    /// Returns `Ok(false)` when the message was dropped on purpose.
    fn send(&mut self, tx: &Sender<Message>, msg: Message, lossy: bool) -> Result<bool> {
        if !self.latency.is_zero() {
            thread::sleep(self.latency);
        }
        if lossy && self.loss_rate > 0.0 && self.rng.gen::<f64>() < self.loss_rate {
            return Ok(false);
        }
        tx.send(msg)
            .map_err(|_| Error::WorkerFailed("peer hung up".into()))?;
        Ok(true)
    }
}

fn iteration_budget(cfg: &RunConfig) -> bool {
    matches!(cfg.budget, Budget::Iterations(_))
}

/// Master plus `workers - 1` slaves, each with a private instance copy,
/// colony and RNG stream.
pub fn run_parallel(inst: &Instance, cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    if cfg.workers < 2 {
        return Err(Error::InvalidArgument(format!(
            "the parallel run needs at least two workers, got {}",
            cfg.workers
        )));
    }
    let start = Instant::now();
    let (to_master, master_rx) = mpsc::channel();
    let mut slave_txs = Vec::with_capacity(cfg.workers - 1);
    let mut handles = Vec::with_capacity(cfg.workers - 1);
    for id in 1..cfg.workers {
        let (tx, rx) = mpsc::channel();
        slave_txs.push(tx);
        let inst = inst.clone();
        let cfg = cfg.clone();
        let to_master = to_master.clone();
        let handle = thread::Builder::new()
            .name(format!("slave-{id}"))
            .spawn(move || Slave::new(id, inst, &cfg, rx, to_master, start)?.run())
            .map_err(|e| Error::WorkerFailed(format!("could not spawn slave {id}: {e}")))?;
        handles.push(handle);
    }
    drop(to_master);

    let mut master = Master::new(inst, cfg, master_rx, slave_txs, start)?;
    let outcome = master.run();
    let terminated = master.terminate();

    let mut slaves = Vec::with_capacity(handles.len());
    let mut failure = None;
    for (i, h) in handles.into_iter().enumerate() {
        match h.join() {
            Ok(Ok(out)) => slaves.push(out),
            Ok(Err(e)) => failure = failure.or(Some(e)),
            Err(_) => {
                failure = failure.or(Some(Error::WorkerFailed(format!(
                    "slave {} panicked",
                    i + 1
                ))))
            }
        }
    }
    outcome?;
    terminated?;
    if let Some(e) = failure {
        return Err(match e {
            Error::WorkerFailed(_) => e,
            other => Error::WorkerFailed(other.to_string()),
        });
    }

    let Master {
        colony,
        mut pool,
        log,
        moves,
        done,
        ..
    } = master;
    let mut iterations = vec![done];
    let mut events = log.into_events();
    for s in slaves {
        pool.merge(&s.pool);
        iterations.push(s.iterations);
        events.extend(s.events);
    }
    pool.restore(colony.instance());
    build_report(
        colony.instance(),
        cfg,
        RunParts {
            pool,
            iterations,
            moves,
            events,
            elapsed_s: start.elapsed().as_secs_f64(),
        },
    )
}

struct Master<'a> {
    cfg: &'a RunConfig,
    colony: Colony,
    pool: SolutionPool,
    stream: MoveStream,
    inbox: Receiver<Message>,
    slaves: Vec<Sender<Message>>,
    link: Link,
    log: RunLog,
    moves: Vec<crate::dynamics::CityMove>,
    /// Reports from rounds the master has not reached yet.
    pending: Vec<BestReport>,
    done: u64,
    start: Instant,
}

enum Gather {
    Complete(Vec<BestReport>),
    Partial(Vec<BestReport>),
    BudgetOver,
}

impl<'a> Master<'a> {
    fn new(
        inst: &Instance,
        cfg: &'a RunConfig,
        inbox: Receiver<Message>,
        slaves: Vec<Sender<Message>>,
        start: Instant,
    ) -> Result<Self> {
        let colony = Colony::with_rng(
            inst.clone(),
            cfg.params.clone(),
            seeded_rng(cfg.params.seed, 0),
        )?;
        Ok(Master {
            cfg,
            colony,
            pool: SolutionPool::default(),
            stream: MoveStream::new(&cfg.dynamics),
            inbox,
            slaves,
            link: Link::new(cfg, 0),
            log: RunLog::new(0, start),
            moves: Vec::new(),
            pending: Vec::new(),
            done: 0,
            start,
        })
    }

    fn now(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    fn run(&mut self) -> Result<()> {
        let period = self.cfg.interval_mod();
        let update = self.cfg.interval_update();
        while budget_left(self.cfg.budget, self.done, self.start) {
            if self.cfg.dynamics.enabled && self.done > 0 && self.done.is_multiple_of(period) {
                self.cycle_step()?;
            }
            let r = self.colony.run_iteration();
            self.done += 1;
            if r.improved || self.done == 1 {
                let bs = self.colony.best_so_far();
                let now = self.start.elapsed().as_secs_f64();
                self.pool.insert(bs.order.clone(), bs.length, now, 0);
                self.log
                    .record(EventKind::Improve, None, self.done, &bs.order, bs.length);
            }
            let at_exchange = self.done.is_multiple_of(update);
            let stop = match (self.cfg.exchange_mode, iteration_budget(self.cfg)) {
                (ExchangeMode::Sr, false) => {
                    self.serve_sr_async()?;
                    false
                }
                (ExchangeMode::Sr, true) if at_exchange => {
                    self.exchange_sr_round()?;
                    false
                }
                (ExchangeMode::Gs, _) if at_exchange => self.exchange_gs_round()?,
                _ => false,
            };
            if stop {
                break;
            }
        }
        Ok(())
    }

    /// Moves one city, broadcasts the move and restores the pool.
    fn cycle_step(&mut self) -> Result<()> {
        let stream = &mut self.stream;
        let mv = self.colony.modify_instance(|i| stream.next_move(i))?;
        for tx in &self.slaves {
            self.link.send(tx, Message::MoveBroadcast(mv), false)?;
        }
        self.pool.restore(self.colony.instance());
        let bs = self.colony.best_so_far();
        self.log
            .record(EventKind::Move, None, self.done, &bs.order, bs.length);
        self.moves.push(mv);
        Ok(())
    }

    fn handle_inbox(&mut self, msg: Message) -> Result<()> {
        match msg {
            Message::BestReport(r) => {
                self.pending.push(r);
                Ok(())
            }
            other => Err(Error::IllegalState(format!("master received {other:?}"))),
        }
    }

    /// Collects one report per slave for round `self.done`.
    fn gather(&mut self, deadline: Instant, budget_end: Option<Instant>) -> Result<Gather> {
        let want = self.slaves.len();
        let round = self.done;
        let take = |pending: &mut Vec<BestReport>| {
            pending.retain(|r| r.iteration >= round);
            let (now, later): (Vec<_>, Vec<_>) =
                pending.drain(..).partition(|r| r.iteration == round);
            *pending = later;
            now
        };
        let mut got = take(&mut self.pending);
        while got.len() < want {
            let limit = budget_end.map_or(deadline, |b| b.min(deadline));
            let wait = limit.saturating_duration_since(Instant::now());
            match self.inbox.recv_timeout(wait) {
                Ok(msg) => {
                    self.handle_inbox(msg)?;
                    got.extend(take(&mut self.pending));
                }
                Err(RecvTimeoutError::Timeout) => {
                    if budget_end.is_some_and(|b| Instant::now() >= b) && Instant::now() < deadline
                    {
                        return Ok(Gather::BudgetOver);
                    }
                    return Ok(Gather::Partial(got));
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(Error::WorkerFailed("all slaves hung up".into()));
                }
            }
        }
        Ok(Gather::Complete(got))
    }

    fn reply(&mut self, worker: usize, order: Vec<usize>, round: u64, lossy: bool) -> Result<()> {
        let length = crate::instance::closed_length(self.colony.instance(), &order);
        self.log
            .record(EventKind::Reply, Some(worker), round, &order, length);
        let msg = Message::PoolBest {
            order,
            length,
            cycle_index: self.colony.instance().last_move_cycle(),
            round,
        };
        self.link.send(&self.slaves[worker - 1], msg, lossy)?;
        Ok(())
    }

    fn log_reports(&mut self, reports: &[BestReport]) {
        for r in reports {
            self.log.record(
                EventKind::Report,
                Some(r.worker),
                r.iteration,
                &r.order,
                r.length,
            );
        }
    }

    /// Lockstep round: waits for every slave, then answers each in id order.
    fn exchange_sr_round(&mut self) -> Result<()> {
        let deadline = Instant::now() + self.cfg.exchange_timeout();
        let reports = match self.gather(deadline, None)? {
            Gather::Complete(r) | Gather::Partial(r) => r,
            Gather::BudgetOver => unreachable!("no budget deadline in lockstep mode"),
        };
        self.answer_sr(reports)
    }

    /// Wall-clock mode: answers whatever arrived since the last iteration.
    fn serve_sr_async(&mut self) -> Result<()> {
        loop {
            match self.inbox.try_recv() {
                Ok(msg) => self.handle_inbox(msg)?,
                Err(TryRecvError::Empty) => break,
                Err(TryRecvError::Disconnected) => {
                    return Err(Error::WorkerFailed("all slaves hung up".into()));
                }
            }
        }
        let reports = std::mem::take(&mut self.pending);
        self.answer_sr(reports)
    }

    fn answer_sr(&mut self, reports: Vec<BestReport>) -> Result<()> {
        if reports.is_empty() {
            return Ok(());
        }
        self.log_reports(&reports);
        let now = self.now();
        let replies = exchange_sr(&mut self.pool, self.colony.instance(), &reports, now);
        for (worker, order) in replies {
            let round = reports
                .iter()
                .find(|r| r.worker == worker)
                .map_or(self.done, |r| r.iteration);
            self.reply(worker, order, round, true)?;
        }
        Ok(())
    }

    /// Barrier round. Returns `true` when the time budget ran out while
    /// waiting.
    fn exchange_gs_round(&mut self) -> Result<bool> {
        let deadline = Instant::now() + self.cfg.exchange_timeout();
        let budget_end = match self.cfg.budget {
            Budget::Seconds(s) => Some(self.start + Duration::from_secs_f64(s)),
            Budget::Iterations(_) => None,
        };
        let reports = match self.gather(deadline, budget_end)? {
            Gather::Complete(r) => r,
            Gather::BudgetOver => return Ok(true),
            Gather::Partial(r) => {
                return Err(Error::WorkerFailed(format!(
                    "barrier timeout in round {}: {} of {} reports",
                    self.done,
                    r.len(),
                    self.slaves.len()
                )))
            }
        };
        self.log_reports(&reports);
        let now = self.now();
        let head = exchange_gs(&mut self.pool, self.colony.instance(), &reports, now)
            .expect("pool holds the gathered reports");
        for w in 1..=self.slaves.len() {
            self.reply(w, head.clone(), self.done, false)?;
        }
        Ok(false)
    }

    fn terminate(&mut self) -> Result<()> {
        let bs = self.colony.best_so_far();
        self.log
            .record(EventKind::Terminate, None, self.done, &bs.order, bs.length);
        for tx in &self.slaves {
            // A slave that already finished its iterations has hung up.
            let _ = self.link.send(tx, Message::Terminate, false);
        }
        Ok(())
    }
}

struct Slave {
    id: usize,
    cfg: RunConfig,
    colony: Colony,
    pool: SolutionPool,
    inbox: Receiver<Message>,
    master: Sender<Message>,
    link: Link,
    log: RunLog,
    done: u64,
    start: Instant,
    terminated: bool,
    /// Last pool best received, re-evaluated locally.
    last_pool_best: Option<Vec<usize>>,
}

enum Wait {
    Adopted,
    TimedOut,
    Terminated,
}

impl Slave {
    fn new(
        id: usize,
        inst: Instance,
        cfg: &RunConfig,
        inbox: Receiver<Message>,
        master: Sender<Message>,
        start: Instant,
    ) -> Result<Self> {
        let colony = Colony::with_rng(
            inst,
            cfg.params.clone(),
            seeded_rng(cfg.params.seed, id as u64),
        )?;
        Ok(Slave {
            id,
            cfg: cfg.clone(),
            colony,
            pool: SolutionPool::default(),
            inbox,
            master,
            link: Link::new(cfg, id),
            log: RunLog::new(id, start),
            done: 0,
            start,
            terminated: false,
            last_pool_best: None,
        })
    }

    fn run(mut self) -> Result<WorkerOutcome> {
        let period = self.cfg.interval_mod();
        let update = self.cfg.interval_update();
        let lockstep = iteration_budget(&self.cfg);
        loop {
            if lockstep {
                if !budget_left(self.cfg.budget, self.done, self.start) {
                    break;
                }
                if self.cfg.dynamics.enabled && self.done > 0 && self.done.is_multiple_of(period) {
                    self.await_move(self.done / period)?;
                }
            } else {
                self.drain()?;
            }
            if self.terminated && !lockstep {
                break;
            }
            let r = self.colony.run_iteration();
            self.done += 1;
            if r.improved || self.done == 1 {
                let bs = self.colony.best_so_far();
                let now = self.start.elapsed().as_secs_f64();
                self.pool.insert(bs.order.clone(), bs.length, now, self.id);
                self.log
                    .record(EventKind::Improve, None, self.done, &bs.order, bs.length);
            }
            if self.done.is_multiple_of(update) {
                // In lockstep a slave left behind by lost messages still
                // finishes its own budget, in isolation.
                if let (Wait::Terminated, false) = (self.exchange()?, lockstep) {
                    break;
                }
            }
        }
        Ok(WorkerOutcome {
            worker: self.id,
            pool: self.pool,
            iterations: self.done,
            moves: Vec::new(),
            events: self.log.into_events(),
            colony: self.colony,
        })
    }

    fn apply(&mut self, mv: &crate::dynamics::CityMove) -> Result<()> {
        match self.colony.modify_instance(|i| apply_move(i, mv)) {
            Ok(()) => {
                self.check_copy_ant();
                let bs = self.colony.best_so_far();
                self.log.record(
                    EventKind::ApplyMove,
                    Some(0),
                    self.done,
                    &bs.order,
                    bs.length,
                );
                Ok(())
            }
            Err(Error::StaleMove { .. }) => Ok(()),
            Err(e) => Err(e),
        }
    }

    /// An active copy ant is the last pool best or, once the guard fired,
    /// the colony's own best-so-far; either way valid locally.
    fn check_copy_ant(&self) {
        if let (Some(order), Some(c)) = (&self.last_pool_best, self.colony.copy_ant()) {
            if self.colony.copy_ant_active() {
                debug_assert!(c.order == *order || c.order == self.colony.best_so_far().order);
                debug_assert_eq!(
                    c.length,
                    crate::instance::closed_length(self.colony.instance(), &c.order)
                );
            }
        }
    }

    fn await_move(&mut self, cycle: u64) -> Result<()> {
        while self.colony.instance().last_move_cycle() < cycle {
            match self.inbox.recv() {
                Ok(msg) => {
                    self.handle(msg, None)?;
                }
                Err(_) => {
                    return Err(Error::WorkerFailed(format!(
                        "slave {}: master hung up",
                        self.id
                    )))
                }
            }
            if self.terminated {
                break;
            }
        }
        Ok(())
    }

    fn drain(&mut self) -> Result<()> {
        loop {
            match self.inbox.try_recv() {
                Ok(msg) => {
                    self.handle(msg, None)?;
                }
                Err(TryRecvError::Empty) => return Ok(()),
                Err(TryRecvError::Disconnected) => {
                    if self.terminated {
                        return Ok(());
                    }
                    return Err(Error::WorkerFailed(format!(
                        "slave {}: master hung up",
                        self.id
                    )));
                }
            }
        }
    }

    /// Handles one message; returns whether it was the awaited reply.
    fn handle(&mut self, msg: Message, round: Option<u64>) -> Result<bool> {
        match msg {
            Message::MoveBroadcast(mv) => self.apply(&mv).map(|_| false),
            Message::PoolBest {
                order, round: r, ..
            } if Some(r) == round => {
                self.adopt(order)?;
                Ok(true)
            }
            Message::PoolBest { .. } => Ok(false),
            Message::Terminate => {
                self.terminated = true;
                Ok(false)
            }
            Message::BestReport(_) => Err(Error::IllegalState(format!(
                "slave {} received a best report",
                self.id
            ))),
        }
    }

    fn adopt(&mut self, order: Vec<usize>) -> Result<()> {
        self.colony
            .adopt_best(order.clone(), self.cfg.adopt_if_better)?;
        if self.cfg.copy_ant {
            self.colony
                .load_copy_ant(order.clone(), self.cfg.interval_update())?;
        }
        let bs = self.colony.best_so_far();
        debug_assert_eq!(
            bs.length,
            crate::instance::closed_length(self.colony.instance(), &bs.order)
        );
        self.log
            .record(EventKind::Adopt, Some(0), self.done, &bs.order, bs.length);
        self.last_pool_best = Some(order);
        Ok(())
    }

    fn exchange(&mut self) -> Result<Wait> {
        if self.terminated {
            return Ok(Wait::Terminated);
        }
        let round = self.done;
        let bs = self.colony.best_so_far().clone();
        self.log
            .record(EventKind::Report, Some(0), round, &bs.order, bs.length);
        let report = Message::BestReport(BestReport {
            order: bs.order,
            length: bs.length,
            worker: self.id,
            iteration: round,
        });
        let lossy = self.cfg.exchange_mode == ExchangeMode::Sr;
        if !self.link.send(&self.master, report, lossy)? {
            self.log.record(EventKind::Skip, Some(0), round, &[], 0);
            return Ok(Wait::TimedOut);
        }
        let timeout = self.cfg.exchange_timeout() * 2;
        let deadline = Instant::now() + timeout;
        loop {
            let wait = deadline.saturating_duration_since(Instant::now());
            match self.inbox.recv_timeout(wait) {
                Ok(msg) => {
                    if self.handle(msg, Some(round))? {
                        return Ok(Wait::Adopted);
                    }
                    if self.terminated {
                        return Ok(Wait::Terminated);
                    }
                }
                Err(RecvTimeoutError::Timeout) => {
                    if self.cfg.exchange_mode == ExchangeMode::Gs {
                        return Err(Error::WorkerFailed(format!(
                            "slave {}: barrier timeout in round {round}",
                            self.id
                        )));
                    }
                    self.log.record(EventKind::Skip, Some(0), round, &[], 0);
                    return Ok(Wait::TimedOut);
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(Error::WorkerFailed(format!(
                        "slave {}: master hung up",
                        self.id
                    )));
                }
            }
        }
    }
}
