//! Ant System and MAX-MIN Ant System for the symmetric TSP.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Cost, Instance, Tour};
use crate::local_search::{self, LocalSearchConfig, LocalSearchKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcoMode {
    As,
    Mmas,
}

impl fmt::Display for AcoMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AcoMode::As => "as",
            AcoMode::Mmas => "mmas",
        })
    }
}

impl FromStr for AcoMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as" => Ok(AcoMode::As),
            "mmas" => Ok(AcoMode::Mmas),
            other => Err(Error::InvalidArgument(format!(
                "unknown ACO mode `{other}`"
            ))),
        }
    }
}

/// Which tour deposits pheromone in MMAS mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepositRule {
    IterationBest,
    BestSoFar,
    /// Iteration-best, except best-so-far on every `bs_period`-th iteration.
    Schedule {
        bs_period: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColonyParams {
    pub mode: AcoMode,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub ants: usize,
    pub candidate_k: usize,
    pub local_search: LocalSearchKind,
    pub use_dont_look_bits: bool,
    /// Run local search on every ant (otherwise only on the iteration-best).
    pub ls_all_ants: bool,
    pub deposit_rule: DepositRule,
    pub restart_threshold: u64,
    /// `tau_min = tau_max / (tau_min_factor * n)`.
    pub tau_min_factor: f64,
    pub seed: u64,
}

impl Default for ColonyParams {
    fn default() -> Self {
        ColonyParams {
            mode: AcoMode::Mmas,
            alpha: 1.0,
            beta: 5.0,
            rho: 0.2,
            ants: 50,
            candidate_k: crate::instance::DEFAULT_NEIGHBORS,
            local_search: LocalSearchKind::ThreeOpt,
            use_dont_look_bits: true,
            ls_all_ants: true,
            deposit_rule: DepositRule::Schedule { bs_period: 25 },
            restart_threshold: 250,
            tau_min_factor: 2.0,
            seed: 1,
        }
    }
}

impl ColonyParams {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return bad(format!("rho must be in (0, 1], got {}", self.rho));
        }
        if self.ants == 0 {
            return bad("at least one ant is required".into());
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be >= 0, got {}", self.alpha));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be >= 0, got {}", self.beta));
        }
        if self.candidate_k == 0 {
            return bad("candidate_k must be >= 1".into());
        }
        if let DepositRule::Schedule { bs_period: 0 } = self.deposit_rule {
            return bad("bs_period must be >= 1".into());
        }
        if !(self.tau_min_factor > 0.0) {
            return bad(format!(
                "tau_min_factor must be > 0, got {}",
                self.tau_min_factor
            ));
        }
        self.ls_config().validate()
    }

    pub fn ls_config(&self) -> LocalSearchConfig {
        LocalSearchConfig {
            kind: self.local_search,
            use_dont_look_bits: self.use_dont_look_bits,
            candidate_k: self.candidate_k,
        }
    }
}

/// MMAS trail limits: `tau_max = 1 / (rho * best)` and
/// `tau_min = tau_max / (2 n)`.
pub fn compute_trail_limits(rho: f64, best_length: Cost, n: usize) -> Result<(f64, f64)> {
    trail_limits(rho, best_length, n, 2.0)
}

fn trail_limits(rho: f64, best_length: Cost, n: usize, factor: f64) -> Result<(f64, f64)> {
    if best_length <= 0 {
        return Err(Error::InvalidArgument(format!(
            "trail limits need a positive tour length, got {best_length}"
        )));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rho must be in (0, 1], got {rho}"
        )));
    }
    let tau_max = 1.0 / (rho * best_length as f64);
    Ok((tau_max, tau_max / (factor * n as f64)))
}

/// Symmetric pheromone trails.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMatrix {
    n: usize,
    tau: Vec<f64>,
    pub tau_min: f64,
    pub tau_max: f64,
    pub mode: AcoMode,
}

impl PheromoneMatrix {
    pub fn new(n: usize, initial: f64, mode: AcoMode) -> Self {
        PheromoneMatrix {
            n,
            tau: vec![initial; n * n],
            tau_min: 0.0,
            tau_max: initial,
            mode,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.n + j]
    }

    /// Sets both (i, j) and (j, i).
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.tau[i * self.n + j] = v;
        self.tau[j * self.n + i] = v;
    }

    pub fn fill(&mut self, v: f64) {
        self.tau.iter_mut().for_each(|t| *t = v);
    }

    pub fn evaporate(&mut self, rho: f64) {
        let keep = 1.0 - rho;
        self.tau.iter_mut().for_each(|t| *t *= keep);
    }

    /// MMAS: `1/L` on each tour edge. AS: `rho/L`.
    pub fn deposit(&mut self, tour: &Tour, rho: f64) -> Result<()> {
        if tour.length <= 0 {
            return Err(Error::InvalidArgument(format!(
                "cannot deposit for a tour of length {}",
                tour.length
            )));
        }
        let amount = match self.mode {
            AcoMode::Mmas => 1.0 / tour.length as f64,
            AcoMode::As => rho / tour.length as f64,
        };
        let n = tour.order.len();
        for i in 0..n {
            let a = tour.order[i];
            let b = tour.order[(i + 1) % n];
            let v = self.get(a, b) + amount;
            self.set(a, b, v);
        }
        Ok(())
    }

    /// Clamps off-diagonal trails into `[tau_min, tau_max]`; no-op in AS mode.
    pub fn clamp(&mut self) {
        if self.mode != AcoMode::Mmas {
            return;
        }
        let (lo, hi) = (self.tau_min, self.tau_max);
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    let t = &mut self.tau[i * self.n + j];
                    *t = t.clamp(lo, hi);
                }
            }
        }
    }

    /// (min, max) over off-diagonal entries.
    pub fn off_diagonal_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    let t = self.get(i, j);
                    lo = lo.min(t);
                    hi = hi.max(t);
                }
            }
        }
        (lo, hi)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

pub fn evaporate(pher: &mut PheromoneMatrix, rho: f64) {
    pher.evaporate(rho);
}

pub fn deposit(pher: &mut PheromoneMatrix, tour: &Tour, rho: f64) -> Result<()> {
    pher.deposit(tour, rho)
}

pub fn clamp_trails(pher: &mut PheromoneMatrix) {
    pher.clamp();
}

/// A partially built tour.
#[derive(Debug, Clone, PartialEq)]
pub struct AntState {
    pub current: usize,
    pub visited: Vec<bool>,
    pub partial: Vec<usize>,
}

impl AntState {
    pub fn new(n: usize, start: usize) -> Self {
        let mut visited = vec![false; n];
        visited[start] = true;
        let mut partial = Vec::with_capacity(n);
        partial.push(start);
        AntState {
            current: start,
            visited,
            partial,
        }
    }

    pub fn visit(&mut self, city: usize) {
        debug_assert!(!self.visited[city]);
        self.visited[city] = true;
        self.partial.push(city);
        self.current = city;
    }

    pub fn is_complete(&self) -> bool {
        self.partial.len() == self.visited.len()
    }
}

#[inline]
fn pow(x: f64, e: f64) -> f64 {
    if e == 1.0 {
        x
    } else if e == 0.0 {
        1.0
    } else if e.fract() == 0.0 && e.abs() <= 16.0 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

/// `1 / max(d, 1)`.
#[inline]
pub fn heuristic(inst: &Instance, i: usize, j: usize) -> f64 {
    1.0 / inst.distance(i, j).max(1) as f64
}

#[inline]
fn edge_weight(
    inst: &Instance,
    pher: &PheromoneMatrix,
    alpha: f64,
    beta: f64,
    i: usize,
    j: usize,
) -> f64 {
    pow(pher.get(i, j), alpha) * pow(heuristic(inst, i, j), beta)
}

/// Shared selection rule. `cand_weight(rank)` is the weight of the rank-th
/// candidate of the current city.
fn select_next<R: Rng + ?Sized>(
    ant: &AntState,
    inst: &Instance,
    k: usize,
    rng: &mut R,
    cand_weight: impl Fn(usize) -> f64,
    full_weight: impl Fn(usize) -> f64,
    scratch: &mut Vec<(usize, f64)>,
) -> Result<usize> {
    if ant.is_complete() {
        return Err(Error::IllegalState("no unvisited city left".into()));
    }
    let i = ant.current;
    scratch.clear();
    let mut total = 0.0;
    for (rank, &j) in inst.neighbors(i)[..k].iter().enumerate() {
        if !ant.visited[j] {
            let w = cand_weight(rank);
            total += w;
            scratch.push((j, w));
        }
    }
    if !scratch.is_empty() && total > 0.0 && total.is_finite() {
        let r = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        for &(j, w) in scratch.iter() {
            acc += w;
            if acc > r {
                return Ok(j);
            }
        }
        // Rounding left `r` past the last cumulative sum.
        return Ok(scratch
            .iter()
            .rev()
            .find(|(_, w)| *w > 0.0)
            .map_or(scratch[0].0, |p| p.0));
    }
    let mut best = None;
    let mut best_w = f64::NEG_INFINITY;
    for j in 0..inst.n() {
        if !ant.visited[j] {
            let w = full_weight(j);
            if w > best_w {
                best_w = w;
                best = Some(j);
            }
        }
    }
    best.ok_or_else(|| Error::IllegalState("no unvisited city left".into()))
}

/// Samples the next city with probability proportional to
/// `tau^alpha * eta^beta` among unvisited candidates; when every candidate
/// is visited, returns the unvisited city with the largest weight.
pub fn choose_next<R: Rng + ?Sized>(
    ant: &AntState,
    inst: &Instance,
    pher: &PheromoneMatrix,
    params: &ColonyParams,
    rng: &mut R,
) -> Result<usize> {
    let i = ant.current;
    let k = params.candidate_k.min(inst.nn_k());
    let nn = inst.neighbors(i);
    let (a, b) = (params.alpha, params.beta);
    select_next(
        ant,
        inst,
        k,
        rng,
        |rank| edge_weight(inst, pher, a, b, i, nn[rank]),
        |j| edge_weight(inst, pher, a, b, i, j),
        &mut Vec::new(),
    )
}

/// Builds a complete tour from a uniformly random start city.
pub fn construct_tour<R: Rng + ?Sized>(
    inst: &Instance,
    pher: &PheromoneMatrix,
    params: &ColonyParams,
    rng: &mut R,
) -> Tour {
    let n = inst.n();
    let mut ant = AntState::new(n, rng.gen_range(0..n));
    while !ant.is_complete() {
        let next = choose_next(&ant, inst, pher, params, rng).expect("unvisited city exists");
        ant.visit(next);
    }
    Tour::from_valid(inst, ant.partial)
}

/// Greedy nearest-neighbour tour from `start`, ties to the lower index.
pub fn nearest_neighbor_tour(inst: &Instance, start: usize) -> Tour {
    let n = inst.n();
    let mut ant = AntState::new(n, start);
    while !ant.is_complete() {
        let i = ant.current;
        let next = inst
            .neighbors(i)
            .iter()
            .copied()
            .find(|&j| !ant.visited[j])
            .unwrap_or_else(|| {
                (0..n)
                    .filter(|&j| !ant.visited[j])
                    .min_by_key(|&j| (inst.distance(i, j), j))
                    .expect("unvisited city exists")
            });
        ant.visit(next);
    }
    Tour::from_valid(inst, ant.partial)
}

/// RNG for worker stream `stream` of `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    pub iteration: u64,
    pub iteration_best: Cost,
    pub best_so_far: Cost,
    pub improved: bool,
    pub restarted: bool,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
struct CopyAnt {
    tour: Tour,
    /// Last iteration (inclusive) of the window.
    until: u64,
}

/// One colony: pheromone state, best tours and the iteration loop.
#[derive(Debug, Clone)]
pub struct Colony {
    inst: Instance,
    params: ColonyParams,
    pher: PheromoneMatrix,
    rng: ChaCha8Rng,
    k: usize,
    /// `tau^alpha * eta^beta` for each candidate-list entry.
    weights: Vec<f64>,
    iteration: u64,
    best_so_far: Tour,
    restart_best: Option<Tour>,
    iteration_best: Option<Tour>,
    since_improvement: u64,
    restarts: u64,
    copy_ant: Option<CopyAnt>,
    started: Instant,
}

impl Colony {
    pub fn new(inst: Instance, params: ColonyParams) -> Result<Self> {
        let rng = seeded_rng(params.seed, 0);
        Colony::with_rng(inst, params, rng)
    }

    pub fn with_rng(mut inst: Instance, params: ColonyParams, rng: ChaCha8Rng) -> Result<Self> {
        params.validate()?;
        let n = inst.n();
        let k = params.candidate_k.min(n - 1);
        if inst.nn_k() != k {
            inst.set_neighbor_k(k)?;
        }
        let seed_tour = nearest_neighbor_tour(&inst, 0);
        let pher = match params.mode {
            AcoMode::Mmas => {
                let (hi, lo) =
                    trail_limits(params.rho, seed_tour.length, n, params.tau_min_factor)?;
                let mut p = PheromoneMatrix::new(n, hi, AcoMode::Mmas);
                p.tau_min = lo;
                p
            }
            AcoMode::As => {
                let tau0 = params.ants as f64 / seed_tour.length.max(1) as f64;
                PheromoneMatrix::new(n, tau0, AcoMode::As)
            }
        };
        let mut colony = Colony {
            inst,
            params,
            pher,
            rng,
            k,
            weights: vec![0.0; n * k],
            iteration: 0,
            best_so_far: seed_tour,
            restart_best: None,
            iteration_best: None,
            since_improvement: 0,
            restarts: 0,
            copy_ant: None,
            started: Instant::now(),
        };
        colony.refresh_weights();
        Ok(colony)
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn params(&self) -> &ColonyParams {
        &self.params
    }

    pub fn pheromone(&self) -> &PheromoneMatrix {
        &self.pher
    }

    pub fn best_so_far(&self) -> &Tour {
        &self.best_so_far
    }

    pub fn restart_best(&self) -> Option<&Tour> {
        self.restart_best.as_ref()
    }

    pub fn iteration_best(&self) -> Option<&Tour> {
        self.iteration_best.as_ref()
    }

    /// Number of completed iterations.
    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn restarts(&self) -> u64 {
        self.restarts
    }

    pub fn iterations_without_improvement(&self) -> u64 {
        self.since_improvement
    }

    pub fn copy_ant(&self) -> Option<&Tour> {
        self.copy_ant.as_ref().map(|c| &c.tour)
    }

    /// Whether the copy ant governs the deposit of the next iteration.
    pub fn copy_ant_active(&self) -> bool {
        self.copy_ant
            .as_ref()
            .is_some_and(|c| self.iteration < c.until)
    }

    fn refresh_weights(&mut self) {
        let (a, b) = (self.params.alpha, self.params.beta);
        let k = self.k;
        for i in 0..self.inst.n() {
            let nn = self.inst.neighbors(i);
            for (r, &j) in nn.iter().enumerate().take(k) {
                self.weights[i * k + r] = edge_weight(&self.inst, &self.pher, a, b, i, j);
            }
        }
    }

    pub fn construct_tour(&mut self) -> Tour {
        let mut scratch = Vec::with_capacity(self.k);
        self.construct_with(&mut scratch)
    }

    fn construct_with(&mut self, scratch: &mut Vec<(usize, f64)>) -> Tour {
        let n = self.inst.n();
        let (a, b, k) = (self.params.alpha, self.params.beta, self.k);
        let mut ant = AntState::new(n, self.rng.gen_range(0..n));
        while !ant.is_complete() {
            let i = ant.current;
            let row = &self.weights[i * k..(i + 1) * k];
            let (inst, pher) = (&self.inst, &self.pher);
            let next = select_next(
                &ant,
                inst,
                k,
                &mut self.rng,
                |rank| row[rank],
                |j| edge_weight(inst, pher, a, b, i, j),
                scratch,
            )
            .expect("unvisited city exists");
            ant.visit(next);
        }
        Tour::from_valid(&self.inst, ant.partial)
    }

    /// The tour that deposits pheromone this iteration (MMAS).
    pub fn select_deposit_ant(&self) -> Option<&Tour> {
        if self.iteration == 0 {
            return None;
        }
        if let Some(c) = &self.copy_ant {
            if self.iteration <= c.until {
                return Some(&c.tour);
            }
        }
        match self.params.deposit_rule {
            DepositRule::BestSoFar => Some(&self.best_so_far),
            DepositRule::IterationBest => self.iteration_best.as_ref(),
            DepositRule::Schedule { bs_period } => {
                if self.iteration.is_multiple_of(bs_period) {
                    Some(&self.best_so_far)
                } else {
                    self.iteration_best.as_ref()
                }
            }
        }
    }

    fn recompute_limits(&mut self) {
        if self.params.mode == AcoMode::Mmas {
            let (hi, lo) = trail_limits(
                self.params.rho,
                self.best_so_far.length,
                self.inst.n(),
                self.params.tau_min_factor,
            )
            .expect("tour length is positive");
            self.pher.tau_max = hi;
            self.pher.tau_min = lo;
        }
    }

    /// One pass of construction, local search, bookkeeping and trail update.
    pub fn run_iteration(&mut self) -> IterationReport {
        let t0 = Instant::now();
        let ls = self.params.ls_config();
        let mut scratch = Vec::with_capacity(self.k);
        let mut tours = Vec::with_capacity(self.params.ants);
        for _ in 0..self.params.ants {
            let t = self.construct_with(&mut scratch);
            let t = if self.params.ls_all_ants {
                local_search::improve(&self.inst, &t, &ls)
            } else {
                t
            };
            tours.push(t);
        }
        let best_idx = (0..tours.len())
            .min_by_key(|&i| tours[i].length)
            .expect("at least one ant");
        let mut iter_best = tours[best_idx].clone();
        if !self.params.ls_all_ants {
            iter_best = local_search::improve(&self.inst, &iter_best, &ls);
        }
        self.iteration += 1;

        let improved = iter_best.length < self.best_so_far.length;
        if improved {
            self.best_so_far = iter_best.clone();
            self.since_improvement = 0;
            self.recompute_limits();
        } else {
            self.since_improvement += 1;
        }
        if self
            .restart_best
            .as_ref()
            .is_none_or(|r| iter_best.length < r.length)
        {
            self.restart_best = Some(iter_best.clone());
        }
        self.iteration_best = Some(iter_best);

        self.guard_copy_ant();
        self.pher.evaporate(self.params.rho);
        match self.params.mode {
            AcoMode::As => {
                for t in &tours {
                    self.pher
                        .deposit(t, self.params.rho)
                        .expect("positive length");
                }
            }
            AcoMode::Mmas => {
                let t = self
                    .select_deposit_ant()
                    .expect("iteration completed")
                    .clone();
                self.pher
                    .deposit(&t, self.params.rho)
                    .expect("positive length");
                self.pher.clamp();
            }
        }
        let restarted = self.params.mode == AcoMode::Mmas && self.detect_stagnation_and_restart();
        self.refresh_weights();

        IterationReport {
            iteration: self.iteration,
            iteration_best: self.iteration_best.as_ref().map_or(0, |t| t.length),
            best_so_far: self.best_so_far.length,
            improved,
            restarted,
            elapsed: t0.elapsed(),
        }
    }

    /// Resets all trails to `tau_max` after `restart_threshold` iterations
    /// without a best-so-far improvement.
    pub fn detect_stagnation_and_restart(&mut self) -> bool {
        if self.params.mode != AcoMode::Mmas
            || self.since_improvement < self.params.restart_threshold
        {
            return false;
        }
        self.pher.fill(self.pher.tau_max);
        self.restart_best = None;
        self.since_improvement = 0;
        self.restarts += 1;
        self.refresh_weights();
        true
    }

    /// A copy ant that is longer than the colony's own best-so-far is
    /// replaced by the best-so-far.
    fn guard_copy_ant(&mut self) {
        if let Some(c) = self.copy_ant.as_mut() {
            if self.best_so_far.length < c.tour.length {
                c.tour = self.best_so_far.clone();
            }
        }
    }

    /// Loads `order` into the copy ant for iterations
    /// `iteration()+1 ..= iteration()+window`.
    pub fn load_copy_ant(&mut self, order: Vec<usize>, window: u64) -> Result<()> {
        let tour = Tour::new(&self.inst, order)?;
        self.copy_ant = Some(CopyAnt {
            tour,
            until: self.iteration + window,
        });
        Ok(())
    }

    pub fn clear_copy_ant(&mut self) {
        self.copy_ant = None;
    }

    /// Replaces the best-so-far by `order` (re-evaluated locally). With
    /// `only_if_better`, keeps the current one unless `order` is shorter.
    /// Returns whether the best-so-far changed.
    pub fn adopt_best(&mut self, order: Vec<usize>, only_if_better: bool) -> Result<bool> {
        let tour = Tour::new(&self.inst, order)?;
        if only_if_better && tour.length >= self.best_so_far.length {
            return Ok(false);
        }
        if tour.length < self.best_so_far.length {
            self.since_improvement = 0;
        }
        let changed = tour != self.best_so_far;
        self.best_so_far = tour;
        self.recompute_limits();
        self.pher.clamp();
        self.refresh_weights();
        Ok(changed)
    }

    /// Runs `f` against the instance, then re-evaluates every stored tour,
    /// trail limits and the cached choice weights.
    pub fn modify_instance<T>(&mut self, f: impl FnOnce(&mut Instance) -> T) -> T {
        let out = f(&mut self.inst);
        let inst = &self.inst;
        let reeval = |t: &mut Tour| t.length = crate::instance::closed_length(inst, &t.order);
        reeval(&mut self.best_so_far);
        if let Some(t) = self.restart_best.as_mut() {
            reeval(t);
        }
        if let Some(t) = self.iteration_best.as_mut() {
            reeval(t);
        }
        if let Some(c) = self.copy_ant.as_mut() {
            reeval(&mut c.tour);
        }
        self.recompute_limits();
        self.pher.clamp();
        self.refresh_weights();
        out
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}
