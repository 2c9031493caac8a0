//! City moves inside a ring neighbourhood.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aco::seeded_rng;
use crate::error::{Error, Result};
use crate::instance::{closed_length, is_permutation, Instance, Point, Tour};

pub const DEFAULT_INTERVAL_MOD: u64 = 100;
pub const INNER_RATIO: f64 = 1.0 / 3.0;
/// RNG stream reserved for the move sequence.
pub const MOVE_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    pub enabled: bool,
    /// Iterations per cycle.
    pub interval_mod: u64,
    /// Outer ring radius; `None` derives it from the instance bounding box.
    pub rad: Option<f64>,
    pub rng_seed: u64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            enabled: true,
            interval_mod: DEFAULT_INTERVAL_MOD,
            rad: None,
            rng_seed: 1,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.interval_mod < 4 || !self.interval_mod.is_multiple_of(4) {
            return Err(Error::InvalidArgument(format!(
                "interval_mod must be a positive multiple of 4, got {}",
                self.interval_mod
            )));
        }
        if let Some(r) = self.rad {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidArgument(format!("rad must be > 0, got {r}")));
            }
        }
        Ok(())
    }

    /// Iterations between exchanges.
    pub fn interval_update(&self) -> u64 {
        self.interval_mod / 4
    }

    pub fn resolve_rad(&self, inst: &Instance) -> Result<f64> {
        match self.rad {
            Some(r) => Ok(r),
            None => compute_rad(inst),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CityMove {
    pub cycle_index: u64,
    pub city: usize,
    pub old_pos: Point,
    pub new_pos: Point,
}

impl CityMove {
    pub fn displacement(&self) -> f64 {
        self.old_pos.euclid(&self.new_pos)
    }
}

/// `cycle,city,old_x,old_y,new_x,new_y`
impl fmt::Display for CityMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{:?},{:?},{:?},{:?}",
            self.cycle_index,
            self.city,
            self.old_pos.x,
            self.old_pos.y,
            self.new_pos.x,
            self.new_pos.y
        )
    }
}

impl FromStr for CityMove {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("malformed move record `{s}`"),
        };
        let f: Vec<&str> = s.trim().split(',').collect();
        if f.len() != 6 {
            return Err(bad());
        }
        let real = |i: usize| f[i].parse::<f64>().map_err(|_| bad());
        Ok(CityMove {
            cycle_index: f[0].parse().map_err(|_| bad())?,
            city: f[1].parse().map_err(|_| bad())?,
            old_pos: Point::new(real(2)?, real(3)?),
            new_pos: Point::new(real(4)?, real(5)?),
        })
    }
}

/// One tenth of the mean side of the original bounding box.
pub fn compute_rad(inst: &Instance) -> Result<f64> {
    let b = inst.bbox();
    let (w, h) = (b.width(), b.height());
    if w <= 0.0 && h <= 0.0 {
        return Err(Error::InvalidArgument(
            "all cities share one point; ring radius is undefined".into(),
        ));
    }
    Ok(0.1 * (w + h) / 2.0)
}

/// Area-uniform point in the annulus `[rad/3, rad]` around `center`.
pub fn sample_ring_point<R: Rng + ?Sized>(center: Point, rad: f64, rng: &mut R) -> Point {
    let inner = rad * INNER_RATIO;
    loop {
        let theta = rng.gen::<f64>() * TAU;
        let u = rng.gen::<f64>();
        let r = (u * (rad * rad - inner * inner) + inner * inner).sqrt();
        let p = Point::new(center.x + r * theta.cos(), center.y + r * theta.sin());
        // Floating-point rounding can push the realized distance across a
        // boundary by an ulp; such draws are discarded.
        let d = center.euclid(&p);
        if d >= inner && d <= rad {
            return p;
        }
    }
}

/// Moves one uniformly chosen city into its ring and repairs the candidate
/// lists.
pub fn perturb_instance<R: Rng + ?Sized>(
    inst: &mut Instance,
    cfg: &DynamicsConfig,
    cycle: u64,
    rng: &mut R,
) -> Result<CityMove> {
    if !cfg.enabled {
        return Err(Error::IllegalState("dynamics are disabled".into()));
    }
    check_fresh(inst, cycle)?;
    let rad = cfg.resolve_rad(inst)?;
    let city = rng.gen_range(0..inst.n());
    let old_pos = inst.point(city);
    let new_pos = sample_ring_point(old_pos, rad, rng);
    inst.relocate(city, new_pos);
    inst.set_move_cycle(cycle);
    Ok(CityMove {
        cycle_index: cycle,
        city,
        old_pos,
        new_pos,
    })
}

fn check_fresh(inst: &Instance, cycle: u64) -> Result<()> {
    let last = inst.last_move_cycle();
    if cycle <= last {
        return Err(Error::StaleMove { cycle, last });
    }
    Ok(())
}

/// Replays a move produced elsewhere. Moves not newer than the last one
/// applied are rejected and leave the instance untouched.
pub fn apply_move(inst: &mut Instance, mv: &CityMove) -> Result<()> {
    if mv.city >= inst.n() {
        return Err(Error::InvalidArgument(format!(
            "move names city {} but the instance has {}",
            mv.city,
            inst.n()
        )));
    }
    if !mv.new_pos.is_finite() {
        return Err(Error::InvalidArgument("move target is not finite".into()));
    }
    check_fresh(inst, mv.cycle_index)?;
    inst.relocate(mv.city, mv.new_pos);
    inst.set_move_cycle(mv.cycle_index);
    Ok(())
}

/// Same order, length under the current coordinates.
pub fn reevaluate_tour(inst: &Instance, tour: &Tour) -> Result<Tour> {
    if !is_permutation(&tour.order, inst.n()) {
        return Err(Error::NotAPermutation { n: inst.n() });
    }
    Ok(Tour {
        order: tour.order.clone(),
        length: closed_length(inst, &tour.order),
    })
}

/// The shared move sequence: one RNG stream and a cycle counter.
#[derive(Debug, Clone)]
pub struct MoveStream {
    cfg: DynamicsConfig,
    rng: ChaCha8Rng,
    cycle: u64,
}

impl MoveStream {
    pub fn new(cfg: &DynamicsConfig) -> Self {
        MoveStream {
            cfg: cfg.clone(),
            rng: seeded_rng(cfg.rng_seed, MOVE_STREAM),
            cycle: 0,
        }
    }

    pub fn cycles(&self) -> u64 {
        self.cycle
    }

    pub fn next_move(&mut self, inst: &mut Instance) -> Result<CityMove> {
        let mv = perturb_instance(inst, &self.cfg, self.cycle + 1, &mut self.rng)?;
        self.cycle += 1;
        Ok(mv)
    }
}
