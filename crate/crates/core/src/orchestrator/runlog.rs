use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::fs;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dynamics::CityMove;
use crate::error::Result;
use crate::instance::Cost;

pub const LOG_DIR_ENV: &str = "PACORN_LOG_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Move,
    ApplyMove,
    Improve,
    Report,
    Reply,
    Adopt,
    Skip,
    Terminate,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EventKind::Move => "move",
            EventKind::ApplyMove => "apply_move",
            EventKind::Improve => "improve",
            EventKind::Report => "report",
            EventKind::Reply => "reply",
            EventKind::Adopt => "adopt",
            EventKind::Skip => "skip",
            EventKind::Terminate => "terminate",
        };
        f.write_str(s)
    }
}

/// One protocol event. `peer` is the other party of a message, if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEvent {
    pub t: f64,
    pub worker: usize,
    pub kind: EventKind,
    pub peer: Option<usize>,
    pub iteration: u64,
    pub digest: u64,
    pub length: Cost,
}

impl fmt::Display for LogEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let peer = self.peer.map(|p| p.to_string()).unwrap_or_default();
        write!(
            f,
            "{:.6},{},{},{},{},{:016x},{}",
            self.t, self.worker, self.kind, peer, self.iteration, self.digest, self.length
        )
    }
}

pub fn digest(order: &[usize]) -> u64 {
    let mut h = DefaultHasher::new();
    order.hash(&mut h);
    h.finish()
}

/// Per-worker event buffer.
#[derive(Debug, Clone)]
pub struct RunLog {
    worker: usize,
    start: Instant,
    events: Vec<LogEvent>,
}

impl RunLog {
    pub fn new(worker: usize, start: Instant) -> Self {
        RunLog {
            worker,
            start,
            events: Vec::new(),
        }
    }

    pub fn record(
        &mut self,
        kind: EventKind,
        peer: Option<usize>,
        iteration: u64,
        order: &[usize],
        length: Cost,
    ) {
        self.events.push(LogEvent {
            t: self.start.elapsed().as_secs_f64(),
            worker: self.worker,
            kind,
            peer,
            iteration,
            digest: digest(order),
            length,
        });
    }

    pub fn into_events(self) -> Vec<LogEvent> {
        self.events
    }
}

/// Writes `<stem>.events.csv` and `<stem>.moves.csv` into `dir`.
pub fn write_logs(
    dir: &Path,
    stem: &str,
    events: &[LogEvent],
    moves: &[CityMove],
) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let ev_path = dir.join(format!("{stem}.events.csv"));
    let mut f = fs::File::create(&ev_path)?;
    writeln!(f, "t,worker,kind,peer,iteration,digest,length")?;
    for e in events {
        writeln!(f, "{e}")?;
    }
    let mv_path = dir.join(format!("{stem}.moves.csv"));
    let mut f = fs::File::create(&mv_path)?;
    writeln!(f, "cycle,city,old_x,old_y,new_x,new_y")?;
    for m in moves {
        writeln!(f, "{m}")?;
    }
    Ok((ev_path, mv_path))
}

/// Parses a move log written by [`write_logs`].
pub fn read_move_log(path: &Path) -> Result<Vec<CityMove>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(str::parse)
        .collect()
}
