use serde::{Deserialize, Serialize};

use crate::instance::{canonical_order, closed_length, Cost, Instance};

pub const POOL_CAPACITY: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub order: Vec<usize>,
    pub length: Cost,
    /// Seconds since the start of the run.
    pub found_at: f64,
    pub worker: usize,
}

/// Bounded elite set, sorted by ascending length, one slot per tour up to
/// rotation and reflection.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPool {
    capacity: usize,
    entries: Vec<PoolEntry>,
    keys: Vec<Vec<usize>>,
}

impl Default for SolutionPool {
    fn default() -> Self {
        SolutionPool::new(POOL_CAPACITY)
    }
}

impl SolutionPool {
    pub fn new(capacity: usize) -> Self {
        SolutionPool {
            capacity: capacity.max(1),
            entries: Vec::with_capacity(capacity + 1),
            keys: Vec::with_capacity(capacity + 1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }

    pub fn head(&self) -> Option<&PoolEntry> {
        self.entries.first()
    }

    pub fn contains(&self, order: &[usize]) -> bool {
        let key = canonical_order(order);
        self.keys.contains(&key)
    }

    /// Inserts unless the tour is already present or the pool is full of
    /// tours at least as short. Returns whether it was inserted.
    pub fn insert(
        &mut self,
        order: Vec<usize>,
        length: Cost,
        found_at: f64,
        worker: usize,
    ) -> bool {
        if self.entries.len() == self.capacity
            && self.entries.last().is_some_and(|w| length >= w.length)
        {
            return false;
        }
        let key = canonical_order(&order);
        if self.keys.contains(&key) {
            return false;
        }
        let at = self.entries.partition_point(|e| e.length <= length);
        self.entries.insert(
            at,
            PoolEntry {
                order,
                length,
                found_at,
                worker,
            },
        );
        self.keys.insert(at, key);
        if self.entries.len() > self.capacity {
            self.entries.pop();
            self.keys.pop();
        }
        true
    }

    /// Re-evaluates every entry under the current coordinates and re-sorts.
    pub fn restore(&mut self, inst: &Instance) {
        for e in self.entries.iter_mut() {
            e.length = closed_length(inst, &e.order);
        }
        let mut idx: Vec<usize> = (0..self.entries.len()).collect();
        idx.sort_by_key(|&i| self.entries[i].length);
        self.entries = idx.iter().map(|&i| self.entries[i].clone()).collect();
        self.keys = idx.iter().map(|&i| self.keys[i].clone()).collect();
    }

    /// Inserts every entry of `other`, best first.
    pub fn merge(&mut self, other: &SolutionPool) {
        for e in other.entries() {
            self.insert(e.order.clone(), e.length, e.found_at, e.worker);
        }
    }

    pub fn is_sorted(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].length <= w[1].length)
    }
}

pub fn pool_insert(
    pool: &mut SolutionPool,
    order: Vec<usize>,
    length: Cost,
    found_at: f64,
    worker: usize,
) -> bool {
    pool.insert(order, length, found_at, worker)
}

pub fn pool_restore(pool: &mut SolutionPool, inst: &Instance) {
    pool.restore(inst);
}
