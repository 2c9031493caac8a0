//! Candidate-list 2-opt and 3-opt with don't-look bits.
//!
//! Both operators use first-improvement. A search ends only after a complete
//! sweep over every city finds no improving move, so the returned tour is a
//! fixpoint of its neighbourhood.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Cost, Instance, Tour};

/// Largest tour for which debug builds verify every move gain against a
/// full recomputation.
const GAIN_CHECK_MAX_N: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalSearchKind {
    None,
    #[serde(rename = "2opt")]
    TwoOpt,
    #[serde(rename = "3opt")]
    ThreeOpt,
}

impl FromStr for LocalSearchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(LocalSearchKind::None),
            "2opt" => Ok(LocalSearchKind::TwoOpt),
            "3opt" => Ok(LocalSearchKind::ThreeOpt),
            other => Err(Error::InvalidArgument(format!(
                "unknown local search `{other}` (expected none, 2opt or 3opt)"
            ))),
        }
    }
}

impl fmt::Display for LocalSearchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalSearchKind::None => "none",
            LocalSearchKind::TwoOpt => "2opt",
            LocalSearchKind::ThreeOpt => "3opt",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalSearchConfig {
    pub kind: LocalSearchKind,
    pub use_dont_look_bits: bool,
    /// Number of candidate-list entries scanned, capped by the instance's
    /// list length.
    pub candidate_k: usize,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        LocalSearchConfig {
            kind: LocalSearchKind::ThreeOpt,
            use_dont_look_bits: true,
            candidate_k: crate::instance::DEFAULT_NEIGHBORS,
        }
    }
}

impl LocalSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kind != LocalSearchKind::None && self.candidate_k < 2 {
            return Err(Error::InvalidArgument(format!(
                "local search needs candidate_k >= 2, got {}",
                self.candidate_k
            )));
        }
        Ok(())
    }
}

/// 2-opt over the instance's full candidate lists.
pub fn two_opt(inst: &Instance, tour: &Tour) -> Tour {
    let cfg = LocalSearchConfig {
        kind: LocalSearchKind::TwoOpt,
        use_dont_look_bits: true,
        candidate_k: inst.nn_k(),
    };
    improve(inst, tour, &cfg)
}

/// 3-opt over the instance's full candidate lists; falls back to 2-opt for
/// fewer than five cities.
pub fn three_opt(inst: &Instance, tour: &Tour) -> Tour {
    let cfg = LocalSearchConfig {
        kind: LocalSearchKind::ThreeOpt,
        use_dont_look_bits: true,
        candidate_k: inst.nn_k(),
    };
    improve(inst, tour, &cfg)
}

/// Applies the configured operator. The 3-opt search starts from the 2-opt
/// local optimum of the same input, so it never ends above it.
pub fn improve(inst: &Instance, tour: &Tour, cfg: &LocalSearchConfig) -> Tour {
    let n = inst.n();
    if cfg.kind == LocalSearchKind::None || n < 4 {
        return tour.clone();
    }
    let k = cfg.candidate_k.min(inst.nn_k());
    let mut s = Search::new(inst, k, &tour.order);
    s.run(Neighbourhood::TwoOpt, cfg.use_dont_look_bits);
    if cfg.kind == LocalSearchKind::ThreeOpt && n >= 5 {
        s.run(Neighbourhood::ThreeOpt, cfg.use_dont_look_bits);
    }
    let out = Tour::from_valid(inst, s.order);
    debug_assert!(out.length <= tour.length);
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Neighbourhood {
    TwoOpt,
    ThreeOpt,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Succ,
    Pred,
}

/// Pure 3-opt reconnections of the segments A B C cut at a1|a2, b1|b2,
/// c1|c2 (in tour order), with `'` marking reversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(clippy::upper_case_acronyms)]
enum Reconnect {
    ARevBRevC,
    ARevCB,
    ACRevB,
    ACB,
}

const RECONNECTS: [Reconnect; 4] = [
    Reconnect::ARevBRevC,
    Reconnect::ARevCB,
    Reconnect::ACRevB,
    Reconnect::ACB,
];

struct Search<'a> {
    inst: &'a Instance,
    k: usize,
    order: Vec<usize>,
    pos: Vec<usize>,
    /// Tour length tracked through the claimed gains, in checked builds.
    checked_length: Option<Cost>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, k: usize, order: &[usize]) -> Self {
        let mut pos = vec![0; order.len()];
        for (i, &c) in order.iter().enumerate() {
            pos[c] = i;
        }
        let checked_length = (cfg!(debug_assertions) && order.len() <= GAIN_CHECK_MAX_N)
            .then(|| crate::instance::closed_length(inst, order));
        Search {
            inst,
            k,
            order: order.to_vec(),
            pos,
            checked_length,
        }
    }

    #[inline]
    fn n(&self) -> usize {
        self.order.len()
    }

    #[inline]
    fn succ(&self, c: usize) -> usize {
        let p = self.pos[c] + 1;
        self.order[if p == self.n() { 0 } else { p }]
    }

    #[inline]
    fn pred(&self, c: usize) -> usize {
        let p = self.pos[c];
        self.order[if p == 0 { self.n() - 1 } else { p - 1 }]
    }

    #[inline]
    fn step(&self, c: usize, dir: Dir) -> usize {
        match dir {
            Dir::Succ => self.succ(c),
            Dir::Pred => self.pred(c),
        }
    }

    #[inline]
    fn d(&self, a: usize, b: usize) -> Cost {
        self.inst.distance(a, b)
    }

    #[inline]
    fn cands(&self, c: usize) -> &'a [usize] {
        &self.inst.neighbors(c)[..self.k]
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.succ(a) == b || self.pred(a) == b
    }

    /// Reverses `len` consecutive tour positions starting at `start`.
    fn reverse(&mut self, start: usize, len: usize) {
        let n = self.n();
        if len < 2 {
            return;
        }
        let mut a = start % n;
        let mut b = (start + len - 1) % n;
        for _ in 0..len / 2 {
            self.order.swap(a, b);
            self.pos[self.order[a]] = a;
            self.pos[self.order[b]] = b;
            a = if a + 1 == n { 0 } else { a + 1 };
            b = if b == 0 { n - 1 } else { b - 1 };
        }
    }

    /// Removes (x, succ x) and (y, succ y); adds (x, y) and (succ x, succ y).
    fn move2(&mut self, x: usize, y: usize) {
        let n = self.n();
        let i = self.pos[x];
        let j = self.pos[y];
        let inner = (j + n - i) % n;
        if 2 * inner <= n {
            self.reverse(i + 1, inner);
        } else {
            self.reverse(j + 1, n - inner);
        }
    }

    /// The endpoint of tour edge {u, v} whose successor is the other one.
    fn edge_first(&self, u: usize, v: usize) -> usize {
        if self.succ(u) == v {
            u
        } else {
            debug_assert_eq!(self.succ(v), u, "({u}, {v}) is not a tour edge");
            v
        }
    }

    fn move2_edges(&mut self, e1: (usize, usize), e2: (usize, usize)) {
        let x = self.edge_first(e1.0, e1.1);
        let y = self.edge_first(e2.0, e2.1);
        self.move2(x, y);
    }

    fn current_length(&self) -> Cost {
        crate::instance::closed_length(self.inst, &self.order)
    }

    fn run(&mut self, hood: Neighbourhood, dont_look_bits: bool) {
        let n = self.n();
        let mut in_queue = vec![false; n];
        loop {
            let mut queue: VecDeque<usize> = self.order.iter().copied().collect();
            in_queue.iter_mut().for_each(|b| *b = true);
            let mut improved = false;
            while let Some(c) = queue.pop_front() {
                in_queue[c] = false;
                while let Some(touched) = self.improve_from(c, hood) {
                    improved = true;
                    if dont_look_bits {
                        for t in touched {
                            if !in_queue[t] {
                                in_queue[t] = true;
                                queue.push_back(t);
                            }
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }

    /// Finds and applies the first improving move rooted at `t1`; returns the
    /// endpoints of the changed edges.
    fn improve_from(&mut self, t1: usize, hood: Neighbourhood) -> Option<Vec<usize>> {
        let result = match hood {
            Neighbourhood::TwoOpt => self.try_two_opt(t1),
            Neighbourhood::ThreeOpt => self.try_three_opt(t1),
        };
        if let (Some(before), Some((_, gain))) = (self.checked_length, &result) {
            let now = self.current_length();
            assert_eq!(now, before - gain, "move gain mismatch");
            self.checked_length = Some(now);
        }
        result.map(|(touched, _)| touched)
    }

    fn try_two_opt(&mut self, a: usize) -> Option<(Vec<usize>, Cost)> {
        for dir in [Dir::Succ, Dir::Pred] {
            let a_next = self.step(a, dir);
            let radius = self.d(a, a_next);
            for &b in self.cands(a) {
                let dab = self.d(a, b);
                if dab >= radius {
                    break;
                }
                let b_next = self.step(b, dir);
                if b == a_next || b_next == a {
                    continue;
                }
                let gain = radius + self.d(b, b_next) - dab - self.d(a_next, b_next);
                if gain > 0 {
                    match dir {
                        Dir::Succ => self.move2(a, b),
                        Dir::Pred => self.move2(a_next, b_next),
                    }
                    return Some((vec![a, a_next, b, b_next], gain));
                }
            }
        }
        None
    }

    fn try_three_opt(&mut self, t1: usize) -> Option<(Vec<usize>, Cost)> {
        for dir in [Dir::Succ, Dir::Pred] {
            let back = match dir {
                Dir::Succ => Dir::Pred,
                Dir::Pred => Dir::Succ,
            };
            let t2 = self.step(t1, dir);
            let d12 = self.d(t1, t2);
            for &t3 in self.cands(t2) {
                let g1 = d12 - self.d(t2, t3);
                if g1 <= 0 {
                    break;
                }
                if t3 == t1 || self.adjacent(t2, t3) {
                    continue;
                }
                for t4 in [self.succ(t3), self.pred(t3)] {
                    let d34 = self.d(t3, t4);
                    if t4 == self.step(t3, back) {
                        let gain = g1 + d34 - self.d(t4, t1);
                        if gain > 0 {
                            match dir {
                                Dir::Succ => self.move2(t1, t4),
                                Dir::Pred => self.move2(t2, t3),
                            }
                            return Some((vec![t1, t2, t3, t4], gain));
                        }
                    }
                    let g2 = g1 + d34;
                    for &t5 in self.cands(t4) {
                        let g2b = g2 - self.d(t4, t5);
                        if g2b <= 0 {
                            break;
                        }
                        if t5 == t3 || self.adjacent(t4, t5) {
                            continue;
                        }
                        for t6 in [self.succ(t5), self.pred(t5)] {
                            if t6 == t1 {
                                continue;
                            }
                            let e56 = edge_key(t5, t6);
                            if e56 == edge_key(t1, t2) || e56 == edge_key(t3, t4) {
                                continue;
                            }
                            let gain = g2b + self.d(t5, t6) - self.d(t6, t1);
                            if gain <= 0 {
                                continue;
                            }
                            let removed = [(t1, t2), (t3, t4), (t5, t6)];
                            let added = [(t2, t3), (t4, t5), (t6, t1)];
                            if let Some((kind, cut)) = self.classify(removed, added) {
                                self.apply_reconnect(kind, cut);
                                return Some((vec![t1, t2, t3, t4, t5, t6], gain));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Identifies which pure reconnection `added` realises for the three
    /// removed tour edges, if any.
    fn classify(
        &self,
        removed: [(usize, usize); 3],
        added: [(usize, usize); 3],
    ) -> Option<(Reconnect, [usize; 6])> {
        let mut firsts = removed.map(|(u, v)| self.edge_first(u, v));
        firsts.sort_unstable_by_key(|&c| self.pos[c]);
        let [a1, b1, c1] = firsts;
        let cut = [a1, self.succ(a1), b1, self.succ(b1), c1, self.succ(c1)];
        let [a1, a2, b1, b2, c1, c2] = cut;

        let mut want = added.map(|(u, v)| edge_key(u, v));
        want.sort_unstable();
        RECONNECTS.into_iter().find_map(|kind| {
            let edges = match kind {
                Reconnect::ARevBRevC => [(a1, b1), (a2, c1), (b2, c2)],
                Reconnect::ARevCB => [(a1, c1), (b2, a2), (b1, c2)],
                Reconnect::ACRevB => [(a1, b2), (c1, b1), (a2, c2)],
                Reconnect::ACB => [(a1, b2), (c1, a2), (b1, c2)],
            };
            let mut have = edges.map(|(u, v)| edge_key(u, v));
            have.sort_unstable();
            (have == want).then_some((kind, cut))
        })
    }

    fn apply_reconnect(&mut self, kind: Reconnect, cut: [usize; 6]) {
        let [a1, a2, b1, b2, c1, c2] = cut;
        match kind {
            Reconnect::ARevBRevC => {
                self.move2_edges((a1, a2), (b1, b2));
                self.move2_edges((a2, b2), (c1, c2));
            }
            Reconnect::ARevCB => {
                self.move2_edges((a1, a2), (c1, c2));
                self.move2_edges((b2, b1), (a2, c2));
            }
            Reconnect::ACRevB => {
                self.move2_edges((a1, a2), (c1, c2));
                self.move2_edges((a1, c1), (b2, b1));
            }
            Reconnect::ACB => {
                self.move2_edges((a1, a2), (c1, c2));
                self.move2_edges((a1, c1), (b2, b1));
                self.move2_edges((c1, b1), (a2, c2));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{is_permutation, tour_length, Point};
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_instance(n: usize, seed: u64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = (0..n)
            .map(|_| Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
            .collect();
        Instance::new("rnd", pts).unwrap()
    }

    fn random_tour(inst: &Instance, seed: u64) -> Tour {
        let mut order: Vec<usize> = (0..inst.n()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Tour::new(inst, order).unwrap()
    }

    #[test]
    fn kind_parses() {
        assert_eq!(
            "3opt".parse::<LocalSearchKind>().unwrap(),
            LocalSearchKind::ThreeOpt
        );
        assert!("4opt".parse::<LocalSearchKind>().is_err());
        let bad = LocalSearchConfig {
            kind: LocalSearchKind::TwoOpt,
            use_dont_look_bits: true,
            candidate_k: 1,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn triangle_is_unchanged() {
        let inst = Instance::new(
            "tri",
            vec![
                Point::new(0.0, 0.0),
                Point::new(0.0, 3.0),
                Point::new(4.0, 0.0),
            ],
        )
        .unwrap();
        let t = Tour::new(&inst, vec![0, 1, 2]).unwrap();
        assert_eq!(two_opt(&inst, &t), t);
        assert_eq!(three_opt(&inst, &t), t);
    }

    #[test]
    fn crossing_square_is_uncrossed() {
        let inst = Instance::new(
            "sq",
            vec![
                Point::new(0.0, 0.0),
                Point::new(10.0, 0.0),
                Point::new(10.0, 10.0),
                Point::new(0.0, 10.0),
            ],
        )
        .unwrap();
        let crossed = Tour::new(&inst, vec![0, 2, 1, 3]).unwrap();
        let out = two_opt(&inst, &crossed);
        assert!(out.length < crossed.length);
        assert_eq!(out.length, 40);
    }

    #[test]
    fn without_dont_look_bits_reaches_a_fixpoint_too() {
        let inst = random_instance(60, 5);
        let t = random_tour(&inst, 6);
        for kind in [LocalSearchKind::TwoOpt, LocalSearchKind::ThreeOpt] {
            let cfg = LocalSearchConfig {
                kind,
                use_dont_look_bits: false,
                candidate_k: 10,
            };
            let once = improve(&inst, &t, &cfg);
            assert!(once.length <= t.length);
            assert_eq!(improve(&inst, &once, &cfg), once);
        }
    }

    #[test]
    fn all_reconnections_are_applied_correctly() {
        // Exercise each reconnection directly on a 12-city ring.
        let inst = random_instance(12, 1);
        let order: Vec<usize> = (0..12).collect();
        for kind in RECONNECTS {
            let mut s = Search::new(&inst, inst.nn_k(), &order);
            let cut = [1, 2, 5, 6, 8, 9];
            s.apply_reconnect(kind, cut);
            assert!(is_permutation(&s.order, 12));
            let [a1, a2, b1, b2, c1, c2] = cut;
            let expected = match kind {
                Reconnect::ARevBRevC => [(a1, b1), (a2, c1), (b2, c2)],
                Reconnect::ARevCB => [(a1, c1), (b2, a2), (b1, c2)],
                Reconnect::ACRevB => [(a1, b2), (c1, b1), (a2, c2)],
                Reconnect::ACB => [(a1, b2), (c1, a2), (b1, c2)],
            };
            for (u, v) in expected {
                assert!(s.adjacent(u, v), "{kind:?}: missing edge ({u}, {v})");
            }
            for (u, v) in [(a1, a2), (b1, b2), (c1, c2)] {
                assert!(!s.adjacent(u, v), "{kind:?}: edge ({u}, {v}) survived");
            }
        }
    }

    /// Exhaustive check that no improving 2-exchange remains inside the
    /// candidate-restricted neighbourhood: an exchange is reachable when some
    /// added edge (u, v) has v among u's candidates and is shorter than the
    /// removed edge at u.
    #[test]
    fn two_opt_is_stable_against_exhaustive_oracle() {
        for seed in 0..40 {
            let mut inst = random_instance(8, seed);
            let k = 2 + (seed as usize % 5);
            inst.set_neighbor_k(k).unwrap();
            let t = random_tour(&inst, seed + 1000);
            let out = two_opt(&inst, &t);
            assert!(is_permutation(&out.order, 8));
            assert!(out.length <= t.length);
            assert_eq!(out.length, tour_length(&inst, &out.order).unwrap());

            let n = 8;
            let o = &out.order;
            let dist = inst.clone();
            let d = |a: usize, b: usize| dist.distance(a, b);
            let reach =
                |u: usize, v: usize, w: usize| inst.neighbors(u).contains(&v) && d(u, v) < d(u, w);
            for i in 0..n {
                for j in 0..n {
                    if i == j || (i + 1) % n == j || (j + 1) % n == i {
                        continue;
                    }
                    let (x, sx, y, sy) = (o[i], o[(i + 1) % n], o[j], o[(j + 1) % n]);
                    let gain = d(x, sx) + d(y, sy) - d(x, y) - d(sx, sy);
                    if gain > 0 {
                        assert!(
                            !(reach(x, y, sx)
                                || reach(y, x, sy)
                                || reach(sx, sy, x)
                                || reach(sy, sx, y)),
                            "seed {seed}: reachable improving exchange left"
                        );
                    }
                }
            }

            // Full lists: the output is a true 2-opt local optimum.
            inst.set_neighbor_k(n - 1).unwrap();
            let full = two_opt(&inst, &t);
            for i in 0..n {
                for j in i + 2..n {
                    if i == 0 && j == n - 1 {
                        continue;
                    }
                    let o = &full.order;
                    let gain = d(o[i], o[i + 1]) + d(o[j], o[(j + 1) % n])
                        - d(o[i], o[j])
                        - d(o[i + 1], o[(j + 1) % n]);
                    assert!(gain <= 0, "seed {seed}: full-list 2-opt left gain {gain}");
                }
            }
        }
    }

    #[test]
    fn three_opt_never_worse_than_two_opt_on_fifty_cities() {
        for seed in 0..100 {
            let inst = random_instance(50, 7_000 + seed);
            let t = random_tour(&inst, seed);
            let two = two_opt(&inst, &t);
            let three = three_opt(&inst, &t);
            assert!(three.length <= two.length, "seed {seed}");
            assert!(is_permutation(&three.order, 50));
        }
    }

    #[test]
    fn three_opt_keeps_an_optimal_tour_on_seven_cities() {
        for seed in 0..10 {
            let inst = random_instance(7, 300 + seed);
            // Brute-force optimum over permutations fixing city 0.
            let mut best: Option<Vec<usize>> = None;
            let mut best_len = Cost::MAX;
            let mut rest: Vec<usize> = (1..7).collect();
            permute(&mut rest, 0, &mut |p| {
                let mut order = vec![0];
                order.extend_from_slice(p);
                let len = tour_length(&inst, &order).unwrap();
                if len < best_len {
                    best_len = len;
                    best = Some(order);
                }
            });
            let opt = Tour::new(&inst, best.unwrap()).unwrap();
            assert_eq!(three_opt(&inst, &opt).length, best_len);
        }
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn deterministic_output() {
        let inst = random_instance(80, 42);
        let t = random_tour(&inst, 43);
        assert_eq!(three_opt(&inst, &t), three_opt(&inst, &t));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
        #[test]
        fn monotone_valid_and_idempotent(n in 5usize..40, seed in 0u64..u64::MAX, k in 2usize..12) {
            let mut inst = random_instance(n, seed);
            inst.set_neighbor_k(k.min(n - 1)).unwrap();
            let t = random_tour(&inst, seed ^ 0xabcdef);
            for out in [two_opt(&inst, &t), three_opt(&inst, &t)] {
                proptest::prop_assert!(is_permutation(&out.order, n));
                proptest::prop_assert!(out.length <= t.length);
                proptest::prop_assert_eq!(out.length, tour_length(&inst, &out.order).unwrap());
            }
            let once = three_opt(&inst, &t);
            proptest::prop_assert_eq!(three_opt(&inst, &once).length, once.length);
            let once2 = two_opt(&inst, &t);
            proptest::prop_assert_eq!(two_opt(&inst, &once2).length, once2.length);
        }
    }
}
