use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{BBox, Cost, Instance, Point};

pub const EXACT_MAX_N: usize = 14;

/// `n` points drawn uniformly from `bbox`, deterministic in `seed`.
pub fn generate_random_instance(n: usize, bbox: BBox, seed: u64) -> Result<Instance> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "an instance needs at least 3 cities, got {n}"
        )));
    }
    if !(bbox.width() >= 0.0 && bbox.height() >= 0.0) {
        return Err(Error::InvalidArgument("empty bounding box".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coord = |lo: f64, hi: f64| if hi > lo { rng.gen_range(lo..=hi) } else { lo };
    let pts = (0..n)
        .map(|_| {
            let x = coord(bbox.x_min, bbox.x_max);
            let y = coord(bbox.y_min, bbox.y_max);
            Point::new(x, y)
        })
        .collect();
    Instance::new(format!("rand{n}-{seed}"), pts)
}

/// Held-Karp dynamic program over subsets containing city 0.
pub fn exact_optimum(inst: &Instance) -> Result<(Vec<usize>, Cost)> {
    let n = inst.n();
    if n > EXACT_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: EXACT_MAX_N,
        });
    }
    // Subsets of cities 1..n, bit i-1 for city i; `end` is a city in 1..n.
    let m = n - 1;
    let full = (1usize << m) - 1;
    let idx = |set: usize, end: usize| set * m + (end - 1);
    let mut cost = vec![Cost::MAX; (full + 1) * m];
    let mut parent = vec![usize::MAX; (full + 1) * m];
    for end in 1..n {
        cost[idx(1 << (end - 1), end)] = inst.distance(0, end);
    }
    for set in 1..=full {
        for end in 1..n {
            let bit = 1 << (end - 1);
            if set & bit == 0 {
                continue;
            }
            let here = cost[idx(set, end)];
            if here == Cost::MAX {
                continue;
            }
            for next in 1..n {
                let nb = 1 << (next - 1);
                if set & nb != 0 {
                    continue;
                }
                let c = here + inst.distance(end, next);
                let slot = idx(set | nb, next);
                if c < cost[slot] {
                    cost[slot] = c;
                    parent[slot] = end;
                }
            }
        }
    }
    let (last, best) = (1..n)
        .map(|end| (end, cost[idx(full, end)] + inst.distance(end, 0)))
        .min_by_key(|&(end, c)| (c, end))
        .expect("n >= 3");
    let mut order = Vec::with_capacity(n);
    let (mut set, mut end) = (full, last);
    while end != usize::MAX {
        order.push(end);
        let p = parent[idx(set, end)];
        set &= !(1 << (end - 1));
        end = if set == 0 { usize::MAX } else { p };
    }
    order.push(0);
    order.reverse();
    Ok((order, best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{is_permutation, tour_length};

    fn unit_box() -> BBox {
        BBox {
            x_min: 0.0,
            x_max: 1000.0,
            y_min: 0.0,
            y_max: 1000.0,
        }
    }

    /// Every tour starting at city 0, each cycle seen in both directions.
    fn brute_force(inst: &Instance) -> Cost {
        fn rec(inst: &Instance, order: &mut Vec<usize>, used: &mut Vec<bool>, best: &mut Cost) {
            let n = inst.n();
            if order.len() == n {
                *best = (*best).min(tour_length(inst, order).unwrap());
                return;
            }
            for c in 1..n {
                if !used[c] {
                    used[c] = true;
                    order.push(c);
                    rec(inst, order, used, best);
                    order.pop();
                    used[c] = false;
                }
            }
        }
        let mut best = Cost::MAX;
        let mut used = vec![false; inst.n()];
        used[0] = true;
        rec(inst, &mut vec![0], &mut used, &mut best);
        best
    }

    #[test]
    fn generator_examples() {
        let a = generate_random_instance(5, unit_box(), 3).unwrap();
        let b = generate_random_instance(5, unit_box(), 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 5);
        let c = generate_random_instance(200, unit_box(), 4).unwrap();
        assert!(c.coords().iter().all(|p| unit_box().contains(p)));
        assert!(generate_random_instance(2, unit_box(), 4).is_err());
    }

    #[test]
    fn exact_examples() {
        let tri = Instance::new(
            "tri",
            vec![
                Point::new(0.0, 0.0),
                Point::new(0.0, 3.0),
                Point::new(4.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(exact_optimum(&tri).unwrap().1, 12);
        let sq = Instance::new(
            "sq",
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
            ],
        )
        .unwrap();
        let (order, len) = exact_optimum(&sq).unwrap();
        assert_eq!(len, 4);
        assert_eq!(tour_length(&sq, &order).unwrap(), 4);
        let big = generate_random_instance(15, unit_box(), 1).unwrap();
        assert_eq!(exact_optimum(&big), Err(Error::TooLarge { n: 15, max: 14 }));
    }

    #[test]
    fn exact_matches_brute_force() {
        for seed in 0..30 {
            let n = 3 + (seed as usize % 6);
            let inst = generate_random_instance(n, unit_box(), 100 + seed).unwrap();
            let (order, len) = exact_optimum(&inst).unwrap();
            assert!(is_permutation(&order, n));
            assert_eq!(tour_length(&inst, &order).unwrap(), len);
            assert_eq!(len, brute_force(&inst), "seed {seed}");
        }
    }

    #[test]
    fn exact_handles_fourteen_cities() {
        let inst = generate_random_instance(14, unit_box(), 9).unwrap();
        let (order, len) = exact_optimum(&inst).unwrap();
        assert!(is_permutation(&order, 14));
        assert_eq!(tour_length(&inst, &order).unwrap(), len);
    }
}
