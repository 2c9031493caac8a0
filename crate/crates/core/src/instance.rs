//! Euclidean TSP instances in the TSPLIB `EUC_2D` convention.
//!
//! Coordinates are the single source of truth: distances are evaluated on
//! demand (or read from an optional cache for small instances), so moving a
//! city only requires repairing the candidate lists that touch it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer tour cost under the `EUC_2D` metric.
pub type Cost = i64;

/// Default candidate-list length.
pub const DEFAULT_NEIGHBORS: usize = 20;

/// Largest instance for which [`Instance::enable_distance_cache`] is allowed.
pub const MAX_CACHED_N: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Real-valued Euclidean distance.
    pub fn euclid(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// TSPLIB `nint` of the Euclidean norm, rounding halves up.
pub fn euc2d_distance(p: &Point, q: &Point) -> Cost {
    (p.euclid(q) + 0.5).floor() as Cost
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl BBox {
    fn of(points: &[Point]) -> BBox {
        let mut b = BBox {
            x_min: f64::INFINITY,
            x_max: f64::NEG_INFINITY,
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
        };
        for p in points {
            b.x_min = b.x_min.min(p.x);
            b.x_max = b.x_max.max(p.x);
            b.y_min = b.y_min.min(p.y);
            b.y_max = b.y_max.max(p.y);
        }
        b
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    coords: Vec<Point>,
    bbox: BBox,
    nn_k: usize,
    /// Flat candidate lists, `nn_k` entries per city.
    nn: Vec<usize>,
    dist_cache: Option<Vec<Cost>>,
    /// Cycle index of the last city move applied, 0 before any move.
    move_cycle: u64,
}

impl Instance {
    /// Builds an instance with the default candidate-list length.
    pub fn new(name: impl Into<String>, coords: Vec<Point>) -> Result<Self> {
        let n = coords.len();
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "an instance needs at least 3 cities, got {n}"
            )));
        }
        if let Some(i) = coords.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "city {i} has a non-finite coordinate"
            )));
        }
        let bbox = BBox::of(&coords);
        let mut inst = Instance {
            name: name.into(),
            coords,
            bbox,
            nn_k: 0,
            nn: Vec::new(),
            dist_cache: None,
            move_cycle: 0,
        };
        inst.set_neighbor_k(DEFAULT_NEIGHBORS.min(n - 1))?;
        Ok(inst)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn point(&self, city: usize) -> Point {
        self.coords[city]
    }

    /// Bounding box of the coordinates the instance was created with.
    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> Cost {
        match &self.dist_cache {
            Some(m) => m[i * self.coords.len() + j],
            None => euc2d_distance(&self.coords[i], &self.coords[j]),
        }
    }

    pub fn nn_k(&self) -> usize {
        self.nn_k
    }

    #[inline]
    pub fn neighbors(&self, city: usize) -> &[usize] {
        &self.nn[city * self.nn_k..(city + 1) * self.nn_k]
    }

    /// Rebuilds the candidate lists with `k` entries per city.
    pub fn set_neighbor_k(&mut self, k: usize) -> Result<()> {
        let lists = build_neighbor_lists(self, k)?;
        self.nn_k = k;
        self.nn = lists.into_iter().flatten().collect();
        Ok(())
    }

    /// Stores a full distance matrix; only permitted for `n <= MAX_CACHED_N`.
    pub fn enable_distance_cache(&mut self) -> Result<()> {
        let n = self.n();
        if n > MAX_CACHED_N {
            return Err(Error::InvalidArgument(format!(
                "distance cache limited to n <= {MAX_CACHED_N}, got {n}"
            )));
        }
        if self.dist_cache.is_none() {
            let mut m = vec![0; n * n];
            for i in 0..n {
                for j in 0..n {
                    m[i * n + j] = euc2d_distance(&self.coords[i], &self.coords[j]);
                }
            }
            self.dist_cache = Some(m);
        }
        Ok(())
    }

    pub fn has_distance_cache(&self) -> bool {
        self.dist_cache.is_some()
    }

    pub fn last_move_cycle(&self) -> u64 {
        self.move_cycle
    }

    pub(crate) fn set_move_cycle(&mut self, cycle: u64) {
        self.move_cycle = cycle;
    }

    /// Moves `city` to `to` and repairs every candidate list the move can
    /// affect. Returns the cities whose list changed, the moved city first.
    pub(crate) fn relocate(&mut self, city: usize, to: Point) -> Vec<usize> {
        let n = self.n();
        self.coords[city] = to;
        if let Some(m) = self.dist_cache.as_mut() {
            for j in 0..n {
                let d = euc2d_distance(&self.coords[city], &self.coords[j]);
                m[city * n + j] = d;
                m[j * n + city] = d;
            }
        }

        let k = self.nn_k;
        let mut affected = vec![city];
        let own = nearest_of(self, city, k);
        self.nn[city * k..(city + 1) * k].copy_from_slice(&own);

        for j in 0..n {
            if j == city {
                continue;
            }
            let range = j * k..(j + 1) * k;
            if self.nn[range.clone()].contains(&city) {
                let list = nearest_of(self, j, k);
                self.nn[range].copy_from_slice(&list);
                affected.push(j);
                continue;
            }
            let key = (self.distance(j, city), city);
            let last = self.nn[range.end - 1];
            if key < (self.distance(j, last), last) {
                let list = &self.nn[range.clone()];
                let at = list.partition_point(|&c| (self.distance(j, c), c) < key);
                let slot = &mut self.nn[range];
                slot[at..].rotate_right(1);
                slot[at] = city;
                affected.push(j);
            }
        }
        affected
    }
}

/// The `k` nearest cities to `city`, ties broken by lower index.
fn nearest_of(inst: &Instance, city: usize, k: usize) -> Vec<usize> {
    let mut keyed: Vec<(Cost, usize)> = (0..inst.n())
        .filter(|&j| j != city)
        .map(|j| (inst.distance(city, j), j))
        .collect();
    if k < keyed.len() {
        keyed.select_nth_unstable(k);
        keyed.truncate(k);
    }
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, j)| j).collect()
}

/// Candidate lists: for every city its `k` nearest other cities sorted by
/// distance, ties broken by lower index.
pub fn build_neighbor_lists(inst: &Instance, k: usize) -> Result<Vec<Vec<usize>>> {
    let n = inst.n();
    if k == 0 || k > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "candidate list length must be in 1..={}, got {k}",
            n - 1
        )));
    }
    Ok((0..n).map(|i| nearest_of(inst, i, k)).collect())
}

pub fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n || seen[c] {
            return false;
        }
        seen[c] = true;
    }
    true
}

/// Closed-tour length of `order` under the current coordinates.
pub fn tour_length(inst: &Instance, order: &[usize]) -> Result<Cost> {
    if !is_permutation(order, inst.n()) {
        return Err(Error::NotAPermutation { n: inst.n() });
    }
    Ok(closed_length(inst, order))
}

pub(crate) fn closed_length(inst: &Instance, order: &[usize]) -> Cost {
    let n = order.len();
    (0..n)
        .map(|i| inst.distance(order[i], order[(i + 1) % n]))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<usize>,
    pub length: Cost,
}

impl Tour {
    pub fn new(inst: &Instance, order: Vec<usize>) -> Result<Self> {
        let length = tour_length(inst, &order)?;
        Ok(Tour { order, length })
    }

    /// Caller guarantees `order` is a permutation.
    pub(crate) fn from_valid(inst: &Instance, order: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&order, inst.n()));
        let length = closed_length(inst, &order);
        Tour { order, length }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Rotated to start at city 0 and oriented so the second city is the
    /// smaller of city 0's two tour neighbours.
    pub fn canonical_order(&self) -> Vec<usize> {
        canonical_order(&self.order)
    }
}

pub fn canonical_order(order: &[usize]) -> Vec<usize> {
    let n = order.len();
    if n == 0 {
        return Vec::new();
    }
    let start = order.iter().position(|&c| c == 0).unwrap_or(0);
    let next = order[(start + 1) % n];
    let prev = order[(start + n - 1) % n];
    if next <= prev {
        (0..n).map(|i| order[(start + i) % n]).collect()
    } else {
        (0..n).map(|i| order[(start + n - i) % n]).collect()
    }
}

fn header_value(line: &str) -> Option<(&str, &str)> {
    let (key, value) = match line.split_once(':') {
        Some((k, v)) => (k.trim(), v.trim()),
        None => {
            let mut parts = line.splitn(2, char::is_whitespace);
            (parts.next()?.trim(), parts.next().unwrap_or("").trim())
        }
    };
    if key.is_empty() {
        None
    } else {
        Some((key, value))
    }
}

/// Parses the `EUC_2D` subset of TSPLIB.
pub fn parse_tsplib(text: &str) -> Result<Instance> {
    let mut name: Option<String> = None;
    let mut dimension: Option<(usize, usize)> = None;
    let mut metric_seen = false;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let err = |line: usize, msg: String| Error::Parse { line, msg };

    let section_line = loop {
        let Some((no, line)) = lines.next() else {
            return Err(err(
                text.lines().count(),
                "missing NODE_COORD_SECTION".into(),
            ));
        };
        if line.is_empty() {
            continue;
        }
        if line == "NODE_COORD_SECTION" || line.starts_with("NODE_COORD_SECTION") {
            break no;
        }
        let Some((key, value)) = header_value(line) else {
            return Err(err(no, format!("malformed header line `{line}`")));
        };
        match key {
            "NAME" => name = Some(value.to_string()),
            "TYPE" => {
                if value != "TSP" {
                    return Err(err(no, format!("unsupported problem type `{value}`")));
                }
            }
            "DIMENSION" => {
                let d: usize = value
                    .parse()
                    .map_err(|_| err(no, format!("bad DIMENSION `{value}`")))?;
                if d < 3 {
                    return Err(err(no, format!("DIMENSION must be at least 3, got {d}")));
                }
                dimension = Some((d, no));
            }
            "EDGE_WEIGHT_TYPE" => {
                if value != "EUC_2D" {
                    return Err(Error::UnsupportedMetric(value.to_string()));
                }
                metric_seen = true;
            }
            "EOF" => return Err(err(no, "EOF before NODE_COORD_SECTION".into())),
            k if k.chars().all(|c| c.is_ascii_uppercase() || c == '_') && !value.is_empty() => {}
            _ => return Err(err(no, format!("malformed header line `{line}`"))),
        }
    };

    let Some((n, _)) = dimension else {
        return Err(err(
            section_line,
            "DIMENSION missing before NODE_COORD_SECTION".into(),
        ));
    };
    if !metric_seen {
        return Err(err(
            section_line,
            "EDGE_WEIGHT_TYPE missing before NODE_COORD_SECTION".into(),
        ));
    }

    let mut coords: Vec<Option<Point>> = vec![None; n];
    let mut last_line = section_line;
    for (no, line) in lines.by_ref() {
        last_line = no;
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(no, format!("expected `index x y`, got `{line}`")));
        }
        let idx: usize = fields[0]
            .parse()
            .map_err(|_| err(no, format!("bad node index `{}`", fields[0])))?;
        if idx == 0 || idx > n {
            return Err(err(no, format!("node index {idx} outside 1..={n}")));
        }
        let parse_coord = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| err(no, format!("bad coordinate `{s}`")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(err(no, format!("non-finite coordinate `{s}`")))
            }
        };
        let p = Point::new(parse_coord(fields[1])?, parse_coord(fields[2])?);
        if coords[idx - 1].replace(p).is_some() {
            return Err(err(no, format!("duplicate node index {idx}")));
        }
    }
    if let Some(missing) = coords.iter().position(Option::is_none) {
        return Err(err(last_line, format!("node {} missing", missing + 1)));
    }
    let coords = coords.into_iter().map(Option::unwrap).collect();
    Instance::new(name.unwrap_or_else(|| "unnamed".to_string()), coords)
}

/// Writes the instance (current coordinates) in the subset read by
/// [`parse_tsplib`].
pub fn to_tsplib(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {}", inst.name());
    let _ = writeln!(out, "TYPE : TSP");
    let _ = writeln!(out, "DIMENSION : {}", inst.n());
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
    let _ = writeln!(out, "NODE_COORD_SECTION");
    for (i, p) in inst.coords().iter().enumerate() {
        let _ = writeln!(out, "{} {} {}", i + 1, p.x, p.y);
    }
    out.push_str("EOF\n");
    out
}

pub fn read_tsplib(path: impl AsRef<std::path::Path>) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    parse_tsplib(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Instance {
        Instance::new(
            "tri",
            vec![
                Point::new(0.0, 0.0),
                Point::new(0.0, 3.0),
                Point::new(4.0, 0.0),
            ],
        )
        .unwrap()
    }

    const TRIANGLE_TSP: &str = "NAME : tri\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 0 3\n3 4 0\nEOF\n";

    #[test]
    fn euc2d_examples() {
        let o = Point::new(0.0, 0.0);
        assert_eq!(euc2d_distance(&o, &Point::new(3.0, 4.0)), 5);
        assert_eq!(euc2d_distance(&o, &Point::new(1.0, 1.0)), 1);
        assert_eq!(euc2d_distance(&o, &Point::new(1.5, 0.0)), 2);
        assert_eq!(euc2d_distance(&o, &Point::new(0.5, 0.0)), 1);
        assert_eq!(euc2d_distance(&o, &Point::new(0.49, 0.0)), 0);
    }

    #[test]
    fn parse_triangle() {
        let inst = parse_tsplib(TRIANGLE_TSP).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.name(), "tri");
        assert_eq!(inst.distance(1, 2), 5);
        assert_eq!(tour_length(&inst, &[0, 1, 2]).unwrap(), 12);
    }

    #[test]
    fn parse_without_eof_and_with_scientific_coords() {
        let text = "NAME: sci\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n3 4.0e+00 0\n1 0 0\n2 0.00000e+00 3.0\n";
        let inst = parse_tsplib(text).unwrap();
        assert_eq!(inst.point(2), Point::new(4.0, 0.0));
        assert_eq!(inst.distance(1, 2), 5);
    }

    #[test]
    fn parse_errors() {
        let two = "NAME : x\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n";
        assert!(matches!(
            parse_tsplib(two),
            Err(Error::Parse { line: 2, .. })
        ));

        let geo = TRIANGLE_TSP.replace("EUC_2D", "GEO");
        assert_eq!(
            parse_tsplib(&geo),
            Err(Error::UnsupportedMetric("GEO".to_string()))
        );

        let dup = TRIANGLE_TSP.replace("3 4 0", "2 4 0");
        assert!(matches!(
            parse_tsplib(&dup),
            Err(Error::Parse { line: 8, .. })
        ));

        let missing = TRIANGLE_TSP.replace("3 4 0\n", "");
        assert!(matches!(parse_tsplib(&missing), Err(Error::Parse { .. })));

        let garbage = TRIANGLE_TSP.replace("TYPE : TSP", "this is : not a header");
        assert!(matches!(
            parse_tsplib(&garbage),
            Err(Error::Parse { line: 2, .. })
        ));

        let bad_coord = TRIANGLE_TSP.replace("2 0 3", "2 0 x");
        assert!(matches!(
            parse_tsplib(&bad_coord),
            Err(Error::Parse { line: 7, .. })
        ));

        let out_of_range = TRIANGLE_TSP.replace("3 4 0", "4 4 0");
        assert!(matches!(
            parse_tsplib(&out_of_range),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn neighbor_list_examples() {
        let inst = triangle();
        let lists = build_neighbor_lists(&inst, 2).unwrap();
        assert_eq!(lists[0], vec![1, 2]);
        assert_eq!(lists[1], vec![0, 2]);
        assert!(build_neighbor_lists(&inst, 0).is_err());
        assert!(build_neighbor_lists(&inst, 3).is_err());

        // City 0 is equidistant to 1..=4; ties go to the lower index.
        let square = Instance::new(
            "sq",
            vec![
                Point::new(0.0, 0.0),
                Point::new(0.0, 1.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, -1.0),
                Point::new(-1.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(build_neighbor_lists(&square, 2).unwrap()[0], vec![1, 2]);
        assert_eq!(square.neighbors(0), &[1, 2, 3, 4]);
    }

    #[test]
    fn tour_length_rejects_non_permutations() {
        let inst = triangle();
        assert!(matches!(
            tour_length(&inst, &[0, 1, 1]),
            Err(Error::NotAPermutation { n: 3 })
        ));
        assert!(tour_length(&inst, &[0, 1]).is_err());
        assert!(tour_length(&inst, &[0, 1, 3]).is_err());
    }

    #[test]
    fn canonical_form_merges_rotations_and_reflections() {
        let a = canonical_order(&[2, 0, 3, 1, 4]);
        let b = canonical_order(&[4, 1, 3, 0, 2]);
        let c = canonical_order(&[3, 1, 4, 2, 0]);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a, vec![0, 2, 4, 1, 3]);
    }

    #[test]
    fn distance_cache_matches_on_demand_metric() {
        let mut inst = Instance::new(
            "c",
            (0..30)
                .map(|i| Point::new((i * 7 % 13) as f64 * 1.3, (i * 5 % 11) as f64 * 2.1))
                .collect(),
        )
        .unwrap();
        let plain = inst.clone();
        inst.enable_distance_cache().unwrap();
        for i in 0..30 {
            for j in 0..30 {
                assert_eq!(inst.distance(i, j), plain.distance(i, j));
            }
        }
        inst.relocate(4, Point::new(100.25, -3.5));
        for j in 0..30 {
            assert_eq!(
                inst.distance(4, j),
                euc2d_distance(&inst.point(4), &inst.point(j))
            );
            assert_eq!(inst.distance(j, 4), inst.distance(4, j));
        }
    }

    fn points_strategy(max_n: usize) -> impl Strategy<Value = Vec<(i32, i32)>> {
        prop::collection::vec((0i32..60, 0i32..60), 3..=max_n)
    }

    proptest! {
        #[test]
        fn metric_is_symmetric(a in -1e6f64..1e6, b in -1e6f64..1e6, c in -1e6f64..1e6, d in -1e6f64..1e6) {
            let p = Point::new(a, b);
            let q = Point::new(c, d);
            prop_assert_eq!(euc2d_distance(&p, &q), euc2d_distance(&q, &p));
            prop_assert_eq!(euc2d_distance(&p, &p), 0);
        }

        #[test]
        fn tour_length_invariant_under_rotation_and_reversal(
            pts in points_strategy(12), rot in 0usize..12, seed in any::<u64>()
        ) {
            use rand::{seq::SliceRandom, SeedableRng};
            let inst = Instance::new("p", pts.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect()).unwrap();
            let mut order: Vec<usize> = (0..inst.n()).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let base = tour_length(&inst, &order).unwrap();
            let mut rotated = order.clone();
            rotated.rotate_left(rot % inst.n());
            prop_assert_eq!(tour_length(&inst, &rotated).unwrap(), base);
            order.reverse();
            prop_assert_eq!(tour_length(&inst, &order).unwrap(), base);
        }

        #[test]
        fn neighbor_lists_match_brute_force(pts in points_strategy(50), k_frac in 0.0f64..1.0) {
            let inst = Instance::new("p", pts.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect()).unwrap();
            let n = inst.n();
            let k = 1 + ((n - 2) as f64 * k_frac) as usize;
            let lists = build_neighbor_lists(&inst, k).unwrap();
            for i in 0..n {
                // Full ranking by insertion sort over (distance, index).
                let mut ranking: Vec<usize> = Vec::new();
                for j in (0..n).filter(|&j| j != i) {
                    let dj = {
                        let (a, b) = (pts[i], pts[j]);
                        let dx = (a.0 - b.0) as f64;
                        let dy = (a.1 - b.1) as f64;
                        ((dx * dx + dy * dy).sqrt() + 0.5).floor() as i64
                    };
                    let pos = ranking.iter().position(|&r| {
                        let (a, b) = (pts[i], pts[r]);
                        let dx = (a.0 - b.0) as f64;
                        let dy = (a.1 - b.1) as f64;
                        let dr = ((dx * dx + dy * dy).sqrt() + 0.5).floor() as i64;
                        (dj, j) < (dr, r)
                    }).unwrap_or(ranking.len());
                    ranking.insert(pos, j);
                }
                prop_assert_eq!(&lists[i][..], &ranking[..k]);
                prop_assert!(!lists[i].contains(&i));
            }
        }

        #[test]
        fn tsplib_round_trip(pts in prop::collection::vec((-1e5f64..1e5, -1e5f64..1e5), 3..40)) {
            let inst = Instance::new("rt", pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
            let back = parse_tsplib(&to_tsplib(&inst)).unwrap();
            prop_assert_eq!(back.coords(), inst.coords());
            prop_assert_eq!(back.name(), "rt");
        }
    }
}
