use std::path::PathBuf;

use pacorn::aco::{Colony, ColonyParams};
use pacorn::bench::exact_optimum;
use pacorn::dynamics::{compute_rad, DynamicsConfig, MoveStream};
use pacorn::instance::{read_tsplib, tour_length, Instance, Point};
use pacorn::local_search::LocalSearchKind;

fn data(name: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")).join(name)
}

/// Reads coordinates straight from the NODE_COORD_SECTION lines.
fn scan_coords(path: &PathBuf) -> Vec<(f64, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut inside = false;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with("NODE_COORD_SECTION") {
            inside = true;
            continue;
        }
        if !inside || line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let f: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        out.push((f[1], f[2]));
    }
    out
}

#[test]
fn shipped_instances_parse() {
    for (name, n) in [("eil51", 51), ("pcb442", 442)] {
        let path = data(&format!("{name}.tsp"));
        let inst = read_tsplib(&path).unwrap();
        assert_eq!(inst.name(), name);
        assert_eq!(inst.n(), n);
        let raw = scan_coords(&path);
        assert_eq!(raw.len(), n);
        for (i, (x, y)) in raw.iter().enumerate() {
            assert_eq!(inst.point(i), Point::new(*x, *y));
        }
    }
}

#[test]
fn rad_matches_an_independent_bbox_scan() {
    for name in ["eil51", "pcb442"] {
        let path = data(&format!("{name}.tsp"));
        let raw = scan_coords(&path);
        let fold = |f: fn(&(f64, f64)) -> f64| {
            let lo = raw.iter().map(f).fold(f64::INFINITY, f64::min);
            let hi = raw.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        let (xm, ym) = (fold(|p| p.0), fold(|p| p.1));
        let inst = read_tsplib(&path).unwrap();
        assert_eq!(compute_rad(&inst).unwrap(), 0.1 * (xm + ym) / 2.0);
    }
}

#[test]
fn rad_is_frozen_across_moves() {
    let mut inst = read_tsplib(data("eil51.tsp")).unwrap();
    let rad = compute_rad(&inst).unwrap();
    let cfg = DynamicsConfig {
        interval_mod: 4,
        rng_seed: 3,
        ..DynamicsConfig::default()
    };
    let mut stream = MoveStream::new(&cfg);
    for _ in 0..200 {
        let mv = stream.next_move(&mut inst).unwrap();
        let d = mv.displacement();
        assert!(d >= rad / 3.0 && d <= rad, "{d} vs {rad}");
    }
}

#[test]
fn solver_reaches_small_exact_optima() {
    let pts = [
        (0.0, 0.0),
        (40.0, 5.0),
        (75.0, 30.0),
        (60.0, 80.0),
        (20.0, 70.0),
        (-10.0, 35.0),
    ];
    let inst = Instance::new("hex", pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
    let (order, opt) = exact_optimum(&inst).unwrap();
    assert_eq!(tour_length(&inst, &order).unwrap(), opt);
    let mut colony = Colony::new(
        inst,
        ColonyParams {
            ants: 6,
            local_search: LocalSearchKind::TwoOpt,
            ..ColonyParams::default()
        },
    )
    .unwrap();
    for _ in 0..20 {
        colony.run_iteration();
    }
    assert_eq!(colony.best_so_far().length, opt);
}
