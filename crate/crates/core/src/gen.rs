//! Seeded random instance generators used by the test suites and the bench
//! harness. Everything is deterministic in the seed.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::codes;
use crate::instance::{Coord, Instance, Instance1d, Instance2d};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random 1D instance with pairwise-distinct coordinates (points and
/// interval endpoints all differ), n in 1..=max_points, m in 1..=max_intervals.
pub fn random_1d(rng: &mut ChaCha8Rng, max_points: usize, max_intervals: usize) -> Instance1d {
    let n = rng.gen_range(1..=max_points);
    let m = rng.gen_range(1..=max_intervals);
    let need = n + 2 * m;
    let span = (need as Coord) * 6;
    let mut coords = std::collections::BTreeSet::new();
    while coords.len() < need {
        coords.insert(rng.gen_range(-span..=span));
    }
    let mut coords: Vec<Coord> = coords.into_iter().collect();
    // assign interval endpoints from random positions, points from the rest
    let mut idx: Vec<usize> = (0..coords.len()).collect();
    idx.shuffle(rng);
    let mut points: Vec<Coord> = idx[..n].iter().map(|&i| coords[i]).collect();
    points.sort_unstable();
    let mut rest: Vec<Coord> = idx[n..].iter().map(|&i| coords[i]).collect();
    rest.shuffle(rng);
    let intervals: Vec<(Coord, Coord)> = rest
        .chunks_exact(2)
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
        .collect();
    coords.clear();
    Instance1d {
        scale: 4,
        points,
        intervals,
    }
}

/// Rejection-sample a twin-free 1D instance.
pub fn random_twin_free_1d(
    rng: &mut ChaCha8Rng,
    max_points: usize,
    max_intervals: usize,
) -> Instance1d {
    loop {
        let inst = random_1d(rng, max_points, max_intervals);
        if codes::check_twin_free(&Instance::OneD(inst.clone())).is_valid() {
            return inst;
        }
    }
}

/// Random unit-interval instance in general position: all points and left
/// endpoints distinct, and no endpoint coincides with a point.
pub fn random_unit_1d(rng: &mut ChaCha8Rng, max_points: usize, max_intervals: usize) -> Instance1d {
    let scale: Coord = 8;
    let n = rng.gen_range(1..=max_points);
    let m = rng.gen_range(1..=max_intervals);
    let span = ((n + m) as Coord) * 8;
    loop {
        let mut points = std::collections::BTreeSet::new();
        while points.len() < n {
            points.insert(rng.gen_range(-span..=span));
        }
        let points: Vec<Coord> = points.into_iter().collect();
        let mut lefts = std::collections::BTreeSet::new();
        while lefts.len() < m {
            lefts.insert(rng.gen_range(-span - scale..=span));
        }
        let intervals: Vec<(Coord, Coord)> = lefts.iter().map(|&l| (l, l + scale)).collect();
        let inst = Instance1d {
            scale,
            points,
            intervals,
        };
        // general position: no shared coordinates anywhere
        if inst.validate().map_or(false, |w| w.is_empty()) {
            return inst;
        }
    }
}

/// Rejection-sample a twin-free unit-interval instance.
pub fn random_twin_free_unit_1d(
    rng: &mut ChaCha8Rng,
    max_points: usize,
    max_intervals: usize,
) -> Instance1d {
    loop {
        let inst = random_unit_1d(rng, max_points, max_intervals);
        if codes::check_twin_free(&Instance::OneD(inst.clone())).is_valid() {
            return inst;
        }
    }
}

/// Random distinct 2D points in a box sized to the point count.
pub fn random_points_2d(rng: &mut ChaCha8Rng, max_points: usize) -> Vec<(Coord, Coord)> {
    let n = rng.gen_range(1..=max_points);
    let span = 3 * n as Coord;
    let mut pts = std::collections::BTreeSet::new();
    while pts.len() < n {
        pts.insert((rng.gen_range(-span..=span), rng.gen_range(-span..=span)));
    }
    pts.into_iter().collect()
}

/// Random twin-free discrete 2D instance. The drawn point and square counts
/// stay fixed across rejection retries, so large instances are as likely as
/// small ones. Each point gets one nearby square (coverage), the remaining
/// squares sit near random points or pair midpoints (separation).
pub fn random_twin_free_2d_discrete(
    rng: &mut ChaCha8Rng,
    max_points: usize,
    max_squares: usize,
) -> Instance2d {
    let scale: Coord = 4;
    let n = rng.gen_range(1..=max_points);
    let m = rng.gen_range(n.min(max_squares)..=max_squares);
    loop {
        let span = 2 * n as Coord;
        let mut pts = std::collections::BTreeSet::new();
        while pts.len() < n {
            pts.insert((
                scale * rng.gen_range(-span..=span) / 2,
                scale * rng.gen_range(-span..=span) / 2,
            ));
        }
        let points: Vec<(Coord, Coord)> = pts.into_iter().collect();
        let half = scale / 2;
        let mut squares: Vec<(Coord, Coord)> = Vec::with_capacity(m);
        for &(px, py) in &points {
            squares.push((
                px + rng.gen_range(-half..=half),
                py + rng.gen_range(-half..=half),
            ));
            if squares.len() == m {
                break;
            }
        }
        while squares.len() < m {
            let &(ax, ay) = points.choose(rng).unwrap();
            let &(bx, by) = points.choose(rng).unwrap();
            let (mx, my) = ((ax + bx) / 2, (ay + by) / 2);
            squares.push((
                mx + rng.gen_range(-half..=half),
                my + rng.gen_range(-half..=half),
            ));
        }
        let inst = Instance2d {
            scale,
            points,
            squares: Some(squares),
        };
        if inst.validate().is_ok()
            && codes::check_twin_free(&Instance::TwoD(inst.clone())).is_valid()
        {
            return inst;
        }
    }
}

/// Random simple graph on up to `max_vertices` vertices.
pub fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> (usize, Vec<(usize, usize)>) {
    let n = rng.gen_range(1..=max_vertices);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(0.4) {
                edges.push((u, v));
            }
        }
    }
    (n, edges)
}
