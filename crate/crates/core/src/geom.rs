//! Exact rectilinear geometry for the 2D pipelines: closed integer
//! rectangles, symmetric-difference regions of unit-square pairs, and
//! candidate-point generation over rectangle arrangements.
//!
//! All 2D solvers work on a copy of the instance with coordinates multiplied
//! by 4 ("working scale"), so square half-sides and cell representatives are
//! integers: input points and square boundaries land on even coordinates and
//! generated candidates on odd ones, which keeps every membership test away
//! from accidental boundary coincidences.

use std::collections::HashMap;

use crate::bits::Bits;
use crate::instance::Coord;

/// Coordinate blow-up factor between instance scale and working scale.
pub const WORK_FACTOR: Coord = 4;

/// Closed axis-parallel rectangle `[x1,x2] x [y1,y2]` in working coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x1: Coord,
    pub x2: Coord,
    pub y1: Coord,
    pub y2: Coord,
}

impl Rect {
    pub fn new(x1: Coord, x2: Coord, y1: Coord, y2: Coord) -> Self {
        debug_assert!(x1 <= x2 && y1 <= y2);
        Rect { x1, x2, y1, y2 }
    }

    pub fn contains(&self, p: (Coord, Coord)) -> bool {
        self.x1 <= p.0 && p.0 <= self.x2 && self.y1 <= p.1 && p.1 <= self.y2
    }

    pub fn width(&self) -> Coord {
        self.x2 - self.x1
    }

    pub fn height(&self) -> Coord {
        self.y2 - self.y1
    }

    /// Swap the axes; turns unit-width rectangles into unit-height ones.
    pub fn transpose(&self) -> Rect {
        Rect {
            x1: self.y1,
            x2: self.y2,
            y1: self.x1,
            y2: self.x2,
        }
    }

    /// Square of side `unit` centered at `c`.
    pub fn square(unit: Coord, c: (Coord, Coord)) -> Rect {
        let h = unit / 2;
        Rect::new(c.0 - h, c.0 + h, c.1 - h, c.1 + h)
    }
}

/// Shape classification of a symmetric-difference region pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabShape {
    /// Centers at L-infinity distance >= 1 unit: the two squares share no
    /// interior and each side region is (essentially) a full square.
    TwoSquares,
    /// Offset along one axis only: each side region is a single slab.
    SlabPair,
    /// Offset along both axes: each side region is an L-shape.
    LPair,
}

/// One side of a symmetric difference, `D(end) \ D(other)`, decomposed into
/// at most two rectangles:
/// - `type_a`: full height of `D(end)` (one unit), width <= 1 unit;
/// - `type_b`: full width (one unit), height < 1 unit.
///
/// Inner edges that abut the other square are pulled in by one working-scale
/// step, which makes "in some rectangle" agree with true region membership
/// (`side_contains`) on every integer point: type A captures centers whose
/// square misses `other` along x, type B those that miss along y.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideRegion {
    pub type_a: Option<Rect>,
    pub type_b: Option<Rect>,
}

impl SideRegion {
    pub fn rects(&self) -> impl Iterator<Item = Rect> + '_ {
        self.type_a.into_iter().chain(self.type_b)
    }
}

/// The symmetric difference of the unit squares centered at segment
/// endpoints `a` and `b`: the set of valid stabbing centers for that segment.
#[derive(Debug, Clone)]
pub struct StabObject {
    pub a: (Coord, Coord),
    pub b: (Coord, Coord),
    pub shape: StabShape,
    /// Centers whose square contains `a` but not `b`.
    pub region_a: SideRegion,
    /// Centers whose square contains `b` but not `a`.
    pub region_b: SideRegion,
}

/// Exact membership: does a square centered at `c` contain `end` but not
/// `other`?
pub fn side_contains(
    unit: Coord,
    end: (Coord, Coord),
    other: (Coord, Coord),
    c: (Coord, Coord),
) -> bool {
    let in_end = Rect::square(unit, end).contains(c);
    let in_other = Rect::square(unit, other).contains(c);
    in_end && !in_other
}

fn side_region(unit: Coord, end: (Coord, Coord), other: (Coord, Coord)) -> SideRegion {
    let h = unit / 2;
    let dx = other.0 - end.0;
    let dy = other.1 - end.1;
    if dx.abs() > unit || dy.abs() > unit {
        // Squares fully disjoint: the whole square is valid, registered as a
        // single unit-height (type A) rectangle.
        return SideRegion {
            type_a: Some(Rect::square(unit, end)),
            type_b: None,
        };
    }
    // Overlapping or touching squares. type A keeps the x-range of D(end)
    // strictly outside D(other); type B keeps the full width but only the
    // y-range strictly outside D(other).
    let type_a = match dx.signum() {
        1 => Some(Rect::new(end.0 - h, other.0 - h - 1, end.1 - h, end.1 + h)),
        -1 => Some(Rect::new(other.0 + h + 1, end.0 + h, end.1 - h, end.1 + h)),
        _ => None,
    };
    let type_b = match dy.signum() {
        1 => Some(Rect::new(end.0 - h, end.0 + h, end.1 - h, other.1 - h - 1)),
        -1 => Some(Rect::new(end.0 - h, end.0 + h, other.1 + h + 1, end.1 + h)),
        _ => None,
    };
    SideRegion { type_a, type_b }
}

/// Build the stab object for a segment. `unit` is the square side in working
/// coordinates and must be even; `a != b`.
pub fn stab_region(unit: Coord, a: (Coord, Coord), b: (Coord, Coord)) -> StabObject {
    assert!(a != b, "segment endpoints must differ");
    assert!(unit % 2 == 0, "working unit must be even");
    let dx = (b.0 - a.0).abs();
    let dy = (b.1 - a.1).abs();
    let shape = if dx >= unit || dy >= unit {
        StabShape::TwoSquares
    } else if dx == 0 || dy == 0 {
        StabShape::SlabPair
    } else {
        StabShape::LPair
    };
    StabObject {
        a,
        b,
        shape,
        region_a: side_region(unit, a, b),
        region_b: side_region(unit, b, a),
    }
}

/// One representative point per distinct nonempty containment signature over
/// `rects`, each strictly interior to its arrangement cell.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub points: Vec<(Coord, Coord)>,
    /// `masks[i]` has bit `r` set iff `rects[r]` contains `points[i]`.
    pub masks: Vec<Bits>,
}

// Odd coordinate strictly inside the open interval (u, v), near its middle,
// or None when no such integer exists.
fn odd_interior(u: Coord, v: Coord) -> Option<Coord> {
    let mut mid = u + (v - u) / 2;
    if mid % 2 == 0 {
        if mid + 1 < v {
            mid += 1;
        } else if mid - 1 > u {
            mid -= 1;
        } else {
            return None;
        }
    }
    (u < mid && mid < v).then_some(mid)
}

fn interior_reps(mut values: Vec<Coord>) -> Vec<Coord> {
    values.sort_unstable();
    values.dedup();
    values
        .windows(2)
        .filter_map(|w| odd_interior(w[0], w[1]))
        .collect()
}

/// Generate candidates from the arrangement grid of the given rectangles.
/// `grid_rects` supplies the (even) boundary coordinates spanning the
/// arrangement; `rects` are the membership targets. Representatives are odd
/// coordinates, so they never sit on any rectangle boundary.
pub fn candidate_points(grid_rects: &[Rect], rects: &[Rect]) -> CandidateSet {
    let xs: Vec<Coord> = grid_rects.iter().flat_map(|r| [r.x1, r.x2]).collect();
    let ys: Vec<Coord> = grid_rects.iter().flat_map(|r| [r.y1, r.y2]).collect();
    let xs = interior_reps(xs);
    let ys = interior_reps(ys);
    let mut seen: HashMap<Bits, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut masks = Vec::new();
    for &x in &xs {
        for &y in &ys {
            let mut mask = Bits::new(rects.len());
            for (r, rect) in rects.iter().enumerate() {
                if rect.contains((x, y)) {
                    mask.set(r);
                }
            }
            if mask.is_empty() || seen.contains_key(&mask) {
                continue;
            }
            seen.insert(mask.clone(), points.len());
            points.push((x, y));
            masks.push(mask);
        }
    }
    CandidateSet { points, masks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const U: Coord = 40; // working unit

    #[test]
    fn disjoint_pair_keeps_full_squares() {
        let obj = stab_region(U, (0, 0), (120, 0));
        assert_eq!(obj.shape, StabShape::TwoSquares);
        assert_eq!(obj.region_a.type_a, Some(Rect::new(-20, 20, -20, 20)));
        assert!(obj.region_a.type_b.is_none());
    }

    #[test]
    fn one_axis_offset_gives_slabs() {
        // b = a + (2/5 unit, 0)
        let obj = stab_region(U, (0, 0), (16, 0));
        assert_eq!(obj.shape, StabShape::SlabPair);
        let a = obj.region_a.type_a.unwrap();
        assert_eq!((a.width() + 1, a.height()), (16, U));
        assert!(obj.region_a.type_b.is_none());
        let b = obj.region_b.type_a.unwrap();
        assert_eq!((b.width() + 1, b.height()), (16, U));
    }

    #[test]
    fn two_axis_offset_gives_l_pair() {
        // b = a + (2/5, 3/10) units
        let obj = stab_region(U, (0, 0), (16, 12));
        assert_eq!(obj.shape, StabShape::LPair);
        let ta = obj.region_a.type_a.unwrap();
        let tb = obj.region_a.type_b.unwrap();
        assert_eq!(ta.height(), U);
        assert_eq!(tb.width(), U);
        assert!(ta.width() < U && tb.height() < U);
    }

    #[test]
    fn rect_membership_matches_exact_regions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..12 {
            let a = (rng.gen_range(-3..=3) * 4, rng.gen_range(-3..=3) * 4);
            let mut b = a;
            while b == a {
                b = (rng.gen_range(-3..=3) * 4, rng.gen_range(-3..=3) * 4);
            }
            let unit = 8;
            let obj = stab_region(unit, a, b);
            for _ in 0..10_000 {
                let q = (rng.gen_range(-40..=40), rng.gen_range(-40..=40));
                let in_rects = obj.region_a.rects().any(|r| r.contains(q));
                let exact = side_contains(unit, a, b, q);
                assert_eq!(in_rects, exact, "a={a:?} b={b:?} q={q:?}");
            }
        }
    }

    #[test]
    fn candidate_counts() {
        let one = vec![Rect::new(0, 10, 0, 10)];
        assert_eq!(candidate_points(&one, &one).points.len(), 1);

        let two = vec![Rect::new(0, 10, 0, 10), Rect::new(6, 16, 0, 10)];
        let cs = candidate_points(&two, &two);
        assert!(cs.points.len() <= 3);
        let sigs: std::collections::HashSet<_> = cs.masks.iter().cloned().collect();
        assert_eq!(sigs.len(), cs.points.len());
    }

    #[test]
    fn candidates_realize_every_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let rects: Vec<Rect> = (0..rng.gen_range(1..=6))
                .map(|_| {
                    let x1 = rng.gen_range(-10..=10) * 2;
                    let y1 = rng.gen_range(-10..=10) * 2;
                    Rect::new(
                        x1,
                        x1 + rng.gen_range(1..=8) * 2,
                        y1,
                        y1 + rng.gen_range(1..=8) * 2,
                    )
                })
                .collect();
            let cs = candidate_points(&rects, &rects);
            let have: std::collections::HashSet<Bits> = cs.masks.iter().cloned().collect();
            // brute scan on odd coordinates: every realizable off-boundary
            // signature must appear exactly once in the candidate set
            for x in (-25..=45).map(|v| 2 * v + 1) {
                for y in (-25..=45).map(|v| 2 * v + 1) {
                    let mut mask = Bits::new(rects.len());
                    for (r, rect) in rects.iter().enumerate() {
                        if rect.contains((x, y)) {
                            mask.set(r);
                        }
                    }
                    if !mask.is_empty() {
                        assert!(have.contains(&mask));
                    }
                }
            }
        }
    }
}
