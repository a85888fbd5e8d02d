//! (32+eps)-approximation for discrete 2D unit squares: the same
//! segment-stabbing cascade as the continuous case, but hitting points are
//! restricted to the given square centers. The unit-height rectangle family
//! is split into independent per-line problems, and each line is solved by
//! an LP side split, a maximum independent set of anchored rectangles with
//! lowest-point seeds, and optimal staircase hitting of the residuals.

use std::collections::BTreeSet;

use crate::codes::{self, square_contains, DiscCheck};
use crate::cont2d::{self, SegmentSystem};
use crate::error::{Error, Result, Witness};
use crate::geom::{self, Rect};
use crate::instance::{Coord, Instance, Instance2d};
use crate::lp::{self, CoverConstraint, CoverLp, Side};
use crate::oracle::{self, OracleBudget};

/// Unit-height rectangles assigned to one horizontal line, plus the line
/// position. Every rectangle's open y-interval contains `y`.
#[derive(Debug, Clone)]
pub struct LineProblem {
    pub y: Coord,
    /// Indices into the family the decomposition was built from.
    pub rects: Vec<usize>,
}

fn euclid_mod(a: Coord, m: Coord) -> Coord {
    a.rem_euclid(m)
}

/// Choose a family of horizontal lines one unit apart so that no rectangle
/// edge and no candidate sits on a line, and assign every rectangle to the
/// unique line crossing it. The offset is half the smallest residue gap
/// below the lowest bottom edge.
pub fn line_decompose(
    unit: Coord,
    rects: &[Rect],
    candidates: &[(Coord, Coord)],
) -> Result<Vec<LineProblem>> {
    if rects.is_empty() {
        return Ok(Vec::new());
    }
    for (i, r) in rects.iter().enumerate() {
        if r.height() != unit {
            return Err(Error::Input(format!(
                "rectangle {i} has height {} instead of the unit {unit}",
                r.height()
            )));
        }
    }
    let mut residues: Vec<Coord> = rects
        .iter()
        .flat_map(|r| [r.y1, r.y2])
        .chain(candidates.iter().map(|&(_, y)| y))
        .map(|v| euclid_mod(v, unit))
        .collect();
    residues.sort_unstable();
    residues.dedup();
    let min_gap = if residues.len() == 1 {
        unit
    } else {
        let mut g = residues[0] + unit - residues[residues.len() - 1];
        for w in residues.windows(2) {
            g = g.min(w[1] - w[0]);
        }
        g
    };
    let min_bottom = rects.iter().map(|r| r.y1).min().unwrap();
    let y0 = min_bottom - min_gap / 2;
    debug_assert!(min_gap / 2 > 0);
    for r in rects {
        debug_assert!(euclid_mod(r.y1 - y0, unit) != 0 && euclid_mod(r.y2 - y0, unit) != 0);
    }
    for &(_, y) in candidates {
        debug_assert!(euclid_mod(y - y0, unit) != 0);
    }

    let mut lines: std::collections::BTreeMap<Coord, Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, r) in rects.iter().enumerate() {
        let k = (r.y1 - y0).div_euclid(unit) + 1;
        let line_y = y0 + k * unit;
        debug_assert!(r.y1 < line_y && line_y < r.y2);
        lines.entry(line_y).or_default().push(i);
    }
    Ok(lines
        .into_iter()
        .map(|(y, rects)| LineProblem { y, rects })
        .collect())
}

/// One side of a line problem after the above/below split: rectangles
/// clipped to the side and anchored on the line, with the candidates living
/// strictly on that side. Below-side problems are reflected so both sides
/// look like "above".
#[derive(Debug, Clone)]
pub struct SideProblem {
    pub lambda: Coord,
    /// Clipped rectangles `[x1,x2] x [lambda, top]` with their original
    /// rectangle ids.
    pub rects: Vec<(Rect, usize)>,
    /// (position, original candidate index); positions already reflected for
    /// the below side.
    pub cands: Vec<((Coord, Coord), usize)>,
}

/// Solve the side-assignment LP of one line and build the two anchored side
/// problems. Ties send a rectangle to both sides.
pub fn split_above_below(
    line: &LineProblem,
    family: &[Rect],
    candidates: &[(Coord, Coord)],
) -> Result<(SideProblem, SideProblem)> {
    let lambda = line.y;
    let mut lp = CoverLp::new(candidates.len());
    for &ri in &line.rects {
        let rect = family[ri];
        let above: Vec<usize> = (0..candidates.len())
            .filter(|&q| rect.contains(candidates[q]) && candidates[q].1 > lambda)
            .collect();
        let below: Vec<usize> = (0..candidates.len())
            .filter(|&q| rect.contains(candidates[q]) && candidates[q].1 < lambda)
            .collect();
        if above.is_empty() && below.is_empty() {
            return Err(Error::infeasible_with(
                Witness::Object(ri),
                "rectangle contains no candidate",
            ));
        }
        lp.push(CoverConstraint::two_sided(above, below));
    }
    let sol = lp::solve_lp(&lp)?;
    lp::check_doubling(&lp, &sol)?;

    let mut above = SideProblem {
        lambda,
        rects: Vec::new(),
        cands: candidates
            .iter()
            .enumerate()
            .filter(|&(_, &(_, y))| y > lambda)
            .map(|(q, &p)| (p, q))
            .collect(),
    };
    let mut below = SideProblem {
        lambda,
        rects: Vec::new(),
        cands: candidates
            .iter()
            .enumerate()
            .filter(|&(_, &(_, y))| y < lambda)
            .map(|(q, &(x, y))| ((x, 2 * lambda - y), q))
            .collect(),
    };
    for (c, &ri) in line.rects.iter().enumerate() {
        let rect = family[ri];
        let side = lp::side_split(&sol, c);
        if matches!(side, Side::A | Side::Both) {
            above
                .rects
                .push((Rect::new(rect.x1, rect.x2, lambda, rect.y2), ri));
        }
        if matches!(side, Side::B | Side::Both) {
            // reflect the below part upward
            below.rects.push((
                Rect::new(rect.x1, rect.x2, lambda, 2 * lambda - rect.y1),
                ri,
            ));
        }
    }
    Ok((above, below))
}

/// Maximum independent set of anchored rectangles. Anchored rectangles
/// intersect iff their x-intervals do, so the earliest-right-endpoint greedy
/// is exactly maximum. Equal right ends prefer the narrower rectangle; that
/// keeps any rectangle whose span nests inside a chosen member out of the
/// residual set. Returns indices sorted left to right.
pub fn anchored_mis(rects: &[(Rect, usize)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rects.len()).collect();
    order.sort_by_key(|&i| (rects[i].0.x2, std::cmp::Reverse(rects[i].0.x1), i));
    let mut chosen: Vec<usize> = Vec::new();
    let mut frontier = Coord::MIN;
    for i in order {
        if rects[i].0.x1 > frontier {
            chosen.push(i);
            frontier = rects[i].0.x2;
        }
    }
    chosen
}

/// Seed hitting points: the lowest candidate inside every independent-set
/// member, and the lowest candidate inside every strip between consecutive
/// members (when one exists). Ties break by smaller x, then input order.
/// Returns (member seeds, strip seeds) as candidate indices into
/// `side.cands`.
pub fn seed_points(side: &SideProblem, mis: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let lowest = |eligible: &dyn Fn((Coord, Coord)) -> bool| -> Option<usize> {
        side.cands
            .iter()
            .enumerate()
            .filter(|&(_, &(p, _))| eligible(p))
            .min_by_key(|&(i, &((x, y), _))| (y, x, i))
            .map(|(i, _)| i)
    };
    let mut member_seeds = Vec::new();
    for &mi in mis {
        let (rect, orig) = side.rects[mi];
        let seed = lowest(&|p| rect.contains(p) && p.1 > side.lambda).ok_or_else(|| {
            // the side split only sends a rectangle here with candidate mass
            // on this side, so an empty member is instance pathology
            Error::Internal(format!(
                "independent-set rectangle {orig} contains no candidate on its side"
            ))
        })?;
        member_seeds.push(seed);
    }
    let mut strip_seeds = Vec::new();
    for s in 0..=mis.len() {
        let lo = if s == 0 {
            Coord::MIN
        } else {
            side.rects[mis[s - 1]].0.x2
        };
        let hi = if s == mis.len() {
            Coord::MAX
        } else {
            side.rects[mis[s]].0.x1
        };
        if let Some(seed) = lowest(&|p: (Coord, Coord)| lo < p.0 && p.0 < hi) {
            strip_seeds.push(seed);
        }
    }
    Ok((member_seeds, strip_seeds))
}

/// Region of an x-coordinate along the member/strip partition of the line:
/// members are closed, strips open. Region index: strip s = 2s, member m =
/// 2m+1, so regions are ordered left to right.
fn region_of(mis_rects: &[Rect], x: Coord) -> usize {
    for (m, r) in mis_rects.iter().enumerate() {
        if x < r.x1 {
            return 2 * m;
        }
        if x <= r.x2 {
            return 2 * m + 1;
        }
    }
    2 * mis_rects.len()
}

fn region_range(mis_rects: &[Rect], region: usize) -> (Coord, Coord) {
    if region % 2 == 1 {
        let r = mis_rects[region / 2];
        (r.x1, r.x2)
    } else {
        let s = region / 2;
        let lo = if s == 0 {
            Coord::MIN
        } else {
            mis_rects[s - 1].x2 + 1
        };
        let hi = if s == mis_rects.len() {
            Coord::MAX
        } else {
            mis_rects[s].x1 - 1
        };
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualClass {
    /// Left end in a strip, right end inside a member.
    R1,
    /// Left end inside a member, right end further right, no member spanned.
    R2,
    /// Spans at least one member completely.
    R3,
}

/// A rectangle missed by every seed, with the only two regions where a
/// candidate can still hit it.
#[derive(Debug, Clone)]
pub struct Residual {
    /// Index into `side.rects`.
    pub rect: usize,
    pub class: ResidualClass,
    pub left_region: usize,
    pub right_region: usize,
}

/// Classify the rectangles missed by the seeds. Any candidate hitting a
/// residual lies in the region of its left end or of its right end: seeds
/// are lowest points, so a candidate in a fully spanned member or strip
/// would have made its seed hit the rectangle too.
pub fn classify_residuals(
    side: &SideProblem,
    mis: &[usize],
    member_seeds: &[usize],
    strip_seeds: &[usize],
) -> Result<Vec<Residual>> {
    let mis_rects: Vec<Rect> = mis.iter().map(|&i| side.rects[i].0).collect();
    let hit_by_seed = |rect: &Rect| {
        member_seeds
            .iter()
            .chain(strip_seeds)
            .any(|&q| rect.contains(side.cands[q].0) && side.cands[q].0 .1 > side.lambda)
    };
    let mut residuals = Vec::new();
    for (ri, (rect, orig)) in side.rects.iter().enumerate() {
        if hit_by_seed(rect) {
            continue;
        }
        let left_region = region_of(&mis_rects, rect.x1);
        let right_region = region_of(&mis_rects, rect.x2);
        if left_region == right_region {
            return Err(Error::Internal(format!(
                "residual rectangle {orig} nested inside one region"
            )));
        }
        let spans_member = mis_rects.iter().any(|m| rect.x1 <= m.x1 && m.x2 <= rect.x2);
        let class = if spans_member {
            ResidualClass::R3
        } else if left_region % 2 == 0 {
            ResidualClass::R1
        } else {
            ResidualClass::R2
        };
        // Every candidate inside the rectangle must fall in one of the two
        // end regions.
        for &((x, y), _) in &side.cands {
            if rect.contains((x, y)) && y > side.lambda {
                let r = region_of(&mis_rects, x);
                if r != left_region && r != right_region {
                    return Err(Error::Internal(format!(
                        "candidate in a fully spanned region hits residual {orig}"
                    )));
                }
            }
        }
        residuals.push(Residual {
            rect: ri,
            class,
            left_region,
            right_region,
        });
    }
    Ok(residuals)
}

/// Part of a residual inside one region: hitting candidates must have
/// `x >= x_from` (for left parts; callers mirror coordinates for right
/// parts) and `y <= top`.
#[derive(Debug, Clone)]
pub struct Part {
    pub x_from: Coord,
    pub top: Coord,
    pub rect: usize,
}

/// Hit every part with the fewest points: prune parts containing other
/// parts, then repeatedly take the lowest-top surviving part and the
/// right-most candidate hitting it. `cands` are (position, id) pairs already
/// restricted to the part's region; positions are mirrored by the caller for
/// right parts. Returns chosen ids; errors with the unhittable rectangle.
pub fn staircase_greedy(
    parts: &[Part],
    cands: &[((Coord, Coord), usize)],
    rect_of: &dyn Fn(usize) -> usize,
) -> Result<Vec<usize>> {
    // Drop parts that contain another part (hitting the contained one hits
    // the container), dedup equals.
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by_key(|&i| (parts[i].x_from, std::cmp::Reverse(parts[i].top), i));
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order {
        let contains_other = parts.iter().enumerate().any(|(j, pj)| {
            let strict = parts[i].x_from <= pj.x_from
                && parts[i].top >= pj.top
                && (parts[i].x_from, parts[i].top) != (pj.x_from, pj.top);
            // exact duplicates keep only the lowest index
            let duplicate = (parts[i].x_from, parts[i].top) == (pj.x_from, pj.top) && j < i;
            j != i && (strict || duplicate)
        });
        if !contains_other {
            kept.push(i);
        }
    }
    kept.sort_by_key(|&i| (parts[i].top, parts[i].x_from, i));
    let mut alive: Vec<usize> = kept;
    let mut chosen = Vec::new();
    while let Some(&first) = alive.first() {
        let p = &parts[first];
        let pick = cands
            .iter()
            .enumerate()
            .filter(|&(_, &((x, y), _))| x >= p.x_from && y <= p.top)
            .max_by_key(|&(i, &((x, y), _))| (x, std::cmp::Reverse(y), std::cmp::Reverse(i)))
            .map(|(i, _)| i);
        let Some(pi) = pick else {
            return Err(Error::infeasible_with(
                Witness::Object(rect_of(p.rect)),
                "staircase part contains no candidate",
            ));
        };
        let (pos, id) = cands[pi];
        chosen.push(id);
        alive.retain(|&i| !(pos.0 >= parts[i].x_from && pos.1 <= parts[i].top));
    }
    Ok(chosen)
}

/// Solve one anchored side problem: independent set, seeds, residual
/// classification, left/right LP split, and per-region staircase hitting.
/// Returns candidate indices into `side.cands`'s original numbering.
pub fn solve_side(side: &SideProblem) -> Result<Vec<usize>> {
    if side.rects.is_empty() {
        return Ok(Vec::new());
    }
    let mis = anchored_mis(&side.rects);
    let (member_seeds, strip_seeds) = seed_points(side, &mis)?;
    let residuals = classify_residuals(side, &mis, &member_seeds, &strip_seeds)?;
    let mis_rects: Vec<Rect> = mis.iter().map(|&i| side.rects[i].0).collect();

    // Left/right decision LP over the residual parts.
    let mut lp = CoverLp::new(side.cands.len());
    for res in &residuals {
        let rect = side.rects[res.rect].0;
        let part_vars = |region: usize| -> Vec<usize> {
            let (lo, hi) = region_range(&mis_rects, region);
            (0..side.cands.len())
                .filter(|&q| {
                    let (p, _) = side.cands[q];
                    rect.contains(p) && p.1 > side.lambda && lo <= p.0 && p.0 <= hi
                })
                .collect()
        };
        let left = part_vars(res.left_region);
        let right = part_vars(res.right_region);
        if left.is_empty() && right.is_empty() {
            return Err(Error::infeasible_with(
                Witness::Object(side.rects[res.rect].1),
                "residual rectangle has no candidate in either part",
            ));
        }
        lp.push(CoverConstraint::two_sided(left, right));
    }
    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    for &s in member_seeds.iter().chain(&strip_seeds) {
        chosen.insert(s);
    }
    if !residuals.is_empty() {
        let sol = lp::solve_lp(&lp)?;
        lp::check_doubling(&lp, &sol)?;
        // Ties go left, so the doubling bound argument stays one-sided.
        let mut left_parts: std::collections::BTreeMap<usize, Vec<Part>> = Default::default();
        let mut right_parts: std::collections::BTreeMap<usize, Vec<Part>> = Default::default();
        for (c, res) in residuals.iter().enumerate() {
            let rect = side.rects[res.rect].0;
            let (s1, s2) = sol.sigma[c];
            if s1 >= s2 - lp::LP_TOL {
                left_parts.entry(res.left_region).or_default().push(Part {
                    x_from: rect.x1,
                    top: rect.y2,
                    rect: res.rect,
                });
            } else {
                // mirror x so the right part is right-aligned too
                right_parts.entry(res.right_region).or_default().push(Part {
                    x_from: -rect.x2,
                    top: rect.y2,
                    rect: res.rect,
                });
            }
        }
        let rect_of = |r: usize| side.rects[r].1;
        for (region, parts) in &left_parts {
            let (lo, hi) = region_range(&mis_rects, *region);
            let cands: Vec<((Coord, Coord), usize)> = side
                .cands
                .iter()
                .enumerate()
                .filter(|&(_, &((x, y), _))| lo <= x && x <= hi && y > side.lambda)
                .map(|(q, &(p, _))| (p, q))
                .collect();
            for id in staircase_greedy(parts, &cands, &rect_of)? {
                chosen.insert(id);
            }
        }
        for (region, parts) in &right_parts {
            let (lo, hi) = region_range(&mis_rects, *region);
            let cands: Vec<((Coord, Coord), usize)> = side
                .cands
                .iter()
                .enumerate()
                .filter(|&(_, &((x, y), _))| lo <= x && x <= hi && y > side.lambda)
                .map(|(q, &((x, y), _))| ((-x, y), q))
                .collect();
            for id in staircase_greedy(parts, &cands, &rect_of)? {
                chosen.insert(id);
            }
        }
    }

    // Exactness check: every rectangle of this side must now be hit.
    for &(rect, orig) in &side.rects {
        let hit = chosen
            .iter()
            .any(|&q| rect.contains(side.cands[q].0) && side.cands[q].0 .1 > side.lambda);
        if !hit {
            return Err(Error::Internal(format!(
                "side solution misses rectangle {orig}"
            )));
        }
    }
    Ok(chosen.into_iter().collect())
}

/// Solve one line problem; returns indices into `candidates`.
pub fn solve_line(
    line: &LineProblem,
    family: &[Rect],
    candidates: &[(Coord, Coord)],
) -> Result<Vec<usize>> {
    if line.rects.is_empty() {
        return Ok(Vec::new());
    }
    let (above, below) = split_above_below(line, family, candidates)?;
    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    for side in [&above, &below] {
        for q in solve_side(side)? {
            chosen.insert(side.cands[q].1);
        }
    }
    // Every rectangle of the line is hit by some chosen original candidate.
    for &ri in &line.rects {
        if !chosen.iter().any(|&q| family[ri].contains(candidates[q])) {
            return Err(Error::Internal(format!(
                "line solution misses rectangle {ri}"
            )));
        }
    }
    Ok(chosen.into_iter().collect())
}

#[derive(Debug, Clone)]
pub struct DiscreteCertificate {
    /// First-stage LP objective (lower bound on the optimal stabbing size
    /// using the given centers); absent on the brute-force path.
    pub lp_lower_bound: Option<f64>,
    pub z1_objective: Option<f64>,
    /// Chosen-point count per decomposed line, unit-height family first.
    pub line_sizes: Vec<usize>,
    pub stab_size: usize,
    pub final_size: usize,
    pub used_fallback: bool,
}

#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    /// Indices into the instance's square list.
    pub chosen: Vec<usize>,
    pub certificate: DiscreteCertificate,
}

/// Build the stabbing reduction for a discrete instance in working
/// coordinates: the segment system over the scaled points and the scaled
/// centers as the only candidates.
pub fn reduce_to_rect_hitting(
    scale: Coord,
    points: &[(Coord, Coord)],
    squares: &[(Coord, Coord)],
) -> (SegmentSystem, Vec<(Coord, Coord)>) {
    let unit = scale * geom::WORK_FACTOR;
    let pts: Vec<(Coord, Coord)> = points
        .iter()
        .map(|&(x, y)| (x * geom::WORK_FACTOR, y * geom::WORK_FACTOR))
        .collect();
    let centers: Vec<(Coord, Coord)> = squares
        .iter()
        .map(|&(x, y)| (x * geom::WORK_FACTOR, y * geom::WORK_FACTOR))
        .collect();
    (cont2d::build_segments(unit, &pts), centers)
}

/// End-to-end discrete solve: twin-free check, brute-force fallback for tiny
/// instances, otherwise cascade, per-line solves for both rectangle
/// families, center-to-square mapping, coverage fix, and verification.
pub fn discrete_disc_code(instance: &Instance2d, eps: f64) -> Result<DiscreteSolution> {
    if eps <= 0.0 {
        return Err(Error::Input(format!("eps must be positive, got {eps}")));
    }
    let squares = instance
        .squares
        .as_ref()
        .ok_or_else(|| Error::Input("discrete solver needs a square list".to_string()))?;
    let wrapped = Instance::TwoD(instance.clone());
    let n = instance.points.len();
    if n == 0 {
        return Ok(DiscreteSolution {
            chosen: Vec::new(),
            certificate: DiscreteCertificate {
                lp_lower_bound: None,
                z1_objective: None,
                line_sizes: Vec::new(),
                stab_size: 0,
                final_size: 0,
                used_fallback: false,
            },
        });
    }
    match codes::check_twin_free(&wrapped) {
        DiscCheck::Valid => {}
        check => {
            return Err(Error::infeasible_with(
                check.witness().unwrap(),
                "instance is not twin-free",
            ))
        }
    }

    if (n as f64) <= 2f64.powf(1.0 / eps) {
        let chosen = oracle::min_disc_code_exact(&wrapped, &OracleBudget::from_env())?;
        let size = chosen.len();
        return Ok(DiscreteSolution {
            chosen,
            certificate: DiscreteCertificate {
                lp_lower_bound: None,
                z1_objective: None,
                line_sizes: Vec::new(),
                stab_size: size,
                final_size: size,
                used_fallback: true,
            },
        });
    }

    let (system, centers) = reduce_to_rect_hitting(instance.scale, &instance.points, squares);
    let unit = system.unit;
    let cands = cont2d::candidate_masks(&system, &centers);
    let cascade = cont2d::cascade_round(&system, &cands)?;

    let mut chosen_centers: BTreeSet<usize> = BTreeSet::new();
    let mut line_sizes = Vec::new();
    for line in line_decompose(unit, &cascade.family_a, &centers)? {
        let sol = solve_line(&line, &cascade.family_a, &centers)?;
        line_sizes.push(sol.len());
        chosen_centers.extend(sol);
    }
    let family_b_t: Vec<Rect> = cascade.family_b.iter().map(|r| r.transpose()).collect();
    let centers_t: Vec<(Coord, Coord)> = centers.iter().map(|&(x, y)| (y, x)).collect();
    for line in line_decompose(unit, &family_b_t, &centers_t)? {
        let sol = solve_line(&line, &family_b_t, &centers_t)?;
        line_sizes.push(sol.len());
        chosen_centers.extend(sol);
    }

    let pts: Vec<(Coord, Coord)> = instance
        .points
        .iter()
        .map(|&(x, y)| (x * geom::WORK_FACTOR, y * geom::WORK_FACTOR))
        .collect();
    let picked: Vec<(Coord, Coord)> = chosen_centers.iter().map(|&q| centers[q]).collect();
    if n >= 2 && !oracle::stabs_all_pairs(unit, &pts, &picked) {
        return Err(Error::Internal(
            "stabbing stage left a pair unseparated".to_string(),
        ));
    }
    let stab_size = chosen_centers.len();

    let mut chosen: BTreeSet<usize> = chosen_centers;
    let uncovered: Vec<usize> = (0..n)
        .filter(|&p| {
            !chosen
                .iter()
                .any(|&s| square_contains(unit, centers[s], pts[p]))
        })
        .collect();
    if uncovered.len() > 1 {
        return Err(Error::Internal(format!(
            "{} uncovered points after stabbing; at most one is possible",
            uncovered.len()
        )));
    }
    if let Some(&p) = uncovered.first() {
        let fix = (0..squares.len())
            .find(|&s| square_contains(unit, centers[s], pts[p]))
            .ok_or_else(|| {
                Error::infeasible_with(Witness::Point(p), "no square covers this point")
            })?;
        chosen.insert(fix);
    }
    let chosen: Vec<usize> = chosen.into_iter().collect();
    codes::require_disc_code(&wrapped, &chosen)?;
    Ok(DiscreteSolution {
        certificate: DiscreteCertificate {
            lp_lower_bound: Some(cascade.z0_objective),
            z1_objective: Some(cascade.z1_objective),
            line_sizes,
            stab_size,
            final_size: chosen.len(),
            used_fallback: false,
        },
        chosen,
    })
}
