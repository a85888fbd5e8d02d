//! (4+eps)-approximation for continuous 2D unit squares.
//!
//! Discrimination is recast as stabbing: every point pair needs a chosen
//! square containing exactly one endpoint, i.e. a center inside the
//! symmetric difference of the two endpoint squares. A covering LP over the
//! candidate centers picks a side per pair, a second LP picks the
//! unit-height or unit-width rectangle per chosen side, and local search
//! hits each rectangle family. At most one point can stay uncovered and one
//! extra square fixes it.

use std::collections::BTreeSet;

use crate::bits::Bits;
use crate::codes::square_contains;
use crate::error::{Error, Result, Witness};
use crate::geom::{self, CandidateSet, Rect, StabObject};
use crate::instance::Coord;
use crate::lp::{self, CoverConstraint, CoverLp, Side};
use crate::oracle::{self, OracleBudget};

/// Stab objects plus the flattened rectangle table behind them.
pub struct SegmentSystem {
    pub unit: Coord,
    pub points: Vec<(Coord, Coord)>,
    pub objects: Vec<StabObject>,
    /// Flattened side rectangles of all objects.
    pub rects: Vec<Rect>,
    /// Per object: indices into `rects` for the a-side and b-side.
    pub side_rects: Vec<(Vec<usize>, Vec<usize>)>,
    /// Per object: (type-a rect, type-b rect) indices for each side.
    pub side_types: Vec<(SideTypes, SideTypes)>,
}

#[derive(Debug, Clone, Copy)]
pub struct SideTypes {
    pub type_a: Option<usize>,
    pub type_b: Option<usize>,
}

/// All-pairs segments of a point set, as stab objects.
pub fn build_segments(unit: Coord, points: &[(Coord, Coord)]) -> SegmentSystem {
    let mut objects = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            objects.push(geom::stab_region(unit, points[i], points[j]));
        }
    }
    let mut rects = Vec::new();
    let mut side_rects = Vec::new();
    let mut side_types = Vec::new();
    for obj in &objects {
        let mut push_side = |region: &geom::SideRegion| {
            let mut ids = Vec::new();
            let type_a = region.type_a.map(|r| {
                rects.push(r);
                ids.push(rects.len() - 1);
                rects.len() - 1
            });
            let type_b = region.type_b.map(|r| {
                rects.push(r);
                ids.push(rects.len() - 1);
                rects.len() - 1
            });
            (ids, SideTypes { type_a, type_b })
        };
        let (a_ids, a_types) = push_side(&obj.region_a);
        let (b_ids, b_types) = push_side(&obj.region_b);
        side_rects.push((a_ids, b_ids));
        side_types.push((a_types, b_types));
    }
    SegmentSystem {
        unit,
        points: points.to_vec(),
        objects,
        rects,
        side_rects,
        side_types,
    }
}

/// Candidate centers for the continuous problem: one odd-coordinate
/// representative per cell of the arrangement of the point squares.
pub fn continuous_candidates(system: &SegmentSystem) -> CandidateSet {
    let squares: Vec<Rect> = system
        .points
        .iter()
        .map(|&p| Rect::square(system.unit, p))
        .collect();
    geom::candidate_points(&squares, &system.rects)
}

/// Containment masks of externally supplied candidates (square centers).
pub fn candidate_masks(system: &SegmentSystem, candidates: &[(Coord, Coord)]) -> CandidateSet {
    let masks = candidates
        .iter()
        .map(|&q| {
            let mut mask = Bits::new(system.rects.len());
            for (r, rect) in system.rects.iter().enumerate() {
                if rect.contains(q) {
                    mask.set(r);
                }
            }
            mask
        })
        .collect();
    CandidateSet {
        points: candidates.to_vec(),
        masks,
    }
}

/// Result of the two-stage LP cascade: the rectangle families to hit and the
/// stage objectives.
pub struct Cascade {
    /// Unit-height rectangles.
    pub family_a: Vec<Rect>,
    /// Unit-width rectangles (to be transposed for hitting).
    pub family_b: Vec<Rect>,
    pub z0_objective: f64,
    pub z1_objective: f64,
}

fn vars_in(cands: &CandidateSet, rect_ids: &[usize]) -> Vec<usize> {
    (0..cands.points.len())
        .filter(|&q| rect_ids.iter().any(|&r| cands.masks[q].get(r)))
        .collect()
}

/// Solve the side-selection LP over all segments, split each constraint at
/// the winning side, decompose the chosen regions into type-A and type-B
/// rectangles, and solve the second selection LP between those. The
/// feasibility half of each doubling inequality is asserted on every run.
pub fn cascade_round(system: &SegmentSystem, cands: &CandidateSet) -> Result<Cascade> {
    let mut z0 = CoverLp::new(cands.points.len());
    for (o, (a_ids, b_ids)) in system.side_rects.iter().enumerate() {
        let side_a = vars_in(cands, a_ids);
        let side_b = vars_in(cands, b_ids);
        if side_a.is_empty() && side_b.is_empty() {
            let obj = &system.objects[o];
            let (i, j) = locate_pair(system, obj);
            return Err(Error::infeasible_with(
                Witness::Pair(i, j),
                "no candidate center separates this pair",
            ));
        }
        z0.push(CoverConstraint::two_sided(side_a, side_b));
    }
    let sol0 = lp::solve_lp(&z0)?;
    lp::check_doubling(&z0, &sol0)?;

    // Chosen sides per segment.
    let mut z1 = CoverLp::new(cands.points.len());
    let mut chosen_types: Vec<SideTypes> = Vec::new();
    for o in 0..system.objects.len() {
        let side = lp::side_split(&sol0, o);
        let (a_types, b_types) = system.side_types[o];
        match side {
            Side::A => chosen_types.push(a_types),
            Side::B => chosen_types.push(b_types),
            Side::Both => {
                chosen_types.push(a_types);
                chosen_types.push(b_types);
            }
        }
    }
    for st in &chosen_types {
        let side_a = st.type_a.map(|r| vars_in(cands, &[r])).unwrap_or_default();
        let side_b = st.type_b.map(|r| vars_in(cands, &[r])).unwrap_or_default();
        z1.push(CoverConstraint::two_sided(side_a, side_b));
    }
    let sol1 = lp::solve_lp(&z1)?;
    lp::check_doubling(&z1, &sol1)?;

    let mut family_a = Vec::new();
    let mut family_b = Vec::new();
    for (c, st) in chosen_types.iter().enumerate() {
        let side = lp::side_split(&sol1, c);
        if matches!(side, Side::A | Side::Both) {
            let r = st
                .type_a
                .ok_or_else(|| Error::Internal("mass on an absent type-A rect".to_string()))?;
            family_a.push(system.rects[r]);
        }
        if matches!(side, Side::B | Side::Both) {
            let r = st
                .type_b
                .ok_or_else(|| Error::Internal("mass on an absent type-B rect".to_string()))?;
            family_b.push(system.rects[r]);
        }
    }
    Ok(Cascade {
        family_a,
        family_b,
        z0_objective: sol0.objective,
        z1_objective: sol1.objective,
    })
}

fn locate_pair(system: &SegmentSystem, obj: &StabObject) -> (usize, usize) {
    let i = system.points.iter().position(|&p| p == obj.a).unwrap_or(0);
    let j = system.points.iter().position(|&p| p == obj.b).unwrap_or(0);
    (i.min(j), i.max(j))
}

/// Hitting set for a rectangle family by local search: start from the
/// max-coverage greedy, then repeatedly replace up to `swap` chosen points
/// by strictly fewer candidates while staying feasible.
pub fn uhit_local_search(
    rects: &[Rect],
    candidates: &[(Coord, Coord)],
    swap: usize,
) -> Result<Vec<usize>> {
    if rects.is_empty() {
        return Ok(Vec::new());
    }
    // Deduplicate candidates by hit mask; keep the lowest index.
    let mut masks: Vec<Bits> = Vec::new();
    let mut back: Vec<usize> = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (q, &pt) in candidates.iter().enumerate() {
        let mut mask = Bits::new(rects.len());
        for (r, rect) in rects.iter().enumerate() {
            if rect.contains(pt) {
                mask.set(r);
            }
        }
        if mask.is_empty() || seen.contains_key(&mask) {
            continue;
        }
        seen.insert(mask.clone(), q);
        masks.push(mask);
        back.push(q);
    }
    for r in 0..rects.len() {
        if !masks.iter().any(|m| m.get(r)) {
            return Err(Error::infeasible_with(
                Witness::Object(r),
                "rectangle contains no candidate",
            ));
        }
    }

    // Greedy start.
    let mut chosen: Vec<usize> = Vec::new();
    let mut unhit = Bits::all_set(rects.len());
    while !unhit.is_empty() {
        let best = (0..masks.len())
            .max_by_key(|&q| (masks[q].intersection_count(&unhit), std::cmp::Reverse(q)))
            .expect("nonempty candidate set");
        if masks[best].intersection_count(&unhit) == 0 {
            return Err(Error::Internal("greedy hitting stalled".to_string()));
        }
        unhit.subtract(&masks[best]);
        chosen.push(best);
    }
    chosen.sort_unstable();

    // Improvement loop: drop T (|T| <= swap), re-cover what only T hit with
    // fewer candidates.
    'improve: loop {
        for t in 1..=swap.min(chosen.len()) {
            let subsets = combinations(chosen.len(), t);
            for subset in subsets {
                let removed: Vec<usize> = subset.iter().map(|&i| chosen[i]).collect();
                let mut needed = Bits::new(rects.len());
                for &q in &removed {
                    needed.union_with(&masks[q]);
                }
                for &q in &chosen {
                    if !removed.contains(&q) {
                        needed.subtract(&masks[q]);
                    }
                }
                if let Some(repl) = cover_with(&masks, &needed, t - 1) {
                    chosen.retain(|q| !removed.contains(q));
                    chosen.extend(repl);
                    chosen.sort_unstable();
                    chosen.dedup();
                    continue 'improve;
                }
            }
        }
        break;
    }
    Ok(chosen.into_iter().map(|q| back[q]).collect())
}

// All size-t index subsets of 0..n in lexicographic order.
fn combinations(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < t - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, t, cur, out);
            cur.pop();
        }
    }
    rec(0, n, t, &mut cur, &mut out);
    out
}

// First (lexicographic) set of at most `limit` candidates covering `needed`.
fn cover_with(masks: &[Bits], needed: &Bits, limit: usize) -> Option<Vec<usize>> {
    if needed.is_empty() {
        return Some(Vec::new());
    }
    if limit == 0 {
        return None;
    }
    let first = needed.ones().next().unwrap();
    for (q, mask) in masks.iter().enumerate() {
        if mask.get(first) {
            let mut rest = needed.clone();
            rest.subtract(mask);
            if let Some(mut sub) = cover_with(masks, &rest, limit - 1) {
                sub.insert(0, q);
                return Some(sub);
            }
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct ContCertificate {
    /// First-stage LP objective: a lower bound on the optimal stabbing size
    /// over the candidate universe. Absent when the brute-force path ran.
    pub lp_lower_bound: Option<f64>,
    pub z1_objective: Option<f64>,
    pub sol_a: usize,
    pub sol_b: usize,
    pub stab_size: usize,
    pub final_size: usize,
    pub used_fallback: bool,
}

#[derive(Debug, Clone)]
pub struct ContinuousSolution {
    /// Chosen centers in working coordinates.
    pub centers: Vec<(Coord, Coord)>,
    /// Scale of the working coordinates.
    pub work_scale: Coord,
    pub certificate: ContCertificate,
}

/// End-to-end continuous solve. Instances with at most `2^(1/eps)` points go
/// to the exact stabbing search; larger ones run the LP cascade plus local
/// search. Either way the stabbing property is verified exactly, at most one
/// uncovered point is fixed with one extra square, and the final center set
/// is checked to be a discriminating code.
pub fn continuous_disc_code(
    scale: Coord,
    points: &[(Coord, Coord)],
    eps: f64,
    swap: usize,
) -> Result<ContinuousSolution> {
    if eps <= 0.0 {
        return Err(Error::Input(format!("eps must be positive, got {eps}")));
    }
    let work_scale = scale * geom::WORK_FACTOR;
    let pts: Vec<(Coord, Coord)> = points
        .iter()
        .map(|&(x, y)| (x * geom::WORK_FACTOR, y * geom::WORK_FACTOR))
        .collect();
    {
        let mut sorted = pts.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("points must be pairwise distinct".to_string()));
        }
    }
    if pts.is_empty() {
        return Ok(ContinuousSolution {
            centers: Vec::new(),
            work_scale,
            certificate: ContCertificate {
                lp_lower_bound: None,
                z1_objective: None,
                sol_a: 0,
                sol_b: 0,
                stab_size: 0,
                final_size: 0,
                used_fallback: false,
            },
        });
    }

    let fallback = (pts.len() as f64) <= 2f64.powf(1.0 / eps);
    let (mut centers, mut cert) = if fallback {
        let stab = oracle::min_stab_exact_continuous(scale, points, &OracleBudget::from_env())?;
        let size = stab.centers.len();
        (
            stab.centers,
            ContCertificate {
                lp_lower_bound: None,
                z1_objective: None,
                sol_a: 0,
                sol_b: 0,
                stab_size: size,
                final_size: 0,
                used_fallback: true,
            },
        )
    } else {
        let system = build_segments(work_scale, &pts);
        let cands = continuous_candidates(&system);
        let cascade = cascade_round(&system, &cands)?;
        let sol_a = uhit_local_search(&cascade.family_a, &cands.points, swap)?;
        let transposed_rects: Vec<Rect> = cascade.family_b.iter().map(|r| r.transpose()).collect();
        let transposed_cands: Vec<(Coord, Coord)> =
            cands.points.iter().map(|&(x, y)| (y, x)).collect();
        let sol_b = uhit_local_search(&transposed_rects, &transposed_cands, swap)?;
        let mut centers: BTreeSet<(Coord, Coord)> = BTreeSet::new();
        for &q in &sol_a {
            centers.insert(cands.points[q]);
        }
        for &q in &sol_b {
            centers.insert(cands.points[q]);
        }
        let centers: Vec<(Coord, Coord)> = centers.into_iter().collect();
        let cert = ContCertificate {
            lp_lower_bound: Some(cascade.z0_objective),
            z1_objective: Some(cascade.z1_objective),
            sol_a: sol_a.len(),
            sol_b: sol_b.len(),
            stab_size: centers.len(),
            final_size: 0,
            used_fallback: false,
        };
        (centers, cert)
    };

    if pts.len() >= 2 && !oracle::stabs_all_pairs(work_scale, &pts, &centers) {
        return Err(Error::Internal(
            "stabbing stage left a pair unseparated".to_string(),
        ));
    }
    let uncovered: Vec<usize> = (0..pts.len())
        .filter(|&p| {
            !centers
                .iter()
                .any(|&c| square_contains(work_scale, c, pts[p]))
        })
        .collect();
    if uncovered.len() > 1 {
        return Err(Error::Internal(format!(
            "{} uncovered points after stabbing; at most one is possible",
            uncovered.len()
        )));
    }
    if let Some(&p) = uncovered.first() {
        centers.push(pts[p]);
    }
    verify_centers(work_scale, &pts, &centers)?;
    cert.final_size = centers.len();
    Ok(ContinuousSolution {
        centers,
        work_scale,
        certificate: cert,
    })
}

/// Check that the squares centered at `centers` form a discriminating code
/// for the points.
pub fn verify_centers(
    scale: Coord,
    points: &[(Coord, Coord)],
    centers: &[(Coord, Coord)],
) -> Result<()> {
    let inst = crate::instance::Instance::TwoD(crate::instance::Instance2d {
        scale,
        points: points.to_vec(),
        squares: Some(centers.to_vec()),
    });
    let all: Vec<usize> = (0..centers.len()).collect();
    crate::codes::require_disc_code(&inst, &all)
}
