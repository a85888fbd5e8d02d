//! (1+eps)-approximation for 1D unit intervals.
//!
//! The line is carved by reference points into covered blocks (spanned by
//! per-reference extremal interval pairs) and small free regions between
//! them. Every possible discriminating code of each free region is
//! enumerated, block discrimination between two neighboring free-region
//! codes is priced by a minimum edge cover over the surviving gaps, and a
//! layered shortest path stitches the cheapest combination together.

use std::collections::BTreeSet;

use crate::bits::Bits;
use crate::codes::{self, DiscCheck};
use crate::edgecover::{min_edge_cover, GapEdge, GapGraph};
use crate::error::{Error, Result, Witness};
use crate::instance::{Coord, Instance, Instance1d};
use crate::oracle::{self, OracleBudget};

/// Default cap on intervals touching one free region; enumeration is
/// exponential in this count.
pub const FREE_REGION_CAP: usize = 20;

#[derive(Debug, Clone)]
pub struct GroupRange {
    /// Point index of the reference.
    pub reference: usize,
    /// Spanning interval with the minimum left endpoint.
    pub left_interval: usize,
    /// Spanning interval with the maximum right endpoint.
    pub right_interval: usize,
    pub lo: Coord,
    pub hi: Coord,
}

#[derive(Debug, Clone)]
pub struct Block {
    pub lo: Coord,
    pub hi: Coord,
    /// Indices into the decomposition's group-range list.
    pub ranges: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Block(usize),
    Free(usize),
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub group_ranges: Vec<GroupRange>,
    pub blocks: Vec<Block>,
    /// Per free region (0..=blocks.len()), the point indices inside it.
    pub free_points: Vec<Vec<usize>>,
    /// Region of every point.
    pub region_of: Vec<Region>,
    /// Per free region, the intervals covering at least one of its points.
    pub touching: Vec<Vec<usize>>,
}

fn ceil_div_f64(num: f64) -> usize {
    num.ceil() as usize
}

/// Split a pruned unit-interval instance into blocks and free regions.
/// Reference points start at the ceil(2/eps)-th point and then advance by
/// ceil(4/eps) positions.
pub fn decompose(inst: &Instance1d, eps: f64) -> Result<Decomposition> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Input(format!("eps must be in (0, 1], got {eps}")));
    }
    if !inst.is_unit() {
        return Err(Error::Input(
            "all intervals must have unit length for this solver".to_string(),
        ));
    }
    let n = inst.points.len();
    let first = ceil_div_f64(2.0 / eps);
    let step = ceil_div_f64(4.0 / eps);
    let mut references = Vec::new();
    let mut idx = first;
    while idx <= n {
        references.push(idx - 1); // to 0-based point index
        idx += step;
    }

    let mut group_ranges = Vec::with_capacity(references.len());
    for &q in &references {
        let x = inst.points[q];
        let spanning: Vec<usize> = (0..inst.intervals.len())
            .filter(|&i| codes::interval_contains(inst.intervals[i], x))
            .collect();
        let Some(&left) = spanning.iter().min_by_key(|&&i| (inst.intervals[i].0, i)) else {
            return Err(Error::infeasible_with(
                Witness::Point(q),
                "reference point is covered by no interval",
            ));
        };
        let &right = spanning
            .iter()
            .max_by_key(|&&i| (inst.intervals[i].1, std::cmp::Reverse(i)))
            .unwrap();
        group_ranges.push(GroupRange {
            reference: q,
            left_interval: left,
            right_interval: right,
            lo: inst.intervals[left].0,
            hi: inst.intervals[right].1,
        });
    }

    // Merge chains of overlapping group-ranges into blocks.
    let mut blocks: Vec<Block> = Vec::new();
    for (gi, g) in group_ranges.iter().enumerate() {
        match blocks.last_mut() {
            Some(b) if g.lo <= b.hi => {
                b.hi = b.hi.max(g.hi);
                b.lo = b.lo.min(g.lo);
                b.ranges.push(gi);
            }
            _ => blocks.push(Block {
                lo: g.lo,
                hi: g.hi,
                ranges: vec![gi],
            }),
        }
    }

    let region_of: Vec<Region> = inst
        .points
        .iter()
        .map(
            |&p| match blocks.iter().position(|b| b.lo <= p && p <= b.hi) {
                Some(b) => Region::Block(b),
                None => Region::Free(blocks.iter().filter(|b| b.hi < p).count()),
            },
        )
        .collect();
    let mut free_points = vec![Vec::new(); blocks.len() + 1];
    for (p, r) in region_of.iter().enumerate() {
        if let Region::Free(f) = r {
            free_points[*f].push(p);
        }
    }

    // Every block point is covered by the extremal pair of some range in its
    // block.
    for (p, r) in region_of.iter().enumerate() {
        if let Region::Block(b) = r {
            let x = inst.points[p];
            let covered = blocks[*b].ranges.iter().any(|&gi| {
                let g = &group_ranges[gi];
                codes::interval_contains(inst.intervals[g.left_interval], x)
                    || codes::interval_contains(inst.intervals[g.right_interval], x)
            });
            if !covered {
                return Err(Error::Internal(format!(
                    "block point {p} escapes its group-range covers"
                )));
            }
        }
    }

    let touching: Vec<Vec<usize>> = free_points
        .iter()
        .map(|pts| {
            (0..inst.intervals.len())
                .filter(|&i| {
                    pts.iter()
                        .any(|&p| codes::interval_contains(inst.intervals[i], inst.points[p]))
                })
                .collect()
        })
        .collect();

    // No interval may reach points of two distinct free regions.
    for i in 0..inst.intervals.len() {
        let mut seen: Option<usize> = None;
        for (f, pts) in free_points.iter().enumerate() {
            if pts
                .iter()
                .any(|&p| codes::interval_contains(inst.intervals[i], inst.points[p]))
            {
                if let Some(prev) = seen {
                    return Err(Error::Internal(format!(
                        "interval {i} touches free regions {prev} and {f}"
                    )));
                }
                seen = Some(f);
            }
        }
    }

    Ok(Decomposition {
        group_ranges,
        blocks,
        free_points,
        region_of,
        touching,
    })
}

/// A candidate discriminating code of one free region: the intervals used
/// and the set of consecutive point pairs of the whole line it separates.
#[derive(Debug, Clone)]
pub struct FreeCode {
    pub intervals: Vec<usize>,
    pub pairs: Bits,
}

/// Consecutive pair `p` (1-based gap index, meaning points `p-1` and `p`)
/// separated by an interval: its endpoint signature touches `p`.
fn pair_mask(inst: &Instance1d, interval: usize, n: usize) -> Bits {
    let mut bits = Bits::new(n.saturating_sub(1).max(1));
    let (a, b) = codes::gap_signature(&inst.points, inst.intervals[interval]);
    for s in [a, b] {
        if s >= 1 && s < n {
            bits.set(s - 1);
        }
    }
    bits
}

/// Enumerate all subsets of the touching intervals that cover the free
/// region's points and separate its internal consecutive pairs, pruned to
/// members that are not supersets of an equally-separating smaller member.
pub fn enumerate_free_region_codes(
    inst: &Instance1d,
    points: &[usize],
    touching: &[usize],
    cap: usize,
) -> Result<Vec<FreeCode>> {
    let n = inst.points.len();
    if touching.len() > cap {
        return Err(Error::Input(format!(
            "free region touched by {} intervals exceeds the enumeration cap {cap}; \
             rerun with a larger eps",
            touching.len()
        )));
    }
    if points.is_empty() {
        return Ok(vec![FreeCode {
            intervals: Vec::new(),
            pairs: Bits::new(n.saturating_sub(1).max(1)),
        }]);
    }
    let cover_masks: Vec<u64> = touching
        .iter()
        .map(|&i| {
            let mut m = 0u64;
            for (slot, &p) in points.iter().enumerate() {
                if codes::interval_contains(inst.intervals[i], inst.points[p]) {
                    m |= 1 << slot;
                }
            }
            m
        })
        .collect();
    let pair_masks: Vec<Bits> = touching.iter().map(|&i| pair_mask(inst, i, n)).collect();
    // Internal consecutive pairs of the free region.
    let internal: Vec<usize> = points
        .windows(2)
        .filter(|w| w[1] == w[0] + 1)
        .map(|w| w[1] - 1)
        .collect();
    let full_cover = if points.len() == 64 {
        u64::MAX
    } else {
        (1u64 << points.len()) - 1
    };

    let mut found: Vec<FreeCode> = Vec::new();
    for mask in 0u64..(1 << touching.len()) {
        let mut cover = 0u64;
        for (t, cm) in cover_masks.iter().enumerate() {
            if mask & (1 << t) != 0 {
                cover |= cm;
            }
        }
        if cover != full_cover {
            continue;
        }
        let mut pairs = Bits::new(n.saturating_sub(1).max(1));
        for (t, pm) in pair_masks.iter().enumerate() {
            if mask & (1 << t) != 0 {
                pairs.union_with(pm);
            }
        }
        if internal.iter().any(|&p| !pairs.get(p)) {
            continue;
        }
        let intervals: Vec<usize> = (0..touching.len())
            .filter(|t| mask & (1 << t) != 0)
            .map(|t| touching[t])
            .collect();
        found.push(FreeCode { intervals, pairs });
    }
    // Keep only members that no strictly smaller member dominates with the
    // same separation power.
    let mut keep = vec![true; found.len()];
    for i in 0..found.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..found.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (small, big) = (&found[j], &found[i]);
            if small.intervals.len() < big.intervals.len()
                && small.pairs == big.pairs
                && small
                    .intervals
                    .iter()
                    .all(|iv| big.intervals.binary_search(iv).is_ok())
            {
                keep[i] = false;
                break;
            }
        }
    }
    Ok(found
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect())
}

/// Minimum number of extra intervals (and which ones) separating the block's
/// consecutive pairs that neither neighboring code handles. `None` when some
/// pair cannot be separated at all.
pub fn block_edge_cost(
    inst: &Instance1d,
    block_pairs: &[usize],
    left: &FreeCode,
    right: &FreeCode,
) -> Result<Option<(usize, Vec<usize>)>> {
    let open: Vec<usize> = block_pairs
        .iter()
        .copied()
        .filter(|&p| !left.pairs.get(p) && !right.pairs.get(p))
        .collect();
    if open.is_empty() {
        return Ok(Some((0, Vec::new())));
    }
    let vertex_of = |p: usize| open.binary_search(&p).ok();
    let n = inst.points.len();
    let mut edges = Vec::new();
    for i in 0..inst.intervals.len() {
        let mask = pair_mask(inst, i, n);
        let mut hits: Vec<usize> = open
            .iter()
            .copied()
            .filter(|&p| mask.get(p))
            .filter_map(vertex_of)
            .collect();
        hits.dedup();
        match hits.len() {
            0 => {}
            1 => edges.push(GapEdge {
                a: hits[0],
                b: hits[0],
                interval: i,
            }),
            2 => edges.push(GapEdge {
                a: hits[0],
                b: hits[1],
                interval: i,
            }),
            _ => unreachable!("an interval separates at most two pairs"),
        }
    }
    let graph = GapGraph {
        n_vertices: open.len(),
        edges,
    };
    match min_edge_cover(&graph) {
        Ok(cover) => {
            let intervals: Vec<usize> = cover
                .edges
                .iter()
                .map(|&e| graph.edges[e].interval)
                .collect();
            Ok(Some((cover.edges.len(), intervals)))
        }
        Err(Error::Infeasible { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone)]
pub struct PtasSolution {
    /// Indices into the original (unpruned) interval list.
    pub chosen: Vec<usize>,
    /// Shortest-path weight through the layered graph (node sizes plus block
    /// edge covers); a lower bound on the optimum over the same instance.
    pub path_weight: usize,
    pub n_references: usize,
    pub final_size: usize,
}

/// Full unit-interval solve: decompose, enumerate free-region codes, price
/// blocks by edge cover, take the cheapest layered path, and add the
/// group-range interval pairs for coverage.
pub fn ptas_solve(instance: &Instance1d, eps: f64) -> Result<PtasSolution> {
    let n = instance.points.len();
    if n == 0 {
        return Ok(PtasSolution {
            chosen: Vec::new(),
            path_weight: 0,
            n_references: 0,
            final_size: 0,
        });
    }
    if !instance.is_unit() {
        return Err(Error::Input(
            "all intervals must have unit length for this solver".to_string(),
        ));
    }
    let pruned = codes::prune_1d(instance);
    let inst = &pruned.instance;
    match codes::check_twin_free(&Instance::OneD(inst.clone())) {
        DiscCheck::Valid => {}
        check => {
            return Err(Error::infeasible_with(
                check.witness().unwrap(),
                "instance is not twin-free",
            ))
        }
    }
    let deco = decompose(inst, eps)?;

    // Too few points for any reference: exhaust directly.
    if deco.group_ranges.is_empty() {
        let budget = OracleBudget::from_env().with_max_size(inst.intervals.len().max(1));
        let sol = oracle::min_disc_code_exact(&Instance::OneD(inst.clone()), &budget)?;
        let chosen = codes::to_original_indices(&pruned, &sol);
        codes::require_disc_code(&Instance::OneD(instance.clone()), &chosen)?;
        return Ok(PtasSolution {
            path_weight: chosen.len(),
            n_references: 0,
            final_size: chosen.len(),
            chosen,
        });
    }

    // Consecutive pairs handled by each block: those not internal to a free
    // region, attached to the block of the left point (or of the right point
    // when the left one sits in a free region).
    let n_blocks = deco.blocks.len();
    let mut block_pairs: Vec<Vec<usize>> = vec![Vec::new(); n_blocks];
    for p in 1..n {
        match (deco.region_of[p - 1], deco.region_of[p]) {
            (Region::Free(f1), Region::Free(f2)) => {
                if f1 != f2 {
                    return Err(Error::Internal(
                        "adjacent points in distinct free regions".to_string(),
                    ));
                }
            }
            (Region::Block(b), _) => block_pairs[b].push(p - 1),
            (Region::Free(_), Region::Block(b)) => block_pairs[b].push(p - 1),
        }
    }

    // Layer l holds the candidate codes of free region l.
    let mut layers: Vec<Vec<FreeCode>> = Vec::with_capacity(n_blocks + 1);
    for f in 0..=n_blocks {
        let codes = enumerate_free_region_codes(
            inst,
            &deco.free_points[f],
            &deco.touching[f],
            FREE_REGION_CAP,
        )?;
        if codes.is_empty() {
            return Err(Error::Internal(format!(
                "free region {f} admits no discriminating code"
            )));
        }
        layers.push(codes);
    }

    // Forward relaxation, one layer at a time. Costs count node sizes plus
    // block edge covers; backpointers remember the cover intervals.
    const INF: usize = usize::MAX / 4;
    let mut cost: Vec<usize> = layers[0].iter().map(|c| c.intervals.len()).collect();
    let mut back: Vec<Vec<(usize, Vec<usize>)>> = Vec::new(); // per layer >= 1
    for b in 0..n_blocks {
        let next_layer = &layers[b + 1];
        let mut next_cost = vec![INF; next_layer.len()];
        let mut next_back: Vec<(usize, Vec<usize>)> =
            vec![(usize::MAX, Vec::new()); next_layer.len()];
        for (di, d) in layers[b].iter().enumerate() {
            if cost[di] >= INF {
                continue;
            }
            for (dj, d2) in next_layer.iter().enumerate() {
                let Some((theta, cover)) = block_edge_cost(inst, &block_pairs[b], d, d2)? else {
                    continue;
                };
                let total = cost[di] + theta + d2.intervals.len();
                if total < next_cost[dj] {
                    next_cost[dj] = total;
                    next_back[dj] = (di, cover);
                }
            }
        }
        cost = next_cost;
        back.push(next_back);
    }

    let (mut best, best_cost) = cost
        .iter()
        .enumerate()
        .min_by_key(|&(i, c)| (*c, i))
        .map(|(i, c)| (i, *c))
        .ok_or_else(|| Error::Internal("empty final layer".to_string()))?;
    if best_cost >= INF {
        return Err(Error::Internal(
            "no feasible layered path despite twin-freeness".to_string(),
        ));
    }

    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    for layer in (0..=n_blocks).rev() {
        chosen.extend(layers[layer][best].intervals.iter().copied());
        if layer > 0 {
            let (prev, cover) = &back[layer - 1][best];
            chosen.extend(cover.iter().copied());
            best = *prev;
        }
    }
    for g in &deco.group_ranges {
        chosen.insert(g.left_interval);
        chosen.insert(g.right_interval);
    }

    let chosen_pruned: Vec<usize> = chosen.into_iter().collect();
    let chosen = codes::to_original_indices(&pruned, &chosen_pruned);
    codes::require_disc_code(&Instance::OneD(instance.clone()), &chosen)?;
    let n_references = deco.group_ranges.len();
    if chosen.len() > best_cost + 2 * n_references {
        return Err(Error::Internal(format!(
            "solution size {} exceeds path weight {} plus coverage pairs {}",
            chosen.len(),
            best_cost,
            2 * n_references
        )));
    }
    Ok(PtasSolution {
        path_weight: best_cost,
        n_references,
        final_size: chosen.len(),
        chosen,
    })
}

/// Reduce a continuous unit-interval problem to a discrete one: one
/// candidate unit interval per distinct point-containment signature of a
/// sliding unit window. Coordinates (and the scale) are doubled so window
/// positions fall strictly between the doubled point coordinates.
pub fn continuous_to_discrete_1d(scale: Coord, points: &[Coord]) -> Instance1d {
    let unit = 2 * scale;
    let pts: Vec<Coord> = points.iter().map(|&p| 2 * p).collect();
    // The window [t, t+unit] changes its containment set when t crosses
    // p - unit or p.
    let mut critical: Vec<Coord> = pts.iter().flat_map(|&p| [p - unit, p]).collect();
    critical.sort_unstable();
    critical.dedup();
    let mut intervals = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for w in critical.windows(2) {
        let (u, v) = (w[0], w[1]);
        let mut t = u + (v - u) / 2;
        if t % 2 == 0 {
            t += 1;
        }
        debug_assert!(u < t && t < v);
        let sig: Vec<usize> = pts
            .iter()
            .enumerate()
            .filter(|&(_, &p)| t <= p && p <= t + unit)
            .map(|(i, _)| i)
            .collect();
        if sig.is_empty() || !seen.insert(sig) {
            continue;
        }
        intervals.push((t, t + unit));
    }
    Instance1d {
        scale: unit,
        points: pts,
        intervals,
    }
}
