//! 2-factor approximation for 1D discriminating codes with arbitrary
//! intervals: minimum edge cover on the gap graph, point classification, and
//! greedy augmentation.

use std::collections::{BTreeSet, HashMap};

use crate::codes::{self, gap_signature, DiscCheck};
use crate::error::{Error, Result, Witness};
use crate::instance::{Instance, Instance1d};
use crate::matching;

/// Graph on gaps; one edge per interval. `a == b` is allowed only for the
/// restricted graphs built by the unit-interval solver, where an interval may
/// discriminate a single surviving gap.
#[derive(Debug, Clone)]
pub struct GapGraph {
    pub n_vertices: usize,
    pub edges: Vec<GapEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapEdge {
    pub a: usize,
    pub b: usize,
    /// Index of the interval this edge stands for.
    pub interval: usize,
}

/// Build the gap graph of a pruned instance: vertex per gap, edge per
/// interval between the gaps holding its endpoints. Rejects unpruned input
/// (loops mean useless intervals survived, duplicate gap pairs mean
/// redundant ones did).
pub fn build_gap_graph(pruned: &Instance1d) -> Result<GapGraph> {
    let points = &pruned.points;
    let n_vertices = points.len() + 1;
    let mut seen = HashMap::new();
    let mut edges = Vec::with_capacity(pruned.intervals.len());
    for (i, &iv) in pruned.intervals.iter().enumerate() {
        let (a, b) = gap_signature(points, iv);
        if a == b {
            return Err(Error::Input(format!(
                "interval {i} is useless (covers no point); prune the instance first"
            )));
        }
        if let Some(prev) = seen.insert((a, b), i) {
            return Err(Error::Input(format!(
                "intervals {prev} and {i} are redundant (same gap pair); prune the instance first"
            )));
        }
        edges.push(GapEdge { a, b, interval: i });
    }
    Ok(GapGraph { n_vertices, edges })
}

#[derive(Debug, Clone)]
pub struct EdgeCover {
    /// Indices into `graph.edges`.
    pub edges: Vec<usize>,
    pub matching_size: usize,
}

/// Maximum matching over the graph's two-endpoint edges, as vertex mates.
pub fn max_matching(graph: &GapGraph) -> Vec<Option<usize>> {
    let simple: Vec<(usize, usize)> = graph
        .edges
        .iter()
        .filter(|e| e.a != e.b)
        .map(|e| (e.a, e.b))
        .collect();
    matching::max_matching(graph.n_vertices, &simple)
}

/// Minimum edge cover: a maximum matching plus, for every unmatched vertex,
/// the incident edge with the smallest interval index. Size is
/// `|V| - matching`. Errors with the gap index if some vertex is isolated.
pub fn min_edge_cover(graph: &GapGraph) -> Result<EdgeCover> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); graph.n_vertices];
    for (idx, e) in graph.edges.iter().enumerate() {
        incident[e.a].push(idx);
        if e.a != e.b {
            incident[e.b].push(idx);
        }
    }
    for (v, inc) in incident.iter().enumerate() {
        if inc.is_empty() {
            return Err(Error::infeasible_with(
                Witness::Gap(v),
                "no interval endpoint in this gap",
            ));
        }
    }
    let mate = max_matching(graph);
    let matching_size = matching::matching_size(&mate);

    // Lowest interval index per vertex pair, for deterministic edge recovery.
    let mut best_pair: HashMap<(usize, usize), usize> = HashMap::new();
    for (idx, e) in graph.edges.iter().enumerate() {
        let key = (e.a.min(e.b), e.a.max(e.b));
        let slot = best_pair.entry(key).or_insert(idx);
        if graph.edges[*slot].interval > e.interval {
            *slot = idx;
        }
    }

    let mut cover = BTreeSet::new();
    for v in 0..graph.n_vertices {
        match mate[v] {
            Some(u) if u > v => {
                cover.insert(best_pair[&(v, u)]);
            }
            Some(_) => {}
            None => {
                let edge = incident[v]
                    .iter()
                    .copied()
                    .min_by_key(|&idx| graph.edges[idx].interval)
                    .expect("isolated vertices rejected above");
                cover.insert(edge);
            }
        }
    }
    let cover: Vec<usize> = cover.into_iter().collect();
    debug_assert_eq!(cover.len(), graph.n_vertices - matching_size);
    Ok(EdgeCover {
        edges: cover,
        matching_size,
    })
}

/// Classes of points under the codes induced by a chosen interval set:
/// uniquely coded points, uncovered points, and groups sharing a nonempty
/// code.
#[derive(Debug, Clone)]
pub struct PointClassification {
    pub unique: Vec<usize>,
    /// Q0: points with empty code.
    pub uncovered: Vec<usize>,
    /// Q1..Qk: same nonempty code, each of size >= 2.
    pub classes: Vec<Vec<usize>>,
    /// Counting lower bound on any set discriminating all consecutive pairs:
    /// sum of (class size - 1) over all classes incl. Q0, plus one.
    pub lower_bound: usize,
}

/// Classify points by their codes under `chosen` (indices into
/// `inst.intervals`). Requires that `chosen` discriminates every consecutive
/// pair, which edge-cover output does by construction.
pub fn classify_points(inst: &Instance1d, chosen: &[usize]) -> Result<PointClassification> {
    let n = inst.points.len();
    let wrapped = Instance::OneD(inst.clone());
    let codes: Vec<Vec<u32>> = (0..n)
        .map(|p| codes::code_of(&wrapped, chosen, p))
        .collect();
    for i in 1..n {
        if codes[i - 1] == codes[i] {
            return Err(Error::Internal(format!(
                "chosen set does not discriminate consecutive pair ({}, {})",
                i - 1,
                i
            )));
        }
    }
    let mut by_code: HashMap<&[u32], Vec<usize>> = HashMap::new();
    for (p, code) in codes.iter().enumerate() {
        by_code.entry(code.as_slice()).or_default().push(p);
    }
    let mut unique = Vec::new();
    let mut uncovered = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (code, members) in by_code {
        if code.is_empty() {
            uncovered = members;
        } else if members.len() == 1 {
            unique.push(members[0]);
        } else {
            classes.push(members);
        }
    }
    unique.sort_unstable();
    uncovered.sort_unstable();
    classes.iter_mut().for_each(|c| c.sort_unstable());
    classes.sort();

    // Members of one class are never consecutive, and class spans are
    // pairwise disjoint or nested.
    for class in classes.iter().chain(std::iter::once(&uncovered)) {
        if class.windows(2).any(|w| w[1] == w[0] + 1) {
            return Err(Error::Internal(
                "class contains consecutive points".to_string(),
            ));
        }
    }
    let spans: Vec<(usize, usize, &Vec<usize>)> = classes
        .iter()
        .chain(std::iter::once(&uncovered))
        .filter(|c| c.len() >= 2)
        .map(|c| (c[0], *c.last().unwrap(), c))
        .collect();
    for (i, &(lo1, hi1, c1)) in spans.iter().enumerate() {
        for &(lo2, hi2, c2) in spans.iter().skip(i + 1) {
            let disjoint = hi1 < lo2 || hi2 < lo1;
            if disjoint {
                continue;
            }
            let nested_12 = c1.windows(2).any(|w| w[0] < lo2 && hi2 < w[1]);
            let nested_21 = c2.windows(2).any(|w| w[0] < lo1 && hi1 < w[1]);
            if !nested_12 && !nested_21 {
                return Err(Error::Internal(format!(
                    "class spans [{lo1},{hi1}] and [{lo2},{hi2}] overlap without nesting"
                )));
            }
        }
    }

    let lower_bound =
        classes.iter().map(|c| c.len() - 1).sum::<usize>() + uncovered.len().saturating_sub(1) + 1;
    Ok(PointClassification {
        unique,
        uncovered,
        classes,
        lower_bound,
    })
}

fn colliding_pairs(codes: &[Vec<u32>]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..codes.len() {
        for j in (i + 1)..codes.len() {
            if codes[i] == codes[j] {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Extend `chosen` until every point has a distinct nonempty code. Per
/// class, one interval is charged per fixed collision, so at most
/// `|Qi| - 1` additions happen for class `Qi`, plus at most one interval to
/// cover a final uncovered point.
pub fn augment(
    inst: &Instance1d,
    chosen: &[usize],
    classification: &PointClassification,
) -> Result<Vec<usize>> {
    let n = inst.points.len();
    let m = inst.intervals.len();
    let wrapped = Instance::OneD(inst.clone());
    let mut current: BTreeSet<usize> = chosen.iter().copied().collect();
    let mut codes: Vec<Vec<u32>> = (0..n)
        .map(|p| codes::code_of(&wrapped, &current.iter().copied().collect::<Vec<_>>(), p))
        .collect();

    let covers = |iv: usize, p: usize| codes::interval_contains(inst.intervals[iv], inst.points[p]);
    let discriminates = |iv: usize, a: usize, b: usize| covers(iv, a) != covers(iv, b);

    let mut all_classes: Vec<&Vec<usize>> = Vec::new();
    if classification.uncovered.len() >= 2 {
        all_classes.push(&classification.uncovered);
    }
    all_classes.extend(classification.classes.iter());

    for class in all_classes {
        let budget = class.len() - 1;
        let mut additions = 0usize;
        loop {
            let class_collision = class.iter().enumerate().find_map(|(i, &a)| {
                class[i + 1..]
                    .iter()
                    .find(|&&b| codes[a] == codes[b])
                    .map(|&b| (a, b))
            });
            let Some((a, b)) = class_collision else { break };
            if additions >= budget {
                return Err(Error::Internal(format!(
                    "augmentation exceeded its per-class budget of {budget}"
                )));
            }
            // Among intervals fixing (a, b), prefer the one that fixes the
            // most collisions overall; ties go to the lowest index.
            let open_pairs = colliding_pairs(&codes);
            let pick = (0..m)
                .filter(|iv| !current.contains(iv) && discriminates(*iv, a, b))
                .max_by_key(|&iv| {
                    let fixed = open_pairs
                        .iter()
                        .filter(|&&(x, y)| discriminates(iv, x, y))
                        .count();
                    (fixed, std::cmp::Reverse(iv))
                });
            let Some(iv) = pick else {
                return Err(Error::infeasible_with(
                    Witness::Pair(a, b),
                    "no interval discriminates this pair",
                ));
            };
            current.insert(iv);
            for (p, code) in codes.iter_mut().enumerate() {
                if covers(iv, p) {
                    code.push(iv as u32);
                    code.sort_unstable();
                }
            }
            additions += 1;
        }
    }

    let uncovered: Vec<usize> = (0..n).filter(|&p| codes[p].is_empty()).collect();
    if uncovered.len() > 1 {
        return Err(Error::Internal(format!(
            "{} uncovered points remain after discrimination",
            uncovered.len()
        )));
    }
    if let Some(&p) = uncovered.first() {
        let iv = (0..m)
            .find(|&iv| !current.contains(&iv) && covers(iv, p))
            .ok_or_else(|| {
                Error::infeasible_with(Witness::Point(p), "no interval covers this point")
            })?;
        current.insert(iv);
    }

    let result: Vec<usize> = current.into_iter().collect();
    if result.len() > 2 * chosen.len().max(1) {
        return Err(Error::Internal(format!(
            "augmented solution of size {} exceeds twice the edge cover size {}",
            result.len(),
            chosen.len()
        )));
    }
    Ok(result)
}

/// Solution of the edge-cover pipeline with its certificate numbers.
#[derive(Debug, Clone)]
pub struct Approx2Solution {
    /// Indices into the original (unpruned) interval list.
    pub chosen: Vec<usize>,
    pub s_prime: usize,
    pub lemma3_bound: usize,
    pub final_size: usize,
}

/// Full pipeline: prune, gap graph, minimum edge cover, classification,
/// augmentation. The certificate carries the edge-cover size (a lower bound
/// on OPT), the classification counting bound, and the final size.
pub fn approx2(instance: &Instance1d) -> Result<Approx2Solution> {
    if instance.points.is_empty() {
        return Ok(Approx2Solution {
            chosen: Vec::new(),
            s_prime: 0,
            lemma3_bound: 0,
            final_size: 0,
        });
    }
    let pruned = crate::codes::prune_1d(instance);
    match codes::check_twin_free(&Instance::OneD(pruned.instance.clone())) {
        DiscCheck::Valid => {}
        check => {
            return Err(Error::infeasible_with(
                check.witness().unwrap(),
                "instance is not twin-free",
            ))
        }
    }
    let graph = build_gap_graph(&pruned.instance)?;
    let cover = min_edge_cover(&graph)?;
    let s_prime: Vec<usize> = cover
        .edges
        .iter()
        .map(|&e| graph.edges[e].interval)
        .collect();
    let classification = classify_points(&pruned.instance, &s_prime)?;
    if s_prime.len() < classification.lower_bound {
        return Err(Error::Internal(format!(
            "edge cover of size {} beats the classification lower bound {}",
            s_prime.len(),
            classification.lower_bound
        )));
    }
    let final_pruned = augment(&pruned.instance, &s_prime, &classification)?;
    let chosen = codes::to_original_indices(&pruned, &final_pruned);
    codes::require_disc_code(&Instance::OneD(instance.clone()), &chosen)?;
    Ok(Approx2Solution {
        s_prime: s_prime.len(),
        lemma3_bound: classification.lower_bound,
        final_size: chosen.len(),
        chosen,
    })
}

/// Every consecutive pair must be separated by some chosen interval holding
/// exactly one of the two points. Used by tests and the acceptance suite.
pub fn discriminates_consecutive_pairs(inst: &Instance1d, chosen: &[usize]) -> bool {
    (1..inst.points.len()).all(|i| {
        chosen.iter().any(|&iv| {
            codes::interval_contains(inst.intervals[iv], inst.points[i - 1])
                != codes::interval_contains(inst.intervals[iv], inst.points[i])
        })
    })
}
