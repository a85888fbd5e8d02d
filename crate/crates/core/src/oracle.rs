//! Brute-force exact solvers used as ground truth by the acceptance suite.
//!
//! All three oracles reduce to minimum set cover: a candidate object/point
//! "covers" the constraints it satisfies (cover a point, separate a pair,
//! hit a rectangle). The search is iterative deepening over the subset size,
//! and within a size budget a depth-first search that always branches on the
//! constraint with the fewest remaining candidates and abandons a partial
//! choice as soon as some constraint has no candidate left.

use std::time::{Duration, Instant};

use crate::bits::Bits;
use crate::codes::{self, square_contains, DiscCheck};
use crate::error::{Error, Result, Witness};
use crate::geom::{self, Rect};
use crate::instance::{Coord, Instance};

#[derive(Debug, Clone)]
pub struct OracleBudget {
    pub max_candidates: usize,
    pub max_subset_size: usize,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_candidates: 4096,
            max_subset_size: 12,
            time_limit: Duration::from_secs(60),
        }
    }
}

impl OracleBudget {
    /// Default budget, with the time limit overridable through
    /// `DISC_ORACLE_BUDGET_SECS`.
    pub fn from_env() -> Self {
        let mut budget = OracleBudget::default();
        if let Ok(v) = std::env::var("DISC_ORACLE_BUDGET_SECS") {
            if let Ok(secs) = v.parse::<u64>() {
                budget.time_limit = Duration::from_secs(secs);
            }
        }
        budget
    }

    pub fn with_max_size(mut self, k: usize) -> Self {
        self.max_subset_size = k;
        self
    }
}

#[derive(Debug)]
enum CoverFailure {
    /// Element index no candidate can satisfy.
    Uncoverable(usize),
    Budget,
}

struct CoverSearch<'a> {
    covers: &'a [Bits],
    by_element: Vec<Vec<usize>>,
    deadline: Instant,
    nodes: u64,
}

impl<'a> CoverSearch<'a> {
    fn tick(&mut self) -> std::result::Result<(), CoverFailure> {
        self.nodes += 1;
        if self.nodes % 4096 == 0 && Instant::now() > self.deadline {
            return Err(CoverFailure::Budget);
        }
        Ok(())
    }

    fn dfs(
        &mut self,
        uncovered: &Bits,
        banned: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        budget: usize,
    ) -> std::result::Result<bool, CoverFailure> {
        self.tick()?;
        if uncovered.is_empty() {
            return Ok(true);
        }
        if budget == 0 {
            return Ok(false);
        }
        // Branch on the uncovered element with the fewest live candidates.
        let mut best: Option<(usize, usize)> = None;
        for e in uncovered.ones() {
            let live = self.by_element[e].iter().filter(|&&c| !banned[c]).count();
            if best.map_or(true, |(cnt, _)| live < cnt) {
                best = Some((live, e));
                if live == 0 {
                    break;
                }
            }
        }
        let (live, element) = best.expect("uncovered set is nonempty");
        if live == 0 {
            return Ok(false);
        }
        let options: Vec<usize> = self.by_element[element]
            .iter()
            .copied()
            .filter(|&c| !banned[c])
            .collect();
        let mut newly_banned = Vec::new();
        let mut found = false;
        for c in options {
            let mut rest = uncovered.clone();
            rest.subtract(&self.covers[c]);
            chosen.push(c);
            if self.dfs(&rest, banned, chosen, budget - 1)? {
                found = true;
                break;
            }
            chosen.pop();
            // Solutions containing `c` are exhausted; exclude it below.
            banned[c] = true;
            newly_banned.push(c);
        }
        if !found {
            for c in newly_banned {
                banned[c] = false;
            }
        }
        Ok(found)
    }
}

/// Remove candidates whose cover set is contained in another candidate's
/// (ties keep the lower index). Preserves the optimal cover size.
fn dominant_candidates(covers: &[Bits]) -> Vec<usize> {
    let mut kept = Vec::new();
    'outer: for (i, ci) in covers.iter().enumerate() {
        for (j, cj) in covers.iter().enumerate() {
            if i == j {
                continue;
            }
            if ci.is_subset_of(cj) && (ci != cj || j < i) {
                continue 'outer;
            }
        }
        kept.push(i);
    }
    kept
}

fn min_cover(
    n_elements: usize,
    covers: &[Bits],
    lower_bound: usize,
    budget: &OracleBudget,
    reduce: bool,
) -> std::result::Result<Vec<usize>, CoverFailure> {
    if n_elements == 0 {
        return Ok(Vec::new());
    }
    if covers.len() > budget.max_candidates {
        return Err(CoverFailure::Budget);
    }
    for e in 0..n_elements {
        if !covers.iter().any(|c| c.get(e)) {
            return Err(CoverFailure::Uncoverable(e));
        }
    }
    let kept: Vec<usize> = if reduce {
        dominant_candidates(covers)
    } else {
        (0..covers.len()).collect()
    };
    let reduced: Vec<Bits> = kept.iter().map(|&i| covers[i].clone()).collect();
    let mut by_element = vec![Vec::new(); n_elements];
    for (c, cover) in reduced.iter().enumerate() {
        for e in cover.ones() {
            by_element[e].push(c);
        }
    }
    let mut search = CoverSearch {
        covers: &reduced,
        by_element,
        deadline: Instant::now() + budget.time_limit,
        nodes: 0,
    };
    let all = Bits::all_set(n_elements);
    let top = reduced.len().min(budget.max_subset_size);
    for k in lower_bound.max(1)..=top {
        let mut banned = vec![false; reduced.len()];
        let mut chosen = Vec::new();
        if search.dfs(&all, &mut banned, &mut chosen, k)? {
            let mut sol: Vec<usize> = chosen.into_iter().map(|c| kept[c]).collect();
            sol.sort_unstable();
            return Ok(sol);
        }
    }
    // The full candidate set is a cover, so running out of sizes means the
    // subset-size budget stopped us, not infeasibility.
    Err(CoverFailure::Budget)
}

/// Reference enumerator: visit every size-`k` candidate subset in
/// lexicographic order (no pruning) and report how many were visited plus
/// the first one covering all elements. Exists so tests can certify that
/// levels below the optimum are exhausted.
pub fn enumerate_level(n_elements: usize, covers: &[Bits], k: usize) -> (u64, Option<Vec<usize>>) {
    fn rec(
        covers: &[Bits],
        start: usize,
        left: usize,
        stack: &mut Vec<usize>,
        uncovered: &Bits,
        visited: &mut u64,
        found: &mut Option<Vec<usize>>,
    ) {
        if left == 0 {
            *visited += 1;
            if found.is_none() && uncovered.is_empty() {
                *found = Some(stack.clone());
            }
            return;
        }
        for c in start..covers.len() {
            // still enough candidates to fill the subset?
            if covers.len() - c < left {
                break;
            }
            stack.push(c);
            let mut rest = uncovered.clone();
            rest.subtract(&covers[c]);
            rec(covers, c + 1, left - 1, stack, &rest, visited, found);
            stack.pop();
        }
    }
    let mut visited = 0;
    let mut found = None;
    let mut stack = Vec::new();
    rec(
        covers,
        0,
        k,
        &mut stack,
        &Bits::all_set(n_elements),
        &mut visited,
        &mut found,
    );
    (visited, found)
}

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // offset of row i in the strictly-upper-triangular enumeration
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// ceil(log2(x)) for x >= 1.
pub fn ceil_log2(x: usize) -> usize {
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// Minimum-size discriminating code by exhaustive search. Deepening starts
/// at the information-theoretic bound ceil(log2(n+1)): n points need that
/// many objects for distinct nonempty codes.
pub fn min_disc_code_exact(instance: &Instance, budget: &OracleBudget) -> Result<Vec<usize>> {
    let n = instance.n_points();
    let m = instance.n_objects();
    if n == 0 {
        return Ok(Vec::new());
    }
    match codes::check_twin_free(instance) {
        DiscCheck::Valid => {}
        check => {
            return Err(Error::infeasible_with(
                check.witness().unwrap(),
                "instance is not twin-free",
            ))
        }
    }
    let n_elements = n + pair_count(n);
    let mut covers = Vec::with_capacity(m);
    for obj in 0..m {
        let mut bits = Bits::new(n_elements);
        let contained: Vec<bool> = (0..n).map(|p| codes::contains(instance, obj, p)).collect();
        for (p, &inside) in contained.iter().enumerate() {
            if inside {
                bits.set(p);
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if contained[i] != contained[j] {
                    bits.set(n + pair_index(n, i, j));
                }
            }
        }
        covers.push(bits);
    }
    let lower = ceil_log2(n + 1);
    let sol = min_cover(n_elements, &covers, lower, budget, true).map_err(|e| match e {
        CoverFailure::Budget => Error::BudgetExceeded("exact disc-code search".to_string()),
        CoverFailure::Uncoverable(e) if e < n => Error::infeasible(Witness::Point(e)),
        CoverFailure::Uncoverable(e) => {
            let (i, j) = unpair(n, e - n);
            Error::infeasible(Witness::Pair(i, j))
        }
    })?;
    debug_assert!(sol.len() >= lower);
    debug_assert!(codes::is_disc_code(instance, &sol).is_valid());
    Ok(sol)
}

fn unpair(n: usize, mut idx: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - i - 1;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
    }
    unreachable!("pair index out of range")
}

/// Minimum subset of `candidates` hitting every rectangle.
pub fn min_hitting_set_exact(
    rects: &[Rect],
    candidates: &[(Coord, Coord)],
    budget: &OracleBudget,
) -> Result<Vec<usize>> {
    if rects.is_empty() {
        return Ok(Vec::new());
    }
    let covers: Vec<Bits> = candidates
        .iter()
        .map(|&q| {
            let mut b = Bits::new(rects.len());
            for (r, rect) in rects.iter().enumerate() {
                if rect.contains(q) {
                    b.set(r);
                }
            }
            b
        })
        .collect();
    min_cover(rects.len(), &covers, 1, budget, true).map_err(|e| match e {
        CoverFailure::Budget => Error::BudgetExceeded("exact hitting-set search".to_string()),
        CoverFailure::Uncoverable(r) => {
            Error::infeasible_with(Witness::Object(r), "rectangle contains no candidate")
        }
    })
}

fn stab_covers(
    scale: Coord,
    points: &[(Coord, Coord)],
    candidates: &[(Coord, Coord)],
) -> Vec<Bits> {
    let n = points.len();
    candidates
        .iter()
        .map(|&q| {
            let contained: Vec<bool> = points
                .iter()
                .map(|&p| square_contains(scale, q, p))
                .collect();
            let mut b = Bits::new(pair_count(n));
            for i in 0..n {
                for j in (i + 1)..n {
                    if contained[i] != contained[j] {
                        b.set(pair_index(n, i, j));
                    }
                }
            }
            b
        })
        .collect()
}

fn min_stab_over(
    scale: Coord,
    points: &[(Coord, Coord)],
    candidates: &[(Coord, Coord)],
    budget: &OracleBudget,
) -> Result<Vec<usize>> {
    let n = points.len();
    if n < 2 {
        return Ok(Vec::new());
    }
    let covers = stab_covers(scale, points, candidates);
    min_cover(pair_count(n), &covers, 1, budget, true).map_err(|e| match e {
        CoverFailure::Budget => Error::BudgetExceeded("exact stabbing search".to_string()),
        CoverFailure::Uncoverable(e) => {
            let (i, j) = unpair(n, e);
            Error::infeasible_with(Witness::Pair(i, j), "no candidate separates this pair")
        }
    })
}

/// Minimum subset of the given square centers such that every point pair has
/// a square containing exactly one of the two. Returns candidate indices.
pub fn min_stab_exact_discrete(
    scale: Coord,
    points: &[(Coord, Coord)],
    candidates: &[(Coord, Coord)],
    budget: &OracleBudget,
) -> Result<Vec<usize>> {
    min_stab_over(scale, points, candidates, budget)
}

#[derive(Debug, Clone)]
pub struct StabCenters {
    /// Chosen centers in working coordinates.
    pub centers: Vec<(Coord, Coord)>,
    /// Scale of the working coordinates (instance scale times
    /// [`geom::WORK_FACTOR`]).
    pub work_scale: Coord,
}

/// Continuous variant: candidate centers are generated from the arrangement
/// of the unit squares around the input points (one odd-coordinate
/// representative per arrangement cell), then the exact search runs over
/// them.
pub fn min_stab_exact_continuous(
    scale: Coord,
    points: &[(Coord, Coord)],
    budget: &OracleBudget,
) -> Result<StabCenters> {
    let work_scale = scale * geom::WORK_FACTOR;
    let pts: Vec<(Coord, Coord)> = points
        .iter()
        .map(|&(x, y)| (x * geom::WORK_FACTOR, y * geom::WORK_FACTOR))
        .collect();
    let squares: Vec<Rect> = pts.iter().map(|&p| Rect::square(work_scale, p)).collect();
    let cs = geom::candidate_points(&squares, &squares);
    let chosen = min_stab_over(work_scale, &pts, &cs.points, budget)?;
    Ok(StabCenters {
        centers: chosen.into_iter().map(|i| cs.points[i]).collect(),
        work_scale,
    })
}

/// Do the chosen squares stab every point pair (contain exactly one end)?
pub fn stabs_all_pairs(
    scale: Coord,
    points: &[(Coord, Coord)],
    centers: &[(Coord, Coord)],
) -> bool {
    let n = points.len();
    (0..n).all(|i| {
        ((i + 1)..n).all(|j| {
            centers.iter().any(|&c| {
                square_contains(scale, c, points[i]) != square_contains(scale, c, points[j])
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance1d;

    fn inst1(points: Vec<Coord>, intervals: Vec<(Coord, Coord)>) -> Instance {
        Instance::OneD(Instance1d {
            scale: 4,
            points,
            intervals,
        })
    }

    #[test]
    fn pair_index_roundtrip() {
        let n = 7;
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                assert_eq!(pair_index(n, i, j), k);
                assert_eq!(unpair(n, k), (i, j));
                k += 1;
            }
        }
        assert_eq!(k, pair_count(n));
    }

    #[test]
    fn log_bound() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
    }

    #[test]
    fn two_intervals_for_three_points() {
        // lower bound ceil(log2(4)) = 2 is met
        let inst = inst1(vec![4, 8, 12], vec![(2, 10), (6, 14)]);
        let sol = min_disc_code_exact(&inst, &OracleBudget::default()).unwrap();
        assert_eq!(sol.len(), 2);
    }

    #[test]
    fn non_twin_free_is_infeasible() {
        let inst = inst1(vec![4, 8], vec![(0, 12)]);
        match min_disc_code_exact(&inst, &OracleBudget::default()) {
            Err(Error::Infeasible {
                witness: Witness::Pair(0, 1),
                ..
            }) => {}
            other => panic!("expected infeasible pair, got {other:?}"),
        }
    }

    #[test]
    fn budget_exceeded_is_distinct() {
        let inst = inst1(
            vec![4, 8, 12, 16],
            vec![(2, 5), (2, 10), (6, 14), (10, 18), (6, 18)],
        );
        let tight = OracleBudget::default().with_max_size(1);
        match min_disc_code_exact(&inst, &tight) {
            Err(Error::BudgetExceeded(_)) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn oracle_matches_plain_enumeration() {
        let inst = inst1(
            vec![4, 8, 12, 16],
            vec![(2, 5), (2, 10), (6, 14), (10, 18), (6, 18), (3, 13)],
        );
        let sol = min_disc_code_exact(&inst, &OracleBudget::default()).unwrap();
        // rebuild the cover structure and exhaust every smaller level
        let n = 4;
        let m = 6;
        let n_elements = n + pair_count(n);
        let covers: Vec<Bits> = (0..m)
            .map(|obj| {
                let contained: Vec<bool> = (0..n).map(|p| codes::contains(&inst, obj, p)).collect();
                let mut b = Bits::new(n_elements);
                for (p, &c) in contained.iter().enumerate() {
                    if c {
                        b.set(p);
                    }
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        if contained[i] != contained[j] {
                            b.set(n + pair_index(n, i, j));
                        }
                    }
                }
                b
            })
            .collect();
        fn binomial(m: usize, k: usize) -> u64 {
            let mut r = 1u64;
            for i in 0..k {
                r = r * (m - i) as u64 / (i + 1) as u64;
            }
            r
        }
        for k in 0..sol.len() {
            let (visited, found) = enumerate_level(n_elements, &covers, k);
            assert_eq!(visited, binomial(m, k), "level {k} not exhausted");
            assert!(found.is_none(), "level {k} should have no solution");
        }
        let (_, found) = enumerate_level(n_elements, &covers, sol.len());
        assert!(found.is_some());
    }

    #[test]
    fn hitting_set_basics() {
        let rects = vec![Rect::new(0, 10, 0, 10)];
        let cands = vec![(1, 1), (5, 5), (9, 9)];
        assert_eq!(
            min_hitting_set_exact(&rects, &cands, &OracleBudget::default())
                .unwrap()
                .len(),
            1
        );
        let disjoint = vec![Rect::new(0, 4, 0, 4), Rect::new(10, 14, 0, 4)];
        let cands = vec![(2, 2), (12, 2)];
        assert_eq!(
            min_hitting_set_exact(&disjoint, &cands, &OracleBudget::default())
                .unwrap()
                .len(),
            2
        );
        let unhittable = vec![Rect::new(20, 24, 20, 24)];
        assert!(min_hitting_set_exact(&unhittable, &cands, &OracleBudget::default()).is_err());
    }

    #[test]
    fn hitting_set_matches_full_enumeration() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..20 {
            let rects: Vec<Rect> = (0..8)
                .map(|_| {
                    let x1 = rng.gen_range(0..30);
                    let y1 = rng.gen_range(0..30);
                    Rect::new(x1, x1 + rng.gen_range(2..12), y1, y1 + rng.gen_range(2..12))
                })
                .collect();
            let cands: Vec<(Coord, Coord)> = (0..12)
                .map(|_| (rng.gen_range(0..40), rng.gen_range(0..40)))
                .collect();
            let covers: Vec<Bits> = cands
                .iter()
                .map(|&q| {
                    let mut b = Bits::new(rects.len());
                    for (r, rect) in rects.iter().enumerate() {
                        if rect.contains(q) {
                            b.set(r);
                        }
                    }
                    b
                })
                .collect();
            if (0..rects.len()).any(|r| !covers.iter().any(|c| c.get(r))) {
                continue; // some rectangle is unhittable; oracle would error
            }
            let fast = min_hitting_set_exact(&rects, &cands, &OracleBudget::default()).unwrap();
            // smallest k with a covering subset, over all C(12, k) subsets
            let mut brute = None;
            for k in 0..=cands.len() {
                let (_, found) = enumerate_level(rects.len(), &covers, k);
                if found.is_some() {
                    brute = Some(k);
                    break;
                }
            }
            assert_eq!(fast.len(), brute.unwrap());
        }
    }

    #[test]
    fn stabbing_matches_full_enumeration() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let scale = 4;
        let mut tested = 0;
        while tested < 12 {
            let mut pts = std::collections::BTreeSet::new();
            while pts.len() < 6 {
                pts.insert((rng.gen_range(-8..8), rng.gen_range(-8..8)));
            }
            let points: Vec<(Coord, Coord)> = pts.into_iter().collect();
            let sol = min_stab_exact_continuous(scale, &points, &OracleBudget::default()).unwrap();
            // rebuild the candidate set and exhaust subsets by size
            let work: Vec<(Coord, Coord)> = points
                .iter()
                .map(|&(x, y)| (x * geom::WORK_FACTOR, y * geom::WORK_FACTOR))
                .collect();
            let squares: Vec<Rect> = work
                .iter()
                .map(|&p| Rect::square(scale * geom::WORK_FACTOR, p))
                .collect();
            let cs = geom::candidate_points(&squares, &squares);
            let covers = stab_covers(scale * geom::WORK_FACTOR, &work, &cs.points);
            let mut brute = None;
            for k in 0..=sol.centers.len() {
                let (_, found) = enumerate_level(pair_count(6), &covers, k);
                if found.is_some() {
                    brute = Some(k);
                    break;
                }
            }
            assert_eq!(sol.centers.len(), brute.unwrap());
            tested += 1;
        }
    }

    #[test]
    fn stab_far_pair_needs_one_square() {
        let sol =
            min_stab_exact_continuous(4, &[(0, 0), (12, 12)], &OracleBudget::default()).unwrap();
        assert_eq!(sol.centers.len(), 1);
    }

    #[test]
    fn stab_transformed_path_needs_two() {
        // collinear diagonal points one unit apart in both axes
        let sol = min_stab_exact_continuous(4, &[(0, 0), (4, 4), (8, 8)], &OracleBudget::default())
            .unwrap();
        assert_eq!(sol.centers.len(), 2);
        assert!(stabs_all_pairs(
            sol.work_scale,
            &[(0, 0), (16, 16), (32, 32)],
            &sol.centers
        ));
    }
}
