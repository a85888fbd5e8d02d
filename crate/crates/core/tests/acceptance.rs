//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (run with `--nocapture` to see them). Criterion 10
//! (benchmark determinism) lives in the CLI crate next to the bench code.

use std::time::{Duration, Instant};

use disc_core::codes::{self, DiscCheck};
use disc_core::cont2d;
use disc_core::disc2d;
use disc_core::edgecover::{self, GapEdge, GapGraph};
use disc_core::gen;
use disc_core::geom::{self, Rect};
use disc_core::instance::{Coord, Instance, Instance1d};
use disc_core::matching;
use disc_core::oracle::{self, ceil_log2, OracleBudget};
use disc_core::ptas;
use disc_core::reductions::{self, Formula3Sat2l, GridGraph, Lit};

use rand::prelude::*;

fn pass(criterion: usize, elapsed: Duration, limit_secs: u64, details: &str) {
    assert!(
        elapsed <= Duration::from_secs(limit_secs),
        "criterion {criterion} exceeded its {limit_secs}s budget: {elapsed:?}"
    );
    println!("acceptance criterion {criterion}: PASS in {elapsed:?} ({details})");
}

fn wide_budget(max_size: usize) -> OracleBudget {
    OracleBudget::default().with_max_size(max_size)
}

// Twin-free by the definition: full-set codes, pairwise comparison.
fn twin_free_by_definition(inst: &Instance) -> bool {
    let n = inst.n_points();
    let all: Vec<usize> = (0..inst.n_objects()).collect();
    let codes: Vec<Vec<u32>> = (0..n).map(|p| codes::code_of(inst, &all, p)).collect();
    codes.iter().all(|c| !c.is_empty())
        && (0..n).all(|i| ((i + 1)..n).all(|j| codes[i] != codes[j]))
}

#[test]
fn criterion_01_twin_free_equivalence() {
    let start = Instant::now();
    let mut rng = gen::rng(101);
    let mut free = 0usize;
    for _ in 0..200 {
        let inst = Instance::OneD(gen::random_1d(&mut rng, 12, 20));
        let fast = codes::check_twin_free(&inst).is_valid();
        let slow = twin_free_by_definition(&inst);
        assert_eq!(fast, slow, "twin-free verdicts disagree on {inst:?}");
        free += fast as usize;
    }
    pass(
        1,
        start.elapsed(),
        1,
        &format!("200 instances, {free} twin-free"),
    );
}

#[test]
fn criterion_02_two_approx_soundness() {
    let start = Instant::now();
    let mut rng = gen::rng(202);
    let mut worst = 0.0f64;
    for round in 0..100 {
        let inst = gen::random_twin_free_1d(&mut rng, 12, 18);
        let sol = edgecover::approx2(&inst).unwrap();
        assert!(
            codes::is_disc_code(&Instance::OneD(inst.clone()), &sol.chosen).is_valid(),
            "round {round}: invalid output"
        );
        assert!(
            sol.s_prime >= sol.lemma3_bound,
            "round {round}: |S'|={} below the classification bound {}",
            sol.s_prime,
            sol.lemma3_bound
        );
        let m = inst.intervals.len();
        let opt = oracle::min_disc_code_exact(&Instance::OneD(inst), &wide_budget(m))
            .unwrap()
            .len();
        assert!(
            sol.s_prime <= opt,
            "round {round}: edge cover {} exceeds OPT {opt}",
            sol.s_prime
        );
        assert!(
            sol.final_size <= 2 * opt,
            "round {round}: final {} exceeds 2*OPT={}",
            sol.final_size,
            2 * opt
        );
        worst = worst.max(sol.final_size as f64 / opt as f64);
    }
    pass(
        2,
        start.elapsed(),
        30,
        &format!("100 instances, worst ratio {worst:.3}"),
    );
}

#[test]
fn criterion_03_edge_cover_correctness() {
    let start = Instant::now();
    let mut rng = gen::rng(303);
    let mut done = 0usize;
    while done < 50 {
        let (n, edges) = gen::random_graph(&mut rng, 10);
        // edge cover needs no isolated vertices
        let mut covered = vec![false; n];
        for &(u, v) in &edges {
            covered[u] = true;
            covered[v] = true;
        }
        if !covered.iter().all(|&c| c) {
            continue;
        }
        let graph = GapGraph {
            n_vertices: n,
            edges: edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| GapEdge { a, b, interval: i })
                .collect(),
        };
        let mate = edgecover::max_matching(&graph);
        let nu = matching::matching_size(&mate);
        assert_eq!(
            nu,
            matching::max_matching_exhaustive(n, &edges),
            "matching not maximum on {edges:?}"
        );
        let cover = edgecover::min_edge_cover(&graph).unwrap();
        assert_eq!(cover.edges.len(), n - nu, "Gallai identity violated");
        let mut touched = vec![false; n];
        for &e in &cover.edges {
            touched[graph.edges[e].a] = true;
            touched[graph.edges[e].b] = true;
        }
        assert!(touched.iter().all(|&t| t), "cover misses a vertex");
        done += 1;
    }
    pass(
        3,
        start.elapsed(),
        30,
        "50 graphs, Gallai + maximality hold",
    );
}

#[test]
fn criterion_04_unit_interval_ptas() {
    let start = Instant::now();
    let eps = 0.5;
    let mut rng = gen::rng(404);
    let mut worst = 0.0f64;
    for round in 0..50 {
        let inst = gen::random_twin_free_unit_1d(&mut rng, 12, 16);
        let sol = ptas::ptas_solve(&inst, eps).unwrap();
        assert!(
            codes::is_disc_code(&Instance::OneD(inst.clone()), &sol.chosen).is_valid(),
            "round {round}: invalid output"
        );
        let m = inst.intervals.len();
        let opt = oracle::min_disc_code_exact(&Instance::OneD(inst), &wide_budget(m))
            .unwrap()
            .len();
        assert!(
            sol.final_size as f64 <= (1.0 + eps) * opt as f64 + 1e-9,
            "round {round}: size {} beats (1+eps)*OPT with OPT={opt}",
            sol.final_size
        );
        worst = worst.max(sol.final_size as f64 / opt as f64);
    }

    // Covering plus separating consecutive pairs implies a full code for
    // unit intervals: property-check on random candidate subsets.
    let mut rng = gen::rng(405);
    let mut exercised = 0usize;
    for round in 0..200 {
        // twin-free instances so that dense subsets regularly satisfy the
        // coverage + consecutive-separation precondition
        let inst = gen::random_twin_free_unit_1d(&mut rng, 10, 14);
        let m = inst.intervals.len();
        let keep = if round % 2 == 0 { 0.9 } else { 0.65 };
        let subset: Vec<usize> = (0..m).filter(|_| rng.gen_bool(keep)).collect();
        let covers_all = (0..inst.points.len()).all(|p| {
            subset
                .iter()
                .any(|&iv| codes::interval_contains(inst.intervals[iv], inst.points[p]))
        });
        if covers_all && edgecover::discriminates_consecutive_pairs(&inst, &subset) {
            exercised += 1;
            assert!(
                codes::is_disc_code(&Instance::OneD(inst), &subset).is_valid(),
                "consecutive separation + coverage did not give a full code"
            );
        }
    }
    assert!(
        exercised >= 20,
        "property check exercised only {exercised} subsets"
    );
    pass(
        4,
        start.elapsed(),
        60,
        &format!("50 solves, worst ratio {worst:.3}; property held on {exercised} subsets"),
    );
}

// All clause sets over n variables with 1..=3 distinct literals.
fn all_clauses(n: usize) -> Vec<Vec<Lit>> {
    let lits: Vec<Lit> = (0..n).flat_map(|v| [Lit::pos(v), Lit::neg(v)]).collect();
    let mut out = Vec::new();
    for a in 0..lits.len() {
        out.push(vec![lits[a]]);
        for b in (a + 1)..lits.len() {
            out.push(vec![lits[a], lits[b]]);
            for c in (b + 1)..lits.len() {
                out.push(vec![lits[a], lits[b], lits[c]]);
            }
        }
    }
    out
}

// Multisets of m clause indices (non-decreasing sequences).
fn clause_multisets(count: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        start: usize,
        count: usize,
        left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..count {
            cur.push(i);
            rec(i, count, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(0, count, m, &mut cur, &mut out);
    out
}

fn satisfiable(f: &Formula3Sat2l) -> bool {
    (0..(1u32 << f.n_vars)).any(|mask| {
        let assignment: Vec<bool> = (0..f.n_vars).map(|v| mask & (1 << v) != 0).collect();
        f.is_satisfied_by(&assignment)
    })
}

#[test]
fn criterion_05_sat_reduction_fidelity() {
    let start = Instant::now();
    let mut n_sat = 0usize;
    let mut n_unsat = 0usize;
    for n in 1..=3usize {
        let clauses = all_clauses(n);
        for m in 1..=3usize {
            for multiset in clause_multisets(clauses.len(), m) {
                let formula =
                    Formula3Sat2l::new(n, multiset.iter().map(|&c| clauses[c].clone()).collect());
                let Ok(formula) = formula else { continue };
                let bound = 6 * n + 3 * m;
                let (inst, layout) = reductions::sat_to_1d(&formula).unwrap();
                let wrapped = Instance::OneD(inst.clone());
                if satisfiable(&formula) {
                    n_sat += 1;
                    let sol = oracle::min_disc_code_exact(&wrapped, &wide_budget(bound))
                        .unwrap_or_else(|e| {
                            panic!("oracle failed on satisfiable formula {formula:?}: {e}")
                        });
                    assert_eq!(
                        sol.len(),
                        bound,
                        "optimum differs from 6n+3m for {formula:?}"
                    );
                    let assignment =
                        reductions::extract_assignment(&formula, &layout, &inst, &sol).unwrap();
                    assert!(formula.is_satisfied_by(&assignment));
                } else {
                    n_unsat += 1;
                    // exhausting every size up to the bound must fail...
                    match oracle::min_disc_code_exact(&wrapped, &wide_budget(bound)) {
                        Err(disc_core::Error::BudgetExceeded(_)) => {}
                        other => panic!(
                            "unsatisfiable formula {formula:?} got a code at the bound: {other:?}"
                        ),
                    }
                    // ...and the true optimum sits strictly above it
                    if n == 1 {
                        let sol =
                            oracle::min_disc_code_exact(&wrapped, &wide_budget(bound + 4)).unwrap();
                        assert!(sol.len() > bound);
                    }
                }
            }
        }
    }
    assert!(n_unsat >= 1, "enumeration found no unsatisfiable formula");
    pass(
        5,
        start.elapsed(),
        120,
        &format!("{n_sat} satisfiable + {n_unsat} unsatisfiable formulas"),
    );
}

#[test]
fn criterion_06_grid_reduction_fidelity() {
    let start = Instant::now();
    let grids: Vec<(usize, Vec<(Coord, Coord)>)> = vec![
        (3, vec![(0, 0), (1, 0), (2, 0)]),
        (
            6,
            (0..3).flat_map(|x| (0..2).map(move |y| (x, y))).collect(),
        ),
        (
            9,
            (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).collect(),
        ),
    ];
    for (v, vertices) in grids {
        let grid = GridGraph::new(vertices).unwrap();
        let inst = reductions::grid_to_2d(&grid, true).unwrap();
        // no unit square can hold three transformed points: any three with
        // pairwise L-infinity distance <= scale would fit in one square
        let pts = &inst.points;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                for k in (j + 1)..pts.len() {
                    let linf = |a: (Coord, Coord), b: (Coord, Coord)| {
                        (a.0 - b.0).abs().max((a.1 - b.1).abs())
                    };
                    let fits = linf(pts[i], pts[j]) <= inst.scale
                        && linf(pts[i], pts[k]) <= inst.scale
                        && linf(pts[j], pts[k]) <= inst.scale;
                    assert!(!fits, "three points fit one unit square: {i},{j},{k}");
                }
            }
        }
        let bound = 2 * v / 3;
        let sol = oracle::min_disc_code_exact(&Instance::TwoD(inst.clone()), &wide_budget(bound))
            .unwrap();
        assert_eq!(sol.len(), bound, "|V|={v}: oracle differs from 2|V|/3");
        let centers: Vec<(Coord, Coord)> = sol
            .iter()
            .map(|&s| inst.squares.as_ref().unwrap()[s])
            .collect();
        let paths = reductions::extract_p3_partition(inst.scale, &inst.points, &centers).unwrap();
        assert_eq!(paths.len(), v / 3);
        let mut seen: Vec<usize> = paths.iter().flatten().copied().collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..v).collect::<Vec<_>>());
    }
    pass(
        6,
        start.elapsed(),
        60,
        "|V| in {3,6,9}: bound, partition, square capacity",
    );
}

#[test]
fn criterion_07_continuous_2d_pipeline() {
    let start = Instant::now();
    let eps = 0.5;
    let mut rng = gen::rng(707);
    let mut worst = 0.0f64;
    let mut pipeline_runs = 0usize;
    for round in 0..50 {
        let points = gen::random_points_2d(&mut rng, 7);
        let scale = 4;
        let sol = cont2d::continuous_disc_code(scale, &points, eps, 3).unwrap();
        pipeline_runs += (!sol.certificate.used_fallback) as usize;
        // exact stabbing check over the working coordinates
        let work: Vec<(Coord, Coord)> = points
            .iter()
            .map(|&(x, y)| (x * geom::WORK_FACTOR, y * geom::WORK_FACTOR))
            .collect();
        if work.len() >= 2 {
            assert!(
                oracle::stabs_all_pairs(sol.work_scale, &work, &sol.centers),
                "round {round}: stabbing broken"
            );
        }
        cont2d::verify_centers(sol.work_scale, &work, &sol.centers).unwrap();
        let opt = oracle::min_stab_exact_continuous(scale, &points, &wide_budget(12))
            .unwrap()
            .centers
            .len();
        if let Some(lb) = sol.certificate.lp_lower_bound {
            assert!(
                lb <= opt as f64 + 1e-6,
                "round {round}: LP bound {lb} above the exact stabbing optimum {opt}"
            );
        }
        let limit = (4.0 + eps) * opt as f64 + 1.0;
        assert!(
            sol.centers.len() as f64 <= limit + 1e-9,
            "round {round}: size {} exceeds (4+eps)*{opt}+1",
            sol.centers.len()
        );
        if opt > 0 {
            worst = worst.max(sol.centers.len() as f64 / opt as f64);
        }
    }
    pass(
        7,
        start.elapsed(),
        120,
        &format!("50 instances ({pipeline_runs} via pipeline), worst size/OPT_stab {worst:.3}"),
    );
}

#[test]
fn criterion_08_discrete_2d_pipeline() {
    let start = Instant::now();
    let eps = 0.5;
    let mut rng = gen::rng(808);
    let mut worst = 0.0f64;
    let mut lines_checked = 0usize;
    let mut pipeline_runs = 0usize;
    for round in 0..50 {
        let inst = gen::random_twin_free_2d_discrete(&mut rng, 6, 12);
        let sol = disc2d::discrete_disc_code(&inst, eps).unwrap();
        pipeline_runs += (!sol.certificate.used_fallback) as usize;
        assert!(
            codes::is_disc_code(&Instance::TwoD(inst.clone()), &sol.chosen).is_valid(),
            "round {round}: invalid output"
        );
        let opt = oracle::min_disc_code_exact(
            &Instance::TwoD(inst.clone()),
            &wide_budget(inst.squares.as_ref().unwrap().len()),
        )
        .unwrap()
        .len();
        let ratio = sol.chosen.len() as f64 / opt.max(1) as f64;
        assert!(ratio <= 33.0, "round {round}: ratio {ratio} above 33");
        worst = worst.max(ratio);

        // per-line bound against the exact hitting oracle
        let squares = inst.squares.as_ref().unwrap();
        let (system, centers) = disc2d::reduce_to_rect_hitting(inst.scale, &inst.points, squares);
        let cands = cont2d::candidate_masks(&system, &centers);
        if let Ok(cascade) = cont2d::cascade_round(&system, &cands) {
            let families = [
                (cascade.family_a.clone(), centers.clone()),
                (
                    cascade
                        .family_b
                        .iter()
                        .map(|r| r.transpose())
                        .collect::<Vec<_>>(),
                    centers.iter().map(|&(x, y)| (y, x)).collect::<Vec<_>>(),
                ),
            ];
            for (family, cand_pts) in families {
                for line in disc2d::line_decompose(system.unit, &family, &cand_pts).unwrap() {
                    let sol_line = disc2d::solve_line(&line, &family, &cand_pts).unwrap();
                    let rects: Vec<Rect> = line.rects.iter().map(|&r| family[r]).collect();
                    let opt_line =
                        oracle::min_hitting_set_exact(&rects, &cand_pts, &wide_budget(12))
                            .unwrap()
                            .len();
                    assert!(
                        sol_line.len() <= 8 * opt_line,
                        "round {round}: line solution {} exceeds 8*{opt_line}",
                        sol_line.len()
                    );
                    lines_checked += 1;
                }
            }
        }
    }

    // staircase greedy equals the exact hitting optimum
    let mut rng = gen::rng(809);
    for round in 0..100 {
        let n_parts = rng.gen_range(1..=6);
        let parts: Vec<disc2d::Part> = (0..n_parts)
            .map(|i| disc2d::Part {
                x_from: rng.gen_range(-10..10) * 2,
                top: rng.gen_range(1..12) * 2,
                rect: i,
            })
            .collect();
        let mut cands: Vec<((Coord, Coord), usize)> = (0..rng.gen_range(1..=10))
            .map(|i| {
                (
                    (rng.gen_range(-12..14) * 2 + 1, rng.gen_range(0..14) * 2 + 1),
                    i,
                )
            })
            .collect();
        // guarantee feasibility: one candidate inside each part
        let base = cands.len();
        for (i, p) in parts.iter().enumerate() {
            cands.push(((p.x_from + 1, 1), base + i));
        }
        let chosen = disc2d::staircase_greedy(&parts, &cands, &|r| r).unwrap();
        let rects: Vec<Rect> = parts
            .iter()
            .map(|p| Rect::new(p.x_from, 1_000, 0, p.top))
            .collect();
        let pts: Vec<(Coord, Coord)> = cands.iter().map(|&(p, _)| p).collect();
        let opt = oracle::min_hitting_set_exact(&rects, &pts, &wide_budget(8))
            .unwrap()
            .len();
        assert_eq!(chosen.len(), opt, "round {round}: staircase not optimal");
    }
    pass(
        8,
        start.elapsed(),
        180,
        &format!("50 instances ({pipeline_runs} via pipeline), {lines_checked} lines within 8x, 100 staircases optimal, worst ratio {worst:.3}"),
    );
}

#[test]
fn criterion_09_lower_bound_sanity() {
    let start = Instant::now();
    let mut rng = gen::rng(909);
    let mut runs = 0usize;
    for _ in 0..40 {
        let inst = gen::random_twin_free_1d(&mut rng, 10, 14);
        let n = inst.points.len();
        let m = inst.intervals.len();
        let opt = oracle::min_disc_code_exact(&Instance::OneD(inst), &wide_budget(m))
            .unwrap()
            .len();
        assert!(opt >= ceil_log2(n + 1));
        runs += 1;
    }
    for _ in 0..40 {
        let inst = gen::random_twin_free_2d_discrete(&mut rng, 6, 10);
        let n = inst.points.len();
        let m = inst.squares.as_ref().unwrap().len();
        let opt = oracle::min_disc_code_exact(&Instance::TwoD(inst), &wide_budget(m))
            .unwrap()
            .len();
        assert!(opt >= ceil_log2(n + 1));
        runs += 1;
    }
    pass(
        9,
        start.elapsed(),
        60,
        &format!("{runs} oracle runs respect ceil(log2(n+1))"),
    );
}

// Spot checks that tie the suite to concrete expected values.

#[test]
fn oracle_examples_from_the_problem_statement() {
    // three points, two staggered intervals: the information bound 2 is met
    let inst = Instance::OneD(Instance1d {
        scale: 4,
        points: vec![4, 8, 12],
        intervals: vec![(2, 10), (6, 14)],
    });
    let sol = oracle::min_disc_code_exact(&inst, &OracleBudget::default()).unwrap();
    assert_eq!(sol.len(), 2);

    // diagonal chain at unit steps: two squares separate everything
    let stab =
        oracle::min_stab_exact_continuous(4, &[(0, 0), (4, 4), (8, 8)], &wide_budget(4)).unwrap();
    assert_eq!(stab.centers.len(), 2);
}
