//! Minimal linear-program solver for covering relaxations: minimize the sum
//! of all variables subject to constraints of the form
//! `sum(x[A]) + sum(x[B]) >= 1` with `0 <= x`.
//!
//! Upper bounds `x <= 1` are implied: capping any variable at 1 preserves
//! feasibility of such constraints and never increases the objective, so an
//! optimal basic solution already satisfies them.
//!
//! The solver is a dense two-phase primal simplex with Bland's anti-cycling
//! rule. Constraint coefficients are 0/1, so conditioning is benign at the
//! problem sizes this crate handles, and a fixed pivot order keeps runs
//! byte-reproducible.

use crate::error::{Error, Result};

/// Numeric tolerance for feasibility, optimality, and the tie band.
pub const LP_TOL: f64 = 1e-9;

/// One covering constraint: `sum over side_a + sum over side_b >= 1`.
/// One-sided constraints leave `side_b` empty.
#[derive(Debug, Clone, Default)]
pub struct CoverConstraint {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

impl CoverConstraint {
    pub fn one_sided(side_a: Vec<usize>) -> Self {
        CoverConstraint {
            side_a,
            side_b: Vec::new(),
        }
    }

    pub fn two_sided(side_a: Vec<usize>, side_b: Vec<usize>) -> Self {
        CoverConstraint { side_a, side_b }
    }

    fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.side_a.iter().chain(&self.side_b).copied()
    }
}

#[derive(Debug, Clone, Default)]
pub struct CoverLp {
    pub n_vars: usize,
    pub constraints: Vec<CoverConstraint>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    /// Per constraint: (sum over side A, sum over side B).
    pub sigma: Vec<(f64, f64)>,
}

/// Which side(s) of a constraint carry the mass after rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
    Both,
}

impl CoverLp {
    pub fn new(n_vars: usize) -> Self {
        CoverLp {
            n_vars,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, c: CoverConstraint) {
        self.constraints.push(c);
    }

    fn check(&self) -> Result<()> {
        for (i, c) in self.constraints.iter().enumerate() {
            if c.side_a.is_empty() && c.side_b.is_empty() {
                return Err(Error::infeasible_with(
                    crate::error::Witness::Object(i),
                    "covering constraint has no variables",
                ));
            }
            for v in c.variables() {
                if v >= self.n_vars {
                    return Err(Error::Input(format!(
                        "constraint {i} references variable {v} out of {}",
                        self.n_vars
                    )));
                }
            }
        }
        Ok(())
    }

    /// Plain-text dump of the initial tableau (for `--dump-lp`).
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "min sum x[0..{}]", self.n_vars).unwrap();
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![0u8; self.n_vars];
            for v in c.variables() {
                row[v] = 1;
            }
            write!(out, "r{i:<3} ").unwrap();
            for b in row {
                write!(out, "{b}").unwrap();
            }
            writeln!(out, " >= 1").unwrap();
        }
        out
    }
}

static DUMP_PATH: std::sync::Mutex<Option<std::path::PathBuf>> = std::sync::Mutex::new(None);

/// Append every subsequently solved LP's initial tableau to `path`
/// (the `--dump-lp` debug flag). `None` disables dumping.
pub fn set_dump_path(path: Option<std::path::PathBuf>) {
    *DUMP_PATH.lock().unwrap() = path;
}

fn maybe_dump(lp: &CoverLp) {
    let guard = DUMP_PATH.lock().unwrap();
    if let Some(path) = guard.as_ref() {
        use std::io::Write;
        if let Ok(mut f) = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
        {
            let _ = writeln!(f, "{}", lp.dump());
        }
    }
}

/// Solve the covering LP to optimality.
pub fn solve_lp(lp: &CoverLp) -> Result<LpSolution> {
    lp.check()?;
    maybe_dump(lp);
    let m = lp.constraints.len();
    let n = lp.n_vars;
    if m == 0 {
        return Ok(LpSolution {
            values: vec![0.0; n],
            objective: 0.0,
            sigma: Vec::new(),
        });
    }

    // Columns: n structural, m surplus, m artificial, rhs.
    let n_cols = n + 2 * m;
    let mut tab = vec![vec![0.0f64; n_cols + 1]; m];
    for (i, c) in lp.constraints.iter().enumerate() {
        for v in c.variables() {
            tab[i][v] = 1.0;
        }
        tab[i][n + i] = -1.0; // surplus
        tab[i][n + m + i] = 1.0; // artificial
        tab[i][n_cols] = 1.0; // rhs
    }
    let mut basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();

    // Phase 1: minimize the artificial sum.
    let mut cost = vec![0.0; n_cols];
    for j in (n + m)..n_cols {
        cost[j] = 1.0;
    }
    let p1 = run_simplex(&mut tab, &mut basis, &cost, n_cols)?;
    if p1 > LP_TOL {
        // Cannot happen: x = 1 everywhere is feasible for checked input.
        return Err(Error::Internal(
            "covering LP reported infeasible in phase 1".to_string(),
        ));
    }
    // Drive any leftover artificial variables out of the basis.
    for row in 0..m {
        if basis[row] >= n + m {
            let pivot_col = (0..n + m).find(|&j| tab[row][j].abs() > LP_TOL);
            match pivot_col {
                Some(col) => pivot(&mut tab, &mut basis, row, col),
                None => continue, // redundant all-zero row
            }
        }
    }

    // Phase 2: minimize the structural sum, artificials forbidden.
    let mut cost = vec![0.0; n_cols];
    for j in 0..n {
        cost[j] = 1.0;
    }
    for j in (n + m)..n_cols {
        cost[j] = f64::INFINITY; // never re-enter
    }
    let objective = run_simplex(&mut tab, &mut basis, &cost, n + m)?;

    let mut values = vec![0.0f64; n];
    for (row, &b) in basis.iter().enumerate() {
        if b < n {
            values[b] = tab[row][n_cols];
        }
    }
    let sigma: Vec<(f64, f64)> = lp
        .constraints
        .iter()
        .map(|c| {
            (
                c.side_a.iter().map(|&v| values[v]).sum(),
                c.side_b.iter().map(|&v| values[v]).sum(),
            )
        })
        .collect();
    for (i, &(s1, s2)) in sigma.iter().enumerate() {
        if s1 + s2 < 1.0 - 1e-6 {
            return Err(Error::Internal(format!(
                "LP solution violates constraint {i}: {} < 1",
                s1 + s2
            )));
        }
    }
    Ok(LpSolution {
        values,
        objective,
        sigma,
    })
}

// Minimize cost over the current tableau. `active_cols` limits the entering
// choice (used to freeze artificial columns in phase 2). Returns the
// objective value. Entering rule: lowest-index column with negative reduced
// cost; leaving rule: lowest basis index among minimum ratios (Bland).
fn run_simplex(
    tab: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    active_cols: usize,
) -> Result<f64> {
    let m = tab.len();
    let n_cols = tab[0].len() - 1;
    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Internal(
                "simplex iteration guard tripped".to_string(),
            ));
        }
        // reduced costs: c_j - c_B . B^-1 A_j
        let mut entering = None;
        for j in 0..active_cols {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost[j];
            for row in 0..m {
                let cb = cost[basis[row]];
                if cb != 0.0 && cb.is_finite() {
                    rc -= cb * tab[row][j];
                }
            }
            if rc < -LP_TOL {
                entering = Some(j);
                break;
            }
        }
        let Some(col) = entering else {
            let mut obj = 0.0;
            for row in 0..m {
                let cb = cost[basis[row]];
                if cb != 0.0 && cb.is_finite() {
                    obj += cb * tab[row][n_cols];
                }
            }
            return Ok(obj);
        };
        let mut leaving: Option<(usize, f64)> = None;
        for row in 0..m {
            if tab[row][col] > LP_TOL {
                let ratio = tab[row][n_cols] / tab[row][col];
                let better = match leaving {
                    None => true,
                    Some((lrow, lratio)) => {
                        ratio < lratio - LP_TOL
                            || (ratio < lratio + LP_TOL && basis[row] < basis[lrow])
                    }
                };
                if better {
                    leaving = Some((row, ratio));
                }
            }
        }
        let Some((row, _)) = leaving else {
            return Err(Error::Internal(
                "covering LP is unbounded, which cannot happen with nonnegative costs".to_string(),
            ));
        };
        pivot(tab, basis, row, col);
    }
}

fn pivot(tab: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let m = tab.len();
    let n_cols = tab[0].len();
    let p = tab[row][col];
    for j in 0..n_cols {
        tab[row][j] /= p;
    }
    for r in 0..m {
        if r != row && tab[r][col].abs() > 0.0 {
            let factor = tab[r][col];
            for j in 0..n_cols {
                tab[r][j] -= factor * tab[row][j];
            }
        }
    }
    basis[row] = col;
}

/// Decide which side of a two-sided constraint keeps the mass: the strict
/// winner, or both on a tie within the tolerance band. At least one side
/// always carries mass >= 1/2.
pub fn side_split(solution: &LpSolution, constraint: usize) -> Side {
    let (s1, s2) = solution.sigma[constraint];
    debug_assert!(
        s1.max(s2) >= 0.5 - LP_TOL,
        "no side reaches half the covering mass"
    );
    if (s1 - s2).abs() <= LP_TOL {
        Side::Both
    } else if s1 > s2 {
        Side::A
    } else {
        Side::B
    }
}

/// Feasibility half of the doubling argument: after choosing sides,
/// `min(2x, 1)` must satisfy every one-sided constraint that the split
/// produces. Returns the clipped doubled solution.
pub fn check_doubling(lp: &CoverLp, solution: &LpSolution) -> Result<Vec<f64>> {
    let doubled: Vec<f64> = solution
        .values
        .iter()
        .map(|&v| (2.0 * v).min(1.0))
        .collect();
    for (i, c) in lp.constraints.iter().enumerate() {
        let side = if c.side_b.is_empty() {
            Side::A
        } else {
            side_split(solution, i)
        };
        let sum_a: f64 = c.side_a.iter().map(|&v| doubled[v]).sum();
        let sum_b: f64 = c.side_b.iter().map(|&v| doubled[v]).sum();
        let ok = match side {
            Side::A => sum_a >= 1.0 - 1e-6,
            Side::B => sum_b >= 1.0 - 1e-6,
            Side::Both => sum_a >= 1.0 - 1e-6 && sum_b >= 1.0 - 1e-6,
        };
        if !ok {
            return Err(Error::Internal(format!(
                "doubled LP solution infeasible for side-split constraint {i}"
            )));
        }
    }
    Ok(doubled)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_single_constraint() {
        let mut lp = CoverLp::new(1);
        lp.push(CoverConstraint::one_sided(vec![0]));
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.values[0] - 1.0).abs() < 1e-7);
        assert!((sol.objective - 1.0).abs() < 1e-7);
    }

    #[test]
    fn disjoint_singletons_add_up() {
        let mut lp = CoverLp::new(2);
        lp.push(CoverConstraint::one_sided(vec![0]));
        lp.push(CoverConstraint::one_sided(vec![1]));
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-7);
    }

    #[test]
    fn shared_variable_halves() {
        // two constraints {0,1} and {1,2}: x1 = 1 is optimal
        let mut lp = CoverLp::new(3);
        lp.push(CoverConstraint::one_sided(vec![0, 1]));
        lp.push(CoverConstraint::one_sided(vec![1, 2]));
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-7);
    }

    #[test]
    fn fractional_optimum_on_odd_cycle() {
        // pairwise constraints over three variables force 3/2
        let mut lp = CoverLp::new(3);
        lp.push(CoverConstraint::one_sided(vec![0, 1]));
        lp.push(CoverConstraint::one_sided(vec![1, 2]));
        lp.push(CoverConstraint::one_sided(vec![0, 2]));
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.objective - 1.5).abs() < 1e-7);
    }

    #[test]
    fn empty_constraint_is_flagged() {
        let mut lp = CoverLp::new(2);
        lp.push(CoverConstraint::two_sided(vec![], vec![]));
        assert!(solve_lp(&lp).is_err());
    }

    #[test]
    fn side_split_prefers_winner() {
        let mut lp = CoverLp::new(2);
        lp.push(CoverConstraint::two_sided(vec![0], vec![1]));
        lp.push(CoverConstraint::one_sided(vec![0]));
        let sol = solve_lp(&lp).unwrap();
        // x0 = 1 satisfies both; side A wins the first constraint
        assert_eq!(side_split(&sol, 0), Side::A);
        check_doubling(&lp, &sol).unwrap();
    }

    #[test]
    fn side_split_tie_takes_both() {
        // symmetric: x0 = x1 = 1/2
        let mut lp = CoverLp::new(2);
        lp.push(CoverConstraint::two_sided(vec![0], vec![1]));
        lp.push(CoverConstraint::two_sided(vec![1], vec![0]));
        let sol = solve_lp(&lp).unwrap();
        if (sol.sigma[0].0 - sol.sigma[0].1).abs() <= LP_TOL {
            assert_eq!(side_split(&sol, 0), Side::Both);
        }
        check_doubling(&lp, &sol).unwrap();
    }

    #[test]
    fn determinism() {
        let mut lp = CoverLp::new(5);
        lp.push(CoverConstraint::two_sided(vec![0, 2], vec![1]));
        lp.push(CoverConstraint::two_sided(vec![3], vec![2, 4]));
        lp.push(CoverConstraint::one_sided(vec![1, 3]));
        let a = solve_lp(&lp).unwrap();
        let b = solve_lp(&lp).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.objective, b.objective);
    }

    #[test]
    fn dump_is_readable() {
        let mut lp = CoverLp::new(3);
        lp.push(CoverConstraint::two_sided(vec![0], vec![2]));
        let d = lp.dump();
        assert!(d.contains(">= 1"));
        assert!(d.contains("101"));
    }

    // Smallest number of variables set to one that satisfies every
    // constraint, by direct enumeration.
    fn ilp_optimum(lp: &CoverLp) -> usize {
        for k in 0..=lp.n_vars {
            let mut stack: Vec<usize> = Vec::new();
            if pick(lp, 0, k, &mut stack) {
                return k;
            }
        }
        unreachable!("all-ones is always feasible");

        fn pick(lp: &CoverLp, start: usize, left: usize, stack: &mut Vec<usize>) -> bool {
            if left == 0 {
                return lp
                    .constraints
                    .iter()
                    .all(|c| c.variables().any(|v| stack.contains(&v)));
            }
            for v in start..lp.n_vars {
                stack.push(v);
                if pick(lp, v + 1, left - 1, stack) {
                    return true;
                }
                stack.pop();
            }
            false
        }
    }

    #[test]
    fn relaxation_sits_between_ilp_and_width_fraction() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let n_vars = rng.gen_range(2..=8);
            let mut lp = CoverLp::new(n_vars);
            let mut width = 1usize;
            for _ in 0..rng.gen_range(1..=6) {
                let mut a: Vec<usize> = (0..n_vars).filter(|_| rng.gen_bool(0.4)).collect();
                if a.is_empty() {
                    a.push(rng.gen_range(0..n_vars));
                }
                let b: Vec<usize> = (0..n_vars)
                    .filter(|v| !a.contains(v) && rng.gen_bool(0.3))
                    .collect();
                width = width.max(a.len() + b.len());
                lp.push(CoverConstraint::two_sided(a, b));
            }
            let sol = solve_lp(&lp).unwrap();
            let ilp = ilp_optimum(&lp) as f64;
            assert!(sol.objective <= ilp + 1e-7, "LP above ILP");
            assert!(
                sol.objective >= ilp / width as f64 - 1e-7,
                "LP below ILP/width sanity band"
            );
        }
    }
}
