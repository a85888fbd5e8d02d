//! Hardness-gadget instance generators: 3-SAT with at most two occurrences
//! per literal maps to 1D interval instances, and grid graphs map to 2D
//! unit-square instances, both with witness translators back to the source
//! problem.
//!
//! Every gadget occupies a fixed 32-unit frame with hard-coded slot
//! positions, so generated instances are byte-stable. Variable frames come
//! first, then clause frames. Inside a frame:
//!
//! ```text
//! covering intervals  I=[1,9]  J=[3,13]  K=[5,31]
//! covering points     p1=2  p2=4  p3=6  p4=10
//! variable points     15 18 21 24 27
//! variable intervals  x0=[16,22]  !x0=[19,25]; occurrence starts
//!                     x1@20 x2@26 !x1@17 !x2@23, ends in clause frames
//! clause points       16 24, occurrence ends at slots 17..23
//! ```

use std::collections::BTreeSet;

use crate::codes::{self, square_contains, DiscCheck};
use crate::error::{Error, Result};
use crate::instance::{Coord, Instance, Instance1d, Instance2d};

pub const FRAME: Coord = 32;

/// Literal: variable index plus polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }
}

/// 3-SAT formula where every clause has at most three literals, every
/// literal occurs at most twice, and every literal occurs at least once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula3Sat2l {
    pub n_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Formula3Sat2l {
    pub fn new(n_vars: usize, clauses: Vec<Vec<Lit>>) -> Result<Self> {
        let f = Formula3Sat2l { n_vars, clauses };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let mut occurrences = vec![[0usize; 2]; self.n_vars];
        for (c, clause) in self.clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::Input(format!("clause {} is empty", c + 1)));
            }
            if clause.len() > 3 {
                return Err(Error::Input(format!(
                    "clause {} has {} literals; at most 3 allowed",
                    c + 1,
                    clause.len()
                )));
            }
            for lit in clause {
                if lit.var >= self.n_vars {
                    return Err(Error::Input(format!(
                        "clause {} references variable {} beyond the declared {}",
                        c + 1,
                        lit.var + 1,
                        self.n_vars
                    )));
                }
                let slot = &mut occurrences[lit.var][lit.positive as usize];
                *slot += 1;
                if *slot > 2 {
                    return Err(Error::Input(format!(
                        "literal {}{} occurs more than twice (third time in clause {})",
                        if lit.positive { "" } else { "-" },
                        lit.var + 1,
                        c + 1
                    )));
                }
            }
        }
        for (v, occ) in occurrences.iter().enumerate() {
            for (pol, &count) in occ.iter().enumerate() {
                if count == 0 {
                    return Err(Error::Input(format!(
                        "literal {}{} never occurs; fix the variable and simplify instead",
                        if pol == 1 { "" } else { "-" },
                        v + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|clause| clause.iter().any(|lit| assignment[lit.var] == lit.positive))
    }

    /// Occurrence clauses of a literal, in clause order, with multiplicity.
    fn occurrences(&self, lit: Lit) -> Vec<usize> {
        let mut out = Vec::new();
        for (c, clause) in self.clauses.iter().enumerate() {
            for l in clause {
                if *l == lit {
                    out.push(c);
                }
            }
        }
        out
    }
}

/// Parse DIMACS CNF text.
pub fn parse_cnf(text: &str) -> Result<Formula3Sat2l> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let mut it = rest.split_whitespace();
            if it.next() != Some("cnf") {
                return Err(Error::Input(format!(
                    "line {}: expected 'p cnf <vars> <clauses>'",
                    lineno + 1
                )));
            }
            let n = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Input(format!("line {}: bad var count", lineno + 1)))?;
            let m = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Input(format!("line {}: bad clause count", lineno + 1)))?;
            header = Some((n, m));
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::Input(format!("line {}: bad literal '{tok}'", lineno + 1)))?;
            if v == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(Lit {
                    var: (v.unsigned_abs() as usize) - 1,
                    positive: v > 0,
                });
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let (n, m) = header.ok_or_else(|| Error::Input("missing 'p cnf' header".to_string()))?;
    if clauses.len() != m {
        return Err(Error::Input(format!(
            "header declares {m} clauses but {} were found",
            clauses.len()
        )));
    }
    Formula3Sat2l::new(n, clauses)
}

/// Indices of a covering gadget's pieces in the generated instance.
#[derive(Debug, Clone)]
pub struct CoveringGadget {
    /// Interval indices of I, J, K.
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// Point indices of p1..p4.
    pub points: [usize; 4],
}

#[derive(Debug, Clone)]
pub struct VarIntervals {
    /// Interval indices of the positive literal's `[I0, I1, I2]`.
    pub pos: [usize; 3],
    /// Same for the negative literal.
    pub neg: [usize; 3],
}

#[derive(Debug, Clone)]
pub struct GadgetLayout {
    pub n_vars: usize,
    pub n_clauses: usize,
    /// Variable gadgets first, then clause gadgets.
    pub covering: Vec<CoveringGadget>,
    /// Per variable, the point indices of its five middle points.
    pub var_points: Vec<[usize; 5]>,
    /// Per clause, the point indices of the pair that a true literal's
    /// interval must separate.
    pub clause_points: Vec<(usize, usize)>,
    pub var_intervals: Vec<VarIntervals>,
    /// Pairs not separated by the covering intervals alone.
    pub critical_pairs: Vec<(usize, usize)>,
}

impl GadgetLayout {
    /// All covering-gadget intervals (the forced part of every solution).
    pub fn covering_intervals(&self) -> Vec<usize> {
        self.covering.iter().flat_map(|g| [g.i, g.j, g.k]).collect()
    }
}

// Frame-local geometry.
const COVER_I: (Coord, Coord) = (1, 9);
const COVER_J: (Coord, Coord) = (3, 13);
const COVER_K: (Coord, Coord) = (5, 31);
const COVER_POINTS: [Coord; 4] = [2, 4, 6, 10];
const VAR_POINTS: [Coord; 5] = [15, 18, 21, 24, 27];
const VAR_POS0: (Coord, Coord) = (16, 22);
const VAR_NEG0: (Coord, Coord) = (19, 25);
const VAR_POS_STARTS: [Coord; 2] = [20, 26];
const VAR_NEG_STARTS: [Coord; 2] = [17, 23];
const CLAUSE_PAIR: (Coord, Coord) = (16, 24);
const CLAUSE_SLOT0: Coord = 17;

/// Build the 1D instance of a formula: one variable gadget per variable,
/// one clause gadget per clause, and per literal occurrence an interval from
/// the variable frame ending between the occurrence clause's point pair. A
/// single-occurrence literal sends both of its intervals into the same
/// clause. The generated instance is audited before being returned.
pub fn sat_to_1d(formula: &Formula3Sat2l) -> Result<(Instance1d, GadgetLayout)> {
    formula.validate()?;
    let n = formula.n_vars;
    let m = formula.clauses.len();
    let var_off = |v: usize| FRAME * v as Coord;
    let clause_off = |c: usize| FRAME * (n + c) as Coord;

    let mut points: Vec<Coord> = Vec::new();
    let mut intervals: Vec<(Coord, Coord)> = Vec::new();
    let mut covering = Vec::new();
    let mut var_points = Vec::new();
    let mut clause_points = Vec::new();

    // Clause end slots, assigned in deterministic literal order.
    let mut next_slot: Vec<Coord> = vec![CLAUSE_SLOT0; m];
    let end_coord = |c: usize, next_slot: &mut Vec<Coord>| -> Coord {
        let coord = clause_off(c) + next_slot[c];
        next_slot[c] += 1;
        debug_assert!(next_slot[c] <= CLAUSE_PAIR.1);
        coord
    };

    let push_covering = |off: Coord,
                         points: &mut Vec<Coord>,
                         intervals: &mut Vec<(Coord, Coord)>|
     -> CoveringGadget {
        let base_pt = points.len();
        for p in COVER_POINTS {
            points.push(off + p);
        }
        let base_iv = intervals.len();
        intervals.push((off + COVER_I.0, off + COVER_I.1));
        intervals.push((off + COVER_J.0, off + COVER_J.1));
        intervals.push((off + COVER_K.0, off + COVER_K.1));
        CoveringGadget {
            i: base_iv,
            j: base_iv + 1,
            k: base_iv + 2,
            points: [base_pt, base_pt + 1, base_pt + 2, base_pt + 3],
        }
    };

    let mut var_intervals = Vec::new();
    for v in 0..n {
        let off = var_off(v);
        covering.push(push_covering(off, &mut points, &mut intervals));
        let base_pt = points.len();
        for p in VAR_POINTS {
            points.push(off + p);
        }
        var_points.push([base_pt, base_pt + 1, base_pt + 2, base_pt + 3, base_pt + 4]);

        let occurrence_ends = |occ: &[usize], next_slot: &mut Vec<Coord>| -> [Coord; 2] {
            match occ {
                [c] => {
                    let first = end_coord(*c, next_slot);
                    let second = end_coord(*c, next_slot);
                    [first, second]
                }
                [c1, c2] => [end_coord(*c1, next_slot), end_coord(*c2, next_slot)],
                _ => unreachable!("validated occurrence counts"),
            }
        };
        let pos_ends = occurrence_ends(&formula.occurrences(Lit::pos(v)), &mut next_slot);
        let neg_ends = occurrence_ends(&formula.occurrences(Lit::neg(v)), &mut next_slot);

        let base_iv = intervals.len();
        intervals.push((off + VAR_POS0.0, off + VAR_POS0.1));
        intervals.push((off + VAR_POS_STARTS[0], pos_ends[0]));
        intervals.push((off + VAR_POS_STARTS[1], pos_ends[1]));
        intervals.push((off + VAR_NEG0.0, off + VAR_NEG0.1));
        intervals.push((off + VAR_NEG_STARTS[0], neg_ends[0]));
        intervals.push((off + VAR_NEG_STARTS[1], neg_ends[1]));
        var_intervals.push(VarIntervals {
            pos: [base_iv, base_iv + 1, base_iv + 2],
            neg: [base_iv + 3, base_iv + 4, base_iv + 5],
        });
    }
    for c in 0..m {
        let off = clause_off(c);
        covering.push(push_covering(off, &mut points, &mut intervals));
        let base_pt = points.len();
        points.push(off + CLAUSE_PAIR.0);
        points.push(off + CLAUSE_PAIR.1);
        clause_points.push((base_pt, base_pt + 1));
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| points[i]);
    debug_assert!(order.windows(2).all(|w| points[w[0]] < points[w[1]]));
    // Frames are laid out left to right and filled in ascending coordinate
    // order, so points are already sorted.
    debug_assert_eq!(order, (0..points.len()).collect::<Vec<_>>());

    let instance = Instance1d {
        scale: 1,
        points,
        intervals,
    };
    let mut layout = GadgetLayout {
        n_vars: n,
        n_clauses: m,
        covering,
        var_points,
        clause_points,
        var_intervals,
        critical_pairs: Vec::new(),
    };
    audit(&instance, &mut layout)?;
    Ok((instance, layout))
}

// Generator self-audit: the instance must be twin-free, each covering
// gadget's points must need all of I, J, K, and the pairs left open by the
// covering intervals must be exactly the variable-gadget point pairs and the
// clause pairs.
fn audit(instance: &Instance1d, layout: &mut GadgetLayout) -> Result<()> {
    let wrapped = Instance::OneD(instance.clone());
    match codes::check_twin_free(&wrapped) {
        DiscCheck::Valid => {}
        check => {
            return Err(Error::Internal(format!(
                "generated instance is not twin-free: {:?}",
                check.witness()
            )))
        }
    }
    let all: Vec<usize> = (0..instance.intervals.len()).collect();
    for g in &layout.covering {
        for drop in [g.i, g.j, g.k] {
            let chosen: Vec<usize> = all.iter().copied().filter(|&iv| iv != drop).collect();
            let collision = g.points.iter().enumerate().any(|(a, &p)| {
                g.points.iter().skip(a + 1).any(|&q| {
                    codes::code_of(&wrapped, &chosen, p) == codes::code_of(&wrapped, &chosen, q)
                })
            });
            if !collision {
                return Err(Error::Internal(format!(
                    "dropping covering interval {drop} leaves its gadget separated"
                )));
            }
        }
    }

    let cover_set = layout.covering_intervals();
    let mut open_pairs = BTreeSet::new();
    let n_pts = instance.points.len();
    let point_codes: Vec<Vec<u32>> = (0..n_pts)
        .map(|p| codes::code_of(&wrapped, &cover_set, p))
        .collect();
    for i in 0..n_pts {
        for j in (i + 1)..n_pts {
            if point_codes[i] == point_codes[j] {
                open_pairs.insert((i, j));
            }
        }
    }
    let mut expected = BTreeSet::new();
    for pts in &layout.var_points {
        for a in 0..5 {
            for b in (a + 1)..5 {
                expected.insert((pts[a], pts[b]));
            }
        }
    }
    for &(p, q) in &layout.clause_points {
        expected.insert((p, q));
    }
    if open_pairs != expected {
        return Err(Error::Internal(
            "critical pairs differ from the expected variable and clause pairs".to_string(),
        ));
    }
    layout.critical_pairs = open_pairs.into_iter().collect();
    Ok(())
}

/// The code a satisfying assignment induces: all covering intervals plus,
/// per variable, the three intervals of its assigned polarity. Always has
/// size `6n + 3m`.
pub fn assignment_code(layout: &GadgetLayout, assignment: &[bool]) -> Vec<usize> {
    let mut chosen = layout.covering_intervals();
    for (v, &value) in assignment.iter().enumerate() {
        let vi = &layout.var_intervals[v];
        let side = if value { &vi.pos } else { &vi.neg };
        chosen.extend_from_slice(side);
    }
    chosen.sort_unstable();
    chosen
}

/// Read a satisfying assignment back out of a discriminating code of size
/// exactly `6n + 3m`: the polarity whose base interval survives wins, and
/// when both base intervals are present the third interval of the gadget
/// decides. The extracted assignment is re-verified against the formula.
pub fn extract_assignment(
    formula: &Formula3Sat2l,
    layout: &GadgetLayout,
    instance: &Instance1d,
    code: &[usize],
) -> Result<Vec<bool>> {
    let expected = 6 * layout.n_vars + 3 * layout.n_clauses;
    if code.len() != expected {
        return Err(Error::Input(format!(
            "code has size {}, extraction needs exactly {expected}",
            code.len()
        )));
    }
    let wrapped = Instance::OneD(instance.clone());
    if let Some(w) = codes::is_disc_code(&wrapped, code).witness() {
        return Err(Error::Input(format!("code is not discriminating: {w}")));
    }
    let chosen: BTreeSet<usize> = code.iter().copied().collect();
    for iv in layout.covering_intervals() {
        if !chosen.contains(&iv) {
            return Err(Error::Input(format!(
                "code of the required size must contain covering interval {iv}"
            )));
        }
    }
    let mut assignment = Vec::with_capacity(layout.n_vars);
    for (v, vi) in layout.var_intervals.iter().enumerate() {
        let picked: Vec<usize> = vi
            .pos
            .iter()
            .chain(&vi.neg)
            .copied()
            .filter(|iv| chosen.contains(iv))
            .collect();
        if picked.len() != 3 {
            return Err(Error::Input(format!(
                "variable gadget {v} contributes {} intervals instead of 3",
                picked.len()
            )));
        }
        let has_pos0 = chosen.contains(&vi.pos[0]);
        let has_neg0 = chosen.contains(&vi.neg[0]);
        let value = match (has_pos0, has_neg0) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => chosen.contains(&vi.pos[1]) || chosen.contains(&vi.pos[2]),
            (false, false) => {
                return Err(Error::Input(format!(
                    "variable gadget {v} lacks both base intervals"
                )))
            }
        };
        assignment.push(value);
    }
    if !formula.is_satisfied_by(&assignment) {
        return Err(Error::Internal(
            "extracted assignment does not satisfy the formula".to_string(),
        ));
    }
    Ok(assignment)
}

/// Grid graph: vertices on the integer grid, edges between vertices at
/// Euclidean distance one.
#[derive(Debug, Clone)]
pub struct GridGraph {
    pub vertices: Vec<(Coord, Coord)>,
}

impl GridGraph {
    pub fn new(vertices: Vec<(Coord, Coord)>) -> Result<Self> {
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("grid vertices must be distinct".to_string()));
        }
        Ok(GridGraph { vertices })
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                let (a, b) = (self.vertices[i], self.vertices[j]);
                if (a.0 - b.0).abs() + (a.1 - b.1).abs() == 1 {
                    edges.push((i, j));
                }
            }
        }
        edges
    }
}

/// Map a grid graph to a 2D point set: rotate by 45 degrees and scale by
/// sqrt(2), i.e. (x, y) -> (x-y, x+y), then double everything so the
/// discrete variant's edge-midpoint squares have integer centers. With the
/// `discrete` flag the square set holds one unit square per grid edge,
/// centered between the edge's transformed endpoints.
pub fn grid_to_2d(grid: &GridGraph, discrete: bool) -> Result<Instance2d> {
    let points: Vec<(Coord, Coord)> = grid
        .vertices
        .iter()
        .map(|&(x, y)| (2 * (x - y), 2 * (x + y)))
        .collect();
    let squares = if discrete {
        let centers: Vec<(Coord, Coord)> = grid
            .edges()
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (points[i], points[j]);
                ((a.0 + b.0) / 2, (a.1 + b.1) / 2)
            })
            .collect();
        if centers.is_empty() {
            return Err(Error::Input(
                "grid graph has no edges; the discrete square set would be empty".to_string(),
            ));
        }
        Some(centers)
    } else {
        None
    };
    let inst = Instance2d {
        scale: 2,
        points,
        squares,
    };
    inst.validate()?;
    // A unit square holds two transformed points only for grid edges, and
    // never three: the transform turns Euclidean neighbors into L-infinity
    // neighbors.
    let edges: BTreeSet<(usize, usize)> = grid.edges().into_iter().collect();
    for i in 0..inst.points.len() {
        for j in (i + 1)..inst.points.len() {
            let (a, b) = (inst.points[i], inst.points[j]);
            let linf = (a.0 - b.0).abs().max((a.1 - b.1).abs());
            let coverable = linf <= inst.scale;
            if coverable != edges.contains(&(i, j)) {
                return Err(Error::Internal(format!(
                    "pair ({i},{j}) breaks the edge/coverable correspondence"
                )));
            }
        }
    }
    Ok(inst)
}

/// Recover a partition into 3-vertex paths from a discriminating code of
/// size `2|V|/3`: every chosen square must cover exactly one grid edge, and
/// the chosen edges must tile the vertices into paths of two edges.
pub fn extract_p3_partition(
    scale: Coord,
    points: &[(Coord, Coord)],
    centers: &[(Coord, Coord)],
) -> Result<Vec<[usize; 3]>> {
    let n = points.len();
    if n % 3 != 0 || centers.len() != 2 * n / 3 {
        return Err(Error::Input(format!(
            "need exactly 2|V|/3 = {} squares for {} points, got {}",
            2 * n / 3,
            n,
            centers.len()
        )));
    }
    let mut adjacency = vec![Vec::new(); n];
    for (s, &c) in centers.iter().enumerate() {
        let covered: Vec<usize> = (0..n)
            .filter(|&p| square_contains(scale, c, points[p]))
            .collect();
        if covered.len() != 2 {
            return Err(Error::Input(format!(
                "square {s} covers {} points instead of 2",
                covered.len()
            )));
        }
        adjacency[covered[0]].push(covered[1]);
        adjacency[covered[1]].push(covered[0]);
    }
    let mut used = vec![false; n];
    let mut paths = Vec::new();
    for v in 0..n {
        if used[v] || adjacency[v].len() != 1 {
            continue;
        }
        // endpoint of a path: walk to the other end
        let mid = adjacency[v][0];
        if adjacency[mid].len() != 2 {
            return Err(Error::Input(format!(
                "vertex {mid} has degree {} in the chosen edges",
                adjacency[mid].len()
            )));
        }
        let other = if adjacency[mid][0] == v {
            adjacency[mid][1]
        } else {
            adjacency[mid][0]
        };
        if adjacency[other].len() != 1 || used[mid] || used[other] {
            return Err(Error::Input(
                "chosen edges do not decompose into 3-vertex paths".to_string(),
            ));
        }
        used[v] = true;
        used[mid] = true;
        used[other] = true;
        paths.push([v, mid, other]);
    }
    if used.iter().any(|&u| !u) {
        return Err(Error::Input(
            "some vertex is not part of any 3-vertex path".to_string(),
        ));
    }
    Ok(paths)
}
