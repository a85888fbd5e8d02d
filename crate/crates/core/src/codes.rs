//! Containment predicates, code computation, the twin-free check, gap
//! bookkeeping and 1D pruning.
//!
//! Containment is closed everywhere: a point on an object's boundary is
//! inside it. The 2D square test compares `2*|x - cx| <= scale` so that a
//! half-unit never has to be materialized.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result, Witness};
use crate::instance::{Coord, Instance, Instance1d};

/// The set of chosen object indices containing a point, sorted ascending.
pub type Code = Vec<u32>;

pub fn interval_contains(interval: (Coord, Coord), x: Coord) -> bool {
    interval.0 <= x && x <= interval.1
}

/// Closed unit square centered at `center`, side length `scale`.
pub fn square_contains(scale: Coord, center: (Coord, Coord), p: (Coord, Coord)) -> bool {
    2 * (p.0 - center.0).abs() <= scale && 2 * (p.1 - center.1).abs() <= scale
}

/// Does object `obj` of the instance contain point `pt`?
pub fn contains(instance: &Instance, obj: usize, pt: usize) -> bool {
    match instance {
        Instance::OneD(inst) => interval_contains(inst.intervals[obj], inst.points[pt]),
        Instance::TwoD(inst) => {
            let squares = inst.squares.as_ref().expect("discrete 2D instance");
            square_contains(inst.scale, squares[obj], inst.points[pt])
        }
    }
}

/// Code of point `pt` under the chosen object indices.
pub fn code_of(instance: &Instance, chosen: &[usize], pt: usize) -> Code {
    let mut code: Code = chosen
        .iter()
        .filter(|&&obj| contains(instance, obj, pt))
        .map(|&obj| obj as u32)
        .collect();
    code.sort_unstable();
    code.dedup();
    code
}

/// Outcome of a discriminating-code check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscCheck {
    Valid,
    /// Some point has an empty code.
    Uncovered(usize),
    /// Two points have identical codes.
    Collision(usize, usize),
}

impl DiscCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, DiscCheck::Valid)
    }

    pub fn witness(&self) -> Option<Witness> {
        match *self {
            DiscCheck::Valid => None,
            DiscCheck::Uncovered(p) => Some(Witness::Point(p)),
            DiscCheck::Collision(i, j) => Some(Witness::Pair(i, j)),
        }
    }
}

/// True iff every point's code under `chosen` is nonempty and all codes are
/// pairwise distinct. On failure reports an uncovered point or a colliding
/// pair as witness.
pub fn is_disc_code(instance: &Instance, chosen: &[usize]) -> DiscCheck {
    let n = instance.n_points();
    let mut codes: Vec<(Code, usize)> = (0..n).map(|p| (code_of(instance, chosen, p), p)).collect();
    for (code, p) in &codes {
        if code.is_empty() {
            return DiscCheck::Uncovered(*p);
        }
    }
    // Sort by (hash, code) so equal codes land adjacent; the exact code is the
    // tiebreak, so hash collisions cannot produce false verdicts.
    let mut keyed: Vec<(u64, usize)> = codes
        .iter()
        .enumerate()
        .map(|(i, (code, _))| {
            let mut h = DefaultHasher::new();
            code.hash(&mut h);
            (h.finish(), i)
        })
        .collect();
    keyed.sort_unstable_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| codes[a.1].0.cmp(&codes[b.1].0))
            .then_with(|| codes[a.1].1.cmp(&codes[b.1].1))
    });
    for w in keyed.windows(2) {
        let (a, b) = (w[0].1, w[1].1);
        if codes[a].0 == codes[b].0 {
            let (pa, pb) = (codes[a].1, codes[b].1);
            return DiscCheck::Collision(pa.min(pb), pa.max(pb));
        }
    }
    codes.clear();
    DiscCheck::Valid
}

/// Twin-free test: equivalent to `is_disc_code` with every object chosen,
/// since supersets of a discriminating code keep codes unique.
pub fn check_twin_free(instance: &Instance) -> DiscCheck {
    let all: Vec<usize> = (0..instance.n_objects()).collect();
    is_disc_code(instance, &all)
}

/// The `n+1` open gaps between consecutive points of a sorted 1D point set,
/// indexed `0..=n`: gap 0 is left-unbounded, gap `n` right-unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapList {
    points: Vec<Coord>,
}

impl GapList {
    pub fn len(&self) -> usize {
        self.points.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false // there is always at least the unbounded gap
    }

    /// Open bounds of gap `i`; `None` encodes the unbounded side.
    pub fn bounds(&self, i: usize) -> (Option<Coord>, Option<Coord>) {
        let lo = if i == 0 {
            None
        } else {
            Some(self.points[i - 1])
        };
        let hi = if i == self.points.len() {
            None
        } else {
            Some(self.points[i])
        };
        (lo, hi)
    }
}

pub fn gaps(points: &[Coord]) -> GapList {
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
    GapList {
        points: points.to_vec(),
    }
}

/// Gap index a left interval endpoint behaves as belonging to: the interval
/// `[x, ..]` covers exactly the points at index >= this value. For
/// coordinates strictly between points this is the containing gap.
pub fn gap_of_left_endpoint(points: &[Coord], x: Coord) -> usize {
    points.partition_point(|&p| p < x)
}

/// Gap index a right interval endpoint behaves as belonging to: the interval
/// `[.., x]` covers exactly the points at index < this value.
pub fn gap_of_right_endpoint(points: &[Coord], x: Coord) -> usize {
    points.partition_point(|&p| p <= x)
}

/// Gap-pair signature of an interval: which point-index ranges it covers.
/// Two intervals with equal signatures discriminate exactly the same pairs.
pub fn gap_signature(points: &[Coord], interval: (Coord, Coord)) -> (usize, usize) {
    (
        gap_of_left_endpoint(points, interval.0),
        gap_of_right_endpoint(points, interval.1),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RemovedReason {
    /// Both endpoints in one gap: covers no point, discriminates nothing.
    Useless,
    /// Same gap pair as an earlier interval; `kept` is the one retained.
    Redundant { kept: usize },
}

/// Result of useless/redundant elimination. `kept[i]` is the original index
/// of interval `i` of the pruned instance.
#[derive(Debug, Clone)]
pub struct Pruned1d {
    pub instance: Instance1d,
    pub kept: Vec<usize>,
    pub removed: Vec<(usize, RemovedReason)>,
}

/// Remove useless intervals (both endpoints in one gap) and, among intervals
/// sharing a gap pair, keep only the lowest-index one.
pub fn prune_1d(instance: &Instance1d) -> Pruned1d {
    let points = &instance.points;
    let mut seen: std::collections::HashMap<(usize, usize), usize> =
        std::collections::HashMap::new();
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    let mut intervals = Vec::new();
    for (i, &iv) in instance.intervals.iter().enumerate() {
        let sig = gap_signature(points, iv);
        if sig.0 == sig.1 {
            removed.push((i, RemovedReason::Useless));
            continue;
        }
        match seen.get(&sig) {
            Some(&first) => removed.push((i, RemovedReason::Redundant { kept: first })),
            None => {
                seen.insert(sig, i);
                kept.push(i);
                intervals.push(iv);
            }
        }
    }
    Pruned1d {
        instance: Instance1d {
            scale: instance.scale,
            points: instance.points.clone(),
            intervals,
        },
        kept,
        removed,
    }
}

/// Sorted original-index view of a chosen set expressed in pruned indices.
pub fn to_original_indices(pruned: &Pruned1d, chosen_pruned: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = chosen_pruned.iter().map(|&i| pruned.kept[i]).collect();
    out.sort_unstable();
    out
}

/// Convenience: run `is_disc_code` and convert a failed check into an error.
pub fn require_disc_code(instance: &Instance, chosen: &[usize]) -> Result<()> {
    match is_disc_code(instance, chosen).witness() {
        None => Ok(()),
        Some(w) => Err(Error::Internal(format!(
            "solver produced an invalid code: {w}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst1(points: Vec<Coord>, intervals: Vec<(Coord, Coord)>) -> Instance {
        Instance::OneD(Instance1d {
            scale: 4,
            points,
            intervals,
        })
    }

    #[test]
    fn containment_is_closed() {
        assert!(interval_contains((0, 8), 4));
        assert!(interval_contains((0, 8), 0));
        assert!(interval_contains((0, 8), 8));
        assert!(!interval_contains((0, 8), 9));
        // scale 4: half-side is 2
        assert!(square_contains(4, (0, 0), (2, 2)));
        assert!(!square_contains(4, (0, 0), (3, 0)));
    }

    #[test]
    fn square_containment_reflection_symmetric() {
        let scale = 4;
        for &(c, p) in &[((0, 0), (2, 1)), ((1, 3), (-1, 3)), ((0, 0), (2, 2))] {
            let mirrored = (((-c.0, c.1)), ((-p.0, p.1)));
            assert_eq!(
                square_contains(scale, c, p),
                square_contains(scale, mirrored.0, mirrored.1)
            );
        }
    }

    #[test]
    fn code_of_selected_objects() {
        // points {1,2}, intervals A=[0,1.5], B=[0,3] in units (scale 4)
        let inst = inst1(vec![4, 8], vec![(0, 6), (0, 12)]);
        assert_eq!(code_of(&inst, &[0, 1], 0), vec![0, 1]);
        assert_eq!(code_of(&inst, &[0, 1], 1), vec![1]);
        assert_eq!(code_of(&inst, &[], 0), Vec::<u32>::new());
    }

    #[test]
    fn disc_code_check_examples() {
        // points {1,2,3}, intervals A=[0.5,2.5], B=[1.5,3.5] (scale 4)
        let inst = inst1(vec![4, 8, 12], vec![(2, 10), (6, 14)]);
        assert!(is_disc_code(&inst, &[0, 1]).is_valid());
        // one interval spanning both points leaves them twins
        let twins = inst1(vec![4, 8], vec![(0, 12)]);
        assert_eq!(is_disc_code(&twins, &[0]), DiscCheck::Collision(0, 1));
    }

    #[test]
    fn uncovered_point_reported() {
        let inst = inst1(vec![4, 20], vec![(0, 6)]);
        assert_eq!(is_disc_code(&inst, &[0]), DiscCheck::Uncovered(1));
        assert_eq!(check_twin_free(&inst), DiscCheck::Uncovered(1));
    }

    #[test]
    fn twin_free_matches_full_set_check() {
        let inst = inst1(vec![4, 8, 12], vec![(2, 10), (6, 14)]);
        assert!(check_twin_free(&inst).is_valid());
        let not_free = inst1(vec![4, 8], vec![(0, 12), (2, 14)]);
        assert_eq!(check_twin_free(&not_free), DiscCheck::Collision(0, 1));
    }

    #[test]
    fn gap_list_shape() {
        let g = gaps(&[4, 12]);
        assert_eq!(g.len(), 3);
        assert_eq!(g.bounds(0), (None, Some(4)));
        assert_eq!(g.bounds(1), (Some(4), Some(12)));
        assert_eq!(g.bounds(2), (Some(12), None));
        assert_eq!(gaps(&[5]).len(), 2);
        assert_eq!(gaps(&[]).len(), 1);
    }

    #[test]
    fn endpoint_gap_semantics_on_ties() {
        // A left endpoint equal to a point coordinate behaves like the gap
        // just left of the point; a right endpoint like the gap just right.
        let points = [4, 8];
        assert_eq!(gap_of_left_endpoint(&points, 4), 0);
        assert_eq!(gap_of_right_endpoint(&points, 4), 1);
        assert_eq!(gap_of_left_endpoint(&points, 5), 1);
        assert_eq!(gap_of_right_endpoint(&points, 5), 1);
    }

    #[test]
    fn prune_removes_useless_and_redundant() {
        // points {1,3,5} scale 4 => coords 4,12,20
        let inst = Instance1d {
            scale: 4,
            points: vec![4, 12, 20],
            // (3.2,4.8) => (13,19) useless; (2.5,6),(2.6,6.5) => same gap pair
            intervals: vec![(13, 19), (10, 24), (11, 26)],
        };
        let pruned = prune_1d(&inst);
        assert_eq!(pruned.kept, vec![1]);
        assert_eq!(pruned.removed[0], (0, RemovedReason::Useless));
        assert_eq!(pruned.removed[1], (2, RemovedReason::Redundant { kept: 1 }));
    }

    #[test]
    fn prune_keeps_signature_representative() {
        // every removed redundant interval leaves behind an interval with the
        // same gap-pair signature
        let inst = Instance1d {
            scale: 4,
            points: vec![0, 8, 16],
            intervals: vec![(-3, 9), (-2, 10), (7, 18), (6, 17), (1, 2)],
        };
        let pruned = prune_1d(&inst);
        for (idx, reason) in &pruned.removed {
            if let RemovedReason::Redundant { kept } = reason {
                assert_eq!(
                    gap_signature(&inst.points, inst.intervals[*idx]),
                    gap_signature(&inst.points, inst.intervals[*kept]),
                );
            } else {
                let sig = gap_signature(&inst.points, inst.intervals[*idx]);
                assert_eq!(sig.0, sig.1);
            }
        }
    }
}
