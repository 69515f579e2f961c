use std::fmt;

use crate::error::{EngineError, GroupError};
use crate::group::{GroupElement, GroupSubset};
use crate::integers::{decompose_trace, IntWindowSet, TraceDecomposition};

/// A triple `x, y ∈ X`, `z ∉ X` with `2z = x + y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MidconvexWitness {
    pub x: GroupElement,
    pub y: GroupElement,
    pub z: GroupElement,
}

impl fmt::Display for MidconvexWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// First violating `(x, y, z)` in enumeration order, as indices.
///
/// Pairs with `x = y` are included: with 2-torsion the halving set of `2x`
/// contains more than `x`.
pub fn midconvex_witness_idx(x_set: &GroupSubset) -> Option<(usize, usize, usize)> {
    let g = x_set.group();
    let pts: Vec<usize> = x_set.indices().collect();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i..] {
            if let Some(&z) = g
                .halving_idx(g.add_idx(a, b))
                .iter()
                .find(|&&z| !x_set.contains_idx(z))
            {
                return Some((a, b, z));
            }
        }
    }
    None
}

pub fn midconvex_witness(x_set: &GroupSubset) -> Option<MidconvexWitness> {
    let g = x_set.group();
    midconvex_witness_idx(x_set).map(|(a, b, z)| MidconvexWitness {
        x: g.element(a),
        y: g.element(b),
        z: g.element(z),
    })
}

pub fn is_midconvex(x_set: &GroupSubset) -> bool {
    midconvex_witness_idx(x_set).is_none()
}

/// Smallest midconvex superset, by a worklist fixpoint over halving sets.
pub fn midconvex_closure(x_set: &GroupSubset) -> GroupSubset {
    let g = x_set.group();
    let mut out = x_set.clone();
    let mut members: Vec<usize> = Vec::new();
    let mut pending: Vec<usize> = x_set.indices().collect();
    while let Some(a) = pending.pop() {
        members.push(a);
        // pair the new point with every settled point, itself included
        for &b in &members {
            for z in g.halving_idx(g.add_idx(a, b)) {
                if out.insert_idx(z) {
                    pending.push(z);
                }
            }
        }
    }
    out
}

/// `{ n : x + n g ∈ X }` presented on one period `[0, ord(g) - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicTrace {
    pub set: IntWindowSet,
    pub period: u64,
}

impl PeriodicTrace {
    pub fn contains(&self, n: i64) -> bool {
        self.set.contains(n.rem_euclid(self.period as i64))
    }

    /// The trace restricted to `[lo, hi]`.
    pub fn lift(&self, lo: i64, hi: i64) -> IntWindowSet {
        IntWindowSet::from_fn(lo, hi, |n| self.contains(n)).expect("lo <= hi")
    }

    pub fn decompose(&self) -> Result<TraceDecomposition, EngineError> {
        Ok(decompose_trace(&self.set, Some(self.period))?)
    }
}

fn require_member(x_set: &GroupSubset, x: usize) -> Result<(), EngineError> {
    if x_set.contains_idx(x) {
        Ok(())
    } else {
        Err(EngineError::Precondition(format!(
            "{} is not in the set",
            x_set.group().element(x)
        )))
    }
}

pub fn trace_in_group_idx(
    x_set: &GroupSubset,
    x: usize,
    g: usize,
) -> Result<PeriodicTrace, EngineError> {
    require_member(x_set, x)?;
    let grp = x_set.group();
    let period = grp.order_idx(g);
    let mut point = x;
    let set = IntWindowSet::from_fn(0, period as i64 - 1, |_| {
        let hit = x_set.contains_idx(point);
        point = grp.add_idx(point, g);
        hit
    });
    Ok(PeriodicTrace {
        set: set.map_err(|e| EngineError::Precondition(e.to_string()))?,
        period,
    })
}

pub fn trace_in_group(
    x_set: &GroupSubset,
    x: &GroupElement,
    g: &GroupElement,
) -> Result<PeriodicTrace, EngineError> {
    let grp = x_set.group();
    trace_in_group_idx(x_set, grp.index_of(x)?, grp.index_of(g)?)
}

/// First `(x, g)` whose trace has no odd decomposition, with the reason.
pub fn theorem1_failure(x_set: &GroupSubset) -> Option<(GroupElement, GroupElement, String)> {
    let grp = x_set.group();
    for x in x_set.indices() {
        for g in 0..grp.order() {
            let trace = trace_in_group_idx(x_set, x, g).expect("x is a member");
            if let Err(e) = trace.decompose() {
                return Some((grp.element(x), grp.element(g), e.to_string()));
            }
        }
    }
    None
}

/// Every trace `{n : x + n g ∈ X}` with `x ∈ X`, `g ∈ G` decomposes as `C ∩ H` with odd index.
pub fn verify_theorem1(x_set: &GroupSubset) -> bool {
    theorem1_failure(x_set).is_none()
}

/// Whether the trace at `x` along `y - x` is order-convex.
///
/// The trace is periodic; it is order-convex in ℤ iff its lift to
/// `[-d, d]` is, since a gap in one period sits between `0` and `d`.
pub fn lemma1_check_idx(x_set: &GroupSubset, x: usize, y: usize) -> Result<bool, EngineError> {
    require_member(x_set, x)?;
    require_member(x_set, y)?;
    if x == y {
        return Err(EngineError::Precondition(
            "lemma1_check needs x != y".into(),
        ));
    }
    let grp = x_set.group();
    let trace = trace_in_group_idx(x_set, x, grp.sub_idx(y, x))?;
    let d = trace.period as i64;
    Ok(trace.lift(-d, d).is_order_convex())
}

pub fn lemma1_check(
    x_set: &GroupSubset,
    x: &GroupElement,
    y: &GroupElement,
) -> Result<bool, EngineError> {
    let grp = x_set.group();
    lemma1_check_idx(x_set, grp.index_of(x)?, grp.index_of(y)?)
}

/// `X = S + x` with `S` a subgroup of odd index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicDecomposition {
    pub subgroup: GroupSubset,
    pub base: GroupElement,
    pub index: usize,
    pub odd_index: bool,
}

impl fmt::Display for PeriodicDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S={} x={} index={}",
            self.subgroup, self.base, self.index
        )
    }
}

pub fn decompose_periodic_idx(
    x_set: &GroupSubset,
    x: usize,
) -> Result<PeriodicDecomposition, EngineError> {
    require_member(x_set, x)?;
    let grp = x_set.group();
    let shifted = x_set.translate_idx(grp.neg_idx(x));
    let odd = match shifted.index_is_odd() {
        Ok(odd) => odd,
        Err(GroupError::NotASubgroup) => {
            return Err(EngineError::NotMidconvex {
                reason: format!("X-x = {shifted} is not a subgroup"),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let index = grp.order() / shifted.len();
    if !odd {
        return Err(EngineError::NotMidconvex {
            reason: format!("X-x = {shifted} has even index {index}"),
        });
    }
    Ok(PeriodicDecomposition {
        subgroup: shifted,
        base: grp.element(x),
        index,
        odd_index: true,
    })
}

/// `X - x` is a subgroup of odd index.
pub fn decompose_periodic(
    x_set: &GroupSubset,
    x: &GroupElement,
) -> Result<PeriodicDecomposition, EngineError> {
    decompose_periodic_idx(x_set, x_set.group().index_of(x)?)
}

/// Nonempty `X` with a periodic decomposition at every base point (vacuous for `∅`).
pub fn satisfies_theorem2(x_set: &GroupSubset) -> bool {
    x_set
        .indices()
        .all(|x| decompose_periodic_idx(x_set, x).is_ok())
}

/// For every `a ∈ X - x`, `2a ∈ X - x`.
pub fn doubling_claim_check(x_set: &GroupSubset, x: &GroupElement) -> Result<bool, EngineError> {
    let grp = x_set.group();
    let xi = grp.index_of(x)?;
    require_member(x_set, xi)?;
    let shifted = x_set.translate_idx(grp.neg_idx(xi));
    let closed = shifted
        .indices()
        .all(|a| shifted.contains_idx(grp.add_idx(a, a)));
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn subset(orders: &[i64], idx: &[usize]) -> GroupSubset {
        GroupSubset::from_indices(&make_group(orders).unwrap(), idx.iter().copied()).unwrap()
    }

    #[test]
    fn predicate_examples() {
        let w = midconvex_witness(&subset(&[4], &[0])).unwrap();
        assert_eq!(w.to_string(), "(0,0,2)");
        assert!(is_midconvex(&subset(&[5], &[2])));
        assert!(is_midconvex(&subset(&[6], &[])));
        assert!(is_midconvex(&GroupSubset::full(
            &make_group(&[2, 4]).unwrap()
        )));
    }

    #[test]
    fn predicate_matches_definition() {
        // independent route: quantify over every z in G
        for orders in [vec![4], vec![2, 3], vec![2, 2], vec![7]] {
            let g = make_group(&orders).unwrap();
            for mask in 0..(1u64 << g.order()) {
                let s = GroupSubset::from_mask(&g, mask);
                let brute = s.indices().all(|x| {
                    s.indices().all(|y| {
                        (0..g.order())
                            .filter(|&z| g.add_idx(z, z) == g.add_idx(x, y))
                            .all(|z| s.contains_idx(z))
                    })
                });
                assert_eq!(is_midconvex(&s), brute);
            }
        }
    }

    #[test]
    fn closure_examples() {
        let z4 = make_group(&[4]).unwrap();
        assert_eq!(
            midconvex_closure(&subset(&[4], &[0])),
            GroupSubset::full(&z4)
        );
        let z15 = make_group(&[15]).unwrap();
        assert_eq!(
            midconvex_closure(&subset(&[15], &[0, 1])),
            GroupSubset::full(&z15)
        );
        assert_eq!(midconvex_closure(&subset(&[5], &[2])), subset(&[5], &[2]));
        assert_eq!(
            midconvex_closure(&subset(&[9], &[0, 3])),
            subset(&[9], &[0, 3, 6])
        );
    }

    #[test]
    fn trace_examples() {
        let x = subset(&[15], &[1, 4, 7, 10, 13]);
        let t = trace_in_group_idx(&x, 1, 1).unwrap();
        assert_eq!(t.period, 15);
        assert_eq!(t.set.iter().collect::<Vec<_>>(), [0, 3, 6, 9, 12]);

        let t = trace_in_group_idx(&x, 1, 0).unwrap();
        assert_eq!(t.period, 1);
        assert_eq!(t.set.iter().collect::<Vec<_>>(), [0]);

        let t = trace_in_group_idx(&subset(&[4], &[0]), 0, 2).unwrap();
        assert_eq!(t.period, 2);
        assert_eq!(t.set.iter().collect::<Vec<_>>(), [0]);
        assert!(t.decompose().is_err());

        assert!(trace_in_group_idx(&x, 0, 1).is_err());
    }

    #[test]
    fn theorem1_examples() {
        assert!(!verify_theorem1(&subset(&[4], &[0])));
        let (x, g, _) = theorem1_failure(&subset(&[4], &[0])).unwrap();
        // g = 1 already fails (minimal m = 4); the g = 2 trace 2Z fails too
        assert_eq!((x.to_string(), g.to_string()), ("0".into(), "1".into()));
        let z4 = subset(&[4], &[0]);
        let t = trace_in_group_idx(&z4, 0, 2).unwrap();
        assert!(t.contains(2) && !t.contains(1));
        assert!(matches!(
            t.decompose(),
            Err(EngineError::NotMidconvex { .. })
        ));
        assert!(verify_theorem1(&subset(&[15], &[1, 4, 7, 10, 13])));
        assert!(verify_theorem1(&GroupSubset::full(
            &make_group(&[2, 6]).unwrap()
        )));
    }

    #[test]
    fn lemma1_on_groups() {
        let x = subset(&[15], &[1, 4, 7, 10, 13]);
        assert_eq!(lemma1_check_idx(&x, 1, 4), Ok(true));
        // {0,1} in Z(3): trace along 1 is {0,1} mod 3, not order-convex
        assert_eq!(lemma1_check_idx(&subset(&[3], &[0, 1]), 0, 1), Ok(false));
        assert!(lemma1_check_idx(&x, 1, 1).is_err());
    }

    #[test]
    fn periodic_decomposition_examples() {
        let x = subset(&[15], &[1, 4, 7, 10, 13]);
        let d = decompose_periodic_idx(&x, 1).unwrap();
        assert_eq!(d.subgroup, subset(&[15], &[0, 3, 6, 9, 12]));
        assert_eq!(d.index, 3);
        // independent of the base point
        for b in x.indices() {
            assert_eq!(decompose_periodic_idx(&x, b).unwrap().subgroup, d.subgroup);
        }
        let err = decompose_periodic_idx(&subset(&[4], &[0, 2]), 0).unwrap_err();
        assert!(err.to_string().contains("even index 2"), "{err}");
        let full = GroupSubset::full(&make_group(&[3, 4]).unwrap());
        assert_eq!(decompose_periodic_idx(&full, 5).unwrap().index, 1);
        let err = decompose_periodic_idx(&subset(&[5], &[0, 1]), 0).unwrap_err();
        assert!(err.to_string().contains("not a subgroup"));
    }

    #[test]
    fn doubling_examples() {
        let x = subset(&[15], &[1, 4, 7, 10, 13]);
        let g = x.group().clone();
        assert_eq!(doubling_claim_check(&x, &g.element(1)), Ok(true));
        let z7 = make_group(&[7]).unwrap();
        assert_eq!(
            doubling_claim_check(&subset(&[7], &[3]), &z7.element(3)),
            Ok(true)
        );
        let z9 = make_group(&[9]).unwrap();
        assert_eq!(
            doubling_claim_check(&subset(&[9], &[0, 3, 6]), &z9.element(0)),
            Ok(true)
        );
    }
}
