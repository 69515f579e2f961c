//! Window-exact subsets of the integers and the trace decomposition `Z = C ∩ H`.
//!
//! An [`IntWindowSet`] is a finite view: it states exactly which integers of
//! `[lo, hi]` belong to some set, and nothing about the outside. Every
//! predicate here only draws conclusions valid under that reading. In ℤ any
//! `z` with `2z = x + y` lies between `x` and `y`, so midconvexity of the view
//! is a statement about `X ∩ [lo, hi]` alone.

use std::fmt;

use num_integer::Integer;

use crate::error::TraceError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntWindowSet {
    lo: i64,
    hi: i64,
    members: Vec<bool>,
}

impl IntWindowSet {
    pub fn empty(lo: i64, hi: i64) -> Result<Self, TraceError> {
        if lo > hi {
            return Err(TraceError::InvalidWindow(lo, hi));
        }
        Ok(IntWindowSet {
            lo,
            hi,
            members: vec![false; (hi - lo + 1) as usize],
        })
    }

    /// Members outside the window are rejected.
    pub fn from_members<I: IntoIterator<Item = i64>>(
        lo: i64,
        hi: i64,
        members: I,
    ) -> Result<Self, TraceError> {
        let mut s = Self::empty(lo, hi)?;
        for n in members {
            s.insert(n)?;
        }
        Ok(s)
    }

    pub fn from_fn(lo: i64, hi: i64, mut f: impl FnMut(i64) -> bool) -> Result<Self, TraceError> {
        let mut s = Self::empty(lo, hi)?;
        for (k, slot) in s.members.iter_mut().enumerate() {
            *slot = f(lo + k as i64);
        }
        Ok(s)
    }

    /// Subset of `[lo, lo + 63]` given by the bits of `mask`.
    pub fn from_mask(lo: i64, width: u32, mask: u64) -> Self {
        assert!((1..=64).contains(&width));
        IntWindowSet {
            lo,
            hi: lo + width as i64 - 1,
            members: (0..width).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn in_window(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    /// `None` outside the window: the view says nothing there.
    pub fn get(&self, n: i64) -> Option<bool> {
        self.in_window(n)
            .then(|| self.members[(n - self.lo) as usize])
    }

    pub fn contains(&self, n: i64) -> bool {
        self.get(n).unwrap_or(false)
    }

    pub fn insert(&mut self, n: i64) -> Result<bool, TraceError> {
        if !self.in_window(n) {
            return Err(TraceError::OutsideWindow(n, self.lo, self.hi));
        }
        Ok(!std::mem::replace(
            &mut self.members[(n - self.lo) as usize],
            true,
        ))
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(move |(k, &b)| b.then_some(self.lo + k as i64))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn min(&self) -> Option<i64> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<i64> {
        self.members
            .iter()
            .rposition(|&b| b)
            .map(|k| self.lo + k as i64)
    }

    /// `{ n - t : n in self }` on the shifted window.
    pub fn shifted(&self, t: i64) -> IntWindowSet {
        IntWindowSet {
            lo: self.lo - t,
            hi: self.hi - t,
            members: self.members.clone(),
        }
    }

    /// True iff every integer between two members is a member.
    pub fn is_order_convex(&self) -> bool {
        match (self.min(), self.max()) {
            (Some(a), Some(b)) => (a..=b).all(|n| self.contains(n)),
            _ => true,
        }
    }

    /// Lexicographically first `(x, y, z)` with `x <= y` in the set, `x + y`
    /// even and `z = (x + y) / 2` missing; `None` when the view is midconvex.
    pub fn midconvex_witness(&self) -> Option<(i64, i64, i64)> {
        let pts: Vec<i64> = self.iter().collect();
        for (i, &x) in pts.iter().enumerate() {
            for &y in &pts[i..] {
                if (x + y).is_even() {
                    let z = (x + y) / 2;
                    if !self.contains(z) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_midconvex_z(&self) -> bool {
        self.midconvex_witness().is_none()
    }

    /// Least midconvex superset inside the window.
    pub fn midconvex_closure(&self) -> IntWindowSet {
        let mut out = self.clone();
        loop {
            let pts: Vec<i64> = out.iter().collect();
            let mut grew = false;
            for (i, &x) in pts.iter().enumerate() {
                for &y in &pts[i + 1..] {
                    if (x + y).is_even() {
                        // betweenness keeps the midpoint inside the window
                        grew |= out
                            .insert((x + y) / 2)
                            .expect("midpoint lies between members");
                    }
                }
            }
            if !grew {
                return out;
            }
        }
    }

    /// `{ n : x + n*g ∈ X }` on the largest `n`-window whose images stay in
    /// `[lo, hi]`.
    pub fn trace_z(&self, x: i64, g: i64) -> Result<IntWindowSet, TraceError> {
        if g == 0 {
            return Err(TraceError::ZeroStep);
        }
        if !self.in_window(x) {
            return Err(TraceError::OutsideWindow(x, self.lo, self.hi));
        }
        let (n_lo, n_hi) = if g > 0 {
            (
                Integer::div_ceil(&(self.lo - x), &g),
                Integer::div_floor(&(self.hi - x), &g),
            )
        } else {
            (
                Integer::div_ceil(&(self.hi - x), &g),
                Integer::div_floor(&(self.lo - x), &g),
            )
        };
        IntWindowSet::from_fn(n_lo, n_hi, |n| self.contains(x + n * g))
    }

    /// The trace of the set at `x` along `y - x` is order-convex.
    pub fn lemma1_check(&self, x: i64, y: i64) -> Result<bool, TraceError> {
        for p in [x, y] {
            if !self.contains(p) {
                return Err(TraceError::NotAMember(p));
            }
        }
        if x == y {
            return Err(TraceError::ZeroStep);
        }
        Ok(self.trace_z(x, y - x)?.is_order_convex())
    }

    /// `X = C ∩ (H + x)` on the window, from the trace `X - x`.
    pub fn decompose_z(&self, x: i64) -> Result<TraceDecomposition, TraceError> {
        if !self.contains(x) {
            return Err(TraceError::NotAMember(x));
        }
        let d = decompose_trace(&self.shifted(x), None)?;
        Ok(TraceDecomposition {
            interval: d.interval.shifted(x),
            subgroup: d.subgroup,
            base: x,
        })
    }

    pub fn decompose_z_certified(
        &self,
        x: i64,
        confidence_radius: u64,
    ) -> Result<TraceDecomposition, TraceError> {
        if !self.contains(x) {
            return Err(TraceError::NotAMember(x));
        }
        let d = decompose_trace_with(&self.shifted(x), None, Some(confidence_radius))?;
        Ok(TraceDecomposition {
            interval: d.interval.shifted(x),
            subgroup: d.subgroup,
            base: x,
        })
    }
}

impl fmt::Display for IntWindowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, n) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "}}@window[{},{}]", self.lo, self.hi)
    }
}

/// An order-convex subset of ℤ; a missing endpoint is unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntInterval {
    lower: Option<i64>,
    upper: Option<i64>,
}

impl IntInterval {
    pub fn new(lower: Option<i64>, upper: Option<i64>) -> Result<Self, TraceError> {
        if let (Some(a), Some(b)) = (lower, upper) {
            if a > b {
                return Err(TraceError::InvalidWindow(a, b));
            }
        }
        Ok(IntInterval { lower, upper })
    }

    pub fn closed(lower: i64, upper: i64) -> Result<Self, TraceError> {
        Self::new(Some(lower), Some(upper))
    }

    pub fn unbounded() -> Self {
        IntInterval {
            lower: None,
            upper: None,
        }
    }

    pub fn lower(&self) -> Option<i64> {
        self.lower
    }

    pub fn upper(&self) -> Option<i64> {
        self.upper
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lower.is_none_or(|a| a <= n) && self.upper.is_none_or(|b| n <= b)
    }

    pub fn shifted(&self, t: i64) -> IntInterval {
        IntInterval {
            lower: self.lower.map(|a| a + t),
            upper: self.upper.map(|b| b + t),
        }
    }
}

impl fmt::Display for IntInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lower {
            Some(a) => write!(f, "[{a},")?,
            None => write!(f, "(-inf,")?,
        }
        match self.upper {
            Some(b) => write!(f, "{b}]"),
            None => write!(f, "inf)"),
        }
    }
}

/// A subgroup of ℤ: `m ℤ` for `m >= 1`, and `m = 0` for `{0}`.
///
/// `m = 0` is also what a singleton trace `Z = {0}` decomposes to. There the
/// decomposition is `C = {0}` with `H = ℤ`; both readings give `C ∩ H = {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZSubgroup {
    modulus: u64,
}

impl ZSubgroup {
    pub fn new(modulus: u64) -> Self {
        ZSubgroup { modulus }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, n: i64) -> bool {
        match self.modulus {
            0 => n == 0,
            m => n.rem_euclid(m as i64) == 0,
        }
    }
}

impl fmt::Display for ZSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            0 => write!(f, "{{0}}"),
            1 => write!(f, "Z"),
            m => write!(f, "{m}Z"),
        }
    }
}

/// The pair `(C, H)` with `X = C ∩ (H + base)`; `base` is 0 for a raw trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TraceDecomposition {
    pub interval: IntInterval,
    pub subgroup: ZSubgroup,
    pub base: i64,
}

impl TraceDecomposition {
    pub fn contains(&self, n: i64) -> bool {
        self.interval.contains(n) && self.subgroup.contains(n - self.base)
    }
}

impl fmt::Display for TraceDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C={} H={} x={}", self.interval, self.subgroup, self.base)
    }
}

/// Decomposes a trace `Z ∋ 0` as `C ∩ H` with `H = mℤ`, `m` odd.
///
/// With `period = Some(d)` the set must be presented on `[0, d-1]` and is read
/// as a `d`-periodic subset of ℤ.
pub fn decompose_trace(
    z: &IntWindowSet,
    period: Option<u64>,
) -> Result<TraceDecomposition, TraceError> {
    decompose_trace_with(z, period, None)
}

/// As [`decompose_trace`]. When the window shows no nonzero member and reaches
/// less than `confidence_radius` from 0 on either side, the singleton reading
/// is refused with `WindowTooSmall`.
pub fn decompose_trace_with(
    z: &IntWindowSet,
    period: Option<u64>,
    confidence_radius: Option<u64>,
) -> Result<TraceDecomposition, TraceError> {
    match period {
        Some(d) => decompose_periodic_trace(z, d),
        None => decompose_window_trace(z, confidence_radius),
    }
}

fn not_midconvex(reason: String) -> TraceError {
    TraceError::NotMidconvexTrace { reason }
}

fn decompose_window_trace(
    z: &IntWindowSet,
    confidence: Option<u64>,
) -> Result<TraceDecomposition, TraceError> {
    if !z.contains(0) {
        return Err(TraceError::NotAMember(0));
    }
    let reach = (-z.lo()).min(z.hi()) as u64;
    let span = (-z.lo()).max(z.hi());
    let m = (1..=span).find_map(|k| {
        if z.contains(k) {
            Some(k)
        } else if z.contains(-k) {
            Some(-k)
        } else {
            None
        }
    });
    let Some(m) = m else {
        if let Some(needed) = confidence {
            if reach < needed {
                return Err(TraceError::WindowTooSmall {
                    lo: z.lo(),
                    hi: z.hi(),
                    needed,
                });
            }
        }
        return Ok(TraceDecomposition {
            interval: IntInterval::closed(0, 0)?,
            subgroup: ZSubgroup::new(0),
            base: 0,
        });
    };
    if m.is_even() {
        return Err(not_midconvex(format!(
            "minimal nonzero trace element {m} is even ({} is missing)",
            m / 2
        )));
    }
    let h = ZSubgroup::new(m.unsigned_abs());
    let on_h: Vec<i64> = z.iter().filter(|&n| h.contains(n)).collect();
    let interval = IntInterval::closed(on_h[0], on_h[on_h.len() - 1])?;
    let d = TraceDecomposition {
        interval,
        subgroup: h,
        base: 0,
    };
    for n in z.lo()..=z.hi() {
        if z.contains(n) != d.contains(n) {
            return Err(not_midconvex(format!(
                "trace differs from {d} at {n} (m = {m})"
            )));
        }
    }
    Ok(d)
}

fn decompose_periodic_trace(z: &IntWindowSet, d: u64) -> Result<TraceDecomposition, TraceError> {
    if d == 0 {
        return Err(TraceError::ZeroPeriod);
    }
    if z.lo() != 0 || z.hi() != d as i64 - 1 {
        return Err(TraceError::InvalidWindow(z.lo(), z.hi()));
    }
    let at = |n: i64| z.contains(n.rem_euclid(d as i64));
    if !at(0) {
        return Err(TraceError::NotAMember(0));
    }
    // d itself is always a member, so the search stops by k = d.
    let m = (1..=d as i64)
        .find_map(|k| {
            if at(k) {
                Some(k)
            } else if at(-k) {
                Some(-k)
            } else {
                None
            }
        })
        .expect("period is a member");
    if m.is_even() {
        return Err(not_midconvex(format!(
            "minimal nonzero trace element {m} is even ({} is missing)",
            m / 2
        )));
    }
    let h = ZSubgroup::new(m.unsigned_abs());
    if !d.is_multiple_of(h.modulus()) {
        return Err(not_midconvex(format!(
            "period {d} lies in the trace but not in {h}"
        )));
    }
    for n in 0..d as i64 {
        if at(n) != h.contains(n) {
            return Err(not_midconvex(format!(
                "periodic trace differs from {h} at {n}"
            )));
        }
    }
    Ok(TraceDecomposition {
        interval: IntInterval::unbounded(),
        subgroup: h,
        base: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(lo: i64, hi: i64, m: &[i64]) -> IntWindowSet {
        IntWindowSet::from_members(lo, hi, m.iter().copied()).unwrap()
    }

    #[test]
    fn order_convexity() {
        assert!(set(-5, 5, &[0, 1, 2, 3]).is_order_convex());
        assert!(!set(-5, 5, &[0, 2]).is_order_convex());
        assert!(set(-5, 5, &[]).is_order_convex());
    }

    #[test]
    fn midconvexity_examples() {
        assert!(set(0, 9, &[0, 3, 6, 9]).is_midconvex_z());
        assert_eq!(set(0, 9, &[0, 2, 4]).midconvex_witness(), Some((0, 2, 1)));
        assert!(set(0, 9, &[7]).is_midconvex_z());
    }

    #[test]
    fn midconvex_matches_definition_by_brute_force() {
        // independent route: quantify over every z in the window, not just (x+y)/2
        for mask in 0u64..(1 << 9) {
            let s = IntWindowSet::from_mask(-4, 9, mask);
            let brute = s.iter().all(|x| {
                s.iter()
                    .all(|y| (-4..=4).filter(|z| 2 * z == x + y).all(|z| s.contains(z)))
            });
            assert_eq!(s.is_midconvex_z(), brute, "{s}");
        }
    }

    #[test]
    fn trace_examples() {
        let x = set(0, 9, &[0, 3, 6, 9]);
        assert_eq!(x.trace_z(0, 3).unwrap(), set(0, 3, &[0, 1, 2, 3]));
        assert_eq!(x.trace_z(0, 1).unwrap(), x);
        let lifted = set(0, 14, &[1, 4, 7, 10, 13]);
        let t = lifted.trace_z(1, 2).unwrap();
        assert_eq!((t.lo(), t.hi()), (0, 6));
        assert_eq!(t.iter().collect::<Vec<_>>(), [0, 3, 6]);
        assert!(t.iter().all(|n| n % 3 == 0));
        assert_eq!(x.trace_z(0, 0), Err(TraceError::ZeroStep));
        let back = x.trace_z(9, -3).unwrap();
        assert_eq!(back, set(0, 3, &[0, 1, 2, 3]));
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(set(0, 9, &[0, 3, 6, 9]).lemma1_check(0, 3), Ok(true));
        // necessary but not sufficient: {0,2,4} is not midconvex
        let s = set(0, 9, &[0, 2, 4]);
        assert_eq!(s.trace_z(0, 4).unwrap().iter().collect::<Vec<_>>(), [0, 1]);
        assert_eq!(s.lemma1_check(0, 4), Ok(true));
        assert_eq!(set(0, 1, &[0, 1]).lemma1_check(0, 1), Ok(true));
        assert_eq!(s.lemma1_check(0, 1), Err(TraceError::NotAMember(1)));
    }

    #[test]
    fn decompose_trace_examples() {
        let d = decompose_trace(&set(0, 9, &[0, 3, 6, 9]), None).unwrap();
        assert_eq!(d.interval, IntInterval::closed(0, 9).unwrap());
        assert_eq!(d.subgroup.modulus(), 3);

        let periodic = IntWindowSet::from_fn(0, 14, |n| n % 3 == 0).unwrap();
        let d = decompose_trace(&periodic, Some(15)).unwrap();
        assert_eq!(d.interval, IntInterval::unbounded());
        assert_eq!(d.subgroup.modulus(), 3);

        let d = decompose_trace(&set(-3, 3, &[0]), None).unwrap();
        assert_eq!(d.interval, IntInterval::closed(0, 0).unwrap());
        assert_eq!(d.subgroup.modulus(), 0);

        assert!(matches!(
            decompose_trace(&set(0, 9, &[0, 2, 4]), None),
            Err(TraceError::NotMidconvexTrace { .. })
        ));
    }

    #[test]
    fn minimal_m_prefers_positive() {
        let d = decompose_trace(&set(-9, 9, &[-3, 0, 3]), None).unwrap();
        assert_eq!(d.subgroup.modulus(), 3);
        let d = decompose_trace(&set(-9, 9, &[-3, 0]), None).unwrap();
        assert_eq!(d.subgroup.modulus(), 3);
        assert_eq!(d.interval, IntInterval::closed(-3, 0).unwrap());
    }

    #[test]
    fn mismatch_after_odd_m_is_rejected() {
        // m = 3 but 5 breaks the C ∩ 3Z shape
        assert!(matches!(
            decompose_trace(&set(0, 9, &[0, 3, 5, 6]), None),
            Err(TraceError::NotMidconvexTrace { .. })
        ));
    }

    #[test]
    fn periodic_traces() {
        // 2Z presented with period 2: minimal m = 2 is even
        let t = set(0, 1, &[0]);
        assert!(decompose_trace(&t, Some(2)).is_err());
        // period 1 means all of Z
        let d = decompose_trace(&set(0, 0, &[0]), Some(1)).unwrap();
        assert_eq!(d.subgroup.modulus(), 1);
        // wrong presentation window
        assert!(matches!(
            decompose_trace(&set(0, 3, &[0]), Some(2)),
            Err(TraceError::InvalidWindow(0, 3))
        ));
        // -1 ≡ 4 mod 5 present, 1 absent: m = -1, H = Z, but the set is not all of Z
        assert!(decompose_trace(&set(0, 4, &[0, 4]), Some(5)).is_err());
    }

    #[test]
    fn window_too_small() {
        let z = set(-2, 2, &[0]);
        assert!(matches!(
            decompose_trace_with(&z, None, Some(5)),
            Err(TraceError::WindowTooSmall { needed: 5, .. })
        ));
        assert!(decompose_trace_with(&z, None, Some(2)).is_ok());
    }

    #[test]
    fn decompose_z_examples() {
        let d = set(0, 9, &[0, 3, 6, 9]).decompose_z(0).unwrap();
        assert_eq!(d.interval, IntInterval::closed(0, 9).unwrap());
        assert_eq!(d.subgroup.modulus(), 3);

        let d = set(0, 9, &[5]).decompose_z(5).unwrap();
        assert_eq!(d.interval, IntInterval::closed(5, 5).unwrap());
        assert_eq!(d.subgroup.modulus(), 0);
        assert!((0..=9).all(|n| d.contains(n) == (n == 5)));

        assert!(set(0, 9, &[0, 2, 4]).decompose_z(0).is_err());

        let d = set(0, 20, &[4, 9, 14, 19]).decompose_z(9).unwrap();
        assert_eq!(d.interval, IntInterval::closed(4, 19).unwrap());
        assert_eq!(d.subgroup.modulus(), 5);
    }

    #[test]
    fn closure_is_least_midconvex_superset() {
        for mask in 0u64..(1 << 8) {
            let s = IntWindowSet::from_mask(0, 8, mask);
            let c = s.midconvex_closure();
            assert!(c.is_midconvex_z());
            assert!(s.iter().all(|n| c.contains(n)));
            // every midconvex superset in the window contains the closure
            for sup in 0u64..(1 << 8) {
                if sup & mask == mask {
                    let t = IntWindowSet::from_mask(0, 8, sup);
                    if t.is_midconvex_z() {
                        assert!(c.iter().all(|n| t.contains(n)));
                    }
                }
            }
        }
    }
}
