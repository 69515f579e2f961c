//! Finite Abelian groups presented as direct sums of cyclic groups `Z(n_1) x ... x Z(n_k)`.
//!
//! Elements are residue vectors. Every element also has a dense index in
//! `0..order`, obtained by reading the residue vector as a mixed-radix number
//! whose last component varies fastest. Membership tables for subsets are
//! indexed the same way, so enumeration order (and everything reported from
//! it) is reproducible.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::GroupError;

/// Default bound on the order of a group built by [`make_group`].
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

#[derive(Debug, PartialEq, Eq, Hash)]
struct Layout {
    orders: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
}

/// A finite Abelian group `Z(n_1) x ... x Z(n_k)`; the empty factor list is the trivial group.
///
/// Cloning is cheap; the layout is shared.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    layout: Arc<Layout>,
}

/// A residue vector; component `i` lies in `[0, n_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residues.as_slice() {
            [] => write!(f, "0"),
            [r] => write!(f, "{r}"),
            rs => {
                write!(f, "(")?;
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Builds a group from cyclic factor orders, with the default order cap.
pub fn make_group(orders: &[i64]) -> Result<FiniteAbelianGroup, GroupError> {
    FiniteAbelianGroup::with_cap(orders, DEFAULT_ORDER_CAP)
}

impl FiniteAbelianGroup {
    /// Builds a group, rejecting non-positive factors and orders above `cap`.
    /// Factors are kept exactly as given; no normal form is applied.
    pub fn with_cap(orders: &[i64], cap: u64) -> Result<Self, GroupError> {
        let mut checked = Vec::with_capacity(orders.len());
        let mut total: u128 = 1;
        for &n in orders {
            if n < 1 {
                return Err(GroupError::NonPositiveOrder(n));
            }
            checked.push(n as u64);
            total = total.saturating_mul(n as u128);
            if total > cap as u128 {
                return Err(GroupError::OrderCapExceeded { order: total, cap });
            }
        }
        let mut strides = vec![1u64; checked.len()];
        for i in (0..checked.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * checked[i + 1];
        }
        Ok(FiniteAbelianGroup {
            layout: Arc::new(Layout {
                orders: checked,
                strides,
                order: total as u64,
            }),
        })
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        make_group(&[n as i64])
    }

    pub fn orders(&self) -> &[u64] {
        &self.layout.orders
    }

    pub fn rank(&self) -> usize {
        self.layout.orders.len()
    }

    pub fn order(&self) -> usize {
        self.layout.order as usize
    }

    pub fn is_cyclic_presentation(&self) -> bool {
        self.rank() <= 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.rank()],
        }
    }

    /// Builds an element from arbitrary integers, reducing each mod its factor.
    pub fn element_from(&self, values: &[i64]) -> Result<GroupElement, GroupError> {
        if values.len() != self.rank() {
            return Err(self.foreign(
                values
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ));
        }
        let residues = values
            .iter()
            .zip(self.orders())
            .map(|(&v, &n)| v.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement { residues })
    }

    /// Builds an element from residues that must already be reduced.
    pub fn element_exact(&self, residues: &[u64]) -> Result<GroupElement, GroupError> {
        let e = GroupElement {
            residues: residues.to_vec(),
        };
        self.check(&e)?;
        Ok(e)
    }

    fn foreign(&self, element: String) -> GroupError {
        GroupError::ForeignElement {
            element,
            orders: self.describe_orders(),
        }
    }

    /// `"2x3"` style; the trivial group is `"1"`.
    pub fn describe_orders(&self) -> String {
        if self.rank() == 0 {
            return "1".to_string();
        }
        self.orders()
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn check(&self, e: &GroupElement) -> Result<(), GroupError> {
        let ok = e.residues.len() == self.rank()
            && e.residues.iter().zip(self.orders()).all(|(&r, &n)| r < n);
        if ok {
            Ok(())
        } else {
            Err(self.foreign(e.to_string()))
        }
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.check(e).is_ok()
    }

    pub fn element(&self, index: usize) -> GroupElement {
        assert!(index < self.order(), "element index {index} out of range");
        let residues = self
            .orders()
            .iter()
            .zip(&self.layout.strides)
            .map(|(&n, &s)| (index as u64 / s) % n)
            .collect();
        GroupElement { residues }
    }

    pub fn index_of(&self, e: &GroupElement) -> Result<usize, GroupError> {
        self.check(e)?;
        Ok(e.residues
            .iter()
            .zip(&self.layout.strides)
            .map(|(&r, &s)| r * s)
            .sum::<u64>() as usize)
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        self.check(b)?;
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(self.orders())
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        let residues = a
            .residues
            .iter()
            .zip(self.orders())
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// `k * a` for any integer `k`.
    pub fn scale(&self, k: i64, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        let idx = self.index_of(a)?;
        Ok(self.element(self.scale_idx(k, idx)))
    }

    /// Least `n >= 1` with `n * a = 0`.
    pub fn element_order(&self, a: &GroupElement) -> Result<u64, GroupError> {
        self.check(a)?;
        Ok(self.order_idx(self.index_of(a)?))
    }

    /// Every `z` with `2z = s`, in enumeration order. Solved per cyclic
    /// component and combined as a product of the component solution sets.
    pub fn halving_set(&self, s: &GroupElement) -> Result<Vec<GroupElement>, GroupError> {
        let idx = self.index_of(s)?;
        Ok(self
            .halving_idx(idx)
            .into_iter()
            .map(|i| self.element(i))
            .collect())
    }

    // Index-level arithmetic. These skip membership checks and are what the
    // engine and the harness use in their inner loops.

    #[inline]
    pub fn residue(&self, index: usize, component: usize) -> u64 {
        (index as u64 / self.layout.strides[component]) % self.layout.orders[component]
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0u64;
        for (k, (&n, &s)) in self.orders().iter().zip(&self.layout.strides).enumerate() {
            let r = (self.residue(a, k) + self.residue(b, k)) % n;
            out += r * s;
        }
        out as usize
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        let mut out = 0u64;
        for (k, (&n, &s)) in self.orders().iter().zip(&self.layout.strides).enumerate() {
            out += ((n - self.residue(a, k)) % n) * s;
        }
        out as usize
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    pub fn scale_idx(&self, k: i64, a: usize) -> usize {
        let mut out = 0u64;
        for (c, (&n, &s)) in self.orders().iter().zip(&self.layout.strides).enumerate() {
            let r = self.residue(a, c) as i128 * k as i128;
            out += (r.rem_euclid(n as i128) as u64) * s;
        }
        out as usize
    }

    pub fn order_idx(&self, a: usize) -> u64 {
        self.orders().iter().enumerate().fold(1u64, |acc, (c, &n)| {
            let r = self.residue(a, c);
            acc.lcm(&(n / r.gcd(&n)))
        })
    }

    pub fn halving_idx(&self, s: usize) -> Vec<usize> {
        let mut partial = vec![0u64];
        for (c, (&n, &stride)) in self.orders().iter().zip(&self.layout.strides).enumerate() {
            let target = self.residue(s, c);
            let roots: Vec<u64> = if n % 2 == 1 {
                // 2 is invertible mod n with inverse (n + 1) / 2.
                vec![(target * n.div_ceil(2)) % n]
            } else if target.is_multiple_of(2) {
                vec![target / 2, target / 2 + n / 2]
            } else {
                return Vec::new();
            };
            partial = partial
                .iter()
                .flat_map(|&p| roots.iter().map(move |&r| p + r * stride))
                .collect();
        }
        let mut out: Vec<usize> = partial.into_iter().map(|v| v as usize).collect();
        out.sort_unstable();
        out
    }

    /// Number of solutions of `2z = 0`.
    pub fn two_torsion_count(&self) -> usize {
        self.orders()
            .iter()
            .filter(|&&n| n % 2 == 0)
            .fold(1, |acc, _| acc * 2)
    }
}

/// A subset of a finite group stored as a dense membership table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSubset {
    group: FiniteAbelianGroup,
    members: Vec<bool>,
}

impl GroupSubset {
    pub fn empty(group: &FiniteAbelianGroup) -> Self {
        GroupSubset {
            group: group.clone(),
            members: vec![false; group.order()],
        }
    }

    pub fn full(group: &FiniteAbelianGroup) -> Self {
        GroupSubset {
            group: group.clone(),
            members: vec![true; group.order()],
        }
    }

    pub fn from_elements<'a, I>(group: &FiniteAbelianGroup, elements: I) -> Result<Self, GroupError>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut s = Self::empty(group);
        for e in elements {
            let i = group.index_of(e)?;
            s.members[i] = true;
        }
        Ok(s)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(
        group: &FiniteAbelianGroup,
        indices: I,
    ) -> Result<Self, GroupError> {
        let mut s = Self::empty(group);
        for i in indices {
            if i >= group.order() {
                return Err(GroupError::IndexOutOfRange(i));
            }
            s.members[i] = true;
        }
        Ok(s)
    }

    /// Subset whose members are the set bits of `mask`; requires order <= 64.
    pub fn from_mask(group: &FiniteAbelianGroup, mask: u64) -> Self {
        assert!(group.order() <= 64, "mask subsets need order <= 64");
        GroupSubset {
            group: group.clone(),
            members: (0..group.order()).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn from_table(group: &FiniteAbelianGroup, members: Vec<bool>) -> Result<Self, GroupError> {
        if members.len() != group.order() {
            return Err(GroupError::IndexOutOfRange(members.len()));
        }
        Ok(GroupSubset {
            group: group.clone(),
            members,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn table(&self) -> &[bool] {
        &self.members
    }

    #[inline]
    pub fn contains_idx(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.group
            .index_of(e)
            .map(|i| self.members[i])
            .unwrap_or(false)
    }

    pub fn insert_idx(&mut self, i: usize) -> bool {
        !std::mem::replace(&mut self.members[i], true)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.indices().map(|i| self.group.element(i)).collect()
    }

    pub fn is_subset_of(&self, other: &GroupSubset) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }

    /// `{ s + t : s in self }`.
    pub fn translate_idx(&self, t: usize) -> GroupSubset {
        let mut out = GroupSubset::empty(&self.group);
        for i in self.indices() {
            out.members[self.group.add_idx(i, t)] = true;
        }
        out
    }

    /// Contains zero and is closed under addition and negation.
    pub fn is_subgroup(&self) -> bool {
        if !self.members[0] {
            return false;
        }
        let idx: Vec<usize> = self.indices().collect();
        idx.iter().all(|&a| self.members[self.group.neg_idx(a)])
            && idx
                .iter()
                .all(|&a| idx.iter().all(|&b| self.members[self.group.add_idx(a, b)]))
    }

    /// The smallest subgroup containing the subset (`{0}` for the empty set).
    pub fn subgroup_generated(&self) -> GroupSubset {
        let g = &self.group;
        let mut out = GroupSubset::empty(g);
        out.members[0] = true;
        let gens: Vec<usize> = self.indices().filter(|&i| i != 0).collect();
        let mut frontier = vec![0usize];
        while let Some(a) = frontier.pop() {
            for &s in &gens {
                // In a finite group the closure under adding generators is
                // already closed under negation.
                let b = g.add_idx(a, s);
                if out.insert_idx(b) {
                    frontier.push(b);
                }
            }
        }
        out
    }

    /// Whether `|G| / |S|` is odd. For finite groups this is equivalent to the
    /// quotient having no element of even order (Cauchy).
    pub fn index_is_odd(&self) -> Result<bool, GroupError> {
        if !self.is_subgroup() {
            return Err(GroupError::NotASubgroup);
        }
        Ok((self.group.order() / self.len()) % 2 == 1)
    }
}

impl fmt::Display for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.group.element(i))?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(g: &FiniteAbelianGroup, a: usize) -> u64 {
        let mut acc = a;
        let mut n = 1;
        while acc != 0 {
            acc = g.add_idx(acc, a);
            n += 1;
        }
        n
    }

    #[test]
    fn construction() {
        assert_eq!(make_group(&[]).unwrap().order(), 1);
        assert_eq!(make_group(&[12]).unwrap().order(), 12);
        assert!(matches!(
            make_group(&[3, 0]),
            Err(GroupError::NonPositiveOrder(0))
        ));
        assert!(matches!(
            make_group(&[-2]),
            Err(GroupError::NonPositiveOrder(-2))
        ));
        assert!(matches!(
            FiniteAbelianGroup::with_cap(&[64, 64], 1000),
            Err(GroupError::OrderCapExceeded { .. })
        ));
    }

    #[test]
    fn product_of_coprime_cyclics_is_cyclic() {
        let g = make_group(&[2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        let max = (0..6).map(|i| brute_order(&g, i)).max().unwrap();
        assert_eq!(max, 6);
    }

    #[test]
    fn enumeration_is_mixed_radix_last_fastest() {
        let g = make_group(&[2, 3]).unwrap();
        let listed: Vec<String> = g.elements().map(|e| e.to_string()).collect();
        assert_eq!(
            listed,
            ["(0,0)", "(0,1)", "(0,2)", "(1,0)", "(1,1)", "(1,2)"]
        );
        for i in 0..6 {
            assert_eq!(g.index_of(&g.element(i)).unwrap(), i);
        }
    }

    #[test]
    fn arithmetic_examples() {
        let z12 = make_group(&[12]).unwrap();
        let s = z12
            .add(
                &z12.element_from(&[7]).unwrap(),
                &z12.element_from(&[8]).unwrap(),
            )
            .unwrap();
        assert_eq!(s.residues(), &[3]);
        let g = make_group(&[2, 3]).unwrap();
        let a = g.element_exact(&[1, 2]).unwrap();
        assert_eq!(g.add(&a, &a).unwrap().residues(), &[0, 1]);
        assert_eq!(g.neg(&g.zero()).unwrap(), g.zero());
        assert_eq!(g.add(&g.neg(&a).unwrap(), &a).unwrap(), g.zero());
        assert!(g.add(&a, &z12.zero()).is_err());
        assert!(g.element_exact(&[2, 0]).is_err());
    }

    #[test]
    fn element_order_examples() {
        let z12 = make_group(&[12]).unwrap();
        assert_eq!(
            z12.element_order(&z12.element_from(&[4]).unwrap()).unwrap(),
            3
        );
        assert_eq!(z12.element_order(&z12.zero()).unwrap(), 1);
        let g = make_group(&[2, 3]).unwrap();
        assert_eq!(
            g.element_order(&g.element_exact(&[1, 1]).unwrap()).unwrap(),
            6
        );
    }

    #[test]
    fn element_order_matches_iteration() {
        for orders in [vec![12], vec![2, 4], vec![3, 3, 2], vec![8, 6]] {
            let g = make_group(&orders).unwrap();
            for i in 0..g.order() {
                let n = g.order_idx(i);
                assert_eq!(n, brute_order(&g, i));
                assert_eq!(g.order() as u64 % n, 0);
            }
        }
    }

    #[test]
    fn halving_examples() {
        let z12 = make_group(&[12]).unwrap();
        let h: Vec<u64> = z12
            .halving_set(&z12.element_from(&[6]).unwrap())
            .unwrap()
            .iter()
            .map(|e| e.residues()[0])
            .collect();
        assert_eq!(h, [3, 9]);
        let z5 = make_group(&[5]).unwrap();
        assert_eq!(
            z5.halving_set(&z5.element_from(&[1]).unwrap()).unwrap(),
            [z5.element_from(&[3]).unwrap()]
        );
        let z2 = make_group(&[2]).unwrap();
        assert!(z2
            .halving_set(&z2.element_from(&[1]).unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn halving_matches_enumeration() {
        for orders in [vec![12], vec![2, 2, 3], vec![4, 6], vec![1, 9], vec![]] {
            let g = make_group(&orders).unwrap();
            for s in 0..g.order() {
                let brute: Vec<usize> = (0..g.order()).filter(|&z| g.add_idx(z, z) == s).collect();
                let fast = g.halving_idx(s);
                assert_eq!(fast, brute);
                assert!(fast.is_empty() || fast.len() == g.two_torsion_count());
            }
        }
    }

    #[test]
    fn subgroup_examples() {
        let z15 = make_group(&[15]).unwrap();
        let s = GroupSubset::from_indices(&z15, [0, 3, 6, 9, 12]).unwrap();
        assert!(s.is_subgroup());
        assert_eq!(s.index_is_odd(), Ok(true));

        let z4 = make_group(&[4]).unwrap();
        let s = GroupSubset::from_indices(&z4, [0, 1]).unwrap();
        assert!(!s.is_subgroup());
        assert_eq!(s.subgroup_generated(), GroupSubset::full(&z4));
        assert_eq!(s.index_is_odd(), Err(GroupError::NotASubgroup));

        let empty = GroupSubset::empty(&z4);
        assert_eq!(
            empty.subgroup_generated().indices().collect::<Vec<_>>(),
            [0]
        );

        let half = GroupSubset::from_indices(&z4, [0, 2]).unwrap();
        assert_eq!(half.index_is_odd(), Ok(false));
        assert_eq!(GroupSubset::full(&z4).index_is_odd(), Ok(true));
    }

    #[test]
    fn odd_index_iff_no_even_order_quotient_element() {
        // The quotient has an element of even order iff some g outside S has 2g in S.
        for orders in [vec![12], vec![2, 4], vec![3, 6], vec![2, 2, 2]] {
            let g = make_group(&orders).unwrap();
            for mask in 0..(1u64 << g.order()) {
                let s = GroupSubset::from_mask(&g, mask);
                if !s.is_subgroup() {
                    continue;
                }
                let has_even = (0..g.order()).any(|x| {
                    !s.contains_idx(x) && {
                        // order of x + S in G/S
                        let mut k = 1;
                        let mut acc = x;
                        while !s.contains_idx(acc) {
                            acc = g.add_idx(acc, x);
                            k += 1;
                        }
                        k % 2 == 0
                    }
                });
                assert_eq!(s.index_is_odd().unwrap(), !has_even, "{orders:?} {s}");
            }
        }
    }
}
