//! Subgroups of ℚ of the form `q·ℤ[P⁻¹]`, order intervals over ℚ, and
//! descriptions `X = C ∩ (H + x)`.
//!
//! Only prime heights 0 or ∞ are representable: every finitely generated
//! subgroup (`P = ∅`) and every localization, but not a general Steinitz
//! characteristic. All arithmetic is exact.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::RationalError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `a/b` in lowest terms, or just `a` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn strip_prime(n: &BigInt, p: u64) -> (BigInt, i64) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    if n.is_zero() {
        return (n, 0);
    }
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    (n, v)
}

/// `p`-adic valuation of a nonzero rational.
pub fn valuation(r: &Rational, p: u64) -> i64 {
    assert!(!r.is_zero(), "valuation of zero");
    strip_prime(r.numer(), p).1 - strip_prime(r.denom(), p).1
}

/// Whether every prime factor of the positive integer `n` lies in `primes`.
fn is_smooth(n: &BigInt, primes: &BTreeSet<u64>) -> bool {
    let mut n = n.abs();
    for &p in primes {
        n = strip_prime(&n, p).0;
    }
    n.is_one()
}

/// Positive generator of the subgroup of ℚ generated by `values` (zero if all are zero).
pub fn rational_gcd<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Rational {
    let mut acc = Rational::zero();
    for v in values {
        if v.is_zero() {
            continue;
        }
        if acc.is_zero() {
            acc = v.abs();
            continue;
        }
        let den = acc.denom().lcm(v.denom());
        let a = (acc.numer() * (&den / acc.denom())).abs();
        let b = (v.numer() * (&den / v.denom())).abs();
        acc = Rational::new(a.gcd(&b), den);
    }
    acc
}

/// The subgroup `gen · ℤ[P⁻¹]` of ℚ.
///
/// The generator is stored with every prime of `P` divided out, which makes
/// structural equality coincide with equality of the subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalGroupDescriptor {
    gen: Rational,
    primes: BTreeSet<u64>,
}

impl RationalGroupDescriptor {
    pub fn new<I: IntoIterator<Item = u64>>(
        gen: Rational,
        primes: I,
    ) -> Result<Self, RationalError> {
        if !gen.is_positive() {
            return Err(RationalError::NonPositiveGenerator(format_rational(&gen)));
        }
        let primes: BTreeSet<u64> = primes.into_iter().collect();
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(RationalError::NotPrime(p));
        }
        let mut numer = gen.numer().clone();
        let mut denom = gen.denom().clone();
        for &p in &primes {
            numer = strip_prime(&numer, p).0;
            denom = strip_prime(&denom, p).0;
        }
        Ok(RationalGroupDescriptor {
            gen: Rational::new(numer, denom),
            primes,
        })
    }

    /// `ℤ`.
    pub fn integers() -> Self {
        Self::cyclic(int(1)).expect("1 is positive")
    }

    /// `g ℤ`.
    pub fn cyclic(g: Rational) -> Result<Self, RationalError> {
        Self::new(g, [])
    }

    pub fn gen(&self) -> &Rational {
        &self.gen
    }

    pub fn primes(&self) -> &BTreeSet<u64> {
        &self.primes
    }

    pub fn is_cyclic(&self) -> bool {
        self.primes.is_empty()
    }

    /// `r/q` in lowest terms has a `P`-smooth denominator.
    pub fn member(&self, r: &Rational) -> bool {
        let t = r / &self.gen;
        is_smooth(t.denom(), &self.primes)
    }

    pub fn is_subgroup_of(&self, ambient: &RationalGroupDescriptor) -> bool {
        ambient.member(&self.gen) && self.primes.is_subset(&ambient.primes)
    }

    fn require_subgroup_of(&self, ambient: &RationalGroupDescriptor) -> Result<(), RationalError> {
        if self.is_subgroup_of(ambient) {
            Ok(())
        } else {
            Err(RationalError::NotASubgroup {
                sub: self.to_string(),
                ambient: ambient.to_string(),
            })
        }
    }

    /// Whether `ambient / self` has no element of even order, i.e. no element
    /// of order 2. If 2 is invertible in the ambient group the subgroup must
    /// be 2-divisible too; otherwise the index of `self` must be odd at 2.
    pub fn is_two_pure(&self, ambient: &RationalGroupDescriptor) -> Result<bool, RationalError> {
        self.require_subgroup_of(ambient)?;
        Ok(if ambient.primes.contains(&2) {
            self.primes.contains(&2)
        } else {
            valuation(&(&self.gen / &ambient.gen), 2) == 0
        })
    }

    /// Smallest 2-pure subgroup of `ambient` (in descriptor form) containing `self`.
    pub fn two_pure_closure(
        &self,
        ambient: &RationalGroupDescriptor,
    ) -> Result<Self, RationalError> {
        self.require_subgroup_of(ambient)?;
        if ambient.primes.contains(&2) {
            let mut primes = self.primes.clone();
            primes.insert(2);
            Self::new(self.gen.clone(), primes)
        } else {
            let v = valuation(&(&self.gen / &ambient.gen), 2);
            let scale = Rational::from_integer(BigInt::from(2).pow(v as u32));
            Self::new(&self.gen / scale, self.primes.iter().copied())
        }
    }
}

impl fmt::Display for RationalGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let primes: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        write!(f, "({},[{}])", format_rational(&self.gen), primes.join(","))
    }
}

/// Increasing chain of cyclic subgroups `g_0 ℤ ⊆ g_1 ℤ ⊆ ...` of `ambient`.
///
/// `g_0` generates the subgroup spanned by the sample and the ambient
/// generator; each later step divides by the next prime of `P` in round-robin
/// order. With `P = ∅` the chain is constant. Returns `depth + 1` generators.
pub fn cyclic_chain(
    ambient: &RationalGroupDescriptor,
    sample: &[Rational],
    depth: usize,
) -> Result<Vec<Rational>, RationalError> {
    if sample.is_empty() {
        return Err(RationalError::EmptySample);
    }
    if let Some(r) = sample.iter().find(|r| !ambient.member(r)) {
        return Err(RationalError::NotInGroup(format_rational(r)));
    }
    let g0 = rational_gcd(sample.iter().chain(std::iter::once(ambient.gen())));
    let primes: Vec<u64> = ambient.primes.iter().copied().collect();
    let mut chain = Vec::with_capacity(depth + 1);
    chain.push(g0);
    for step in 0..depth {
        let last = chain.last().expect("nonempty").clone();
        let next = if primes.is_empty() {
            last
        } else {
            last / int(primes[step % primes.len()] as i64)
        };
        chain.push(next);
    }
    Ok(chain)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QBound {
    pub value: Rational,
    pub inclusive: bool,
}

impl QBound {
    pub fn closed(value: Rational) -> Self {
        QBound {
            value,
            inclusive: true,
        }
    }

    pub fn open(value: Rational) -> Self {
        QBound {
            value,
            inclusive: false,
        }
    }
}

/// An order-convex subset of ℚ given by optional endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QInterval {
    lower: Option<QBound>,
    upper: Option<QBound>,
}

impl QInterval {
    pub fn new(lower: Option<QBound>, upper: Option<QBound>) -> Result<Self, RationalError> {
        if let (Some(a), Some(b)) = (&lower, &upper) {
            let ok = a.value < b.value || (a.value == b.value && a.inclusive && b.inclusive);
            if !ok {
                return Err(RationalError::InvalidInterval(format!(
                    "{} .. {}",
                    format_rational(&a.value),
                    format_rational(&b.value)
                )));
            }
        }
        Ok(QInterval { lower, upper })
    }

    pub fn closed(a: Rational, b: Rational) -> Result<Self, RationalError> {
        Self::new(Some(QBound::closed(a)), Some(QBound::closed(b)))
    }

    pub fn point(a: Rational) -> Self {
        QInterval {
            lower: Some(QBound::closed(a.clone())),
            upper: Some(QBound::closed(a)),
        }
    }

    pub fn unbounded() -> Self {
        QInterval {
            lower: None,
            upper: None,
        }
    }

    pub fn lower(&self) -> Option<&QBound> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&QBound> {
        self.upper.as_ref()
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_some() && self.upper.is_some()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        let above = match &self.lower {
            None => true,
            Some(b) if b.inclusive => *r >= b.value,
            Some(b) => *r > b.value,
        };
        let below = match &self.upper {
            None => true,
            Some(b) if b.inclusive => *r <= b.value,
            Some(b) => *r < b.value,
        };
        above && below
    }

    /// Whether every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &QInterval) -> bool {
        let lower_ok = match (&other.lower, &self.lower) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(s)) => {
                s.value > o.value || (s.value == o.value && (o.inclusive || !s.inclusive))
            }
        };
        let upper_ok = match (&other.upper, &self.upper) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(s)) => {
                s.value < o.value || (s.value == o.value && (o.inclusive || !s.inclusive))
            }
        };
        lower_ok && upper_ok
    }
}

impl fmt::Display for QInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lower {
            None => write!(f, "(-inf,")?,
            Some(b) => write!(
                f,
                "{}{},",
                if b.inclusive { '[' } else { '(' },
                format_rational(&b.value)
            )?,
        }
        match &self.upper {
            None => write!(f, "inf)"),
            Some(b) => write!(
                f,
                "{}{}",
                format_rational(&b.value),
                if b.inclusive { ']' } else { ')' }
            ),
        }
    }
}

/// Anything that can answer membership of exact rationals.
pub trait RationalSet {
    fn contains(&self, r: &Rational) -> bool;
}

impl RationalSet for BTreeSet<Rational> {
    fn contains(&self, r: &Rational) -> bool {
        BTreeSet::contains(self, r)
    }
}

impl<F: Fn(&Rational) -> bool> RationalSet for F {
    fn contains(&self, r: &Rational) -> bool {
        self(r)
    }
}

/// `X = C ∩ (H + x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMidconvexDescription {
    pub interval: QInterval,
    pub subgroup: RationalGroupDescriptor,
    pub base: Rational,
}

impl RationalMidconvexDescription {
    /// Checks `base ∈ interval`, `base ∈ ambient` and `subgroup ⊆ ambient`.
    pub fn new(
        interval: QInterval,
        subgroup: RationalGroupDescriptor,
        base: Rational,
        ambient: &RationalGroupDescriptor,
    ) -> Result<Self, RationalError> {
        if !interval.contains(&base) {
            return Err(RationalError::BaseOutsideInterval(format_rational(&base)));
        }
        if !ambient.member(&base) {
            return Err(RationalError::NotInGroup(format_rational(&base)));
        }
        subgroup.require_subgroup_of(ambient)?;
        Ok(RationalMidconvexDescription {
            interval,
            subgroup,
            base,
        })
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.interval.contains(r) && self.subgroup.member(&(r - &self.base))
    }
}

impl RationalSet for RationalMidconvexDescription {
    fn contains(&self, r: &Rational) -> bool {
        RationalMidconvexDescription::contains(self, r)
    }
}

impl fmt::Display for RationalMidconvexDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "conv{} ∩ ({} + {})",
            self.interval,
            self.subgroup,
            format_rational(&self.base)
        )
    }
}
