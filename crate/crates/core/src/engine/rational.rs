use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::EngineError;
use crate::integers::IntWindowSet;
use crate::rational::{
    cyclic_chain, format_rational, int, QBound, QInterval, Rational, RationalGroupDescriptor,
    RationalMidconvexDescription, RationalSet,
};

/// Upper bound on the number of grid points examined at one chain level.
pub const DEFAULT_LEVEL_POINT_CAP: usize = 1 << 22;

/// Grid used when sampling elements of `q·ℤ[P⁻¹]`: numerators in `[-numerator, numerator]`,
/// denominators products of `P`-primes with exponents up to `exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingBounds {
    pub numerator: i64,
    pub exponent: u32,
}

impl Default for SamplingBounds {
    fn default() -> Self {
        SamplingBounds {
            numerator: 50,
            exponent: 4,
        }
    }
}

/// One level `G_n = g_n ℤ` of the chain with its decomposition
/// `X ∩ G_n = C_n ∩ (m_n g_n ℤ + x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLevel {
    pub generator: Rational,
    pub modulus: u64,
    pub lower: Rational,
    pub upper: Rational,
    /// Prime dividing `g_{n-1} / g_n`, if this level refined the previous one.
    pub refined_by: Option<u64>,
    pub enlarged: bool,
}

impl ChainLevel {
    pub fn subgroup_generator(&self) -> Rational {
        &self.generator * int(self.modulus as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalDecomposition {
    pub description: RationalMidconvexDescription,
    pub levels: Vec<ChainLevel>,
}

impl RationalDecomposition {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// `g_N ℤ ∩ window` for the deepest level.
    pub fn finest_generator(&self) -> &Rational {
        &self.levels.last().expect("at least one level").generator
    }
}

fn to_i64(n: &BigInt, what: &str) -> Result<i64, EngineError> {
    n.to_i64()
        .ok_or_else(|| EngineError::ResourceCap(format!("{what} {n} does not fit in 64 bits")))
}

/// Index range `k` with `k·g` inside the window.
pub fn grid_range(window: &QInterval, g: &Rational) -> Result<(i64, i64), EngineError> {
    let (Some(lo), Some(hi)) = (window.lower(), window.upper()) else {
        return Err(EngineError::Precondition("window must be bounded".into()));
    };
    let mut k_lo = (&lo.value / g).ceil().to_integer();
    let mut k_hi = (&hi.value / g).floor().to_integer();
    if !window.contains(&(Rational::from_integer(k_lo.clone()) * g)) {
        k_lo += 1;
    }
    if !window.contains(&(Rational::from_integer(k_hi.clone()) * g)) {
        k_hi -= 1;
    }
    Ok((to_i64(&k_lo, "grid index")?, to_i64(&k_hi, "grid index")?))
}

/// Builds `X = C ∩ (H + x)` from a membership oracle along the chain of
/// cyclic subgroups `g_n ℤ` seeded with `{x, x2}`.
///
/// Each level views `X ∩ g_n ℤ` inside `window` as a window-exact integer set
/// and decomposes it with odd `m_n`; consecutive levels must satisfy
/// `C_n ⊆ C_{n+1}` and `H_n ⊆ H_{n+1}`. The returned subgroup is
/// `m_N g_N · ℤ[Q⁻¹]` where `Q` holds the primes whose last refinement still
/// enlarged `H_n`.
pub fn decompose_rational(
    ambient: &RationalGroupDescriptor,
    set: &dyn RationalSet,
    x: &Rational,
    x2: &Rational,
    depth: usize,
    window: &QInterval,
) -> Result<RationalDecomposition, EngineError> {
    decompose_rational_capped(ambient, set, x, x2, depth, window, DEFAULT_LEVEL_POINT_CAP)
}

pub fn decompose_rational_capped(
    ambient: &RationalGroupDescriptor,
    set: &dyn RationalSet,
    x: &Rational,
    x2: &Rational,
    depth: usize,
    window: &QInterval,
    point_cap: usize,
) -> Result<RationalDecomposition, EngineError> {
    if x >= x2 {
        return Err(EngineError::Precondition(format!(
            "need x < x2, got {} and {}",
            format_rational(x),
            format_rational(x2)
        )));
    }
    for p in [x, x2] {
        if !window.contains(p) {
            return Err(EngineError::Precondition(format!(
                "{} lies outside the window {window}",
                format_rational(p)
            )));
        }
        if !set.contains(p) {
            return Err(EngineError::Precondition(format!(
                "{} is not in X",
                format_rational(p)
            )));
        }
    }
    let chain = cyclic_chain(ambient, &[x.clone(), x2.clone()], depth)?;

    let mut levels: Vec<ChainLevel> = Vec::with_capacity(chain.len());
    let mut last_enlarged: BTreeMap<u64, bool> = BTreeMap::new();
    for g in chain {
        let (k_lo, k_hi) = grid_range(window, &g)?;
        let count = (k_hi - k_lo + 1) as usize;
        if count > point_cap {
            return Err(EngineError::ResourceCap(format!(
                "level with generator {} has {count} window points (cap {point_cap})",
                format_rational(&g)
            )));
        }
        let view = IntWindowSet::from_fn(k_lo, k_hi, |k| set.contains(&(int(k) * &g)))
            .map_err(|e| EngineError::Precondition(e.to_string()))?;
        let kx = (x / &g).to_integer();
        let kx = to_i64(&kx, "base index")?;
        let dec = view
            .decompose_z(kx)
            .map_err(|e| match EngineError::from(e) {
                EngineError::NotMidconvex { reason } => EngineError::NotMidconvex {
                    reason: format!("level g = {}: {reason}", format_rational(&g)),
                },
                other => other,
            })?;
        let modulus = dec.subgroup.modulus();
        let (Some(lo), Some(hi)) = (dec.interval.lower(), dec.interval.upper()) else {
            unreachable!("window traces have bounded intervals");
        };
        if modulus == 0 {
            return Err(EngineError::Precondition(format!(
                "level g = {} sees only the base point",
                format_rational(&g)
            )));
        }
        let mut level = ChainLevel {
            generator: g.clone(),
            modulus,
            lower: int(lo) * &g,
            upper: int(hi) * &g,
            refined_by: None,
            enlarged: false,
        };
        if let Some(prev) = levels.last() {
            if level.lower > prev.lower || level.upper < prev.upper {
                return Err(EngineError::NotMidconvex {
                    reason: format!(
                        "C shrank from [{},{}] to [{},{}]",
                        format_rational(&prev.lower),
                        format_rational(&prev.upper),
                        format_rational(&level.lower),
                        format_rational(&level.upper)
                    ),
                });
            }
            let (prev_h, h) = (prev.subgroup_generator(), level.subgroup_generator());
            if !(&prev_h / &h).is_integer() {
                return Err(EngineError::NotMidconvex {
                    reason: format!(
                        "H_n = {}Z is not contained in H_(n+1) = {}Z",
                        format_rational(&prev_h),
                        format_rational(&h)
                    ),
                });
            }
            let ratio = (&prev.generator / &g).to_integer();
            if !ratio.is_one() {
                let p = ratio.to_u64().expect("refinement prime fits");
                level.refined_by = Some(p);
                level.enlarged = h < prev_h;
                last_enlarged.insert(p, level.enlarged);
            }
        }
        levels.push(level);
    }

    let finest = levels.last().expect("chain has depth + 1 levels");
    let primes: Vec<u64> = last_enlarged
        .iter()
        .filter_map(|(&p, &grew)| grew.then_some(p))
        .collect();
    let subgroup = RationalGroupDescriptor::new(finest.subgroup_generator(), primes)?;
    let interval = QInterval::closed(finest.lower.clone(), finest.upper.clone())?;
    let description = RationalMidconvexDescription::new(interval, subgroup, x.clone(), ambient)?;
    Ok(RationalDecomposition {
        description,
        levels,
    })
}

/// Outcome of a randomized check of the "if" direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem3Check {
    pub pairs: usize,
    pub midpoints_in_group: usize,
    pub violation: Option<(Rational, Rational, Rational)>,
}

impl Theorem3Check {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn random_smooth(rng: &mut ChaCha8Rng, primes: &BTreeSet<u64>, max_exp: u32) -> BigInt {
    let mut b = BigInt::one();
    for &p in primes {
        let e = rng.gen_range(0..=max_exp);
        b *= BigInt::from(p).pow(e);
    }
    b
}

/// A random element of `C ∩ (H + x)`, falling back to `x` if the grid misses `C`.
pub fn sample_description_point(
    d: &RationalMidconvexDescription,
    bounds: SamplingBounds,
    rng: &mut ChaCha8Rng,
) -> Rational {
    let h = d.subgroup.gen();
    for _ in 0..32 {
        let b = random_smooth(rng, d.subgroup.primes(), bounds.exponent);
        let step = h / Rational::from_integer(b);
        let to_index = |v: &Rational| (v - &d.base) / &step;
        let (k_lo, k_hi) = match (d.interval.lower(), d.interval.upper()) {
            (Some(lo), Some(hi)) => (
                to_index(&lo.value).ceil().to_integer(),
                to_index(&hi.value).floor().to_integer(),
            ),
            (Some(lo), None) => {
                let k = to_index(&lo.value).ceil().to_integer();
                (k.clone(), k + 2 * bounds.numerator)
            }
            (None, Some(hi)) => {
                let k = to_index(&hi.value).floor().to_integer();
                (&k - 2 * bounds.numerator, k)
            }
            (None, None) => (
                BigInt::from(-bounds.numerator),
                BigInt::from(bounds.numerator),
            ),
        };
        if k_lo > k_hi {
            continue;
        }
        let span = &k_hi - &k_lo;
        let offset = match span.to_i64() {
            Some(s) => BigInt::from(rng.gen_range(0..=s)),
            None => BigInt::from(rng.gen_range(0..=i64::MAX)),
        };
        let candidate = &d.base + Rational::from_integer(k_lo + offset) * &step;
        if d.contains(&candidate) {
            return candidate;
        }
    }
    d.base.clone()
}

/// Samples pairs `a, b ∈ C ∩ (H + x)` and checks that every midpoint lying in
/// the ambient group lies in the set. Requires `H` to be 2-pure in the ambient group.
pub fn verify_theorem3_if(
    d: &RationalMidconvexDescription,
    ambient: &RationalGroupDescriptor,
    samples: usize,
    seed: u64,
) -> Result<Theorem3Check, EngineError> {
    verify_theorem3_if_with(d, ambient, samples, seed, SamplingBounds::default())
}

pub fn verify_theorem3_if_with(
    d: &RationalMidconvexDescription,
    ambient: &RationalGroupDescriptor,
    samples: usize,
    seed: u64,
    bounds: SamplingBounds,
) -> Result<Theorem3Check, EngineError> {
    if !d.subgroup.is_two_pure(ambient)? {
        return Err(EngineError::Precondition(format!(
            "{} is not 2-pure in {ambient}",
            d.subgroup
        )));
    }
    Ok(sample_midpoint_check(d, ambient, samples, seed, bounds))
}

/// Samples pairs of points of `d` and looks for a midpoint in the ambient
/// group that falls outside `d`. No purity precondition.
pub fn sample_midpoint_check(
    d: &RationalMidconvexDescription,
    ambient: &RationalGroupDescriptor,
    samples: usize,
    seed: u64,
    bounds: SamplingBounds,
) -> Theorem3Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = int(2);
    let mut out = Theorem3Check {
        pairs: 0,
        midpoints_in_group: 0,
        violation: None,
    };
    for _ in 0..samples {
        let a = sample_description_point(d, bounds, &mut rng);
        let b = sample_description_point(d, bounds, &mut rng);
        out.pairs += 1;
        let c = (&a + &b) / &two;
        if ambient.member(&c) {
            out.midpoints_in_group += 1;
            if !d.contains(&c) {
                out.violation = Some((a, b, c));
                break;
            }
        }
    }
    out
}

/// First `(a, b, c)` with `a <= b` in the finite set, `c = (a+b)/2` in the
/// ambient group and missing from the set.
pub fn finite_rational_witness(
    ambient: &RationalGroupDescriptor,
    points: &BTreeSet<Rational>,
) -> Option<(Rational, Rational, Rational)> {
    let pts: Vec<&Rational> = points.iter().collect();
    let two = int(2);
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i..] {
            let c = (a + b) / &two;
            if ambient.member(&c) && !points.contains(&c) {
                return Some((a.clone(), b.clone(), c));
            }
        }
    }
    None
}

/// Closed window `[lo, hi]`.
pub fn window(lo: Rational, hi: Rational) -> Result<QInterval, EngineError> {
    Ok(QInterval::new(
        Some(QBound::closed(lo)),
        Some(QBound::closed(hi)),
    )?)
}
