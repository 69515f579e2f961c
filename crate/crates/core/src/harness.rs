//! Brute-force and seeded randomized differential campaigns.
//!
//! Every campaign returns a [`VerificationReport`]. Work is split into
//! independent units run on the rayon pool; each unit derives its own RNG
//! from the campaign seed, and mismatches are sorted before they are
//! reported, so the outcome does not depend on scheduling.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{
    decompose_periodic_idx, decompose_rational, is_midconvex, lemma1_check_idx, midconvex_closure,
    midconvex_witness_idx, sample_description_point, satisfies_theorem2, theorem1_failure,
    verify_theorem3_if_with, SamplingBounds,
};
use crate::group::{make_group, FiniteAbelianGroup, GroupSubset};
use crate::integers::IntWindowSet;
use crate::rational::{
    format_rational, int, is_prime, rat, rational_gcd, QBound, QInterval, Rational,
    RationalGroupDescriptor, RationalMidconvexDescription,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Mismatch {
    pub group: String,
    pub subset: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupTally {
    pub group: String,
    pub subsets: usize,
    pub positives: usize,
    pub sampled: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub campaign: String,
    pub groups: usize,
    pub subsets: usize,
    pub samples: usize,
    pub positives: usize,
    pub seed: u64,
    pub per_group: Vec<GroupTally>,
    pub mismatches: Vec<Mismatch>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl VerificationReport {
    fn new(campaign: &str, seed: u64) -> Self {
        VerificationReport {
            campaign: campaign.to_string(),
            groups: 0,
            subsets: 0,
            samples: 0,
            positives: 0,
            seed,
            per_group: Vec::new(),
            mismatches: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn tally(&self, group: &str) -> Option<&GroupTally> {
        self.per_group.iter().find(|t| t.group == group)
    }

    fn finish(mut self, started: Instant) -> Self {
        self.mismatches.sort();
        self.elapsed_ms = started.elapsed().as_millis();
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "campaign: {}", self.campaign)?;
        writeln!(f, "groups: {}", self.groups)?;
        writeln!(f, "subsets: {}", self.subsets)?;
        writeln!(f, "samples: {}", self.samples)?;
        writeln!(f, "positives: {}", self.positives)?;
        writeln!(f, "seed: {}", self.seed)?;
        for t in &self.per_group {
            writeln!(
                f,
                "  Z({}): {} subsets{}, {} positive",
                t.group,
                t.subsets,
                if t.sampled { " (sampled)" } else { "" },
                t.positives
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        writeln!(f, "mismatches: {}", self.mismatches.len())?;
        for m in &self.mismatches {
            writeln!(
                f,
                "  Z({}) {}: {} vs {}",
                m.group, m.subset, m.left, m.right
            )?;
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Bounds for the finite-group sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    /// Groups up to this order get all `2^|G|` subsets.
    pub exhaustive_max: usize,
    /// Seeded random subsets drawn for larger groups.
    pub sampled_subsets: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            exhaustive_max: 12,
            sampled_subsets: 10_000,
            seed: 0,
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Partitions of `n` as non-increasing part lists, largest first part first.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One group per isomorphism class of each order up to `max_order`, written
/// as a product of prime-power cyclic factors.
pub fn enumerate_abelian_groups(max_order: usize) -> Vec<FiniteAbelianGroup> {
    let mut out = Vec::new();
    for n in 1..=max_order as u64 {
        let mut choices: Vec<Vec<i64>> = vec![Vec::new()];
        for (p, e) in prime_factors(n) {
            let mut next = Vec::new();
            for prefix in &choices {
                for part in partitions(e) {
                    let mut orders = prefix.clone();
                    orders.extend(part.iter().map(|&k| p.pow(k) as i64));
                    next.push(orders);
                }
            }
            choices = next;
        }
        out.extend(
            choices
                .iter()
                .map(|orders| make_group(orders).expect("small orders")),
        );
    }
    out
}

fn group_name(g: &FiniteAbelianGroup) -> String {
    g.describe_orders()
}

fn unit_seed(seed: u64, unit: usize) -> u64 {
    seed ^ (unit as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn random_subset(g: &FiniteAbelianGroup, rng: &mut ChaCha8Rng) -> GroupSubset {
    let density: f64 = rng.gen();
    let table = (0..g.order()).map(|_| rng.gen_bool(density)).collect();
    GroupSubset::from_table(g, table).expect("table sized to group")
}

/// Per-subset verdict of a sweep: `(positive, mismatch detail)`.
type Verdict = (bool, Option<(String, String)>);

fn sweep<F>(name: &str, max_order: usize, cfg: SweepConfig, check: F) -> VerificationReport
where
    F: Fn(&GroupSubset) -> Verdict + Sync,
{
    let started = Instant::now();
    let groups = enumerate_abelian_groups(max_order);
    let tallies: Vec<(GroupTally, Vec<Mismatch>)> = groups
        .par_iter()
        .enumerate()
        .map(|(unit, g)| {
            let name = group_name(g);
            let exhaustive = g.order() <= cfg.exhaustive_max;
            let subsets: Vec<GroupSubset> = if exhaustive {
                (0..1u64 << g.order())
                    .map(|m| GroupSubset::from_mask(g, m))
                    .collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(unit_seed(cfg.seed, unit));
                (0..cfg.sampled_subsets)
                    .map(|_| random_subset(g, &mut rng))
                    .collect()
            };
            let results: Vec<(bool, Option<Mismatch>)> = subsets
                .par_iter()
                .map(|s| {
                    let (pos, bad) = check(s);
                    let mm = bad.map(|(left, right)| Mismatch {
                        group: name.clone(),
                        subset: s.to_string(),
                        left,
                        right,
                    });
                    (pos, mm)
                })
                .collect();
            let tally = GroupTally {
                group: name.clone(),
                subsets: subsets.len(),
                positives: results.iter().filter(|r| r.0).count(),
                sampled: !exhaustive,
            };
            (tally, results.into_iter().filter_map(|r| r.1).collect())
        })
        .collect();

    let mut report = VerificationReport::new(name, cfg.seed);
    report.groups = groups.len();
    for (tally, mism) in tallies {
        report.subsets += tally.subsets;
        report.positives += tally.positives;
        report.per_group.push(tally);
        report.mismatches.extend(mism);
    }
    report.finish(started)
}

/// Midconvexity against "every `X - x` is a subgroup of odd index".
pub fn exhaustive_theorem2(max_order: usize) -> VerificationReport {
    exhaustive_theorem2_with(max_order, SweepConfig::default())
}

pub fn exhaustive_theorem2_with(max_order: usize, cfg: SweepConfig) -> VerificationReport {
    sweep("theorem2", max_order, cfg, |s| {
        let direct = is_midconvex(s);
        let characterized = satisfies_theorem2(s);
        let bad = (direct != characterized).then(|| {
            (
                format!("is_midconvex={direct}"),
                format!("subgroup_odd_index={characterized}"),
            )
        });
        (direct, bad)
    })
}

/// Midconvexity against "every trace decomposes as `C ∩ H` with odd index".
pub fn exhaustive_theorem1(max_order: usize) -> VerificationReport {
    exhaustive_theorem1_with(max_order, SweepConfig::default())
}

pub fn exhaustive_theorem1_with(max_order: usize, cfg: SweepConfig) -> VerificationReport {
    sweep("theorem1", max_order, cfg, |s| {
        let direct = is_midconvex(s);
        let failure = theorem1_failure(s);
        let bad = (direct != failure.is_none()).then(|| {
            let right = match &failure {
                Some((x, g, why)) => format!("trace x={x} g={g} fails: {why}"),
                None => "all traces decompose".to_string(),
            };
            (format!("is_midconvex={direct}"), right)
        });
        (direct, bad)
    })
}

/// Every midconvex subset has order-convex traces along `y - x` for all `x != y`.
pub fn exhaustive_lemma1(max_order: usize) -> VerificationReport {
    exhaustive_lemma1_with(max_order, SweepConfig::default())
}

pub fn exhaustive_lemma1_with(max_order: usize, cfg: SweepConfig) -> VerificationReport {
    sweep("lemma1", max_order, cfg, |s| {
        if !is_midconvex(s) {
            return (false, None);
        }
        let pts: Vec<usize> = s.indices().collect();
        for &x in &pts {
            for &y in &pts {
                if x != y && !lemma1_check_idx(s, x, y).expect("members") {
                    let g = s.group();
                    return (
                        true,
                        Some((
                            "midconvex".to_string(),
                            format!(
                                "trace at {} along {} not order-convex",
                                g.element(x),
                                g.element(y)
                            ),
                        )),
                    );
                }
            }
        }
        (true, None)
    })
}

/// Seeded closure-law campaign on random subsets of groups of order `<= max_order`.
///
/// Checks extensivity, monotonicity on a nested pair, idempotence, that the
/// closure is midconvex, and that `X` is midconvex iff it is its own closure.
pub fn closure_laws(count: usize, max_order: usize, seed: u64) -> VerificationReport {
    let started = Instant::now();
    let groups = enumerate_abelian_groups(max_order);
    let mut mismatches: Vec<Mismatch> = (0..count)
        .into_par_iter()
        .filter_map(|unit| {
            let mut rng = ChaCha8Rng::seed_from_u64(unit_seed(seed, unit));
            let g = groups.choose(&mut rng).expect("at least the trivial group");
            let x = random_subset(g, &mut rng);
            let extra = random_subset(g, &mut rng);
            let y = GroupSubset::from_indices(g, x.indices().chain(extra.indices()))
                .expect("same group");
            let cx = midconvex_closure(&x);
            let cy = midconvex_closure(&y);
            let mut failed = Vec::new();
            if !x.is_subset_of(&cx) {
                failed.push("extensive");
            }
            if !cx.is_subset_of(&cy) {
                failed.push("monotone");
            }
            if midconvex_closure(&cx) != cx {
                failed.push("idempotent");
            }
            if !is_midconvex(&cx) {
                failed.push("closed");
            }
            if is_midconvex(&x) != (cx == x) {
                failed.push("fixpoint");
            }
            (!failed.is_empty()).then(|| Mismatch {
                group: group_name(g),
                subset: x.to_string(),
                left: format!("closure={cx}"),
                right: format!("violated: {}", failed.join(",")),
            })
        })
        .collect();
    mismatches.sort();
    let mut report = VerificationReport::new("closure", seed);
    report.groups = groups.len();
    report.subsets = count;
    report.mismatches = mismatches;
    report.finish(started)
}

/// For every subset of `[0, width - 1]`: midconvexity of the window-exact set
/// against "`decompose_z` succeeds at every member", plus exact reconstruction.
pub fn windowed_z_equivalence(width: u32) -> VerificationReport {
    let started = Instant::now();
    let results: Vec<(bool, Option<Mismatch>)> = (0..1u64 << width)
        .into_par_iter()
        .map(|mask| {
            let s = IntWindowSet::from_mask(0, width, mask);
            let direct = s.is_midconvex_z();
            let mut all_ok = true;
            let mut roundtrip = true;
            for x in s.iter() {
                match s.decompose_z(x) {
                    Ok(d) => roundtrip &= (s.lo()..=s.hi()).all(|n| d.contains(n) == s.contains(n)),
                    Err(_) => all_ok = false,
                }
            }
            let bad = (direct != all_ok || !roundtrip).then(|| Mismatch {
                group: "Z".into(),
                subset: s.to_string(),
                left: format!("is_midconvex_z={direct}"),
                right: format!("decompose_all={all_ok} roundtrip={roundtrip}"),
            });
            (direct, bad)
        })
        .collect();
    let mut report = VerificationReport::new("windowed_z", 0);
    report.groups = 1;
    report.subsets = results.len();
    report.positives = results.iter().filter(|r| r.0).count();
    report.mismatches = results.into_iter().filter_map(|r| r.1).collect();
    report.finish(started)
}

/// Bounds for the two-purity sampling campaign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PuritySampling {
    pub elements_per_pair: usize,
    pub bounds: SamplingBounds,
}

impl Default for PuritySampling {
    fn default() -> Self {
        PuritySampling {
            elements_per_pair: 200,
            bounds: SamplingBounds::default(),
        }
    }
}

fn random_subset_of(primes: &[u64], rng: &mut ChaCha8Rng) -> Vec<u64> {
    primes
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.5))
        .collect()
}

fn random_smooth_rational(primes: &BTreeSet<u64>, max_exp: u32, rng: &mut ChaCha8Rng) -> Rational {
    let mut d = int(1);
    for &p in primes {
        d *= int(p.pow(rng.gen_range(0..=max_exp)) as i64);
    }
    d
}

/// Random `(G, H)` with `H ⊆ G`; about half of the `H` are replaced by their 2-pure closure.
pub fn random_descriptor_pair(
    prime_pool: &[u64],
    rng: &mut ChaCha8Rng,
) -> (RationalGroupDescriptor, RationalGroupDescriptor) {
    let q = rat(rng.gen_range(1..=6), rng.gen_range(1..=6));
    let g =
        RationalGroupDescriptor::new(q.clone(), random_subset_of(prime_pool, rng)).expect("valid");
    if rng.gen_ratio(1, 10) {
        return (g.clone(), g);
    }
    let gp: Vec<u64> = g.primes().iter().copied().collect();
    let hq = random_subset_of(&gp, rng);
    let c = int(rng.gen_range(1..=12));
    let h_gen = &q * c / random_smooth_rational(g.primes(), 2, rng);
    let mut h = RationalGroupDescriptor::new(h_gen, hq).expect("valid");
    if rng.gen_bool(0.5) {
        h = h.two_pure_closure(&g).expect("subgroup");
    }
    (g, h)
}

/// Samples `g ∈ G` looking for `2g ∈ H` with `g ∉ H`.
///
/// Half of the samples are grid points of `G`, half are halves of grid points
/// of `H` (every `g` with `2g ∈ H` has that form).
pub fn sampled_two_purity_violation(
    g: &RationalGroupDescriptor,
    h: &RationalGroupDescriptor,
    cfg: PuritySampling,
    rng: &mut ChaCha8Rng,
) -> Option<Rational> {
    let n = cfg.bounds.numerator;
    let two = int(2);
    for i in 0..cfg.elements_per_pair {
        let a = int(rng.gen_range(-n..=n));
        let cand = if i % 2 == 0 {
            g.gen() * a / random_smooth_rational(g.primes(), cfg.bounds.exponent, rng)
        } else {
            h.gen() * a / random_smooth_rational(h.primes(), cfg.bounds.exponent, rng) / &two
        };
        if g.member(&cand) && h.member(&(&cand * &two)) && !h.member(&cand) {
            return Some(cand);
        }
    }
    None
}

/// The descriptor formula for 2-purity against sampling of `2g ∈ H ⇒ g ∈ H`.
pub fn sample_two_purity(trials: usize, seed: u64, prime_pool: &[u64]) -> VerificationReport {
    sample_two_purity_with(trials, seed, prime_pool, PuritySampling::default())
}

pub fn sample_two_purity_with(
    trials: usize,
    seed: u64,
    prime_pool: &[u64],
    cfg: PuritySampling,
) -> VerificationReport {
    let started = Instant::now();
    assert!(
        prime_pool.iter().all(|&p| is_prime(p)),
        "prime pool must hold primes"
    );
    let results: Vec<(bool, Option<Mismatch>)> = (0..trials)
        .into_par_iter()
        .map(|unit| {
            let mut rng = ChaCha8Rng::seed_from_u64(unit_seed(seed, unit));
            let (g, h) = random_descriptor_pair(prime_pool, &mut rng);
            let formula = h.is_two_pure(&g).expect("H is a subgroup of G");
            let violation = sampled_two_purity_violation(&g, &h, cfg, &mut rng);
            let bad = (formula == violation.is_some()).then(|| Mismatch {
                group: g.to_string(),
                subset: h.to_string(),
                left: format!("formula={formula}"),
                right: match &violation {
                    Some(v) => format!("sampled violation g={}", format_rational(v)),
                    None => "no sampled violation".to_string(),
                },
            });
            (formula, bad)
        })
        .collect();
    let mut report = VerificationReport::new("purity", seed);
    report.subsets = trials;
    report.samples = trials * cfg.elements_per_pair;
    report.positives = results.iter().filter(|r| r.0).count();
    report.mismatches = results.into_iter().filter_map(|r| r.1).collect();
    report.finish(started)
}

/// Points reached by repeatedly adding admissible midpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedClosure {
    pub points: BTreeSet<Rational>,
    pub complete: bool,
    pub rounds: usize,
}

/// Adds `(a+b)/2` whenever it lies in the ambient group, for at most
/// `max_iters` rounds. `complete` is set iff some round added nothing.
pub fn bounded_closure_oracle(
    ambient: &RationalGroupDescriptor,
    start: &BTreeSet<Rational>,
    max_iters: usize,
) -> BoundedClosure {
    let mut points = start.clone();
    let two = int(2);
    for round in 0..max_iters {
        let pts: Vec<Rational> = points.iter().cloned().collect();
        let mut added = Vec::new();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                let c = (a + b) / &two;
                if ambient.member(&c) && !points.contains(&c) {
                    added.push(c);
                }
            }
        }
        if added.is_empty() {
            return BoundedClosure {
                points,
                complete: true,
                rounds: round,
            };
        }
        points.extend(added);
    }
    BoundedClosure {
        points,
        complete: false,
        rounds: max_iters,
    }
}

/// `[min X0, max X0] ∩ (twoPureClosure(⟨X0 - x⟩) + x)` with `x = min X0`.
pub fn hull_candidate(
    ambient: &RationalGroupDescriptor,
    start: &BTreeSet<Rational>,
) -> Result<RationalMidconvexDescription, crate::error::RationalError> {
    let lo = start.iter().next().expect("nonempty").clone();
    let hi = start.iter().next_back().expect("nonempty").clone();
    let diffs: Vec<Rational> = start.iter().map(|r| r - &lo).collect();
    let d = rational_gcd(&diffs);
    let subgroup = if d == int(0) {
        ambient.clone()
    } else {
        RationalGroupDescriptor::cyclic(d)?.two_pure_closure(ambient)?
    };
    RationalMidconvexDescription::new(QInterval::closed(lo.clone(), hi)?, subgroup, lo, ambient)
}

/// Tests the hull formula against the bounded oracle. Only `oracle ⊆ candidate`
/// is asserted; the reverse inclusion is reported as unfalsified at the depth used.
pub fn conjecture_hull_check(
    ambient: &RationalGroupDescriptor,
    start: &BTreeSet<Rational>,
    max_iters: usize,
    samples: usize,
    seed: u64,
) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new("hull", seed);
    report.samples = samples;
    if start.is_empty() {
        report.notes.push("empty start set".into());
        return report.finish(started);
    }
    let set_name = format!(
        "{{{}}}",
        start
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(",")
    );
    let candidate = match hull_candidate(ambient, start) {
        Ok(c) => c,
        Err(e) => {
            report.mismatches.push(Mismatch {
                group: ambient.to_string(),
                subset: set_name,
                left: "candidate".into(),
                right: e.to_string(),
            });
            return report.finish(started);
        }
    };
    let oracle = bounded_closure_oracle(ambient, start, max_iters);
    report.subsets = oracle.points.len();
    report.notes.push(format!("candidate {candidate}"));
    report.notes.push(format!(
        "oracle {} points after {} rounds ({})",
        oracle.points.len(),
        oracle.rounds,
        if oracle.complete {
            "complete"
        } else {
            "incomplete"
        }
    ));
    for p in &oracle.points {
        if !candidate.contains(p) {
            report.mismatches.push(Mismatch {
                group: ambient.to_string(),
                subset: set_name.clone(),
                left: format!("oracle point {}", format_rational(p)),
                right: "outside candidate".into(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut produced = 0;
    let mut missing_after_complete = Vec::new();
    for _ in 0..samples {
        let p = sample_description_point(&candidate, SamplingBounds::default(), &mut rng);
        if oracle.points.contains(&p) {
            produced += 1;
        } else if oracle.complete {
            missing_after_complete.push(p);
        }
    }
    report.positives = produced;
    if missing_after_complete.is_empty() {
        report.notes.push(format!(
            "reverse inclusion unfalsified at depth {}: {produced}/{samples} sampled candidate points already produced",
            oracle.rounds
        ));
    } else {
        report.notes.push(format!(
            "reverse inclusion falsified: candidate point {} never produced by a complete oracle",
            format_rational(&missing_after_complete[0])
        ));
    }
    report.finish(started)
}

/// A synthetic `X = C ∩ (H + x)` in `G` with `H` 2-pure, plus the inputs needed
/// to decompose it again.
#[derive(Clone, Debug)]
pub struct SyntheticInstance {
    pub ambient: RationalGroupDescriptor,
    pub truth: RationalMidconvexDescription,
    pub second_point: Rational,
    pub window: QInterval,
    pub depth: usize,
}

pub fn random_synthetic_instance(rng: &mut ChaCha8Rng) -> SyntheticInstance {
    let pool = [2u64, 3, 5];
    let mut primes: Vec<u64> = random_subset_of(&pool, rng);
    primes.truncate(2);
    let q = rat(rng.gen_range(1..=3), rng.gen_range(1..=3));
    let ambient = RationalGroupDescriptor::new(q.clone(), primes.iter().copied()).expect("valid");
    let hq = random_subset_of(&primes, rng);
    let mut denom = int(1);
    for &p in &primes {
        if rng.gen_bool(0.5) {
            denom *= int(p as i64);
        }
    }
    let h0 =
        RationalGroupDescriptor::new(&q * int(rng.gen_range(1..=5)) / denom, hq).expect("valid");
    let h = h0.two_pure_closure(&ambient).expect("subgroup");
    let base = &q * int(rng.gen_range(-3..=3));
    let second = &base + h.gen();
    let third = |rng: &mut ChaCha8Rng| &q * int(rng.gen_range(0..=6)) / int(3);
    let lower = if rng.gen_ratio(1, 5) {
        None
    } else {
        let slack = third(rng);
        let inclusive = slack == int(0) || rng.gen_bool(0.5);
        Some(QBound {
            value: &base - slack,
            inclusive,
        })
    };
    let upper = if rng.gen_ratio(1, 5) {
        None
    } else {
        let slack = third(rng);
        let inclusive = slack == int(0) || rng.gen_bool(0.5);
        Some(QBound {
            value: &second + slack,
            inclusive,
        })
    };
    let margin = &q * int(2);
    let w_lo = match &lower {
        Some(b) => &b.value - &margin,
        None => &base - h.gen() - &margin,
    };
    let w_hi = match &upper {
        Some(b) => &b.value + &margin,
        None => &second + h.gen() + &margin,
    };
    let interval = QInterval::new(lower, upper).expect("ordered");
    let truth = RationalMidconvexDescription::new(interval, h, base, &ambient).expect("consistent");
    SyntheticInstance {
        depth: (2 * primes.len()).max(1),
        ambient,
        truth,
        second_point: second,
        window: QInterval::closed(w_lo, w_hi).expect("ordered"),
    }
}

/// Seeded round trips through `verify_theorem3_if` and `decompose_rational`.
///
/// Agreement is checked on every point of `g_N ℤ ∩ window`, where `g_N` is
/// the finest level of the chain.
pub fn theorem3_roundtrip(count: usize, samples: usize, seed: u64) -> VerificationReport {
    let started = Instant::now();
    let results: Vec<(usize, Vec<Mismatch>)> = (0..count)
        .into_par_iter()
        .map(|unit| {
            let mut rng = ChaCha8Rng::seed_from_u64(unit_seed(seed, unit));
            let inst = random_synthetic_instance(&mut rng);
            let group = inst.ambient.to_string();
            let subset = inst.truth.to_string();
            let mut bad = Vec::new();
            let mm = |left: String, right: String| Mismatch {
                group: group.clone(),
                subset: subset.clone(),
                left,
                right,
            };
            match verify_theorem3_if_with(
                &inst.truth,
                &inst.ambient,
                samples,
                rng.gen(),
                SamplingBounds::default(),
            ) {
                Ok(r) if r.passed() => {}
                Ok(r) => {
                    let (a, b, c) = r.violation.expect("failed");
                    bad.push(mm(
                        "theorem3_if".into(),
                        format!(
                            "midpoint {} of {} and {} missing",
                            format_rational(&c),
                            format_rational(&a),
                            format_rational(&b)
                        ),
                    ));
                }
                Err(e) => bad.push(mm("theorem3_if".into(), e.to_string())),
            }
            let mut grid_points = 0;
            match decompose_rational(
                &inst.ambient,
                &inst.truth,
                &inst.truth.base,
                &inst.second_point,
                inst.depth,
                &inst.window,
            ) {
                Ok(dec) => {
                    let g = dec.finest_generator().clone();
                    let (k_lo, k_hi) =
                        crate::engine::grid_range(&inst.window, &g).expect("bounded");
                    for k in k_lo..=k_hi {
                        let r = int(k) * &g;
                        grid_points += 1;
                        let (t, d) = (inst.truth.contains(&r), dec.description.contains(&r));
                        if t != d {
                            bad.push(mm(
                                format!("recovered {}", dec.description),
                                format!("disagrees at {}: truth={t}", format_rational(&r)),
                            ));
                            break;
                        }
                    }
                }
                Err(e) => bad.push(mm("decompose_rational".into(), e.to_string())),
            }
            (grid_points, bad)
        })
        .collect();
    let mut report = VerificationReport::new("theorem3", seed);
    report.subsets = count;
    report.samples = count * samples + results.iter().map(|r| r.0).sum::<usize>();
    report.positives = results.iter().filter(|r| r.1.is_empty()).count();
    report.mismatches = results.into_iter().flat_map(|r| r.1).collect();
    report.finish(started)
}

/// Direct-enumeration count of midconvex subsets of a group, via the
/// definition with `z` ranging over the whole group.
pub fn count_midconvex_by_definition(g: &FiniteAbelianGroup) -> usize {
    (0..1u64 << g.order())
        .filter(|&mask| {
            let s = GroupSubset::from_mask(g, mask);
            let closed = s.indices().all(|x| {
                s.indices().all(|y| {
                    (0..g.order())
                        .filter(|&z| g.add_idx(z, z) == g.add_idx(x, y))
                        .all(|z| s.contains_idx(z))
                })
            });
            closed
        })
        .count()
}

/// Checks the doubling claim and the base-point independence of the
/// periodic decomposition on every midconvex subset.
pub fn exhaustive_periodic_claims(max_order: usize) -> VerificationReport {
    sweep("periodic_claims", max_order, SweepConfig::default(), |s| {
        if midconvex_witness_idx(s).is_some() || s.is_empty() {
            return (false, None);
        }
        let g = s.group();
        let first = s.indices().next().expect("nonempty");
        let reference = decompose_periodic_idx(s, first).map(|d| d.subgroup);
        for x in s.indices() {
            let shifted = s.translate_idx(g.neg_idx(x));
            let doubling = shifted
                .indices()
                .all(|a| shifted.contains_idx(g.add_idx(a, a)));
            let same = decompose_periodic_idx(s, x).map(|d| d.subgroup) == reference;
            if !doubling || !same {
                return (
                    true,
                    Some((
                        format!("x={}", g.element(x)),
                        format!("doubling={doubling} same_subgroup={same}"),
                    )),
                );
            }
        }
        (true, None)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_enumeration() {
        let gs = enumerate_abelian_groups(1);
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].order(), 1);
        let gs = enumerate_abelian_groups(8);
        let of8: Vec<String> = gs
            .iter()
            .filter(|g| g.order() == 8)
            .map(group_name)
            .collect();
        assert_eq!(of8, ["8", "4x2", "2x2x2"]);
        assert_eq!(gs.iter().filter(|g| g.order() == 6).count(), 1);
        // number of classes per order 1..=12
        let counts: Vec<usize> = (1..=12)
            .map(|n| {
                enumerate_abelian_groups(12)
                    .iter()
                    .filter(|g| g.order() == n)
                    .count()
            })
            .collect();
        assert_eq!(counts, [1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2]);
    }

    #[test]
    fn small_theorem2_sweeps() {
        let r = exhaustive_theorem2(4);
        assert!(r.passed());
        assert_eq!(r.tally("4").unwrap().positives, 2);
        assert_eq!(r.tally("4").unwrap().subsets, 16);
        let r = exhaustive_theorem2(5);
        assert_eq!(r.tally("5").unwrap().positives, 7);
        let r = exhaustive_theorem2(1);
        assert_eq!(r.tally("1").unwrap().positives, 2);
    }

    #[test]
    fn small_theorem1_and_lemma1_sweeps() {
        assert!(exhaustive_theorem1(6).passed());
        assert!(exhaustive_lemma1(8).passed());
        assert!(exhaustive_theorem1(1).passed());
    }

    #[test]
    fn purity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z = RationalGroupDescriptor::integers();
        let three = RationalGroupDescriptor::cyclic(int(3)).unwrap();
        assert_eq!(
            sampled_two_purity_violation(&z, &three, PuritySampling::default(), &mut rng),
            None
        );
        let dyadic = RationalGroupDescriptor::new(int(1), [2]).unwrap();
        let v =
            sampled_two_purity_violation(&dyadic, &z, PuritySampling::default(), &mut rng).unwrap();
        assert!(dyadic.member(&v) && !z.member(&v));
        assert_eq!(
            sampled_two_purity_violation(&dyadic, &dyadic, PuritySampling::default(), &mut rng),
            None
        );
        assert!(sample_two_purity(20, 3, &[2, 3, 5, 7]).passed());
    }

    #[test]
    fn bounded_closure_examples() {
        let z = RationalGroupDescriptor::integers();
        let s: BTreeSet<Rational> = [int(0), int(3)].into_iter().collect();
        let r = bounded_closure_oracle(&z, &s, 5);
        assert!(r.complete);
        assert_eq!(r.points, s);

        let s: BTreeSet<Rational> = [int(0), int(2)].into_iter().collect();
        let r = bounded_closure_oracle(&z, &s, 5);
        assert!(r.complete);
        assert_eq!(r.points, [int(0), int(1), int(2)].into_iter().collect());

        let dyadic = RationalGroupDescriptor::new(int(1), [2]).unwrap();
        let s: BTreeSet<Rational> = [int(0), int(1)].into_iter().collect();
        let mut prev = 0;
        for iters in 1..=5 {
            let r = bounded_closure_oracle(&dyadic, &s, iters);
            assert!(!r.complete);
            assert!(r.points.len() > prev);
            assert!(r.points.iter().all(|p| *p >= int(0) && *p <= int(1)));
            prev = r.points.len();
        }
    }

    #[test]
    fn hull_examples() {
        let z = RationalGroupDescriptor::integers();
        let s: BTreeSet<Rational> = [int(0), int(2)].into_iter().collect();
        let c = hull_candidate(&z, &s).unwrap();
        assert_eq!(c.to_string(), "conv[0,2] ∩ ((1,[]) + 0)");
        assert!(conjecture_hull_check(&z, &s, 4, 50, 0).passed());

        let dyadic = RationalGroupDescriptor::new(int(1), [2]).unwrap();
        let s: BTreeSet<Rational> = [int(0), int(1)].into_iter().collect();
        assert_eq!(
            hull_candidate(&dyadic, &s).unwrap().to_string(),
            "conv[0,1] ∩ ((1,[2]) + 0)"
        );
        assert!(conjecture_hull_check(&dyadic, &s, 4, 50, 0).passed());

        let s: BTreeSet<Rational> = [int(4)].into_iter().collect();
        let c = hull_candidate(&z, &s).unwrap();
        assert!(c.contains(&int(4)) && !c.contains(&int(5)));
        let r = conjecture_hull_check(&z, &s, 4, 10, 0);
        assert!(r.passed());
        assert_eq!(r.subsets, 1);
    }

    #[test]
    fn partitions_of_small_numbers() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
    }
}
