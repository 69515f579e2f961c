use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use super::{
    BoundExpr, Command, DecomposeArgs, ElemExpr, GroupExpr, Program, SetExpr, Theorem, VerifyArgs,
};
use crate::engine::{
    decompose_periodic, decompose_rational, finite_rational_witness, midconvex_closure,
    midconvex_witness, sample_midpoint_check, trace_in_group, verify_theorem3_if,
    RationalDecomposition, SamplingBounds,
};
use crate::error::{DslError, EngineError};
use crate::group::{make_group, FiniteAbelianGroup, GroupElement, GroupSubset};
use crate::harness::{
    bounded_closure_oracle, conjecture_hull_check, exhaustive_lemma1_with,
    exhaustive_theorem1_with, exhaustive_theorem2_with, sample_two_purity, theorem3_roundtrip,
    Mismatch, SweepConfig, VerificationReport,
};
use crate::integers::{decompose_trace, IntWindowSet, TraceDecomposition};
use crate::rational::{
    format_rational, int, QBound, QInterval, Rational, RationalGroupDescriptor,
    RationalMidconvexDescription,
};

const DEFAULT_ROUNDS: usize = 6;
const DEFAULT_CHECK_SAMPLES: usize = 1000;
const PURITY_PRIMES: [u64; 4] = [2, 3, 5, 7];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub format: Format,
    /// Adds `elapsed_ms` to the report. Off by default so output is reproducible.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalOut {
    pub lower: Option<String>,
    pub upper: Option<String>,
    pub inclusive: [bool; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HOut {
    pub gen: Option<String>,
    pub primes: Vec<u64>,
    pub modulus: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionOut {
    #[serde(rename = "C")]
    pub c: IntervalOut,
    #[serde(rename = "H")]
    pub h: HOut,
    pub x: String,
    #[serde(skip)]
    pub summary: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    pub count: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub group: Option<String>,
    pub set: Option<String>,
    pub result: String,
    pub witness: Option<String>,
    pub decomposition: Option<DecompositionOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
    pub stats: Stats,
}

impl Report {
    fn new(program: &Program) -> Self {
        Report {
            command: program.command.name().to_string(),
            group: program.group.as_ref().map(|g| g.to_string()),
            set: program.set.as_ref().map(|s| s.to_string()),
            result: String::new(),
            witness: None,
            decomposition: None,
            value: None,
            report: None,
            stats: Stats {
                elapsed_ms: None,
                count: 0,
                seed: 0,
            },
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("plain data");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &str| {
            let _ = writeln!(out, "{k}: {v}");
        };
        line("command", &self.command);
        if let Some(g) = &self.group {
            line("group", g);
        }
        if let Some(s) = &self.set {
            line("set", s);
        }
        line("result", &self.result);
        if let Some(w) = &self.witness {
            line("witness", w);
        }
        if let Some(d) = &self.decomposition {
            line("decomposition", &d.summary);
        }
        if let Some(v) = &self.value {
            line(&self.command, v);
        }
        line("count", &self.stats.count.to_string());
        line("seed", &self.stats.seed.to_string());
        if let Some(ms) = self.stats.elapsed_ms {
            line("elapsed_ms", &ms.to_string());
        }
        if let Some(r) = &self.report {
            for l in r.to_string().lines() {
                let _ = writeln!(out, "  {l}");
            }
        }
        out
    }
}

/// Exit status and report of one program run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Report,
}

#[allow(clippy::large_enum_variant)]
enum RSet {
    Points(BTreeSet<Rational>),
    Description(RationalMidconvexDescription),
}

#[allow(clippy::large_enum_variant)]
enum Typed {
    Finite(FiniteAbelianGroup, Option<GroupSubset>),
    Zed(Option<IntWindowSet>),
    Rational(RationalGroupDescriptor, Option<RSet>),
    Bare,
}

fn type_err<T>(msg: impl Into<String>) -> Result<T, DslError> {
    Err(DslError::Type(msg.into()))
}

fn as_int(e: &ElemExpr) -> Result<i64, DslError> {
    match e {
        ElemExpr::Scalar(r) if r.is_integer() => match i64::try_from(r.to_integer()) {
            Ok(v) => Ok(v),
            Err(_) => type_err(format!("{e} is out of range")),
        },
        _ => type_err(format!("{e} is not an integer")),
    }
}

fn as_rational(e: &ElemExpr) -> Result<Rational, DslError> {
    match e {
        ElemExpr::Scalar(r) => Ok(r.clone()),
        ElemExpr::Tuple(_) => type_err(format!("{e} is a tuple, expected a rational")),
    }
}

fn finite_elem(g: &FiniteAbelianGroup, e: &ElemExpr) -> Result<GroupElement, DslError> {
    let values = match e {
        ElemExpr::Tuple(v) => v.clone(),
        ElemExpr::Scalar(_) => vec![as_int(e)?],
    };
    let in_range = values.len() == g.rank()
        && values
            .iter()
            .zip(g.orders())
            .all(|(&v, &n)| v >= 0 && (v as u64) < n);
    if !in_range {
        return type_err(format!(
            "{e} is not an element of Z({})",
            g.describe_orders()
        ));
    }
    Ok(g.element_from(&values).expect("checked"))
}

fn rational_elem(g: &RationalGroupDescriptor, e: &ElemExpr) -> Result<Rational, DslError> {
    let r = as_rational(e)?;
    if !g.member(&r) {
        return type_err(format!("{e} is not an element of {g}"));
    }
    Ok(r)
}

fn bound(b: &BoundExpr) -> Option<QBound> {
    b.value.as_ref().map(|v| QBound {
        value: v.clone(),
        inclusive: b.inclusive,
    })
}

fn typecheck(p: &Program) -> Result<Typed, DslError> {
    let Some(group) = &p.group else {
        return Ok(Typed::Bare);
    };
    match group {
        GroupExpr::Finite(orders) => {
            let g = make_group(orders).or_else(|e| type_err(e.to_string()))?;
            let set = match &p.set {
                None => None,
                Some(SetExpr::Explicit {
                    window: Some(_), ..
                }) => return type_err("windows apply to sets in Z, not finite groups"),
                Some(SetExpr::Explicit { elems, .. }) => {
                    let idx = elems
                        .iter()
                        .map(|e| finite_elem(&g, e).map(|x| g.index_of(&x).expect("member")))
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(GroupSubset::from_indices(&g, idx).expect("indices in range"))
                }
                Some(SetExpr::Description { .. }) => {
                    return type_err("interval descriptions need a group Q(...)")
                }
            };
            Ok(Typed::Finite(g, set))
        }
        GroupExpr::Zed => {
            let set = match &p.set {
                None => None,
                Some(SetExpr::Explicit { window: None, .. }) => {
                    return type_err("sets in Z need an explicit window, e.g. {0,3}@window[0,9]")
                }
                Some(SetExpr::Explicit {
                    elems,
                    window: Some((lo, hi)),
                }) => {
                    let members = elems.iter().map(as_int).collect::<Result<Vec<_>, _>>()?;
                    Some(
                        IntWindowSet::from_members(*lo, *hi, members)
                            .or_else(|e| type_err(e.to_string()))?,
                    )
                }
                Some(SetExpr::Description { .. }) => {
                    return type_err("interval descriptions need a group Q(...)")
                }
            };
            Ok(Typed::Zed(set))
        }
        GroupExpr::Rational { gen, primes } => {
            let g = RationalGroupDescriptor::new(gen.clone(), primes.iter().copied())
                .or_else(|e| type_err(e.to_string()))?;
            let set = match &p.set {
                None => None,
                Some(SetExpr::Explicit {
                    window: Some(_), ..
                }) => {
                    return type_err(
                        "windows apply to sets in Z; sets in Q are finite lists or descriptions",
                    )
                }
                Some(SetExpr::Explicit { elems, .. }) => Some(RSet::Points(
                    elems
                        .iter()
                        .map(|e| rational_elem(&g, e))
                        .collect::<Result<BTreeSet<_>, _>>()?,
                )),
                Some(SetExpr::Description {
                    lower,
                    upper,
                    gen: h_gen,
                    primes: h_primes,
                    base,
                }) => {
                    let interval = QInterval::new(bound(lower), bound(upper))
                        .or_else(|e| type_err(e.to_string()))?;
                    let h = RationalGroupDescriptor::new(h_gen.clone(), h_primes.iter().copied())
                        .or_else(|e| type_err(e.to_string()))?;
                    Some(RSet::Description(
                        RationalMidconvexDescription::new(interval, h, base.clone(), &g)
                            .or_else(|e| type_err(e.to_string()))?,
                    ))
                }
            };
            Ok(Typed::Rational(g, set))
        }
    }
}

fn z_interval(d: &TraceDecomposition) -> IntervalOut {
    IntervalOut {
        lower: d.interval.lower().map(|v| v.to_string()),
        upper: d.interval.upper().map(|v| v.to_string()),
        inclusive: [d.interval.lower().is_some(), d.interval.upper().is_some()],
    }
}

fn z_decomposition(d: &TraceDecomposition) -> DecompositionOut {
    let m = d.subgroup.modulus();
    DecompositionOut {
        c: z_interval(d),
        h: HOut {
            gen: Some(m.to_string()),
            primes: vec![],
            modulus: Some(m.to_string()),
            members: None,
            index: None,
        },
        x: d.base.to_string(),
        summary: d.to_string(),
    }
}

fn q_decomposition(d: &RationalDecomposition) -> DecompositionOut {
    let desc = &d.description;
    let b = |x: Option<&QBound>| x.map(|b| format_rational(&b.value));
    let incl = |x: Option<&QBound>| x.is_some_and(|b| b.inclusive);
    DecompositionOut {
        c: IntervalOut {
            lower: b(desc.interval.lower()),
            upper: b(desc.interval.upper()),
            inclusive: [incl(desc.interval.lower()), incl(desc.interval.upper())],
        },
        h: HOut {
            gen: Some(format_rational(desc.subgroup.gen())),
            primes: desc.subgroup.primes().iter().copied().collect(),
            modulus: d.levels.last().map(|l| l.modulus.to_string()),
            members: None,
            index: None,
        },
        x: format_rational(&desc.base),
        summary: format!("{desc} levels={}", d.levels.len()),
    }
}

fn triple(a: &Rational, b: &Rational, c: &Rational) -> String {
    format!(
        "({},{},{})",
        format_rational(a),
        format_rational(b),
        format_rational(c)
    )
}

fn first_mismatch(m: &[Mismatch]) -> Option<String> {
    m.first()
        .map(|m| format!("Z({}) {}: {} vs {}", m.group, m.subset, m.left, m.right))
}

/// Maps an engine failure onto the report; returns the exit code.
fn engine_failure(r: &mut Report, e: EngineError) -> Result<i32, DslError> {
    match e {
        EngineError::NotMidconvex { reason } => {
            r.result = "not midconvex".into();
            r.witness = Some(reason);
            Ok(1)
        }
        EngineError::WindowTooSmall(msg) | EngineError::ResourceCap(msg) => {
            r.result = "inconclusive".into();
            r.witness = Some(msg);
            Ok(3)
        }
        other => type_err(other.to_string()),
    }
}

fn need_set<T>(s: Option<T>, cmd: &str) -> Result<T, DslError> {
    match s {
        Some(v) => Ok(v),
        None => type_err(format!("{cmd} needs a set statement")),
    }
}

fn verify(typed: &Typed, t: Theorem, a: &VerifyArgs, r: &mut Report) -> Result<i32, DslError> {
    let seed = a.seed.unwrap_or(0);
    r.stats.seed = seed;
    let cfg = |default_max: usize| {
        (
            a.max_order.unwrap_or(default_max),
            SweepConfig {
                sampled_subsets: a.samples.unwrap_or(SweepConfig::default().sampled_subsets),
                seed,
                ..SweepConfig::default()
            },
        )
    };
    let report = match t {
        Theorem::One => {
            let (n, c) = cfg(10);
            exhaustive_theorem1_with(n, c)
        }
        Theorem::Two => {
            let (n, c) = cfg(12);
            exhaustive_theorem2_with(n, c)
        }
        Theorem::Lemma1 => {
            let (n, c) = cfg(12);
            exhaustive_lemma1_with(n, c)
        }
        Theorem::Purity => sample_two_purity(a.samples.unwrap_or(100), seed, &PURITY_PRIMES),
        Theorem::Three => match typed {
            Typed::Rational(g, Some(RSet::Description(d))) => {
                let samples = a.samples.unwrap_or(DEFAULT_CHECK_SAMPLES);
                let check = match verify_theorem3_if(d, g, samples, seed) {
                    Ok(c) => c,
                    Err(e) => return type_err(e.to_string()),
                };
                r.stats.count = check.pairs;
                r.result = if check.passed() { "pass" } else { "fail" }.into();
                r.witness = check.violation.as_ref().map(|(a, b, c)| triple(a, b, c));
                return Ok(if check.passed() { 0 } else { 1 });
            }
            Typed::Bare => theorem3_roundtrip(50, a.samples.unwrap_or(DEFAULT_CHECK_SAMPLES), seed),
            _ => {
                return type_err("verify --theorem 3 takes a description in Q, or no group at all")
            }
        },
        Theorem::Hull => match typed {
            Typed::Rational(g, Some(RSet::Points(pts))) if !pts.is_empty() => {
                conjecture_hull_check(
                    g,
                    pts,
                    a.rounds.unwrap_or(DEFAULT_ROUNDS),
                    a.samples.unwrap_or(100),
                    seed,
                )
            }
            _ => return type_err("verify --theorem hull needs a nonempty finite set in Q"),
        },
    };
    r.stats.count = report.subsets;
    r.result = if report.passed() { "pass" } else { "fail" }.into();
    r.witness = first_mismatch(&report.mismatches);
    let code = if report.passed() { 0 } else { 1 };
    r.report = Some(report);
    Ok(code)
}

fn dispatch(p: &Program, typed: Typed, r: &mut Report) -> Result<i32, DslError> {
    if let Command::Verify(t, a) = &p.command {
        return verify(&typed, *t, a, r);
    }
    match typed {
        Typed::Bare => type_err(format!("{} needs a group statement", p.command.name())),
        Typed::Finite(g, set) => {
            let set = need_set(set, p.command.name())?;
            r.stats.count = set.len();
            match &p.command {
                Command::Check { .. } => Ok(match midconvex_witness(&set) {
                    Some(w) => {
                        r.result = "not midconvex".into();
                        r.witness = Some(w.to_string());
                        1
                    }
                    None => {
                        r.result = "midconvex".into();
                        0
                    }
                }),
                Command::Closure { .. } => {
                    let c = midconvex_closure(&set);
                    r.result = if c == set {
                        "already midconvex"
                    } else {
                        "enlarged"
                    }
                    .into();
                    r.value = Some(c.to_string());
                    Ok(0)
                }
                Command::Trace { x, g: step } => {
                    let (x, step) = (finite_elem(&g, x)?, finite_elem(&g, step)?);
                    if !set.contains(&x) {
                        return type_err(format!("x={x} is not in the set"));
                    }
                    let t = trace_in_group(&set, &x, &step).or_else(|e| type_err(e.to_string()))?;
                    r.value = Some(format!("{} mod {}", t.set, t.period));
                    match t.decompose() {
                        Ok(d) => {
                            r.result = "decomposes".into();
                            r.decomposition = Some(z_decomposition(&d));
                            Ok(0)
                        }
                        Err(e) => engine_failure(r, e),
                    }
                }
                Command::Decompose(a) => {
                    no_rational_args(a)?;
                    let x = match &a.x {
                        Some(e) => finite_elem(&g, e)?,
                        None => match set.elements().into_iter().next() {
                            Some(x) => x,
                            None => return type_err("decompose needs a nonempty set"),
                        },
                    };
                    if !set.contains(&x) {
                        return type_err(format!("x={x} is not in the set"));
                    }
                    match decompose_periodic(&set, &x) {
                        Ok(d) => {
                            r.result = "decomposes".into();
                            r.decomposition = Some(DecompositionOut {
                                c: IntervalOut {
                                    lower: None,
                                    upper: None,
                                    inclusive: [false, false],
                                },
                                h: HOut {
                                    gen: None,
                                    primes: vec![],
                                    modulus: None,
                                    members: Some(d.subgroup.to_string()),
                                    index: Some(d.index),
                                },
                                x: d.base.to_string(),
                                summary: d.to_string(),
                            });
                            Ok(0)
                        }
                        Err(e) => engine_failure(r, e),
                    }
                }
                Command::Verify(..) => unreachable!("handled above"),
            }
        }
        Typed::Zed(set) => {
            let set = need_set(set, p.command.name())?;
            r.stats.count = set.len();
            match &p.command {
                Command::Check { .. } => Ok(match set.midconvex_witness() {
                    Some((x, y, z)) => {
                        r.result = "not midconvex".into();
                        r.witness = Some(format!("({x},{y},{z})"));
                        1
                    }
                    None => {
                        r.result = "midconvex".into();
                        0
                    }
                }),
                Command::Closure { .. } => {
                    let c = set.midconvex_closure();
                    r.result = if c == set {
                        "already midconvex"
                    } else {
                        "enlarged"
                    }
                    .into();
                    r.value = Some(c.to_string());
                    Ok(0)
                }
                Command::Trace { x, g } => {
                    let (x, g) = (as_int(x)?, as_int(g)?);
                    let t = set.trace_z(x, g).or_else(|e| type_err(e.to_string()))?;
                    r.value = Some(t.to_string());
                    match decompose_trace(&t, None) {
                        Ok(d) => {
                            r.result = "decomposes".into();
                            r.decomposition = Some(z_decomposition(&d));
                            Ok(0)
                        }
                        Err(e) => engine_failure(r, e.into()),
                    }
                }
                Command::Decompose(a) => {
                    no_rational_args(a)?;
                    let x = match &a.x {
                        Some(e) => as_int(e)?,
                        None => match set.min() {
                            Some(x) => x,
                            None => return type_err("decompose needs a nonempty set"),
                        },
                    };
                    match set.decompose_z(x) {
                        Ok(d) => {
                            r.result = "decomposes".into();
                            r.decomposition = Some(z_decomposition(&d));
                            Ok(0)
                        }
                        Err(e) => {
                            let e: EngineError = e.into();
                            if let EngineError::Precondition(msg) = e {
                                return type_err(msg);
                            }
                            engine_failure(r, e)
                        }
                    }
                }
                Command::Verify(..) => unreachable!("handled above"),
            }
        }
        Typed::Rational(g, set) => {
            let set = need_set(set, p.command.name())?;
            match (&p.command, &set) {
                (Command::Check { .. }, RSet::Points(pts)) => {
                    r.stats.count = pts.len();
                    Ok(match finite_rational_witness(&g, pts) {
                        Some((a, b, c)) => {
                            r.result = "not midconvex".into();
                            r.witness = Some(triple(&a, &b, &c));
                            1
                        }
                        None => {
                            r.result = "midconvex".into();
                            0
                        }
                    })
                }
                (Command::Check { samples, seed }, RSet::Description(d)) => {
                    let seed = seed.unwrap_or(0);
                    r.stats.seed = seed;
                    let c = sample_midpoint_check(
                        d,
                        &g,
                        samples.unwrap_or(DEFAULT_CHECK_SAMPLES),
                        seed,
                        SamplingBounds::default(),
                    );
                    r.stats.count = c.pairs;
                    Ok(match c.violation {
                        Some((a, b, m)) => {
                            r.result = "not midconvex".into();
                            r.witness = Some(triple(&a, &b, &m));
                            1
                        }
                        None => {
                            r.result = "no counterexample among sampled pairs".into();
                            0
                        }
                    })
                }
                (Command::Closure { rounds }, RSet::Points(pts)) => {
                    let rounds = rounds.unwrap_or(DEFAULT_ROUNDS);
                    let c = bounded_closure_oracle(&g, pts, rounds);
                    r.stats.count = c.points.len();
                    r.value = Some(format!(
                        "{{{}}}",
                        c.points.iter().map(format_rational).collect::<Vec<_>>().join(",")
                    ));
                    if c.complete {
                        r.result = if c.points == *pts { "already midconvex" } else { "enlarged" }.into();
                        Ok(0)
                    } else {
                        r.result = "inconclusive".into();
                        r.witness = Some(format!("closure still growing after {rounds} rounds"));
                        Ok(3)
                    }
                }
                (Command::Closure { .. }, RSet::Description(_)) => {
                    type_err("closure in Q takes a finite set; a description is its own closure when its subgroup is 2-pure")
                }
                (Command::Trace { .. }, _) => type_err("trace needs a finite group or Z"),
                (Command::Decompose(a), _) => rational_decompose(&g, &set, a, r),
                (Command::Verify(..), _) => unreachable!("handled above"),
            }
        }
    }
}

fn no_rational_args(a: &DecomposeArgs) -> Result<(), DslError> {
    if a.x2.is_some() || a.depth.is_some() || a.window.is_some() {
        return type_err("x2, --depth and --window apply to sets in Q");
    }
    Ok(())
}

fn rational_decompose(
    g: &RationalGroupDescriptor,
    set: &RSet,
    a: &DecomposeArgs,
    r: &mut Report,
) -> Result<i32, DslError> {
    let contains = |q: &Rational| match set {
        RSet::Points(p) => p.contains(q),
        RSet::Description(d) => d.contains(q),
    };
    let x = match (&a.x, set) {
        (Some(e), _) => rational_elem(g, e)?,
        (None, RSet::Points(p)) => match p.iter().next() {
            Some(x) => x.clone(),
            None => return type_err("decompose needs a nonempty set"),
        },
        (None, RSet::Description(d)) => d.base.clone(),
    };
    if !contains(&x) {
        return type_err(format!("x={} is not in the set", format_rational(&x)));
    }
    let x2 = match (&a.x2, set) {
        (Some(e), _) => rational_elem(g, e)?,
        (None, RSet::Points(p)) => match p
            .range((std::ops::Bound::Excluded(&x), std::ops::Bound::Unbounded))
            .next()
        {
            Some(y) => y.clone(),
            None => return type_err("decompose needs a set member above x, or x2="),
        },
        (None, RSet::Description(d)) => &x + d.subgroup.gen(),
    };
    if !contains(&x2) {
        return type_err(format!(
            "x2={} is not in the set; pass x2=",
            format_rational(&x2)
        ));
    }
    let window = match (&a.window, set) {
        (Some((lo, hi)), _) => {
            QInterval::closed(lo.clone(), hi.clone()).or_else(|e| type_err(e.to_string()))?
        }
        (None, RSet::Points(p)) => QInterval::closed(
            p.iter().next().expect("nonempty").clone(),
            p.iter().next_back().expect("nonempty").clone(),
        )
        .expect("ordered"),
        (None, RSet::Description(d)) => {
            let span = (&x2 - &x) * int(8);
            let lo = d
                .interval
                .lower()
                .map(|b| b.value.clone())
                .unwrap_or_else(|| &x - &span);
            let hi = d
                .interval
                .upper()
                .map(|b| b.value.clone())
                .unwrap_or_else(|| &x2 + &span);
            QInterval::closed(lo, hi).expect("ordered")
        }
    };
    let depth = a.depth.unwrap_or((2 * g.primes().len()).max(1));
    let result = match set {
        RSet::Points(p) => decompose_rational(g, p, &x, &x2, depth, &window),
        RSet::Description(d) => decompose_rational(g, d, &x, &x2, depth, &window),
    };
    match result {
        Ok(d) => {
            r.result = "decomposes".into();
            r.stats.count = d.levels.len();
            r.decomposition = Some(q_decomposition(&d));
            Ok(0)
        }
        Err(EngineError::Precondition(msg)) => type_err(msg),
        Err(e) => engine_failure(r, e),
    }
}

/// Type-checks and runs a parsed program.
pub fn run(program: &Program, opts: &RunOptions) -> Result<Outcome, DslError> {
    let started = Instant::now();
    let typed = typecheck(program)?;
    let mut report = Report::new(program);
    let exit_code = dispatch(program, typed, &mut report)?;
    if opts.timing {
        report.stats.elapsed_ms = Some(started.elapsed().as_millis());
    }
    Ok(Outcome { exit_code, report })
}

/// Parses, runs and renders. Returns the exit code, standard output and
/// standard error text.
pub fn execute(src: &str, opts: &RunOptions) -> (i32, String, String) {
    match super::parse(src).and_then(|p| run(&p, opts)) {
        Ok(o) => (o.exit_code, o.report.render(opts.format), String::new()),
        Err(e) => (2, String::new(), format!("error: {e}\n")),
    }
}
