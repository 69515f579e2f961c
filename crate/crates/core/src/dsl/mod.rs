//! A small input language for groups, sets and commands.
//!
//! A program is up to three `;`-separated statements: an optional group, an
//! optional set, and one command.
//!
//! ```text
//! Z(15); {1,4,7,10,13}; decompose x=1
//! Z; {0,3,6,9}@window[0,9]; check
//! Q(gen=1, primes=[2]); conv[0,1] ∩ ((1,[2]) + 0); check
//! verify --theorem 2 --max-order 12
//! ```
//!
//! Printing a parsed [`Program`] yields text that parses back to the same value.

mod parse;
mod run;

use std::fmt;

use crate::rational::{format_rational, Rational};

pub use parse::parse;
pub use run::{
    execute, run, DecompositionOut, Format, HOut, IntervalOut, Outcome, Report, RunOptions, Stats,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Finite(Vec<i64>),
    Zed,
    Rational { gen: Rational, primes: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemExpr {
    Scalar(Rational),
    Tuple(Vec<i64>),
}

/// `None` is an infinite endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundExpr {
    pub value: Option<Rational>,
    pub inclusive: bool,
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    Explicit {
        elems: Vec<ElemExpr>,
        window: Option<(i64, i64)>,
    },
    Description {
        lower: BoundExpr,
        upper: BoundExpr,
        gen: Rational,
        primes: Vec<u64>,
        base: Rational,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    One,
    Two,
    Three,
    Lemma1,
    Purity,
    Hull,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyArgs {
    pub max_order: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub rounds: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecomposeArgs {
    pub x: Option<ElemExpr>,
    pub x2: Option<ElemExpr>,
    pub depth: Option<usize>,
    pub window: Option<(Rational, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Check {
        samples: Option<usize>,
        seed: Option<u64>,
    },
    Closure {
        rounds: Option<usize>,
    },
    Trace {
        x: ElemExpr,
        g: ElemExpr,
    },
    Decompose(DecomposeArgs),
    Verify(Theorem, VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Closure { .. } => "closure",
            Command::Trace { .. } => "trace",
            Command::Decompose(_) => "decompose",
            Command::Verify(..) => "verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub group: Option<GroupExpr>,
    pub set: Option<SetExpr>,
    pub command: Command,
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn primes_list(primes: &[u64]) -> String {
    join(primes)
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Finite(orders) => {
                let parts: Vec<String> = orders.iter().map(|n| n.to_string()).collect();
                write!(f, "Z({})", parts.join("x"))
            }
            GroupExpr::Zed => write!(f, "Z"),
            GroupExpr::Rational { gen, primes } => {
                write!(
                    f,
                    "Q(gen={}, primes=[{}])",
                    format_rational(gen),
                    primes_list(primes)
                )
            }
        }
    }
}

impl fmt::Display for ElemExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemExpr::Scalar(r) => write!(f, "{}", format_rational(r)),
            ElemExpr::Tuple(v) => write!(f, "({})", join(v)),
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Explicit { elems, window } => {
                write!(f, "{{{}}}", join(elems))?;
                if let Some((a, b)) = window {
                    write!(f, "@window[{a},{b}]")?;
                }
                Ok(())
            }
            SetExpr::Description {
                lower,
                upper,
                gen,
                primes,
                base,
            } => {
                let lo = match &lower.value {
                    Some(v) => format!(
                        "{}{}",
                        if lower.inclusive { "[" } else { "(" },
                        format_rational(v)
                    ),
                    None => "(-inf".to_string(),
                };
                let hi = match &upper.value {
                    Some(v) => format!(
                        "{}{}",
                        format_rational(v),
                        if upper.inclusive { "]" } else { ")" }
                    ),
                    None => "inf)".to_string(),
                };
                write!(
                    f,
                    "conv{lo},{hi} ∩ (({},[{}]) + {})",
                    format_rational(gen),
                    primes_list(primes),
                    format_rational(base)
                )
            }
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::One => "1",
            Theorem::Two => "2",
            Theorem::Three => "3",
            Theorem::Lemma1 => "lemma1",
            Theorem::Purity => "purity",
            Theorem::Hull => "hull",
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self {
            Command::Check { samples, seed } => {
                if let Some(n) = samples {
                    write!(f, " --samples {n}")?;
                }
                if let Some(s) = seed {
                    write!(f, " --seed {s}")?;
                }
            }
            Command::Closure { rounds } => {
                if let Some(n) = rounds {
                    write!(f, " --rounds {n}")?;
                }
            }
            Command::Trace { x, g } => write!(f, " x={x} g={g}")?,
            Command::Decompose(a) => {
                if let Some(x) = &a.x {
                    write!(f, " x={x}")?;
                }
                if let Some(x2) = &a.x2 {
                    write!(f, " x2={x2}")?;
                }
                if let Some(d) = a.depth {
                    write!(f, " --depth {d}")?;
                }
                if let Some((lo, hi)) = &a.window {
                    write!(
                        f,
                        " --window[{},{}]",
                        format_rational(lo),
                        format_rational(hi)
                    )?;
                }
            }
            Command::Verify(t, a) => {
                write!(f, " --theorem {t}")?;
                if let Some(n) = a.max_order {
                    write!(f, " --max-order {n}")?;
                }
                if let Some(n) = a.samples {
                    write!(f, " --samples {n}")?;
                }
                if let Some(s) = a.seed {
                    write!(f, " --seed {s}")?;
                }
                if let Some(n) = a.rounds {
                    write!(f, " --rounds {n}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = &self.group {
            write!(f, "{g}; ")?;
        }
        if let Some(s) = &self.set {
            write!(f, "{s}; ")?;
        }
        write!(f, "{}", self.command)
    }
}
