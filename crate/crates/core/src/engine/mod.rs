//! The midconvexity predicate, the closure operator, and the decompositions
//! for finite groups, ℤ and subgroups of ℚ.

mod finite;
mod rational;

pub use finite::*;
pub use rational::*;
