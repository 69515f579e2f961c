//! Exact tools for midpoint-convex sets in Abelian groups.
//!
//! A set `X` is midconvex when every `z` with `2z = x + y` lies in `X` for
//! all `x, y ∈ X`. The crate decides this in finite groups and in windows of
//! ℤ, computes closures, and decomposes midconvex sets: cosets of odd-index
//! subgroups in finite groups, `C ∩ (mℤ + x)` in ℤ, and `C ∩ (H + x)` with
//! `H` 2-pure for subgroups of ℚ.
//!
//! ```
//! use midconvex::engine::{decompose_periodic, midconvex_witness};
//! use midconvex::group::{make_group, GroupSubset};
//!
//! let z4 = make_group(&[4]).unwrap();
//! let x = GroupSubset::from_indices(&z4, [0]).unwrap();
//! assert_eq!(midconvex_witness(&x).unwrap().to_string(), "(0,0,2)");
//!
//! let z15 = make_group(&[15]).unwrap();
//! let x = GroupSubset::from_indices(&z15, [1, 4, 7, 10, 13]).unwrap();
//! let d = decompose_periodic(&x, &z15.element_from(&[1]).unwrap()).unwrap();
//! assert_eq!(d.index, 3);
//! ```

pub mod dsl;
pub mod engine;
pub mod error;
pub mod group;
pub mod harness;
pub mod integers;
pub mod rational;
