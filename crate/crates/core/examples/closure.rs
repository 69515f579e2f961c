//! Midconvex closures in finite groups and in a window of Z.
//!
//! cargo run --example closure

use midconvex::engine::midconvex_closure;
use midconvex::group::{make_group, GroupSubset};
use midconvex::integers::IntWindowSet;

fn main() {
    for (orders, seed) in [
        (&[9i64][..], &[0usize, 3][..]),
        (&[8], &[1]),
        (&[3, 3], &[0, 4]),
        (&[6], &[0, 2]),
    ] {
        let g = make_group(orders).unwrap();
        let x = GroupSubset::from_indices(&g, seed.iter().copied()).unwrap();
        println!(
            "Z({}): closure of {x} is {}",
            g.describe_orders(),
            midconvex_closure(&x)
        );
    }

    let s = IntWindowSet::from_members(0, 20, [2, 11]).unwrap();
    println!("Z: closure of {s} is {}", s.midconvex_closure());
    let s = IntWindowSet::from_members(0, 20, [0, 16]).unwrap();
    println!("Z: closure of {s} is {}", s.midconvex_closure());
}
