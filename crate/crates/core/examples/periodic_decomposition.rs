//! Midconvex sets in finite groups are cosets of odd-index subgroups.
//!
//! cargo run --example periodic_decomposition

use midconvex::engine::decompose_periodic;
use midconvex::group::{make_group, GroupSubset};

fn main() {
    let cases: [(&[i64], &[usize]); 4] = [
        (&[15], &[1, 4, 7, 10, 13]),
        (&[3, 3], &[1, 4, 7]),
        (&[4], &[0, 2]),
        (&[9], &[0, 1]),
    ];
    for (orders, members) in cases {
        let g = make_group(orders).unwrap();
        let x = GroupSubset::from_indices(&g, members.iter().copied()).unwrap();
        let base = x.elements()[0].clone();
        match decompose_periodic(&x, &base) {
            Ok(d) => println!("Z({}) {x}: {d}", g.describe_orders()),
            Err(e) => println!("Z({}) {x}: {e}", g.describe_orders()),
        }
    }
}
