//! Decide midconvexity in a few finite groups and print the first witness.
//!
//! cargo run --example finite_check

use midconvex::engine::midconvex_witness;
use midconvex::group::{make_group, GroupSubset};

fn main() {
    let cases: [(&[i64], &[usize]); 5] = [
        (&[4], &[0]),
        (&[4], &[0, 1, 2, 3]),
        (&[5], &[2]),
        (&[15], &[1, 4, 7, 10, 13]),
        (&[2, 2], &[0, 3]),
    ];
    for (orders, members) in cases {
        let g = make_group(orders).unwrap();
        let x = GroupSubset::from_indices(&g, members.iter().copied()).unwrap();
        match midconvex_witness(&x) {
            None => println!("Z({}) {x}: midconvex", g.describe_orders()),
            Some(w) => println!("Z({}) {x}: not midconvex, witness {w}", g.describe_orders()),
        }
    }

    // 2-torsion: in Z(4) the halving set of 0 is {0, 2}, so {0} fails on x = y = 0
    let z4 = make_group(&[4]).unwrap();
    let halves = z4.halving_set(&z4.zero()).unwrap();
    println!(
        "halves of 0 in Z(4): {:?}",
        halves.iter().map(|e| e.to_string()).collect::<Vec<_>>()
    );
}
