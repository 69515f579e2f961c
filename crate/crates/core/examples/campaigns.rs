//! The exhaustive and seeded verification campaigns.
//!
//! cargo run --release --example campaigns

use std::collections::BTreeSet;

use midconvex::harness::{
    closure_laws, conjecture_hull_check, enumerate_abelian_groups, exhaustive_lemma1,
    exhaustive_theorem1, exhaustive_theorem2, theorem3_roundtrip, windowed_z_equivalence,
};
use midconvex::rational::{int, Rational, RationalGroupDescriptor};

fn main() {
    let names: Vec<String> = enumerate_abelian_groups(12)
        .iter()
        .map(|g| g.describe_orders())
        .collect();
    println!("groups of order <= 12: {}", names.join(" "));

    for r in [
        exhaustive_theorem2(12),
        exhaustive_theorem1(10),
        exhaustive_lemma1(12),
        closure_laws(1000, 24, 0),
        windowed_z_equivalence(11),
        theorem3_roundtrip(50, 1000, 0),
    ] {
        println!(
            "{:<10} subsets={:<6} positives={:<5} mismatches={} ({} ms)",
            r.campaign,
            r.subsets,
            r.positives,
            r.mismatches.len(),
            r.elapsed_ms
        );
    }

    let dyadic = RationalGroupDescriptor::new(int(1), [2]).unwrap();
    let start: BTreeSet<Rational> = [int(0), int(3), int(5)].into_iter().collect();
    println!("{}", conjecture_hull_check(&dyadic, &start, 5, 200, 0));
}
