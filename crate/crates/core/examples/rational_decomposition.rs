//! Recovering C ∩ (H + x) for a set in a subgroup of Q from membership alone.
//!
//! cargo run --example rational_decomposition

use midconvex::engine::{decompose_rational, verify_theorem3_if, window};
use midconvex::rational::{
    cyclic_chain, format_rational, int, rat, QInterval, RationalGroupDescriptor,
    RationalMidconvexDescription,
};

fn main() {
    let dyadic = RationalGroupDescriptor::new(int(1), [2]).unwrap();
    let chain = cyclic_chain(&dyadic, &[int(0), int(1)], 4).unwrap();
    println!(
        "chain: {:?}",
        chain.iter().map(format_rational).collect::<Vec<_>>()
    );

    let truth = RationalMidconvexDescription::new(
        QInterval::closed(int(0), int(1)).unwrap(),
        dyadic.clone(),
        int(0),
        &dyadic,
    )
    .unwrap();
    let check = verify_theorem3_if(&truth, &dyadic, 500, 1).unwrap();
    println!(
        "{truth}: {} pairs sampled, violation {:?}",
        check.pairs, check.violation
    );

    let d = decompose_rational(
        &dyadic,
        &truth,
        &int(0),
        &int(1),
        4,
        &window(int(-1), int(2)).unwrap(),
    )
    .unwrap();
    println!("recovered {}", d.description);
    for l in &d.levels {
        println!(
            "  g={} C=[{},{}] m={} refined_by={:?}",
            format_rational(&l.generator),
            format_rational(&l.lower),
            format_rational(&l.upper),
            l.modulus,
            l.refined_by
        );
    }

    // 3 is inverted in G but not in H, so its refinements must not enlarge H
    let g = RationalGroupDescriptor::new(rat(1, 3), [2, 3]).unwrap();
    let h = RationalGroupDescriptor::new(int(3), [2]).unwrap();
    let truth = RationalMidconvexDescription::new(
        QInterval::closed(int(0), int(6)).unwrap(),
        h,
        int(0),
        &g,
    )
    .unwrap();
    let d = decompose_rational(
        &g,
        &truth,
        &int(0),
        &int(3),
        4,
        &window(int(-1), int(7)).unwrap(),
    )
    .unwrap();
    println!("{truth} recovered as {}", d.description);
}
