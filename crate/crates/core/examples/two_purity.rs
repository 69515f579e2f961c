//! 2-purity of subgroups of Q: the formula, a closure, and sampling.
//!
//! cargo run --example two_purity

use midconvex::harness::{sample_two_purity, sampled_two_purity_violation, PuritySampling};
use midconvex::rational::{format_rational, int, rat, RationalGroupDescriptor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pairs = [
        (
            RationalGroupDescriptor::integers(),
            RationalGroupDescriptor::cyclic(int(3)).unwrap(),
        ),
        (
            RationalGroupDescriptor::integers(),
            RationalGroupDescriptor::cyclic(int(2)).unwrap(),
        ),
        (
            RationalGroupDescriptor::new(int(1), [2]).unwrap(),
            RationalGroupDescriptor::integers(),
        ),
        (
            RationalGroupDescriptor::new(rat(1, 5), [3, 5]).unwrap(),
            RationalGroupDescriptor::new(rat(4, 3), [3]).unwrap(),
        ),
    ];
    for (g, h) in &pairs {
        let formula = h.is_two_pure(g).unwrap();
        let closure = h.two_pure_closure(g).unwrap();
        let sampled = sampled_two_purity_violation(g, h, PuritySampling::default(), &mut rng);
        println!(
            "H={h} in G={g}: pure={formula} closure={closure} sampled violation={}",
            sampled
                .map(|v| format_rational(&v))
                .unwrap_or_else(|| "none".into())
        );
    }
    let report = sample_two_purity(100, 0, &[2, 3, 5, 7]);
    println!("{report}");
}
