//! Traces of sets along a direction and their decomposition as C ∩ H.
//!
//! cargo run --example integer_traces

use midconvex::engine::trace_in_group;
use midconvex::group::{make_group, GroupSubset};
use midconvex::integers::{decompose_trace, IntWindowSet};

fn main() {
    let s = IntWindowSet::from_members(-10, 30, [1, 4, 7, 10, 13, 16]).unwrap();
    for x in [1, 7] {
        match s.decompose_z(x) {
            Ok(d) => println!("{s} at {x}: {d}"),
            Err(e) => println!("{s} at {x}: {e}"),
        }
    }
    let t = s.trace_z(1, 3).unwrap();
    println!(
        "trace at 1 along 3: {t} -> {}",
        decompose_trace(&t, None).unwrap()
    );

    let bad = IntWindowSet::from_members(0, 10, [0, 2, 4]).unwrap();
    println!("{bad} at 0: {}", bad.decompose_z(0).unwrap_err());

    // periodic trace in a finite group
    let z15 = make_group(&[15]).unwrap();
    let x = GroupSubset::from_indices(&z15, [1, 4, 7, 10, 13]).unwrap();
    let (base, step) = (
        z15.element_from(&[1]).unwrap(),
        z15.element_from(&[2]).unwrap(),
    );
    let tr = trace_in_group(&x, &base, &step).unwrap();
    println!(
        "Z(15) {x}, x=1, g=2: {} mod {} -> {}",
        tr.set,
        tr.period,
        tr.decompose().unwrap()
    );

    let z4 = make_group(&[4]).unwrap();
    let x = GroupSubset::from_indices(&z4, [0]).unwrap();
    let tr = trace_in_group(&x, &z4.zero(), &z4.element_from(&[1]).unwrap()).unwrap();
    println!("Z(4) {x}, x=0, g=1: {}", tr.decompose().unwrap_err());
}
