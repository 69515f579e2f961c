//! Programs in the input language, run through the same path as the binary.
//!
//! cargo run --example dsl

use midconvex::dsl::{execute, Format, RunOptions};

const PROGRAMS: &[&str] = &[
    "Z(4); {0}; check",
    "Z(15); {1,4,7,10,13}; decompose x=1",
    "Z(2x3); {(0,0),(1,2)}; closure",
    "Z; {0,3,6,9}@window[0,9]; decompose x=0",
    "Z; {1,3,9}@window[0,12]; trace x=1 g=2",
    "Q(gen=1, primes=[2]); conv[0,1] ∩ ((1,[2]) + 0); check",
    "Q(gen=1, primes=[2]); conv[0,1] ∩ ((1,[]) + 0); check",
    "Q(gen=1/3, primes=[3]); {0,1/3,2/3}; decompose",
    "verify --theorem purity --samples 20 --seed 7",
    "Z(4); {0,,2}; check",
];

fn main() {
    for src in PROGRAMS {
        println!("> {src}");
        let (code, out, err) = execute(src, &RunOptions::default());
        print!("{out}{err}");
        println!("exit {code}\n");
    }
    let (_, json, _) = execute(
        PROGRAMS[3],
        &RunOptions {
            format: Format::Json,
            timing: false,
        },
    );
    print!("{json}");
}
