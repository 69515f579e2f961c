//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use midconvex::engine::is_midconvex;
use midconvex::group::{FiniteAbelianGroup, GroupSubset};
use midconvex::harness::{
    closure_laws, count_midconvex_by_definition, enumerate_abelian_groups, exhaustive_lemma1,
    exhaustive_theorem1, exhaustive_theorem2, sample_two_purity, theorem3_roundtrip,
    windowed_z_equivalence,
};
use midconvex::integers::IntWindowSet;

/// Midconvexity straight from the definition: every `z` with `2z = x + y`.
fn midconvex_oracle(s: &GroupSubset) -> bool {
    let g = s.group();
    let pts: Vec<usize> = s.indices().collect();
    pts.iter().all(|&x| {
        pts.iter().all(|&y| {
            (0..g.order())
                .filter(|&z| g.add_idx(z, z) == g.add_idx(x, y))
                .all(|z| s.contains_idx(z))
        })
    })
}

/// Every `X - x` closed under addition (hence a subgroup) with odd index.
fn coset_oracle(s: &GroupSubset) -> bool {
    let g = s.group();
    let pts: Vec<usize> = s.indices().collect();
    pts.iter().all(|&x| {
        let shifted: BTreeSet<usize> = pts.iter().map(|&p| g.sub_idx(p, x)).collect();
        let closed = shifted
            .iter()
            .all(|&a| shifted.iter().all(|&b| shifted.contains(&g.add_idx(a, b))));
        closed && (g.order() / shifted.len()) % 2 == 1
    })
}

fn all_subsets(g: &FiniteAbelianGroup) -> impl Iterator<Item = GroupSubset> + '_ {
    (0..1u64 << g.order()).map(move |m| GroupSubset::from_mask(g, m))
}

fn criterion_1() -> Result<String, String> {
    let r = exhaustive_theorem2(12);
    if !r.passed() {
        return Err(format!(
            "{} mismatches, first {:?}",
            r.mismatches.len(),
            r.mismatches[0]
        ));
    }
    let mut checked = 0;
    for g in enumerate_abelian_groups(12) {
        for s in all_subsets(&g) {
            let direct = midconvex_oracle(&s);
            if direct != is_midconvex(&s) || direct != coset_oracle(&s) {
                return Err(format!(
                    "oracle disagreement on Z({}) {s}",
                    g.describe_orders()
                ));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{} groups, {} subsets, {} midconvex, {checked} oracle checks",
        r.groups, r.subsets, r.positives
    ))
}

fn criterion_2() -> Result<String, String> {
    let r = exhaustive_theorem1(10);
    r.passed()
        .then(|| format!("{} groups, {} subsets", r.groups, r.subsets))
        .ok_or_else(|| {
            format!(
                "{} mismatches, first {:?}",
                r.mismatches.len(),
                r.mismatches[0]
            )
        })
}

fn criterion_3() -> Result<String, String> {
    let r = exhaustive_lemma1(12);
    r.passed()
        .then(|| format!("{} midconvex subsets, all pairs order-convex", r.positives))
        .ok_or_else(|| {
            format!(
                "{} failures, first {:?}",
                r.mismatches.len(),
                r.mismatches[0]
            )
        })
}

fn criterion_4() -> Result<String, String> {
    let r = exhaustive_theorem2(5);
    let swept = |name: &str| r.tally(name).map(|t| t.positives);
    let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
    let z5 = FiniteAbelianGroup::cyclic(5).unwrap();
    let direct = (
        count_midconvex_by_definition(&z4),
        count_midconvex_by_definition(&z5),
    );
    let oracle = (
        all_subsets(&z4).filter(midconvex_oracle).count(),
        all_subsets(&z5).filter(midconvex_oracle).count(),
    );
    if swept("4") == Some(2) && swept("5") == Some(7) && direct == (2, 7) && oracle == (2, 7) {
        Ok("Z(4): 2, Z(5): 7".into())
    } else {
        Err(format!(
            "sweep {:?}/{:?}, direct {direct:?}, oracle {oracle:?}",
            swept("4"),
            swept("5")
        ))
    }
}

fn criterion_5() -> Result<String, String> {
    let r = closure_laws(1000, 24, 0);
    r.passed()
        .then(|| format!("{} subsets over {} groups", r.subsets, r.groups))
        .ok_or_else(|| {
            format!(
                "{} violations, first {:?}",
                r.mismatches.len(),
                r.mismatches[0]
            )
        })
}

fn criterion_6() -> Result<String, String> {
    let t = Instant::now();
    let r = sample_two_purity(100, 0, &[2, 3, 5, 7]);
    let secs = t.elapsed().as_secs_f64();
    if !r.passed() {
        return Err(format!(
            "{} disagreements, first {:?}",
            r.mismatches.len(),
            r.mismatches[0]
        ));
    }
    if secs >= 30.0 {
        return Err(format!("took {secs:.1}s"));
    }
    Ok(format!(
        "{} pairs, {} samples, {} pure",
        r.subsets, r.samples, r.positives
    ))
}

fn criterion_7() -> Result<String, String> {
    let r = theorem3_roundtrip(50, 1000, 0);
    r.passed()
        .then(|| {
            format!(
                "{} descriptions, {} samples and grid points",
                r.subsets, r.samples
            )
        })
        .ok_or_else(|| {
            format!(
                "{} mismatches, first {:?}",
                r.mismatches.len(),
                r.mismatches[0]
            )
        })
}

/// Window-exact midconvexity from the definition: `(x+y)/2` whenever it is an integer.
fn windowed_oracle(s: &IntWindowSet) -> bool {
    let pts: Vec<i64> = s.iter().collect();
    pts.iter().all(|&x| {
        pts.iter()
            .all(|&y| (x + y) % 2 != 0 || s.contains((x + y) / 2))
    })
}

fn criterion_8() -> Result<String, String> {
    let r = windowed_z_equivalence(11);
    if !r.passed() {
        return Err(format!(
            "{} mismatches, first {:?}",
            r.mismatches.len(),
            r.mismatches[0]
        ));
    }
    let oracle = (0..1u64 << 11)
        .filter(|&m| windowed_oracle(&IntWindowSet::from_mask(0, 11, m)))
        .count();
    if oracle != r.positives {
        return Err(format!(
            "oracle counts {oracle} midconvex sets, campaign {}",
            r.positives
        ));
    }
    Ok(format!("{} sets, {} midconvex", r.subsets, r.positives))
}

fn criterion_9() -> Result<String, String> {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bin = env!("CARGO_BIN_EXE_midconvex");
    let cases = [
        ("check_z4", 1),
        ("decompose_z15", 0),
        ("verify_theorem2", 0),
    ];
    for (name, code) in cases {
        let prog = golden.join(format!("{name}.mcx"));
        for (fmt, ext) in [("text", "txt"), ("json", "json")] {
            let out = Command::new(bin)
                .args(["run", "--format", fmt])
                .arg(&prog)
                .output()
                .map_err(|e| e.to_string())?;
            let expected =
                std::fs::read(golden.join(format!("{name}.{ext}"))).map_err(|e| e.to_string())?;
            if out.stdout != expected {
                return Err(format!("{name}.{ext} differs"));
            }
            if out.status.code() != Some(code) {
                return Err(format!(
                    "{name} ({fmt}) exited {:?}, expected {code}",
                    out.status.code()
                ));
            }
        }
    }
    Ok("3 programs, text and json byte-identical".into())
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        (
            "coset characterization, all subsets, order <= 12",
            criterion_1,
        ),
        (
            "trace characterization, all subsets, order <= 10",
            criterion_2,
        ),
        (
            "order-convex traces of midconvex subsets, order <= 12",
            criterion_3,
        ),
        ("midconvex subset counts of Z(4) and Z(5)", criterion_4),
        (
            "closure laws on 1000 seeded subsets, order <= 24",
            criterion_5,
        ),
        ("two-purity formula against sampling", criterion_6),
        ("rational decomposition round trip", criterion_7),
        ("windowed Z equivalence on [0,10]", criterion_8),
        ("CLI golden transcripts", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (status, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {}: {status}: {name} ({detail}) [{:.1}s]",
            i + 1,
            t.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
