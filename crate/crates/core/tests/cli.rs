use std::io::Write;
use std::process::{Command, Stdio};

fn run(args: &[&str], stdin: &str) -> (Option<i32>, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_midconvex"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn reads_stdin() {
    let (code, out, _) = run(&["run"], "Z(5); {2}; check\n");
    assert_eq!(code, Some(0));
    assert!(out.contains("result: midconvex"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["run", "-e", "Z(4); {0}; check"], "").0, Some(1));
    assert_eq!(run(&["run", "-e", "Z(4); {0}; chek"], "").0, Some(2));
    assert_eq!(run(&["run", "-e", "Z(4); {9}; check"], "").0, Some(2));
    assert_eq!(
        run(
            &[
                "run",
                "-e",
                "Q(gen=1, primes=[2]); {0,1}; closure --rounds 2"
            ],
            ""
        )
        .0,
        Some(3)
    );
    assert_eq!(run(&["run", "--bogus"], "").0, Some(2));
}

#[test]
fn syntax_error_position_on_stderr() {
    let (code, out, err) = run(&["run"], "Z(4);\n{0,,1};\ncheck\n");
    assert_eq!(code, Some(2));
    assert!(out.is_empty());
    assert_eq!(
        err.trim_end(),
        "error: syntax error at line 2, column 4: expected a number"
    );
}

#[test]
fn parse_prints_normal_form() {
    let (code, out, _) = run(
        &[
            "parse",
            "-e",
            "Q(gen = 2/4, primes=[2]) ;conv[0, 1] & ((1,[2])+0); check",
        ],
        "",
    );
    assert_eq!(code, Some(0));
    assert_eq!(
        out,
        "Q(gen=1/2, primes=[2]); conv[0,1] ∩ ((1,[2]) + 0); check\n"
    );
}

#[test]
fn jobs_flag_keeps_output() {
    let a = run(
        &[
            "run",
            "--jobs",
            "1",
            "-e",
            "verify --theorem 2 --max-order 8",
        ],
        "",
    );
    let b = run(
        &[
            "run",
            "--jobs",
            "3",
            "-e",
            "verify --theorem 2 --max-order 8",
        ],
        "",
    );
    assert_eq!(a.0, Some(0));
    assert_eq!(a.1, b.1);
}

#[test]
fn timing_is_opt_in() {
    let (_, out, _) = run(&["run", "--format", "json", "-e", "Z(3); {0}; check"], "");
    assert!(!out.contains("elapsed_ms"));
    let (_, out, _) = run(&["run", "--timing", "-e", "Z(3); {0}; check"], "");
    assert!(out.contains("elapsed_ms: "));
}
