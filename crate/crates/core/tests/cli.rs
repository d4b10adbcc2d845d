use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apex-minors"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn gen_universal_has_six_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["gen", "--kind", "universal", "--h", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("n 6\n"));
    assert_eq!(text.lines().count(), 1 + 9);
}

#[test]
fn find_minor_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(
        run(
            p,
            &[
                "gen",
                "--kind",
                "min-degree",
                "--n",
                "16",
                "--t",
                "6",
                "--seed",
                "5",
                "--out",
                "g.el"
            ]
        )
        .status
        .code(),
        Some(0)
    );
    let o = run(
        p,
        &[
            "find-minor",
            "--host",
            "g.el",
            "--pattern",
            "snake",
            "--n",
            "6",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let report = json(&o);
    assert_eq!(report["outcome"], "found");
    assert_eq!(report["certificate"]["kind"], "minor");
    std::fs::write(p.join("c.json"), report["certificate"].to_string()).unwrap();
    assert_eq!(
        run(p, &["check-cert", "--host", "g.el", "--cert", "c.json"])
            .status
            .code(),
        Some(0)
    );

    // Same certificate against a different host fails the digest check.
    run(
        p,
        &[
            "gen",
            "--kind",
            "min-degree",
            "--n",
            "16",
            "--t",
            "6",
            "--seed",
            "6",
            "--out",
            "h.el",
        ],
    );
    let o = run(p, &["check-cert", "--host", "h.el", "--cert", "c.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["outcome"], "invalid");
}

#[test]
fn hypothesis_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    run(
        p,
        &[
            "gen",
            "--kind",
            "min-degree",
            "--n",
            "10",
            "--t",
            "3",
            "--out",
            "g.el",
        ],
    );
    // snake(6) needs minimum degree 6.
    let o = run(
        p,
        &[
            "find-minor",
            "--host",
            "g.el",
            "--pattern",
            "snake",
            "--n",
            "6",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(p, &["find-wheel"]).status.code(), Some(64));
    assert_eq!(run(p, &["nonsense"]).status.code(), Some(64));
    assert_eq!(
        run(
            p,
            &["find-minor", "--host", "missing.el", "--pattern", "tree"]
        )
        .status
        .code(),
        Some(64)
    );
}

#[test]
fn icosahedron_oracle_says_no() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    run(
        p,
        &[
            "gen",
            "--kind",
            "named",
            "--name",
            "icosahedron",
            "--out",
            "i.el",
        ],
    );
    let o = run(
        p,
        &[
            "oracle",
            "--mode",
            "minor",
            "--host",
            "i.el",
            "--pattern",
            "K5",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["outcome"], "no");
    let o = run(
        p,
        &[
            "oracle",
            "--mode",
            "minor",
            "--host",
            "i.el",
            "--pattern",
            "K4",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn directed_finders() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    run(
        p,
        &[
            "gen",
            "--kind",
            "min-outdegree",
            "--n",
            "12",
            "--t",
            "4",
            "--seed",
            "9",
            "--out",
            "d.el",
        ],
    );
    for args in [
        vec!["find-butterfly", "--host", "d.el", "--tree", "inpath-4"],
        vec!["find-wheel", "--host", "d.el", "--t", "4"],
        vec![
            "find-wheel",
            "--host",
            "d.el",
            "--t",
            "3",
            "--extract",
            "cplus",
        ],
        vec!["find-two-block", "--host", "d.el", "--k1", "3", "--k2", "2"],
    ] {
        let mut a = args.clone();
        a.extend(["--out", "c.json"]);
        let o = run(p, &a);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&o)["certificate_path"], "c.json");
        assert_eq!(
            run(p, &["check-cert", "--host", "d.el", "--cert", "c.json"])
                .status
                .code(),
            Some(0),
            "{args:?}"
        );
    }
}

#[test]
fn suite_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["suite", "--trials", "6", "--seed", "11"]);
    let b = run(dir.path(), &["suite", "--trials", "6", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
