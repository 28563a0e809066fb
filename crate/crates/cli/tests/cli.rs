use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use setscheme::coherence::is_scheme;
use setscheme::io::parse_partition;
use setscheme::vector::read_vas;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setscheme"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const RANK_FIVE: &str =
    r#"{"degree": 3, "cells": [[[]], [[1]], [[2], [3]], [[1, 2], [1, 3], [2, 3]], [[1, 2, 3]]]}"#;

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(&["check", "S1"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["coherent"], true);

    let bad = run(&["check", &write(dir.path(), "r5.json", RANK_FIVE)]);
    assert_eq!(code(&bad), 1);
    assert!(json(&bad)["witness"].is_string());

    let garbage = run(&[
        "check",
        &write(dir.path(), "x.json", "{\"degree\": 3, \"cells\": [[[4]]]}"),
    ]);
    assert_eq!(code(&garbage), 2);
    assert_eq!(
        code(&run(&["check", &write(dir.path(), "y.json", "not json")])),
        2
    );
    assert_eq!(code(&run(&["check", "/no/such/file.json"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn stabilize_output_is_a_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "r5.json", RANK_FIVE);
    let out = dir.path().join("w.json");
    let o = run(&["stabilize", &input, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let s = parse_partition(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(is_scheme(&s));
    assert_eq!(code(&run(&["check", out.to_str().unwrap()])), 0);
}

#[test]
fn tables_match() {
    let t1 = run(&["table", "table1"]);
    assert_eq!(code(&t1), 0, "{}", String::from_utf8_lossy(&t1.stderr));
    let rows = json(&t1);
    let ranks: Vec<u64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, [25, 30, 28, 36, 28, 51, 43, 49]);
    let t2 = run(&["table", "table2", "--format", "csv"]);
    assert_eq!(code(&t2), 0);
    assert_eq!(String::from_utf8_lossy(&t2.stdout).lines().count(), 3);
}

#[test]
fn isomorphism() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = setscheme::constructions::catalog(setscheme::constructions::CatalogId::S1)
        .unwrap()
        .scheme;
    // relabel points by the transposition (1 3)
    let rot = |x: usize| (x & !0b101) | (x & 1) << 2 | (x >> 2 & 1);
    let mut colors = vec![0; 256];
    for x in 0..256 {
        colors[rot(x)] = s1.colors()[x];
    }
    let s = setscheme::SetPartition::from_colors(8, colors).unwrap();
    assert_ne!(s, s1);
    let relabeled = write(
        dir.path(),
        "p.json",
        &setscheme::io::serialize_partition(&s),
    );
    let same = run(&["iso", "S1", &relabeled]);
    assert_eq!(code(&same), 0);
    assert!(json(&same)["mapping"].is_string());
    assert_eq!(code(&run(&["iso", "S1", "S2"])), 1);
    let o = run(&["iso", "S3", "S5"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_ne!(v["canonical_id_a"], v["canonical_id_b"]);
    assert_eq!(code(&run(&["iso", "S1", "N9a"])), 2);
}

#[test]
fn enumerate_writes_verified_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "enumerate",
        "--degree",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let files: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    assert_eq!(files.len(), 8);
    for f in &files {
        let s = parse_partition(&std::fs::read_to_string(f).unwrap()).unwrap();
        assert!(is_scheme(&s));
        assert_eq!(code(&run(&["check", f.to_str().unwrap()])), 0);
    }
    let csv = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert_eq!(code(&run(&["enumerate", "--degree", "8"])), 2);
}

#[test]
fn threads_do_not_change_output() {
    let a = run(&["--threads", "1", "enumerate", "--degree", "5"]);
    let b = run(&["--threads", "3", "enumerate", "--degree", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sandwich_commands() {
    let o = run(&["sandwich", "--scheme", "S5", "--m", "3", "--report"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["rank"], 28);
    assert_eq!(v["aut_order"], "13436928");
    let dir = tempfile::tempdir().unwrap();
    let small = write(
        dir.path(),
        "t.json",
        r#"{"degree": 2, "cells": [[[]], [[1], [2]], [[1, 2]]]}"#,
    );
    let o = run(&[
        "sandwich",
        "--scheme",
        &small,
        "--m",
        "3",
        "--materialize",
        "--verify-wl",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn vas_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("alt.json");
    let o = run(&[
        "vas",
        "--k",
        "2",
        "--d",
        "3",
        "--orbital",
        "alt",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let s = read_vas(&out).unwrap();
    assert_eq!((s.k(), s.degree()), (2, 3));
    assert_eq!(
        code(&run(&[
            "vas",
            "--k",
            "2",
            "--d",
            "3",
            "--check",
            out.to_str().unwrap()
        ])),
        0
    );
    let e = run(&["vas", "--k", "2", "--d", "2", "--enumerate"]);
    assert_eq!(code(&e), 0);
    assert_eq!(json(&e).as_array().unwrap().len(), 2);
    assert_eq!(
        code(&run(&[
            "vas",
            "--k",
            "2",
            "--d",
            "2",
            "--enumerate",
            "--orbital",
            "sym"
        ])),
        2
    );
}
