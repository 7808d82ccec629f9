use std::path::PathBuf;
use std::process::{Command, Output};

use polyprod::polyhedral::{preset, spaces_to_json};
use polyprod::report::{Report, Status};
use serde_json::Value;

fn polyprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyprod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Report, i32) {
    let out = polyprod(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (report, out.status.code().unwrap())
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("polyprod-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn ranks(report: &Report) -> Vec<(i32, usize)> {
    report.cohomology[0]
        .total
        .iter()
        .map(|(&d, g)| (d, g.free_rank))
        .collect()
}

#[test]
fn square_has_torus_cohomology() {
    let (r, code) = json(&["cohomology", "--catalog", "gon4", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(ranks(&r), vec![(0, 1), (1, 2), (2, 1)]);
    assert!(r
        .checks
        .iter()
        .any(|c| c.check == "oracle.bk.Z" && c.status == Status::Pass));
}

#[test]
fn complex_from_file_matches_catalog() {
    let path = temp_file("square.json", r#"{"m": 4, "facets": [[1,2],[2,3],[3,4],[1,4]]}"#);
    let (from_file, code) = json(&["cohomology", "--complex", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let (from_catalog, _) = json(&["cohomology", "--catalog", "gon4", "--format", "json"]);
    assert_eq!(from_file.cohomology, from_catalog.cohomology);
}

#[test]
fn full_simplex_is_contractible_in_every_model() {
    for model in ["rbar", "bk", "koszul", "cxk", "bxk", "rxk"] {
        let (r, code) = json(&[
            "cohomology",
            "--catalog",
            "simplex3",
            "--model",
            model,
            "--format",
            "json",
        ]);
        assert_eq!(code, 0, "{model}");
        assert_eq!(ranks(&r), vec![(0, 1)], "{model}");
        assert!(r.cohomology[0].total.iter().all(|(_, g)| g.torsion.is_empty()));
    }
}

#[test]
fn projective_plane_torsion_in_text() {
    let out = polyprod(&["cohomology", "--catalog", "rp2_6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("torsion: H^3: Z/2"), "{text}");
    assert!(text.contains("PASS oracle.bk.Z"), "{text}");
}

#[test]
fn ring_of_two_points_and_square() {
    let (r, code) = json(&["ring", "--catalog", "points2", "--format", "json"]);
    assert_eq!(code, 0);
    let ring = r.ring.unwrap();
    let classes = ring["classes"].as_array().unwrap();
    assert_eq!(classes.iter().filter(|c| c["degree"] == 1).count(), 1);
    // exterior on one generator: the square of the degree-one class vanishes
    let products = ring["products"].as_array().unwrap();
    assert!(!products.iter().any(|p| p["left"] == 1 && p["right"] == 1));

    let (r, _) = json(&["ring", "--catalog", "gon4", "--coeff", "Q", "--format", "json"]);
    let ring = r.ring.unwrap();
    let top = |l: u64, rr: u64| -> Option<Value> {
        ring["products"]
            .as_array()
            .unwrap()
            .iter()
            .find(|p| p["left"] == l && p["right"] == rr)
            .map(|p| p["value"].clone())
    };
    assert_eq!(ring["classes"].as_array().unwrap().len(), 4);
    let a = top(1, 2).expect("nonzero product of the degree-one classes");
    let b = top(2, 1).unwrap();
    assert_eq!(a[0][0], b[0][0]);
    assert_eq!(b[0][1], "-1");
    assert_eq!(ring["graded_commutative"], true);

    let (r, _) = json(&["ring", "--catalog", "simplex3", "--format", "json"]);
    assert_eq!(r.ring.unwrap()["classes"].as_array().unwrap().len(), 1);
}

#[test]
fn ring_over_integers_is_an_input_error() {
    let out = polyprod(&["ring", "--catalog", "gon4", "--coeff", "Z"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("field"), "{err}");
}

#[test]
fn truncation_below_m_skips_vanishing() {
    let (r, code) = json(&[
        "verify",
        "--catalog",
        "gon4",
        "--cap",
        "2",
        "--checks",
        "tor",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let skipped: Vec<_> = r.checks.iter().filter(|c| c.status == Status::Skipped).collect();
    assert!(!skipped.is_empty());
    for c in skipped {
        assert!(c.check.starts_with("quotient.vanishing"));
        assert_eq!(
            c.note.as_deref(),
            Some("truncated below m: skipped vanishing assertion")
        );
    }
}

#[test]
fn tor_matches_cohomology_of_bk() {
    let (t, code) = json(&["tor", "--catalog", "gon4", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(ranks(&t), vec![(0, 1), (1, 2), (2, 1)]);
    assert!(t.checks.iter().all(|c| c.status != Status::Fail));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["verify", "--catalog", "gon5", "--coeff", "Z,Z2", "--format", "json"];
    let first = polyprod(&args);
    let second = polyprod(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let report: Report = serde_json::from_slice(&first.stdout).unwrap();
    assert!(report.all_passed());
    assert!(report.checks.iter().any(|c| c.check == "f.sign_chain_map"));
    assert!(report.checks.iter().all(|c| c.timing_ms.is_none()));
    // JSON round trip is lossless
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again.as_bytes(), &first.stdout[..]);
}

#[test]
fn injected_fault_fails_with_witness() {
    let (r, code) = json(&[
        "verify",
        "--catalog",
        "gon4",
        "--checks",
        "sign",
        "--inject-fault",
        "bk:5:0",
        "--format",
        "json",
    ]);
    assert_eq!(code, 1);
    let f = r.checks.iter().find(|c| c.check == "f.sign_chain_map").unwrap();
    assert_eq!(f.status, Status::Fail);
    assert!(f.witness.as_deref().unwrap().starts_with("x = "));

    let out = polyprod(&["verify", "--catalog", "gon4", "--inject-fault", "bk:0:9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn polyhedral_with_spaces_file() {
    let spaces = spaces_to_json(&preset("circles", 2).unwrap());
    let path = temp_file("circles.json", &spaces);
    let (r, code) = json(&[
        "polyhedral",
        "--catalog",
        "points2",
        "--spaces",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{r:?}");
    assert!(r.all_passed());
    // two disjoint points give S¹ * S¹ = S³
    let bxk = r.cohomology.iter().find(|t| t.model == "bxk").unwrap();
    let ranks: Vec<_> = bxk
        .total
        .iter()
        .filter(|(_, g)| g.free_rank > 0)
        .map(|(&d, g)| (d, g.free_rank))
        .collect();
    assert_eq!(ranks, vec![(0, 1), (3, 1)]);
}

#[test]
fn input_errors_exit_two() {
    let bad = temp_file("bad.json", "{\"m\": 3, \"facets\": [[1,2]\n");
    for args in [
        vec!["cohomology", "--complex", bad.to_str().unwrap()],
        vec!["cohomology", "--catalog", "nonsense7"],
        vec!["cohomology", "--complex", "/nonexistent/k.json"],
        vec!["cohomology", "--catalog", "gon4", "--coeff", "Z4"],
        vec!["cohomology", "--catalog", "all"],
        vec!["verify", "--catalog", "gon4", "--checks", "bogus"],
    ] {
        let out = polyprod(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(
            String::from_utf8(out.stderr).unwrap().starts_with("error: "),
            "{args:?}"
        );
    }
    let out = polyprod(&["cohomology", "--complex", bad.to_str().unwrap()]);
    assert!(String::from_utf8(out.stderr).unwrap().contains("line"));
}

#[test]
fn text_and_json_agree() {
    for (name, coeff) in [("rp2_6", "Z"), ("gon5", "Q"), ("points3", "Z2")] {
        let (r, _) = json(&["cohomology", "--catalog", name, "--coeff", coeff, "--format", "json"]);
        let text = String::from_utf8(polyprod(&["cohomology", "--catalog", name, "--coeff", coeff]).stdout).unwrap();
        let table = &r.cohomology[0];
        assert!(text.contains(&format!("P(t) = {}\n", table.poincare)), "{text}");
        for (d, g) in table.total.iter() {
            let row = text
                .lines()
                .find(|l| l.split_whitespace().next() == Some(&d.to_string()))
                .unwrap();
            let group = row.split_whitespace().nth(1).unwrap();
            let rank = match group.split_once('^') {
                Some((_, r)) => r.parse().unwrap(),
                None if group == "0" || group.starts_with("Z/") => 0,
                None => 1,
            };
            assert_eq!(rank, g.free_rank, "{name} degree {d}: {row}");
        }
    }
}
