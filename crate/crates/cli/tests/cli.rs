use std::process::{Command, Output};

use symdelta::spectral::DeltaReport;
use symdelta::stablegraphs::named;
use symdelta_cli::selftest::SelftestReport;
use symdelta_cli::{EnumerationReport, SkeletonReport, SphereQuotientReport};

fn symdelta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdelta"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json<T: serde::de::DeserializeOwned + serde::Serialize>(args: &[&str]) -> (T, String) {
    let out = symdelta(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let value: T = serde_json::from_str(&text).unwrap();
    // re-serializing the parsed report reproduces the output byte for byte
    assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
    (value, text)
}

#[test]
fn projective_plane_table() {
    let out = symdelta(&["sphere-quotient", "--p", "3", "--group", "(0 1 2 3)"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("H̃₁ = ℤ/2ℤ"), "{text}");
    assert!(text.contains("H̃₂ = 0"), "{text}");
}

#[test]
fn trivial_group_gives_a_sphere() {
    let (r, _) = json::<SphereQuotientReport>(&["--format", "json", "sphere-quotient", "--p", "4", "--group", "()"]);
    assert_eq!(r.reduced_homology.iter().map(|g| g.rank).collect::<Vec<_>>(), vec![0, 0, 0, 1]);
}

#[test]
fn graph_file_input() {
    let path = std::env::temp_dir().join(format!("symdelta-k33-{}.json", std::process::id()));
    std::fs::write(&path, named::complete_bipartite_k33().to_json()).unwrap();
    let (r, _) = json::<SphereQuotientReport>(&["--format", "json", "sphere-quotient", "--graph", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!((r.p, r.group.order), (8, 72));
    let shown: Vec<String> = r.reduced_homology.iter().map(|g| g.to_string()).collect();
    assert_eq!(shown, ["0", "0", "0", "0", "ℤ/3ℤ", "ℤ/4ℤ", "ℤ/2ℤ", "0"]);
}

#[test]
fn cross_check_and_shortcut() {
    let (r, _) = json::<SphereQuotientReport>(&[
        "--format", "json", "sphere-quotient", "--p", "4", "--group", "(0 1 2 3)", "--cross-check",
    ]);
    assert!(r.cross_checked);
    let (r, _) = json::<SphereQuotientReport>(&["--format", "json", "sphere-quotient", "--p", "5", "--group", "(0 1)"]);
    assert!(r.shortcut && r.orbit_counts.is_empty());
    let (r, _) = json::<SphereQuotientReport>(&[
        "--format", "json", "sphere-quotient", "--p", "5", "--group", "(0 1)", "--no-shortcut", "--subdivide", "2",
    ]);
    assert!(!r.shortcut && r.reduced_homology.iter().all(|g| g.is_zero()));
}

#[test]
fn delta_reports_round_trip() {
    let (r, _) = json::<DeltaReport>(&["--format", "json", "delta", "--g", "3"]);
    assert_eq!(r.relative_cells.len(), 1);
    assert_eq!(r.certified.exact.get(&5).map(|g| g.to_string()).as_deref(), Some("ℤ"));
    let (r, text) = json::<DeltaReport>(&["--format", "json", "delta", "--g", "2"]);
    assert!(r.relative_cells.is_empty());
    assert_eq!(r.certified.zero, [0, 1, 2]);
    assert!(text.contains("\"certified\""));
}

#[test]
fn enumeration_and_skeleton() {
    let (r, _) = json::<EnumerationReport>(&["--format", "json", "graphs", "enumerate", "--g", "4", "--non-bm"]);
    assert_eq!((r.count, r.non_bm, r.graphs.len()), (378, 3, 3));
    let (r, _) = json::<SkeletonReport>(&["--format", "json", "check-skeleton", "--g", "4", "--n", "2"]);
    assert!(r.one_skeleton_in_bm);
}

#[test]
fn exit_codes() {
    assert_eq!(symdelta(&["sphere-quotient", "--p", "3", "--group", "(0 9)"]).status.code(), Some(2));
    assert_eq!(symdelta(&["delta", "--g", "0", "--n", "5"]).status.code(), Some(2));
    assert_eq!(symdelta(&["graphs", "enumerate", "--g", "1", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        symdelta(&["--group-cap", "10", "sphere-quotient", "--p", "4", "--group", "(0 1 2 3 4),(0 1)"]).status.code(),
        Some(3)
    );
    assert_eq!(symdelta(&["sphere-quotient", "--graph", "/nonexistent/graph.json"]).status.code(), Some(2));
}

#[test]
fn jobs_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_symdelta"))
        .args(["check-skeleton", "--g", "2"])
        .env("SYMDELTA_JOBS", "2")
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("lies in"));
}

#[test]
fn quick_selftest_passes() {
    let (r, _) = json::<SelftestReport>(&["--format", "json", "selftest", "--quick"]);
    assert_eq!(r.failed, 0);
    assert!(r.passed >= 20);
    assert_eq!(r.skipped, 4);
}
