use std::path::PathBuf;
use std::process::Command;

use hedonica_cli::run;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hedonica").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn lines(out: &str) -> Vec<&str> {
    out.lines().collect()
}

#[test]
fn check_reports_ns_holds() {
    let g1 = fixture("g1.hg");
    let (code, out, _) = call(&["--machine", "check", "--game", &g1, "--partition", "{1,2}|{3}", "--props", "ns"]);
    assert_eq!(code, 0);
    assert!(lines(&out).contains(&"verdict: holds"), "{}", out);
}

#[test]
fn check_reports_failures_with_witnesses() {
    let g1 = fixture("g1.hg");
    let (code, out, _) = call(&["--machine", "check", "--game", &g1, "--partition", "{1,2,3}", "--props", "ir,ns,ef,po"]);
    assert_eq!(code, 1);
    let l = lines(&out);
    assert!(l.contains(&"property: ir"));
    assert!(l.contains(&"witness: player 2"));
    assert!(l.contains(&"verdict: fails"));
    assert!(out.contains("work: "), "{}", out);
}

#[test]
fn pareto_budget_exhaustion_exits_three() {
    let g1 = fixture("g1.hg");
    let (code, out, _) = call(&["--machine", "check", "--game", &g1, "--partition", "{1,2}|{3}", "--props", "po", "--po-budget", "2"]);
    assert_eq!(code, 3, "{}", out);
    assert!(lines(&out).contains(&"verdict: unknown"));
}

#[test]
fn exists_ef_ns_on_fixture_is_none() {
    let g1 = fixture("g1.hg");
    let (code, out, _) = call(&["--machine", "exists", "--game", &g1, "--props", "ef+ns"]);
    assert_eq!(code, 1);
    assert!(lines(&out).contains(&"verdict: none"));
    let (code, out, _) = call(&["--machine", "exists", "--game", &g1, "--props", "ef+po"]);
    assert_eq!(code, 0, "{}", out);
}

#[test]
fn solve_utilitarian_on_fixture() {
    let g1 = fixture("g1.hg");
    let (code, out, _) = call(&["--machine", "solve", "--game", &g1, "--objective", "utilitarian"]);
    assert_eq!(code, 0);
    let l = lines(&out);
    assert!(l.contains(&"value: 6"));
    assert!(l.contains(&"partition: {1,2}|{3}"));
}

#[test]
fn solve_every_objective() {
    let g1 = fixture("g1.hg");
    for obj in ["egalitarian", "elitist", "serial-dictatorship", "nash-local", "po-ir"] {
        let (code, out, err) = call(&["--machine", "solve", "--game", &g1, "--objective", obj]);
        assert_eq!(code, 0, "{}: {}", obj, err);
        assert!(out.contains("partition: "));
    }
    let (code, out, _) = call(&[
        "--machine", "solve", "--game", &g1, "--objective", "nash-local", "--seed-partition", "{1,2,3}",
    ]);
    assert_eq!(code, 0);
    assert!(lines(&out).contains(&"value: 6"), "{}", out);
}

#[test]
fn machine_output_is_stable() {
    let g1 = fixture("g1.hg");
    let args = ["--machine", "enum", "--game", &g1, "--report", "all"];
    let (_, a, _) = call(&args);
    let (_, b, _) = call(&args);
    assert_eq!(a, b);
    assert!(lines(&a).contains(&"partitions: 5"));
    assert!(lines(&a).contains(&"ns: 2"));
    assert!(lines(&a).contains(&"ef: 2"));
}

#[test]
fn unknown_flags_exit_two_with_usage() {
    let (code, out, err) = call(&["check", "--bogus"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{}", err);
    assert_eq!(call(&["frobnicate"]).0, 2);
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.hg");
    std::fs::write(&bad, "hedonic 2\n0 1\n1 x\n").unwrap();
    let (code, _, err) = call(&["check", "--game", bad.to_str().unwrap(), "--props", "ir"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{}", err);
    let g1 = fixture("g1.hg");
    assert_eq!(call(&["check", "--game", &g1, "--partition", "{1,2}", "--props", "ir"]).0, 2);
}

#[test]
fn inline_and_file_partitions_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let pf = dir.path().join("p.txt");
    std::fs::write(&pf, "{1,3}|{2}\n").unwrap();
    let g1 = fixture("g1.hg");
    let pf = pf.to_str().unwrap();
    let (code, _, err) = call(&["check", "--game", &g1, "--partition", "{1,2}|{3}", "--partition-file", pf, "--props", "ns"]);
    assert_eq!(code, 2);
    assert!(err.contains("not both"));
    let (code, out, _) = call(&["--machine", "check", "--game", &g1, "--partition-file", pf, "--props", "ns"]);
    assert_eq!(code, 0);
    assert!(out.contains("partition: {1,3}|{2}"));
}

#[test]
fn gadget_files_round_trip_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("e3c.txt");
    std::fs::write(&src, "r 3\ntriple 1 2 3\n").unwrap();
    let game = dir.path().join("g.hg");
    let part = dir.path().join("p.txt");
    let (code, out, err) = call(&[
        "gadget", "po-verify", "--source", src.to_str().unwrap(), "--out", game.to_str().unwrap(),
        "--out-partition", part.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{}", err);
    assert!(out.contains("players: 6"));
    assert!(out.contains("role: 1 w^1"));
    let (code, out, _) = call(&[
        "check", "--game", game.to_str().unwrap(), "--partition-file", part.to_str().unwrap(), "--props", "po",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("witness-roles: "), "{}", out);
    assert!(out.contains("improved: "));
}

#[test]
fn every_gadget_kind_builds() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("ef-ns", "r 3\ntriple 1 2 3\n", "players: 10"),
        ("egal", "machines 2\njobs 3 3 2\n", "players: 5"),
        ("po-ir", "weights 2 -1 -1\n", "players: 6"),
        ("ef-po", "agent 1 0\nagent 0 1\n", "players: 4"),
    ];
    for (kind, text, expect) in cases {
        let src = dir.path().join(format!("{}.txt", kind));
        std::fs::write(&src, text).unwrap();
        let out_game = dir.path().join(format!("{}.hg", kind));
        let (code, out, err) = call(&[
            "--machine", "gadget", kind, "--source", src.to_str().unwrap(), "--out", out_game.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{}: {}", kind, err);
        assert!(out.contains(expect), "{}", out);
        assert!(std::fs::read_to_string(&out_game).unwrap().starts_with("hedonic"));
    }
    let src = dir.path().join("egal.txt");
    let (code, _, err) = call(&[
        "gadget", "egal", "--source", src.to_str().unwrap(), "--out", dir.path().join("x").to_str().unwrap(),
        "--out-partition", dir.path().join("y").to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("distinguished"));
}

#[test]
fn limit_variable_is_honoured() {
    let g1 = fixture("g1.hg");
    let bin = env!("CARGO_BIN_EXE_hedonica");
    let status = Command::new(bin)
        .args(["enum", "--game", &g1])
        .env("HEDONICA_LIMIT", "2")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&status.stderr).contains("exceeds the enumeration limit"));
    let status = Command::new(bin)
        .args(["enum", "--game", &g1])
        .env("HEDONICA_LIMIT", "lots")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn binary_exit_codes_match_verdicts() {
    let g1 = fixture("g1.hg");
    let bin = env!("CARGO_BIN_EXE_hedonica");
    for (partition, code) in [("{1,2}|{3}", 0), ("{1}|{2}|{3}", 1)] {
        let out = Command::new(bin)
            .args(["--machine", "check", "--game", &g1, "--partition", partition, "--props", "ns"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(code));
        let expected = if code == 0 { "verdict: holds" } else { "verdict: fails" };
        assert!(String::from_utf8_lossy(&out.stdout).contains(expected));
    }
}
