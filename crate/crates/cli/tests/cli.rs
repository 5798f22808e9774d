use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

fn mwg(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mwg")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn fixture(dir: &TempDir, name: &str) -> PathBuf {
    let (code, text, _) = mwg(&["generate", "fixture", name]);
    assert_eq!(code, 0);
    let path = dir.path().join(format!("{name}.mwg"));
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn first_line(text: &str) -> &str {
    text.lines().next().unwrap_or("")
}

#[test]
fn documented_examples() {
    let dir = TempDir::new().unwrap();
    let fig1 = fixture(&dir, "fig1");
    let fig3 = fixture(&dir, "fig3");
    let (code, out, _) = mwg(&["solve", "--obj", "energy", s(&fig1), "--from", "s0"]);
    assert_eq!((code, first_line(&out)), (0, "YES"));
    let (code, out, _) = mwg(&["solve", "--obj", "mp-fin", "--threshold", "1,1", s(&fig3)]);
    assert_eq!((code, first_line(&out)), (1, "NO"));
    let (code, out, _) = mwg(&["eval", "--lasso", "sa / sa", s(&fig3)]);
    assert_eq!((code, out.as_str()), (0, "2 0\n"));
}

#[test]
fn every_objective_and_method() {
    let dir = TempDir::new().unwrap();
    let fig3 = fixture(&dir, "fig3");
    let cases: &[(&[&str], &str)] = &[
        (&["--obj", "mp-inf", "--threshold", "1,1"], "YES"),
        (&["--obj", "mp-sup", "--threshold", "2,2"], "YES"),
        (&["--obj", "mp-sup", "--threshold", "3,2"], "NO"),
        (&["--obj", "energy", "--threshold", "1,1", "--method", "enum"], "NO"),
        (&["--obj", "energy", "--threshold", "1,1", "--method", "capped"], "NO"),
        (&["--obj", "mp-infsup", "--inf", "1", "--sup", "2", "--threshold", "1,1"], "YES"),
        (&["--obj", "mp-infsup", "--sup", "1,2", "--threshold", "1/2,1/2"], "YES"),
    ];
    for (args, want) in cases {
        let mut full = vec!["solve"];
        full.extend_from_slice(args);
        full.push(s(&fig3));
        let (_, out, err) = mwg(&full);
        assert_eq!(first_line(&out), *want, "{full:?}: {err}");
    }
}

#[test]
fn certificates_round_trip_through_verify() {
    let dir = TempDir::new().unwrap();
    let fig1 = fixture(&dir, "fig1");
    for method in ["enum", "capped"] {
        let cert = dir.path().join(format!("{method}.cert"));
        let (code, _, _) = mwg(&["solve", "--obj", "energy", "--method", method, "--cert", s(&cert), s(&fig1)]);
        assert_eq!(code, 0);
        let (code, out, _) = mwg(&["verify", "--game", s(&fig1), "--cert", s(&cert), "--obj", "energy"]);
        assert_eq!((code, first_line(&out)), (0, "VALID"));
    }
    // A refuting player-2 choice for the 3SAT game of x1.
    let cnf = dir.path().join("x1.cnf");
    std::fs::write(&cnf, "p cnf 1 1\n1 1 1 0\n").unwrap();
    let (_, game, _) = mwg(&["generate", "3sat", "--dimacs", s(&cnf)]);
    let g = dir.path().join("sat.mwg");
    std::fs::write(&g, game).unwrap();
    let cert = dir.path().join("p2.cert");
    let (code, out, _) = mwg(&["solve", "--obj", "energy", "--method", "enum", "--cert", s(&cert), s(&g)]);
    assert_eq!((code, first_line(&out)), (1, "NO"));
    let (code, out, _) = mwg(&["verify", "--game", s(&g), "--cert", s(&cert), "--obj", "energy"]);
    assert_eq!((code, first_line(&out)), (0, "VALID"));
    // Always-left does not refute fig1.
    let bogus = dir.path().join("bogus.cert");
    std::fs::write(&bogus, "cert p2-memoryless\nchoose s0 left\n").unwrap();
    let fig1_text = std::fs::read_to_string(&fig1).unwrap();
    assert!(fig1_text.contains("edge left"));
    let (code, out, _) = mwg(&["verify", "--game", s(&fig1), "--cert", s(&bogus), "--obj", "energy"]);
    assert_eq!((code, first_line(&out)), (1, "INVALID"));
}

#[test]
fn simulations() {
    let dir = TempDir::new().unwrap();
    let fig3 = fixture(&dir, "fig3");
    let (code, out, _) = mwg(&["simulate", "pump", "--threshold", "1,1", "--alpha", "1/2", s(&fig3)]);
    assert_eq!((code, first_line(&out)), (0, "VALID"));
    assert!(out.contains("z 8 round 18 warmup 144"));
    let (code, out, _) = mwg(&["simulate", "interleave", "--threshold", "2,2", "--phases", "6", s(&fig3)]);
    assert_eq!((code, first_line(&out)), (0, "VALID"));
    assert!(out.contains("final-alpha 1/8"));
}

#[test]
fn generators() {
    let dir = TempDir::new().unwrap();
    let (code, a, _) = mwg(&["generate", "random", "--states", "4", "--seed", "3"]);
    let (_, b, _) = mwg(&["generate", "random", "--states", "4", "--seed", "3"]);
    assert_eq!((code, &a), (0, &b));
    let graph = dir.path().join("g.txt");
    std::fs::write(&graph, "vertices 4\n0 1\n2 3\n").unwrap();
    let (code, game, err) = mwg(&["generate", "disjoint-paths", "--graph", s(&graph), "--terminals", "0,1,2,3"]);
    assert_eq!(code, 0, "{err}");
    assert!(game.contains("edge hxy v1 v2 4 -1"));
    let (code, formula, _) = mwg(&["generate", "3sat", "--vars", "3", "--clauses", "4", "--formula"]);
    assert_eq!(code, 0);
    assert!(formula.starts_with("p cnf 3 4"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let fig3 = fixture(&dir, "fig3");
    let missing = dir.path().join("missing.mwg");
    for args in [
        vec!["solve", "--obj", "energy", s(&missing)],
        vec!["solve", "--obj", "energy", "--threshold", "1/0,1", s(&fig3)],
        vec!["solve", "--obj", "energy", "--threshold", "1", s(&fig3)],
        vec!["solve", "--obj", "mp-infsup", s(&fig3)],
        vec!["solve", "--obj", "energy", "--bogus", s(&fig3)],
        vec!["generate", "fixture", "fig9"],
    ] {
        let (code, out, _) = mwg(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty(), "stdout must stay clean on errors");
    }
}

#[test]
fn enumeration_guard_needs_force() {
    let dir = TempDir::new().unwrap();
    let (_, game, _) = mwg(&["generate", "random", "--states", "24", "--dim", "3", "--p2", "1", "--seed", "1"]);
    let g = dir.path().join("big.mwg");
    std::fs::write(&g, game).unwrap();
    let (code, _, err) = mwg(&["solve", "--obj", "mp-inf", s(&g)]);
    assert_eq!(code, 2);
    assert!(err.contains("--force"), "{err}");
}
