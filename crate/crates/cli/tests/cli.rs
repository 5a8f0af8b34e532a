use std::path::PathBuf;
use std::process::Command;

use blamelogic_cli::run;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = run(std::iter::once("blamelogic").chain(args.iter().copied()));
    (out.code, out.stdout, out.stderr)
}

#[test]
fn check_lopez_blame() {
    let game = fixture("lopez.json");
    let (code, out, err) = cli(&[
        "check",
        "--game",
        &game,
        "--play",
        "2",
        "--formula",
        "B{lopez} dead",
    ]);
    assert_eq!((code, out.as_str(), err.as_str()), (0, "true\n", ""));
    let (code, out, _) = cli(&[
        "check",
        "--game",
        &game,
        "--play",
        "0",
        "--formula",
        "B{lopez} dead",
    ]);
    assert_eq!((code, out.as_str()), (1, "false\n"));
}

#[test]
fn valid_reports_least_counterexample() {
    let game = fixture("lopez.json");
    let (code, out, _) = cli(&["valid", "--game", &game, "--formula", "dead"]);
    assert_eq!((code, out.as_str()), (1, "counterexample: play 0\n"));
    let (code, out, _) = cli(&["valid", "--game", &game, "--formula", "!B{} dead"]);
    assert_eq!((code, out.as_str()), (0, "ok\n"));
    let (code, out, _) = cli(&[
        "valid",
        "--game",
        &game,
        "--formula",
        "B{lopez} dead -> dead",
    ]);
    assert_eq!((code, out.as_str()), (0, "ok\n"));
}

#[test]
fn blame_report_golden() {
    let game = fixture("lopez.json");
    let expected = std::fs::read_to_string(fixture("blame_lopez_dead.json")).unwrap();
    for extra in [&["--max-size", "1"][..], &[][..]] {
        let mut args = vec!["blame", "--game", &game, "--play", "2", "--formula", "dead"];
        args.extend_from_slice(extra);
        let (code, out, _) = cli(&args);
        assert_eq!(code, 0);
        assert_eq!(out, expected);
    }
}

#[test]
fn blame_with_nobody_to_blame() {
    let game = fixture("lopez.json");
    let (code, out, _) = cli(&[
        "blame",
        "--game",
        &game,
        "--play",
        "0",
        "--formula",
        "!dead",
    ]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["blamable"], serde_json::json!([]));
    assert_eq!(v["minimal"], serde_json::json!([]));
}

#[test]
fn blame_size_larger_than_game() {
    let game = fixture("lopez.json");
    let (code, out, err) = cli(&[
        "blame",
        "--game",
        &game,
        "--play",
        "2",
        "--formula",
        "dead",
        "--max-size",
        "2",
    ]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(!err.is_empty());
}

#[test]
fn proof_bundled_and_files() {
    assert_eq!(
        cli(&["proof", "--bundled", "lemma1"]),
        (0, "ok\n".into(), String::new())
    );
    let (code, out, _) = cli(&["proof", &fixture("lemma1.json")]);
    assert_eq!((code, out.as_str()), (0, "ok\n"));
    let (code, out, _) = cli(&["proof", &fixture("lemma1_swapped.json")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("line 4: "), "{out}");
    let (code, _, err) = cli(&["proof", "--bundled", "lemma99"]);
    assert_eq!(code, 2);
    assert!(err.contains("lemma99"));
}

#[test]
fn every_bundled_script_checks() {
    for name in [
        "lemma1",
        "lemma2",
        "lemma3_instance",
        "lemma4",
        "lemma5_n2",
        "lemma5_n3",
        "lemma6_n2",
        "lemma7",
        "lemma8_n2",
    ] {
        assert_eq!(cli(&["proof", "--bundled", name]).0, 0, "{name}");
    }
}

#[test]
fn fmt_prints_canonical_form() {
    let (code, out, _) = cli(&["fmt", "--formula", "<N>(p&q)->r"]);
    assert_eq!((code, out.as_str()), (0, "<N> (p & q) -> r\n"));
    let (code, out, _) = cli(&["fmt", "--formula", "!N!p"]);
    assert_eq!((code, out.as_str()), (0, "<N> p\n"));
    let (code, out, _) = cli(&["fmt", "--formula", "B{b,a} (p|q)"]);
    assert_eq!((code, out.as_str()), (0, "B{a,b} (p | q)\n"));
}

#[test]
fn input_errors_exit_two() {
    let game = fixture("lopez.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["fmt", "--formula", "p &"],
        vec!["check", "--game", &game, "--play", "3", "--formula", "dead"],
        vec![
            "check",
            "--game",
            &game,
            "--play",
            "0",
            "--formula",
            "B{nobody} dead",
        ],
        vec![
            "check",
            "--game",
            "/nonexistent.json",
            "--play",
            "0",
            "--formula",
            "dead",
        ],
        vec!["check", "--game", &game, "--formula", "dead"],
        vec!["check", "--game", &game, "--play", "x", "--formula", "dead"],
        vec!["frobnicate"],
        vec![],
        vec!["proof"],
        vec!["proof", &game],
    ];
    for args in cases {
        let (code, out, err) = cli(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty(), "{args:?}: {out}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn invalid_game_is_rejected() {
    let dir = std::env::temp_dir().join(format!("blamelogic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"agents":["a"],"actions":[],"outcomes":["o"],"plays":[],"valuation":{}}"#,
    )
    .unwrap();
    let (code, _, err) = cli(&[
        "valid",
        "--game",
        path.to_str().unwrap(),
        "--formula",
        "true",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("empty action set"), "{err}");
}

#[test]
fn fuzz_small_run() {
    let (code, out, _) = cli(&["fuzz", "--seed", "5", "--games", "10", "--instances", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["failures"], serde_json::json!([]));
    assert_eq!(v["totals"][0]["instances"], 20);
    assert_eq!(
        out,
        cli(&["fuzz", "--seed", "5", "--games", "10", "--instances", "2"]).1
    );
}

#[test]
fn binary_matches_library() {
    let game = fixture("lopez.json");
    let out = Command::new(env!("CARGO_BIN_EXE_blamelogic"))
        .args([
            "check",
            "--game",
            &game,
            "--play",
            "2",
            "--formula",
            "B{lopez} dead",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "true\n");

    let out = Command::new(env!("CARGO_BIN_EXE_blamelogic"))
        .args(["valid", "--game", &game, "--formula", "dead"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "counterexample: play 0\n"
    );

    let out = Command::new(env!("CARGO_BIN_EXE_blamelogic"))
        .args(["fmt", "--formula", "p &"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}
