use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn contextlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contextlab"))
        .args(args)
        .env_remove("CONTEXTLAB_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn export(dir: &Path) {
    let out = contextlab(&["export-builtins", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn demo_passes_and_prints_markdown() {
    let out = contextlab(&["demo", "pigeonhole-si", "--s", "+,+,-", "--t", "+,-,+"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("# "), "{text}");
    assert!(text.contains("PASS"));
}

#[test]
fn unknown_names_are_usage_errors() {
    let out = contextlab(&["demo", "nosuch"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("pigeonhole-original"));
    assert_eq!(code(&contextlab(&["sweep", "nosuch"])), 2);
    assert_eq!(code(&contextlab(&["frobnicate"])), 2);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(
        code(&contextlab(&["demo", "pigeonhole-si", "--s", "+,x,+"])),
        2
    );
    assert_eq!(
        code(&contextlab(&["--tolerance", "-1", "demo", "cheshire"])),
        2
    );
    assert_eq!(
        code(&contextlab(&["--expect", "maybe", "demo", "cheshire"])),
        2
    );
}

#[test]
fn bad_seed_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_contextlab"))
        .args(["sweep", "magic-square-random"])
        .env("CONTEXTLAB_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn expectation_mismatch_exits_one() {
    assert_eq!(
        code(&contextlab(&[
            "--expect",
            "unsat",
            "ks-search",
            "builtin:48"
        ])),
        0
    );
    assert_eq!(
        code(&contextlab(&["--expect", "sat", "ks-search", "builtin:48"])),
        1
    );
    assert_eq!(
        code(&contextlab(&["--expect", "sat", "ks-search", "builtin:34"])),
        0
    );
    assert_eq!(
        code(&contextlab(&[
            "--expect",
            "unsat",
            "ks-search",
            "builtin:34",
            "--preassign",
            "psi_i=1,psi_f=1"
        ])),
        0
    );
    assert_eq!(
        code(&contextlab(&["--expect", "infeasible", "demo", "cheshire"])),
        1
    );
}

#[test]
fn infeasible_scenario_is_reported_not_failed() {
    let args = ["demo", "ghz-pentagram", "--s", "+,+,+", "--t", "+,+,+"];
    let out = contextlab(&[&["--format", "json"][..], &args[..]].concat());
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["body"]["feasible"], false);
    assert_eq!(
        code(&contextlab(
            &[&["--expect", "infeasible"][..], &args[..]].concat()
        )),
        0
    );
    assert_eq!(
        code(&contextlab(
            &[&["--expect", "feasible"][..], &args[..]].concat()
        )),
        1
    );
}

#[test]
fn exported_builtins_verify() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    for name in [
        "pm_square_2q",
        "pm_square_3q",
        "wa_triangle_3q",
        "pentagram_3q",
        "qudit_config_triangle_d2",
    ] {
        let path = dir.path().join(format!("{name}.json"));
        let out = contextlab(&["verify-config", path.to_str().unwrap()]);
        assert_eq!(
            code(&out),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
    for name in [
        "triangle_d2",
        "ghz_triangle_d4",
        "ghz_triangle_d6",
        "four_vertex_d4",
    ] {
        let path = dir.path().join(format!("{name}.json"));
        assert_eq!(
            code(&contextlab(&["ghz-check", path.to_str().unwrap()])),
            0,
            "{name}"
        );
    }
    let rays = dir.path().join("rays48.json");
    assert_eq!(
        code(&contextlab(&[
            "--expect",
            "unsat",
            "ks-search",
            rays.to_str().unwrap()
        ])),
        0
    );
}

#[test]
fn non_ghz_graph_fails_unless_expected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t3.json");
    fs::write(&path, r#"{"n":3,"d":3,"edges":[[1,2,1],[2,3,1],[1,3,1]]}"#).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&contextlab(&["ghz-check", p])), 1);
    assert_eq!(
        code(&contextlab(&["--expect", "infeasible", "ghz-check", p])),
        0
    );
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"n\":3,").unwrap();
    let b = bad.to_str().unwrap();
    assert_eq!(code(&contextlab(&["ghz-check", b])), 2);
    assert_eq!(code(&contextlab(&["verify-config", b])), 2);
    assert_eq!(code(&contextlab(&["ks-search", b])), 2);
    assert_eq!(code(&contextlab(&["report", b])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&contextlab(&["report", missing.to_str().unwrap()])), 2);

    // a line whose members do not commute
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"name":"bad","n":1,"d":2,"nodes":[{"label":"X","op":"X1"},{"label":"Z","op":"Z1"}],
            "lines":[{"name":"l","members":[0,1],"claimed":0}]}"#,
    )
    .unwrap();
    assert_eq!(
        code(&contextlab(&["verify-config", cfg.to_str().unwrap()])),
        2
    );
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let cfg = dir.path().join("pm_square_3q.json");
    let json = dir.path().join("report.json");
    let out = contextlab(&[
        "--format",
        "json",
        "--out",
        json.to_str().unwrap(),
        "verify-config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&json).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["passed"], true);

    let md = contextlab(&["report", json.to_str().unwrap()]);
    assert_eq!(code(&md), 0);
    assert!(String::from_utf8_lossy(&md.stdout).contains("pm_square_3q"));

    let again = contextlab(&["--format", "json", "report", json.to_str().unwrap()]);
    let reparsed: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(reparsed, value);
}

#[test]
fn list_names_every_demo() {
    let out = contextlab(&["list"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for name in [
        "pigeonhole-original",
        "cheshire-si",
        "qudit-product",
        "magic-square-random",
    ] {
        assert!(text.contains(name));
    }
}
