mod common;

use std::fs;
use std::path::Path;

use common::{cli_replay_roundtrip, run_cli};
use normsys::ecosystem::EcoConfig;
use proptest::prelude::*;
use serde_json::Value;

fn s(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn gen(dir: &Path, cfg: &EcoConfig) -> std::path::PathBuf {
    let c = dir.join("eco.cfg");
    fs::write(&c, cfg.to_text()).unwrap();
    let out = dir.join("eco");
    let (code, _, err) = run_cli(&["gen", "eco", "--config", &s(&c), "--out", &s(&out)]);
    assert_eq!(code, 0, "{err}");
    out
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json", "--no-timing"];
    full.extend_from_slice(args);
    let (code, out, err) = run_cli(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn check_reports_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let eco = gen(dir.path(), &EcoConfig::instantiation());
    let model = s(&eco.join("model.mas"));
    let phi = s(&eco.join("phi.ctl"));
    for norm in ["n1.norm", "n2.norm"] {
        let r = json(&["check", "--model", &model, "--norm", &s(&eco.join(norm)), "--formula-file", &phi]);
        assert_eq!(r["verdict"], "true");
    }
    let r = json(&["check", "--model", &model, "--formula", "AG !k=3"]);
    assert_eq!(r["verdict"], "true");
    let r = json(&["check", "--model", &model, "--formula-file", &phi]);
    assert_eq!(r["verdict"], "false");
    let (code, out, _) = run_cli(&["validate", "--model", &model, "--norm", &s(&eco.join("n1.norm"))]);
    assert_eq!(code, 0);
    assert!(out.starts_with("validate: valid"));
}

#[test]
fn synthesis_writes_a_checkable_norm() {
    let dir = tempfile::tempdir().unwrap();
    let eco = gen(dir.path(), &EcoConfig::simple());
    let model = s(&eco.join("model.mas"));
    let phi = s(&eco.join("phi.ctl"));
    let r = json(&["synth", "static", "--model", &model, "--formula-file", &phi]);
    assert_eq!(r["verdict"], "none-exists");
    let out = s(&dir.path().join("found.norm"));
    let r = json(&["synth", "dynamic", "--model", &model, "--formula-file", &phi, "--kmax", "2", "--out", &out]);
    assert_eq!(r["verdict"], "found");
    let r = json(&["check", "--model", &model, "--norm", &out, "--formula-file", &phi]);
    assert_eq!(r["verdict"], "true");
    let r = json(&["synth", "dynamic", "--model", &model, "--formula-file", &phi, "--budget", "0"]);
    assert_eq!(r["verdict"], "budget-exceeded");
    for n in ["n3.norm", "n4.norm", "n5.norm"] {
        assert!(eco.join(n).exists());
    }
}

#[test]
fn recognition_witnesses_replay() {
    let dir = tempfile::tempdir().unwrap();
    let eco = gen(dir.path(), &EcoConfig::single_producer(3, true, true));
    let fam = s(&eco.join("family.fam"));
    let w2 = s(&dir.path().join("w2.json"));
    let r = json(&["nc2", "--family", &fam, "--depth", "12", "--witness-out", &w2]);
    assert_eq!(r["verdict"], "successful");
    assert_eq!(r["details"]["bruteforce_agrees"], true);
    let r = json(&["nc2", "--family", &fam, "--replay", &w2]);
    assert_eq!(r["verdict"], "replay-valid");

    // Dropping the last step leaves an ambiguous prefix.
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&w2).unwrap()).unwrap();
    doc["path"].as_array_mut().unwrap().pop();
    fs::write(&w2, doc.to_string()).unwrap();
    let (code, _, err) = run_cli(&["nc2", "--family", &fam, "--replay", &w2]);
    assert_eq!(code, 2);
    assert!(err.contains("invalid witness"), "{err}");

    let w1 = s(&dir.path().join("w1.json"));
    let r = json(&["nc1", "--family", &fam, "--witness-out", &w1]);
    assert_eq!(r["verdict"], "unsuccessful");
    assert_eq!(json(&["nc1", "--family", &fam, "--replay", &w1])["verdict"], "replay-valid");
    let (code, _, _) = run_cli(&["nc2", "--family", &fam, "--replay", &w1]);
    assert_eq!(code, 2);

    // The same family given by flags.
    let norms = format!("{},{}", s(&eco.join("n2.norm")), s(&eco.join("n6.norm")));
    let model = s(&eco.join("model.mas"));
    let r = json(&["nc2", "--model", &model, "--norms", &norms, "--observer", "c_v", "--active", "1"]);
    assert_eq!(r["details"]["active"], 1);
}

#[test]
fn nfa_instances_are_generated() {
    let dir = tempfile::tempdir().unwrap();
    let nfa = dir.path().join("a.nfa");
    fs::write(&nfa, "states q\nalphabet a b\ninitial q\nq a q\n").unwrap();
    let out = dir.path().join("inst");
    let (code, _, err) = run_cli(&["gen", "nfa-instance", "--nfa", &s(&nfa), "--out", &s(&out)]);
    assert_eq!(code, 0, "{err}");
    let r = json(&["nc2", "--family", &s(&out.join("family.fam")), "--depth", "4"]);
    assert_eq!(r["verdict"], "successful");
    assert_eq!(r["details"]["bruteforce_agrees"], true);
}

#[test]
fn exit_statuses() {
    assert_eq!(run_cli(&["frobnicate"]).0, 1);
    assert_eq!(run_cli(&["synth", "sideways", "--model", "m", "--formula", "p"]).0, 1);
    assert_eq!(run_cli(&["check", "--model", "m", "--formula", "p", "--formula-file", "f"]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mas");
    fs::write(&bad, "[agents]\nx\n[states]\ns\n[initial]\nt\n").unwrap();
    let (code, _, err) = run_cli(&["validate", "--model", &s(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains("6:1"), "{err}");
    let (code, _, _) = run_cli(&["check", "--model", &s(&bad), "--formula", "AG"]);
    assert_eq!(code, 2);
}

#[test]
fn timings_are_optional() {
    let dir = tempfile::tempdir().unwrap();
    let eco = gen(dir.path(), &EcoConfig::simple());
    let model = s(&eco.join("model.mas"));
    let (_, with, _) = run_cli(&["--json", "check", "--model", &model, "--formula", "true"]);
    let v: Value = serde_json::from_str(&with).unwrap();
    assert!(v.get("timings_ms").is_some());
    let a = run_cli(&["--json", "--no-timing", "check", "--model", &model, "--formula", "true"]).1;
    let b = run_cli(&["--json", "--no-timing", "check", "--model", &model, "--formula", "true"]).1;
    assert_eq!(a, b);
    assert!(!a.contains("timings"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_families_replay_through_the_command_line(seed in any::<u64>()) {
        let dir = tempfile::tempdir().unwrap();
        prop_assert_eq!(cli_replay_roundtrip(seed, dir.path()), Ok(()));
    }
}
