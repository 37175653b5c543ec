use std::path::Path;
use std::process::{Command, Output};

fn nullkan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nullkan")).args(args).output().expect("binary runs")
}

fn spec(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name).display().to_string()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("report is JSON")
}

#[test]
fn construct_f2_proper_from_file() {
    let o = nullkan(&["construct", "--spec", &spec("f2_proper.nk")]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["results"]["main"]["F1"]["nulls"], serde_json::json!([[], ["0"], ["1"]]));
    assert_eq!(r["seed"], 7);
}

#[test]
fn file_and_builtin_agree() {
    for name in ["identity", "f2_trivial", "f2_proper", "injections_card_1"] {
        let a = json(&nullkan(&["construct", "--model", name]));
        let b = json(&nullkan(&["construct", "--spec", &spec(&format!("{name}.nk"))]));
        assert_eq!(a["results"], b["results"], "{name}");
    }
}

#[test]
fn exit_status_follows_the_report() {
    assert_eq!(nullkan(&["check", "thm1", "--model", "f2_trivial"]).status.code(), Some(0));
    assert_eq!(nullkan(&["check", "thm3", "--model", "f2_proper"]).status.code(), Some(1));
    assert_eq!(nullkan(&["validate", "--model", "missing"]).status.code(), Some(2));
    assert_eq!(nullkan(&["validate", "--spec", "/nonexistent/x.nk"]).status.code(), Some(2));
    assert_eq!(nullkan(&["check", "thm3", "--model", "injections_card_1", "--budget", "4"]).status.code(), Some(3));
    let skipped = nullkan(&["check", "ext", "--model", "f2_trivial"]);
    assert_eq!(skipped.status.code(), Some(0));
    assert_eq!(json(&skipped)["status"], "skipped");
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("nullkan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let a = nullkan(&["materialize", "--model", "identity", "--out", path.to_str().unwrap()]);
    assert!(a.stdout.is_empty());
    let b = nullkan(&["materialize", "--model", "identity"]);
    assert_eq!(std::fs::read(&path).unwrap(), b.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_output_and_seed() {
    let o = nullkan(&["check", "lemmas", "--seed", "11", "--text"]);
    let t = String::from_utf8(o.stdout).unwrap();
    assert!(t.lines().any(|l| l == "seed = 11"));
    assert!(t.contains("results.lemmas.preadj:1.verdict.status = \"pass\""));
}

#[test]
fn parse_errors_carry_lines() {
    let dir = std::env::temp_dir().join(format!("nullkan-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.nk");
    std::fs::write(&path, "nullkan 1\ncategory C\n  object a\n  compose id_a nope id_a\nend\n").unwrap();
    let o = nullkan(&["validate", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let r = json(&o);
    assert_eq!(r["diagnostics"][0], "line 4: unknown morphism `nope`");
    std::fs::remove_dir_all(&dir).unwrap();
}
