use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gptlab::gpt::GptSystem;
use gptlab::numerics::Scalar;
use gptlab_cli::{parse_machine_block, recheck};
use serde_json::Value;
use tempfile::TempDir;

fn gptlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gptlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("GPTLAB_MAX_VERTICES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Machine block of a run, rechecked from the files it names.
fn round_trip(dir: &Path, o: &Output) -> Value {
    let block = parse_machine_block(&stdout(o)).expect("machine block");
    assert!(block.to_string().contains(&*dir.canonicalize().unwrap().to_string_lossy()));
    assert!(recheck(&block).expect("recheck runs"), "recheck disagrees with {block:#}");
    block
}

fn workspace() -> (TempDir, PathBuf) {
    let t = TempDir::new().unwrap();
    let p = t.path().to_path_buf();
    (t, p)
}

fn zoo(dir: &Path, args: &[&str]) {
    let o = gptlab(dir, &[&["zoo"], args].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn pr_box_violates_level_two_with_five_events() {
    let (_t, d) = workspace();
    zoo(&d, &["prbox", "--out", "pr.json"]);
    let o = gptlab(&d, &["check-lo", "pr.json", "--level", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("witness clique (5 members)"));
    let block = round_trip(&d, &o);
    let levels = block["levels"].as_array().unwrap();
    assert_eq!(levels[0]["value"], "1");
    assert_eq!(levels[1]["value"], "5/4");
    assert_eq!(levels[1]["witness"].as_array().unwrap().len(), 5);
}

#[test]
fn deterministic_behavior_passes_level_three() {
    let (_t, d) = workspace();
    let file = r#"{"parties": 2, "inputs": [2, 2], "outputs": [2, 2],
        "table": {"0,0": {"0,1": "1"}, "0,1": {"0,0": "1"}, "1,0": {"1,1": "1"}, "1,1": {"1,0": "1"}}}"#;
    std::fs::write(d.join("det.json"), file).unwrap();
    let o = gptlab(&d, &["check-lo", "det.json", "--level", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    round_trip(&d, &o);
}

#[test]
fn malformed_file_reports_position() {
    let (_t, d) = workspace();
    std::fs::write(d.join("bad.json"), "{\"parties\": 2,\n \"inputs\": [2, 2 ").unwrap();
    let o = gptlab(&d, &["check-lo", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn vertex_and_level_caps() {
    let (_t, d) = workspace();
    zoo(&d, &["prbox", "--out", "pr.json"]);
    let o = gptlab(&d, &["check-lo", "pr.json", "--level", "2", "--max-vertices", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cap"));
    let o = Command::new(env!("CARGO_BIN_EXE_gptlab"))
        .args(["check-lo", "pr.json", "--level", "2"])
        .current_dir(&d)
        .env("GPTLAB_MAX_VERTICES", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = gptlab(&d, &["check-lo", "pr.json", "--level", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--allow-high-level"));
}

#[test]
fn pentagon_levels() {
    let (_t, d) = workspace();
    zoo(&d, &["pentagon", "--out", "c5.json", "--weights", "half.json"]);
    let o = gptlab(&d, &["check-ce", "c5.json", "half.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(round_trip(&d, &o)["levels"][0]["value"], "1");
    let o = gptlab(&d, &["check-ce", "c5.json", "half.json", "--level", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(round_trip(&d, &o)["levels"][1]["value"], "5/4");
}

#[test]
fn invalid_weight_names_the_edge() {
    let (_t, d) = workspace();
    zoo(&d, &["pentagon", "--out", "c5.json", "--weights", "half.json"]);
    std::fs::write(d.join("third.json"), r#"{"0": "1/3", "1": "1/3", "2": "1/3", "3": "1/3", "4": "1/3"}"#).unwrap();
    let o = gptlab(&d, &["check-ce", "c5.json", "third.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("edge {0, 1}"), "{}", stderr(&o));
}

#[test]
fn sufficient_orthogonality_examples() {
    let (_t, d) = workspace();
    zoo(&d, &["polygon", "3", "--out", "p3.json"]);
    zoo(&d, &["polygon", "5", "--out", "p5.json"]);
    zoo(&d, &["squarebit", "--out", "sq.json"]);
    let o = gptlab(&d, &["check-so", "p3.json", "0", "1", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(round_trip(&d, &o)["witness"]["kind"], "rest-effect");
    let o = gptlab(&d, &["check-so", "p5.json", "0", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(round_trip(&d, &o)["witness"]["kind"], "overflow");
    let o = gptlab(&d, &["check-so", "sq.json", "0", "1", "2", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NonOrthogonalInput"));
    let o = gptlab(&d, &["check-so", "sq.json", "0", "2", "--mode", "generated"]);
    assert_eq!(o.status.code(), Some(0));
    round_trip(&d, &o);
}

#[test]
fn no_signalling_and_its_witness() {
    let (_t, d) = workspace();
    zoo(&d, &["prbox", "--out", "pr.json"]);
    let o = gptlab(&d, &["check-ns", "pr.json"]);
    assert_eq!(o.status.code(), Some(0));
    round_trip(&d, &o);
    // Bob outputs Alice's input
    let file = r#"{"parties": 2, "inputs": [2, 2], "outputs": [2, 2],
        "table": {"0,0": {"0,0": "1"}, "0,1": {"0,0": "1"}, "1,0": {"0,1": "1"}, "1,1": {"0,1": "1"}}}"#;
    std::fs::write(d.join("sig.json"), file).unwrap();
    let o = gptlab(&d, &["check-ns", "sig.json"]);
    assert_eq!(o.status.code(), Some(2));
    round_trip(&d, &o);
    let o = gptlab(&d, &["check-lo", "sig.json"]);
    assert_eq!(o.status.code(), Some(2));
    round_trip(&d, &o);
}

#[test]
fn square_bit_file_has_the_pairing_table() {
    let (_t, d) = workspace();
    zoo(&d, &["squarebit", "--out", "sq.json"]);
    let sys = GptSystem::from_json(&std::fs::read_to_string(d.join("sq.json")).unwrap()).unwrap();
    for y in 0..4 {
        for s in 0..4 {
            let want = if y == s || y == (s + 1) % 4 { Scalar::one() } else { Scalar::zero() };
            assert_eq!(gptlab::gpt::pair(sys.effect(y), sys.pure_state(s)).unwrap(), want);
        }
    }
}

#[test]
fn polygon_files_carry_their_field() {
    let (_t, d) = workspace();
    zoo(&d, &["polygon", "5", "--out", "p5.json"]);
    zoo(&d, &["polygon", "7", "--out", "p7.json"]);
    let p5: Value = serde_json::from_str(&std::fs::read_to_string(d.join("p5.json")).unwrap()).unwrap();
    assert_eq!(p5["field_k"], 5);
    let p7 = std::fs::read_to_string(d.join("p7.json")).unwrap();
    assert!(p7.contains("\"rad\""));
    for f in ["p5.json", "p7.json"] {
        let o = gptlab(&d, &["validate", f]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        round_trip(&d, &o);
    }
}

#[test]
fn zoo_outputs_validate() {
    let (_t, d) = workspace();
    zoo(&d, &["classical", "3", "--out", "c3.json"]);
    zoo(&d, &["tsirelson", "--out", "t.json"]);
    zoo(&d, &["pentagon", "--out", "c5.json", "--weights", "half.json"]);
    for f in ["c3.json", "t.json", "c5.json"] {
        assert_eq!(gptlab(&d, &["validate", f]).status.code(), Some(0));
    }
    assert_eq!(gptlab(&d, &["validate", "half.json", "--hypergraph", "c5.json"]).status.code(), Some(0));
    assert_eq!(gptlab(&d, &["zoo", "nonesuch"]).status.code(), Some(1));
    assert_eq!(gptlab(&d, &["zoo", "polygon"]).status.code(), Some(1));
}

#[test]
fn tampered_block_fails_recheck() {
    let (_t, d) = workspace();
    zoo(&d, &["prbox", "--out", "pr.json"]);
    let o = gptlab(&d, &["check-lo", "pr.json", "--level", "2"]);
    let mut block = parse_machine_block(&stdout(&o)).unwrap();
    block["levels"][1]["value"] = Value::String("3/2".into());
    assert!(!recheck(&block).unwrap());
}
