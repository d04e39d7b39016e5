//! End-to-end checks of the remaining CLI surfaces: sweep, scale, verify,
//! and oracle.

use std::path::PathBuf;
use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_setmatch")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("setmatch-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn sweep_writes_one_curves_file_per_lambda() {
    let dir = scratch("sweep");
    let status = Command::new(binary())
        .args([
            "sweep",
            "--seed",
            "3",
            "--trials",
            "2",
            "--students",
            "10",
            "--colleges",
            "2",
        ])
        .args(["--lambdas", "0.3,1.0,2.0"])
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    for lambda in ["0.3", "1", "2"] {
        let path = dir.join(format!("curves_lambda_{lambda}.csv"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {path:?}"));
        assert!(text.starts_with("# config: "));
        assert!(text.contains(&format!("\"lambda\":{lambda}")));
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("method,iteration,min_utility"));
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn scale_writes_the_table() {
    let dir = scratch("scale");
    let status = Command::new(binary())
        .args([
            "scale",
            "--seed",
            "5",
            "--trials",
            "1",
            "--methods",
            "gsa,greedy",
        ])
        .args(["--points", "8x2x2,16x3x2"])
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.join("scaling.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config:"));
    assert_eq!(
        lines.next().unwrap(),
        "method,n_students,m_colleges,max_quota,seconds,final_min,final_avg"
    );
    assert_eq!(lines.count(), 4); // 2 methods x 2 points
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_passes_and_writes_traces() {
    let dir = scratch("verify");
    let output = Command::new(binary())
        .arg("verify")
        .arg("--fixtures")
        .arg(fixtures_dir())
        .arg("--trace-out")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "verify failed: {}",
        String::from_utf8_lossy(&output.stdout)
    );
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert_eq!(
        stdout.matches("pass").count(),
        6,
        "six checks pass: {stdout}"
    );
    assert!(!stdout.contains("FAIL"));
    let trace = std::fs::read_to_string(dir.join("a2_cycle_trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 1 + 9);
    assert!(
        trace.starts_with("step,student,college,action,victim,min_utility,avg_utility,key_digest")
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_fails_on_mutated_fixtures() {
    let dir = scratch("verify-bad");
    let pristine = setmatch::fixtures::a1_counterexample();
    let mut colleges = pristine.colleges().to_vec();
    colleges[0].ranked_sets.swap(0, 1);
    let mutated = setmatch::model::Instance::new(pristine.students().to_vec(), colleges);
    std::fs::write(
        dir.join("a1_counterexample.json"),
        setmatch::io::instance_to_json(&mutated),
    )
    .unwrap();
    std::fs::write(
        dir.join("a2_cycle.json"),
        setmatch::io::instance_to_json(&setmatch::fixtures::a2_cycle()),
    )
    .unwrap();
    let output = Command::new(binary())
        .arg("verify")
        .arg("--fixtures")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("FAIL"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn oracle_reports_the_cycling_fixture() {
    let output = Command::new(binary())
        .arg("oracle")
        .arg(fixtures_dir().join("a2_cycle.json"))
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("feasible matchings: 141"));
    assert!(stdout.contains("stable matchings: 0"));
    assert!(stdout.contains("max-min optimum: 0.500000"));
}

#[test]
fn oracle_respects_the_enumeration_cap() {
    let output = Command::new(binary())
        .arg("oracle")
        .arg(fixtures_dir().join("a2_cycle.json"))
        .args(["--cap", "10"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("too large"));
}
