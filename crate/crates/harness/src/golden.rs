//! Golden-trace verification against the two shipped fixture instances.
//!
//! Replays the propose phase and swap refinement step by step against the
//! expected matchings, reporting the first divergence, and cross-checks
//! the cycling fixture against the exhaustive oracle.

use std::path::Path;

use setmatch::error::{Error, Result};
use setmatch::io::load_instance;
use setmatch::model::{CollegeId, Instance, Matching, StudentId};
use setmatch::oracle::oracle_report;
use setmatch::stability::{is_stable, propose_phase_trace, swap_refinement, RefinementStatus};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct GoldenReport {
    pub checks: Vec<CheckResult>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass,
            detail,
        });
    }

    fn ok(&mut self, name: &str) {
        self.push(name, true, String::new());
    }
}

fn expected_matching(inst: &Instance, rosters: &[&[u32]]) -> Matching {
    let mut m = Matching::empty(inst);
    for (college, students) in rosters.iter().enumerate() {
        for &student in students.iter() {
            m.move_student(inst, StudentId(student), Some(CollegeId(college as u32)))
                .expect("expected matchings are feasible");
        }
    }
    m
}

fn describe(m: &Matching) -> String {
    m.canonical_key()
}

/// The five propose-phase rounds and two refinement steps of the
/// stabilizing fixture, then the nine-step cycle of the other. Returns one
/// check per claim; `detail` carries the first divergence.
pub fn verify_golden(fixtures_dir: &Path) -> Result<GoldenReport> {
    let a1_path = fixtures_dir.join("a1_counterexample.json");
    let a2_path = fixtures_dir.join("a2_cycle.json");
    for path in [&a1_path, &a2_path] {
        if !path.exists() {
            return Err(Error::Io(format!("fixture missing: {}", path.display())));
        }
    }
    let a1 = load_instance(&a1_path)?;
    let a2 = load_instance(&a2_path)?;
    let mut report = GoldenReport::default();

    // stabilizing fixture: documented propose rounds
    let a1_rounds: Vec<Matching> = [
        &[&[2, 3][..], &[1][..]][..],
        &[&[0, 2], &[1]],
        &[&[0, 2], &[3]],
        &[&[0, 1], &[3]],
        &[&[0, 1], &[3]],
    ]
    .iter()
    .map(|rosters| expected_matching(&a1, rosters))
    .collect();
    let proposed = propose_phase_trace(&a1);
    if proposed.rounds.len() != a1_rounds.len() {
        report.push(
            "a1 propose rounds",
            false,
            format!(
                "expected {} rounds, got {}",
                a1_rounds.len(),
                proposed.rounds.len()
            ),
        );
    } else if let Some((i, (got, want))) = proposed
        .rounds
        .iter()
        .zip(&a1_rounds)
        .enumerate()
        .find(|(_, (g, w))| g != w)
    {
        report.push(
            "a1 propose rounds",
            false,
            format!(
                "first divergence at round {}: expected {}, got {}",
                i + 1,
                describe(want),
                describe(got)
            ),
        );
    } else {
        report.ok("a1 propose rounds");
    }

    report.push(
        "a1 post-propose unstable",
        !is_stable(&a1, &proposed.matching),
        String::new(),
    );

    // refinement must hit the documented matchings and stabilize in two steps
    let a1_steps = [
        expected_matching(&a1, &[&[1, 3], &[]]),
        expected_matching(&a1, &[&[1, 3], &[2]]),
    ];
    let refined = swap_refinement(&a1, proposed.matching.clone(), None);
    let mut a1_refine_detail = String::new();
    let mut a1_refine_pass = refined.status == RefinementStatus::Stable && refined.steps == 2;
    if !a1_refine_pass {
        a1_refine_detail = format!(
            "expected Stable in 2 steps, got {:?} in {}",
            refined.status, refined.steps
        );
    } else if let Some((i, (got, want))) = refined
        .trace
        .iter()
        .map(|r| r.key.clone())
        .zip(a1_steps.iter().map(|m| m.canonical_key()))
        .enumerate()
        .find(|(_, (g, w))| g != w)
    {
        a1_refine_pass = false;
        a1_refine_detail = format!(
            "first divergence at step {}: expected {want}, got {got}",
            i + 1
        );
        let _ = got;
    }
    report.push("a1 refinement stabilizes", a1_refine_pass, a1_refine_detail);

    // cycling fixture
    let a2_expected_start = expected_matching(&a2, &[&[3, 4], &[0, 1]]);
    let a2_proposed = propose_phase_trace(&a2);
    report.push(
        "a2 propose matching",
        a2_proposed.matching == a2_expected_start,
        if a2_proposed.matching == a2_expected_start {
            String::new()
        } else {
            format!(
                "expected {}, got {}",
                describe(&a2_expected_start),
                describe(&a2_proposed.matching)
            )
        },
    );

    let a2_steps: Vec<Matching> = [
        &[&[1, 4][..], &[0][..]][..],
        &[&[1, 4], &[0, 2]],
        &[&[1, 4], &[2, 3]],
        &[&[1], &[2, 4]],
        &[&[0, 1], &[2, 4]],
        &[&[0, 3], &[2, 4]],
        &[&[0, 3], &[1, 2]],
        &[&[3, 4], &[1, 2]],
        &[&[3, 4], &[0, 1]],
    ]
    .iter()
    .map(|rosters| expected_matching(&a2, rosters))
    .collect();
    let cycled = swap_refinement(&a2, a2_proposed.matching.clone(), None);
    let mut a2_pass = cycled.status == RefinementStatus::CycleDetected
        && cycled.steps == 9
        && cycled.trace.last().map(|r| r.key.as_str()) == Some(cycled.initial_key.as_str());
    let mut a2_detail = String::new();
    if !a2_pass {
        a2_detail = format!(
            "expected CycleDetected in 9 steps repeating the start, got {:?} in {}",
            cycled.status, cycled.steps
        );
    } else if let Some((i, (got, want))) = cycled
        .trace
        .iter()
        .map(|r| r.key.clone())
        .zip(a2_steps.iter().map(|m| m.canonical_key()))
        .enumerate()
        .find(|(_, (g, w))| g != w)
    {
        a2_pass = false;
        a2_detail = format!(
            "first divergence at step {}: expected {want}, got {got}",
            i + 1
        );
    }
    report.push("a2 refinement cycles", a2_pass, a2_detail);

    let a2_oracle = oracle_report(&a2)?;
    report.push(
        "a2 oracle finds no stable matching",
        a2_oracle.stable.is_empty(),
        if a2_oracle.stable.is_empty() {
            "stable matchings: 0".into()
        } else {
            format!("stable matchings: {}", a2_oracle.stable.len())
        },
    );

    Ok(report)
}
