//! Basic greedy baseline: one pass, no displacement.

use setmatch::model::{Instance, Matching};
use setmatch::utility::{avg_utility, college_utility, min_utility};

/// Single-pass greedy with per-step metrics: one curve point after each
/// student's placement attempt.
#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub matching: Matching,
    /// `(min_utility, avg_utility)` after each student was considered.
    pub curve: Vec<(f64, f64)>,
}

/// Students in ascending index order each propose down their list once. A
/// college takes the student iff it has a seat left and the addition
/// strictly raises its utility; accepted students never move again.
pub fn baseline_greedy_trace(inst: &Instance) -> GreedyOutcome {
    let mut matching = Matching::empty(inst);
    let mut curve = Vec::with_capacity(inst.n_students());
    for student in inst.student_ids() {
        for &college in &inst.student(student).prefs {
            let roster = matching.assigned(college);
            if roster.len() >= inst.college(college).quota as usize {
                continue;
            }
            let current = college_utility(inst, college, roster);
            let mut extended = roster.to_vec();
            extended.push(student);
            if college_utility(inst, college, &extended) > current {
                matching
                    .move_student(inst, student, Some(college))
                    .expect("seat checked");
                break;
            }
        }
        curve.push((min_utility(inst, &matching).1, avg_utility(inst, &matching)));
    }
    GreedyOutcome { matching, curve }
}

/// [`baseline_greedy_trace`] without the curve.
pub fn baseline_greedy(inst: &Instance) -> Matching {
    baseline_greedy_trace(inst).matching
}
