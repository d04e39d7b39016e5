//! CSV renderers for refinement traces and improvement trajectories.

use setmatch::maxmin::MaxMinTrajectory;
use setmatch::model::fnv1a64;
use setmatch::stability::{BlockAction, RefinementOutcome};

/// One row per resolution:
/// `step,student,college,action,victim,min_utility,avg_utility,key_digest`.
pub fn refinement_to_csv(outcome: &RefinementOutcome) -> String {
    let mut out =
        String::from("step,student,college,action,victim,min_utility,avg_utility,key_digest\n");
    for (i, record) in outcome.trace.iter().enumerate() {
        let (action, victim) = match record.pair.action {
            BlockAction::Add => ("add", String::new()),
            BlockAction::Replace(v) => ("replace", v.0.to_string()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{:.6},{:016x}\n",
            i + 1,
            record.pair.student.0,
            record.pair.college.0,
            action,
            victim,
            record.min_utility,
            record.avg_utility,
            fnv1a64(record.key.as_bytes())
        ));
    }
    out
}

/// One row per iteration:
/// `iteration,worst_college,min_utility,avg_utility[,r_drawn],action`.
/// The `r_drawn` column appears only for sampled trajectories.
pub fn trajectory_to_csv(trajectory: &MaxMinTrajectory) -> String {
    let sampled = trajectory.points.iter().any(|p| p.r_drawn.is_some());
    let mut out = String::from(if sampled {
        "iteration,worst_college,min_utility,avg_utility,r_drawn,action\n"
    } else {
        "iteration,worst_college,min_utility,avg_utility,action\n"
    });
    for p in &trajectory.points {
        if sampled {
            let r = p.r_drawn.map(|r| r.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{},{}\n",
                p.iteration, p.worst_college.0, p.min_utility, p.avg_utility, r, p.action
            ));
        } else {
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{}\n",
                p.iteration, p.worst_college.0, p.min_utility, p.avg_utility, p.action
            ));
        }
    }
    out
}
