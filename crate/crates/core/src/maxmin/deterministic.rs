//! Deterministic greedy max-min improvement.
//!
//! Starting from the propose-phase matching, each iteration targets the
//! worst-off college and applies the first move that strictly raises its
//! utility: admit an unmatched student (into a vacancy, or in place of a
//! member when full), or pull a student from a donor college whose own
//! utility does not drop. The displaced member goes to the unmatched pool.
//! The loop halts when the worst college cannot be improved at all.

use crate::model::{CollegeId, Instance, Matching, StudentId};
use crate::stability::propose_phase;
use crate::utility::{avg_utility, college_utility, min_utility};

use super::{worst_off_college, HaltReason, MaxMinTrajectory, StepAction, TrajectoryPoint};

fn extended(roster: &[StudentId], extra: StudentId) -> Vec<StudentId> {
    let mut v = roster.to_vec();
    v.push(extra);
    v
}

fn without(roster: &[StudentId], drop: StudentId) -> Vec<StudentId> {
    roster.iter().copied().filter(|&s| s != drop).collect()
}

/// First strict improvement of `target` using unmatched students only:
/// a plain addition while below quota, otherwise a single replacement whose
/// victim returns to the pool. Students and victims are scanned in
/// ascending index order; students that do not list `target` are skipped.
pub fn try_unassigned(
    inst: &Instance,
    m: &Matching,
    target: CollegeId,
) -> Option<(Matching, StepAction)> {
    let roster = m.assigned(target);
    let current = college_utility(inst, target, roster);
    let below_quota = roster.len() < inst.college(target).quota as usize;
    for &candidate in m.unmatched() {
        if !inst.acceptable(candidate, target) {
            continue;
        }
        if below_quota {
            if college_utility(inst, target, &extended(roster, candidate)) > current {
                let mut next = m.clone();
                next.move_student(inst, candidate, Some(target))
                    .expect("vacancy checked");
                return Some((next, StepAction::AddUnassigned));
            }
        } else {
            for (i, &victim) in roster.iter().enumerate() {
                let mut set = roster.to_vec();
                set[i] = candidate;
                if college_utility(inst, target, &set) > current {
                    let mut next = m.clone();
                    next.move_student(inst, victim, None)
                        .expect("member move cannot fail");
                    next.move_student(inst, candidate, Some(target))
                        .expect("victim freed a seat");
                    return Some((next, StepAction::ReplaceUnassigned));
                }
            }
        }
    }
    None
}

/// First donor exchange that strictly improves `target` without worsening
/// the donor: a donor member replaces one of `target`'s members, who
/// becomes unmatched. Donors, their members, and `target`'s members are
/// scanned in ascending order.
pub fn try_donor_swaps(inst: &Instance, m: &Matching, target: CollegeId) -> Option<Matching> {
    let roster = m.assigned(target);
    let current = college_utility(inst, target, roster);
    for donor in inst.college_ids() {
        if donor == target {
            continue;
        }
        let donor_roster = m.assigned(donor);
        let donor_current = college_utility(inst, donor, donor_roster);
        for &incoming in donor_roster {
            if !inst.acceptable(incoming, target) {
                continue;
            }
            if college_utility(inst, donor, &without(donor_roster, incoming)) < donor_current {
                continue;
            }
            for (i, &outgoing) in roster.iter().enumerate() {
                let mut set = roster.to_vec();
                set[i] = incoming;
                if college_utility(inst, target, &set) > current {
                    let mut next = m.clone();
                    next.move_student(inst, outgoing, None)
                        .expect("member move cannot fail");
                    next.move_student(inst, incoming, Some(target))
                        .expect("outgoing freed a seat");
                    return Some(next);
                }
            }
        }
    }
    None
}

/// Runs the full deterministic max-min loop: propose phase, then up to
/// `max_iterations` improvement steps for the worst-off college, halting
/// early once neither move kind helps. The recorded min-utility sequence
/// is non-decreasing.
pub fn run_deterministic(inst: &Instance, max_iterations: usize) -> MaxMinTrajectory {
    let mut matching = propose_phase(inst);
    let mut points = vec![TrajectoryPoint {
        iteration: 0,
        worst_college: worst_off_college(inst, &matching),
        min_utility: min_utility(inst, &matching).1,
        avg_utility: avg_utility(inst, &matching),
        action: StepAction::Start,
        r_drawn: None,
    }];
    let mut halt = HaltReason::IterationCap;
    for iteration in 1..=max_iterations {
        let target = worst_off_college(inst, &matching);
        let step = try_unassigned(inst, &matching, target).or_else(|| {
            try_donor_swaps(inst, &matching, target).map(|m| (m, StepAction::DonorSwap))
        });
        let Some((next, action)) = step else {
            halt = HaltReason::NoImprovement;
            break;
        };
        debug_assert!(next.is_feasible(inst));
        let min = min_utility(inst, &next).1;
        debug_assert!(
            min >= points.last().unwrap().min_utility,
            "min utility regressed"
        );
        points.push(TrajectoryPoint {
            iteration,
            worst_college: target,
            min_utility: min,
            avg_utility: avg_utility(inst, &next),
            action,
            r_drawn: None,
        });
        matching = next;
    }
    MaxMinTrajectory {
        points,
        matching,
        halt,
    }
}
