//! Blocking-pair dynamics under set preferences.
//!
//! The propose phase is a round-based deferred acceptance: every unmatched
//! student with an untried college proposes to their next choice, and each
//! college then holds the best ranked set available inside its current
//! roster plus the round's proposers, changing only on strict improvement.
//!
//! Refinement then resolves one blocking pair at a time. The pair selection
//! is fully deterministic — students scanned in ascending index order, and
//! a college with spare capacity deals only with its best improving
//! candidate (taken outright or swapped for a member) — so the matching
//! sequence is a pure function of the start state. The
//! canonical key of every visited matching is kept in a set; the first
//! repeat certifies a cycle, which bounds the number of resolutions by the
//! number of feasible matchings.

use std::collections::HashSet;

use crate::model::{CollegeId, Instance, Matching, StudentId};
use crate::utility::{avg_utility, college_utility, min_utility, student_utility};

/// How a blocking student enters the college: into a vacancy, or displacing
/// a current member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockAction {
    Add,
    Replace(StudentId),
}

/// A student/college pair that would both strictly gain by deviating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockingPair {
    pub student: StudentId,
    pub college: CollegeId,
    pub action: BlockAction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinementStatus {
    Stable,
    CycleDetected,
    IterationCap,
}

/// One applied resolution: the pair, the canonical key of the matching it
/// produced, and the fairness metrics at that point.
#[derive(Debug, Clone)]
pub struct ResolutionRecord {
    pub pair: BlockingPair,
    pub key: String,
    pub min_utility: f64,
    pub avg_utility: f64,
}

/// Result of running swap refinement to termination.
#[derive(Debug, Clone)]
pub struct RefinementOutcome {
    pub matching: Matching,
    pub status: RefinementStatus,
    pub steps: usize,
    pub initial_key: String,
    pub trace: Vec<ResolutionRecord>,
}

/// Propose-phase result with the matching recorded after every round.
#[derive(Debug, Clone)]
pub struct ProposeOutcome {
    pub matching: Matching,
    pub rounds: Vec<Matching>,
}

fn extended(roster: &[StudentId], extra: StudentId) -> Vec<StudentId> {
    let mut v = roster.to_vec();
    v.push(extra);
    v
}

/// The best strict improvement a below-quota college can get by
/// incorporating one interested student: either adding them outright or
/// swapping them for a single current member. The argmax over students and
/// actions is returned; ties go to the lowest student index, then to the
/// plain addition, then to the lowest victim index.
fn best_incorporation(
    inst: &Instance,
    m: &Matching,
    college: CollegeId,
) -> Option<(StudentId, BlockAction, f64)> {
    let roster = m.assigned(college);
    let current = college_utility(inst, college, roster);
    let mut best: Option<(StudentId, BlockAction, f64)> = None;
    for t in inst.student_ids() {
        let assignment = m.college_of(t);
        if assignment == Some(college) {
            continue;
        }
        if student_utility(inst, t, Some(college)) <= student_utility(inst, t, assignment) {
            continue;
        }
        let added = college_utility(inst, college, &extended(roster, t));
        if added > current && best.is_none_or(|(_, _, u)| added > u) {
            best = Some((t, BlockAction::Add, added));
        }
        for (i, &victim) in roster.iter().enumerate() {
            let mut set = roster.to_vec();
            set[i] = t;
            let swapped = college_utility(inst, college, &set);
            if swapped > current && best.is_none_or(|(_, _, u)| swapped > u) {
                best = Some((t, BlockAction::Replace(victim), swapped));
            }
        }
    }
    best
}

/// The most advantageous member to drop so `student` can join the full
/// college: argmax of the resulting utility over victims, ties to the
/// lowest victim index. `None` when no replacement strictly improves.
fn best_replacement(
    inst: &Instance,
    m: &Matching,
    college: CollegeId,
    student: StudentId,
) -> Option<(StudentId, f64)> {
    let roster = m.assigned(college);
    let current = college_utility(inst, college, roster);
    let mut best: Option<(StudentId, f64)> = None;
    for (i, &victim) in roster.iter().enumerate() {
        let mut set = roster.to_vec();
        set[i] = student;
        let gained = college_utility(inst, college, &set);
        if gained > current && best.is_none_or(|(_, u)| gained > u) {
            best = Some((victim, gained));
        }
    }
    best
}

/// Whether `(student, college)` is a blocking pair of `m`.
///
/// The student must strictly prefer the college to their assignment. A full
/// college blocks when some single replacement strictly raises its utility
/// (the victim is the utility-argmax, ties to the lowest index). A college
/// with spare capacity blocks only with the single candidate it would
/// actually take: the student whose best incorporation — an addition or a
/// one-for-one swap against a current member — improves it the most.
pub fn is_blocking(
    inst: &Instance,
    m: &Matching,
    student: StudentId,
    college: CollegeId,
) -> Option<BlockingPair> {
    let assignment = m.college_of(student);
    if assignment == Some(college) {
        return None;
    }
    if student_utility(inst, student, Some(college)) <= student_utility(inst, student, assignment) {
        return None;
    }
    let quota = inst.college(college).quota as usize;
    if m.assigned(college).len() < quota {
        let (chosen, action, _) = best_incorporation(inst, m, college)?;
        (chosen == student).then_some(BlockingPair {
            student,
            college,
            action,
        })
    } else {
        let (victim, _) = best_replacement(inst, m, college, student)?;
        Some(BlockingPair {
            student,
            college,
            action: BlockAction::Replace(victim),
        })
    }
}

/// First blocking pair under the given student scan order. Within a
/// student, colleges are checked in that student's own preference order,
/// stopping before their current assignment.
pub fn first_blocking_pair_in(
    inst: &Instance,
    m: &Matching,
    students: impl IntoIterator<Item = StudentId>,
) -> Option<BlockingPair> {
    for s in students {
        let assignment = m.college_of(s);
        for &c in &inst.student(s).prefs {
            if assignment == Some(c) {
                break;
            }
            if let Some(bp) = is_blocking(inst, m, s, c) {
                return Some(bp);
            }
        }
    }
    None
}

/// First blocking pair scanning students in ascending index order.
pub fn first_blocking_pair(inst: &Instance, m: &Matching) -> Option<BlockingPair> {
    first_blocking_pair_in(inst, m, inst.student_ids())
}

/// Applies one blocking-pair resolution and returns the next matching: the
/// student joins the college, the victim (if any) becomes unmatched, and
/// the student's previous college (if any) loses them.
///
/// The pair must be blocking under `m`; test builds assert this.
pub fn resolve(inst: &Instance, m: &Matching, pair: &BlockingPair) -> Matching {
    debug_assert_eq!(
        is_blocking(inst, m, pair.student, pair.college).as_ref(),
        Some(pair),
        "resolve called on a non-blocking pair"
    );
    let mut next = m.clone();
    if let BlockAction::Replace(victim) = pair.action {
        next.move_student(inst, victim, None)
            .expect("victim move cannot fail");
    }
    next.move_student(inst, pair.student, Some(pair.college))
        .expect("blocking pair implies capacity");
    next
}

/// Whether no student/college pair blocks `m` (full scan over all pairs).
pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    inst.student_ids().all(|s| {
        inst.student(s)
            .prefs
            .iter()
            .all(|&c| is_blocking(inst, m, s, c).is_none())
    })
}

/// Iterated blocking-pair resolution from `start`, recording the canonical
/// key after every step. Returns `Stable` when no pair remains,
/// `CycleDetected` on the first repeated matching, or `IterationCap` when
/// `cap` resolutions were applied first (`None` means no cap; termination
/// is guaranteed regardless because a repeat must occur).
pub fn swap_refinement(inst: &Instance, start: Matching, cap: Option<usize>) -> RefinementOutcome {
    let initial_key = start.canonical_key();
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(initial_key.clone());
    let mut matching = start;
    let mut trace: Vec<ResolutionRecord> = Vec::new();
    loop {
        let Some(pair) = first_blocking_pair(inst, &matching) else {
            let steps = trace.len();
            return RefinementOutcome {
                matching,
                status: RefinementStatus::Stable,
                steps,
                initial_key,
                trace,
            };
        };
        if cap.is_some_and(|cap| trace.len() >= cap) {
            let steps = trace.len();
            return RefinementOutcome {
                matching,
                status: RefinementStatus::IterationCap,
                steps,
                initial_key,
                trace,
            };
        }
        matching = resolve(inst, &matching, &pair);
        debug_assert!(matching.is_feasible(inst));
        let key = matching.canonical_key();
        let repeated = !seen.insert(key.clone());
        trace.push(ResolutionRecord {
            pair,
            key,
            min_utility: min_utility(inst, &matching).1,
            avg_utility: avg_utility(inst, &matching),
        });
        if repeated {
            let steps = trace.len();
            return RefinementOutcome {
                matching,
                status: RefinementStatus::CycleDetected,
                steps,
                initial_key,
                trace,
            };
        }
    }
}

/// Round-based deferred acceptance with set utilities.
///
/// Each round, every unmatched student with an untried college proposes to
/// their next preference. Each college then picks the highest-utility
/// ranked set available within its roster plus proposers (ties to the
/// better rank), adopting it only on strict improvement; everyone displaced
/// or not retained returns to the pool. A student's proposal cursor never
/// resets, so the phase ends once every unmatched student has exhausted
/// their list.
pub fn propose_phase_trace(inst: &Instance) -> ProposeOutcome {
    run_propose(inst, true)
}

/// [`propose_phase_trace`] without the per-round snapshots.
pub fn propose_phase(inst: &Instance) -> Matching {
    run_propose(inst, false).matching
}

fn run_propose(inst: &Instance, record_rounds: bool) -> ProposeOutcome {
    let mut matching = Matching::empty(inst);
    let mut cursor = vec![0usize; inst.n_students()];
    let mut rounds = Vec::new();
    let mut in_pool = vec![false; inst.n_students()];
    loop {
        // collect this round's proposals, one per eligible student
        let mut proposals: Vec<Vec<StudentId>> = vec![Vec::new(); inst.n_colleges()];
        let mut any = false;
        for &s in matching.unmatched() {
            let prefs = &inst.student(s).prefs;
            if cursor[s.index()] < prefs.len() {
                let college = prefs[cursor[s.index()]];
                cursor[s.index()] += 1;
                proposals[college.index()].push(s);
                any = true;
            }
        }
        if !any {
            break;
        }
        for college in inst.college_ids() {
            let proposers = &proposals[college.index()];
            if proposers.is_empty() {
                continue;
            }
            // mark the candidate pool: current roster plus proposers
            for &s in matching.assigned(college) {
                in_pool[s.index()] = true;
            }
            for &s in proposers {
                in_pool[s.index()] = true;
            }
            let current = college_utility(inst, college, matching.assigned(college));
            let mut best: Option<(usize, f64)> = None;
            for (idx, set) in inst.college(college).ranked_sets.iter().enumerate() {
                if set.iter().all(|s| in_pool[s.index()]) {
                    let u = college_utility(inst, college, set);
                    if u > current && best.is_none_or(|(_, bu)| u > bu) {
                        best = Some((idx, u));
                    }
                }
            }
            for &s in matching.assigned(college) {
                in_pool[s.index()] = false;
            }
            for &s in proposers {
                in_pool[s.index()] = false;
            }
            if let Some((idx, _)) = best {
                let target = inst.college(college).ranked_sets[idx].clone();
                let evicted: Vec<StudentId> = matching
                    .assigned(college)
                    .iter()
                    .copied()
                    .filter(|s| !target.contains(s))
                    .collect();
                for s in evicted {
                    matching
                        .move_student(inst, s, None)
                        .expect("eviction cannot fail");
                }
                for s in target {
                    if matching.college_of(s) != Some(college) {
                        matching
                            .move_student(inst, s, Some(college))
                            .expect("target fits within quota");
                    }
                }
            }
        }
        debug_assert!(matching.is_feasible(inst));
        if record_rounds {
            rounds.push(matching.clone());
        }
    }
    ProposeOutcome { matching, rounds }
}
