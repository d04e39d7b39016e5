//! Exhaustive ground truth for desk-scale instances.
//!
//! Enumerates every feasible matching (students assigned only to colleges
//! they list, quotas respected) exactly once, certifies stability
//! existence or non-existence, and computes the exact max-min optimum that
//! the greedy methods are measured against.

use crate::error::{Error, Result};
use crate::model::{CollegeId, Instance, Matching};
use crate::stability::is_stable;
use crate::utility::min_utility;

/// Refuse to enumerate instances whose assignment-space bound exceeds this.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Upper bound on the number of feasible matchings: the product over
/// students of (acceptable colleges + 1), ignoring quotas.
pub fn assignment_space_bound(inst: &Instance) -> u128 {
    inst.students().iter().fold(1u128, |acc, s| {
        acc.saturating_mul(s.prefs.len() as u128 + 1)
    })
}

/// Lazily yields every feasible matching of the instance exactly once.
///
/// Students are digits of a mixed-radix odometer: digit 0 is unmatched,
/// digit k is the k-th college of that student's preference list, admitted
/// only while the college has capacity left.
pub struct MatchingEnumerator<'a> {
    inst: &'a Instance,
    choice: Vec<usize>,
    capacity_left: Vec<u32>,
    started: bool,
    exhausted: bool,
}

impl<'a> MatchingEnumerator<'a> {
    fn new(inst: &'a Instance) -> Self {
        MatchingEnumerator {
            inst,
            choice: vec![0; inst.n_students()],
            capacity_left: inst.colleges().iter().map(|c| c.quota).collect(),
            started: false,
            exhausted: inst.n_students() == 0,
        }
    }

    fn college_at(&self, student: usize, digit: usize) -> CollegeId {
        self.inst.students()[student].prefs[digit - 1]
    }

    /// Advances the odometer to the next feasible assignment in place.
    fn advance(&mut self) -> bool {
        let n = self.choice.len();
        let mut i = n;
        while i > 0 {
            i -= 1;
            let digit = self.choice[i];
            if digit > 0 {
                let freed = self.college_at(i, digit).index();
                self.capacity_left[freed] += 1;
            }
            let prefs = self.inst.students()[i].prefs.len();
            let mut next = digit + 1;
            while next <= prefs {
                let college = self.college_at(i, next);
                if self.capacity_left[college.index()] > 0 {
                    self.choice[i] = next;
                    self.capacity_left[college.index()] -= 1;
                    return true;
                }
                next += 1;
            }
            self.choice[i] = 0; // unmatched is always feasible
        }
        false
    }

    fn materialize(&self) -> Matching {
        let assignment: Vec<Option<CollegeId>> = self
            .choice
            .iter()
            .enumerate()
            .map(|(i, &digit)| (digit > 0).then(|| self.college_at(i, digit)))
            .collect();
        Matching::from_assignment(self.inst, &assignment)
    }
}

impl Iterator for MatchingEnumerator<'_> {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if self.exhausted {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.materialize());
        }
        if self.advance() {
            Some(self.materialize())
        } else {
            self.exhausted = true;
            None
        }
    }
}

/// Enumerator over all feasible matchings, refusing instances whose
/// assignment-space bound exceeds `cap`.
pub fn enumerate_matchings_with_cap(inst: &Instance, cap: u128) -> Result<MatchingEnumerator<'_>> {
    let bound = assignment_space_bound(inst);
    if bound > cap {
        return Err(Error::InstanceTooLarge { bound, cap });
    }
    Ok(MatchingEnumerator::new(inst))
}

/// [`enumerate_matchings_with_cap`] at the default cap.
pub fn enumerate_matchings(inst: &Instance) -> Result<MatchingEnumerator<'_>> {
    enumerate_matchings_with_cap(inst, DEFAULT_ENUMERATION_CAP)
}

/// Everything the brute force knows about an instance.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub total_feasible: u64,
    pub stable: Vec<Matching>,
    /// Exact max-min optimum: the best achievable worst-college utility.
    pub optimum: f64,
    /// First enumerated matching attaining the optimum.
    pub argmax: Matching,
}

pub fn oracle_report_with_cap(inst: &Instance, cap: u128) -> Result<OracleReport> {
    let mut total = 0u64;
    let mut stable = Vec::new();
    let mut optimum = f64::NEG_INFINITY;
    let mut argmax: Option<Matching> = None;
    for m in enumerate_matchings_with_cap(inst, cap)? {
        total += 1;
        let (_, min) = min_utility(inst, &m);
        if min > optimum {
            optimum = min;
            argmax = Some(m.clone());
        }
        if is_stable(inst, &m) {
            stable.push(m);
        }
    }
    let argmax = argmax.expect("at least the empty matching is feasible");
    Ok(OracleReport {
        total_feasible: total,
        stable,
        optimum,
        argmax,
    })
}

pub fn oracle_report(inst: &Instance) -> Result<OracleReport> {
    oracle_report_with_cap(inst, DEFAULT_ENUMERATION_CAP)
}
