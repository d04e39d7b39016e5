//! Max-min (Rawlsian) improvement: raise the worst-off college's utility
//! without hurting anyone else's.
//!
//! Two variants share the trajectory types here: [`deterministic`] scans
//! exhaustively for the first improving move, [`stochastic`] samples
//! candidate students hypergeometrically and picks the best marginal gain.

pub mod deterministic;
pub mod stochastic;

use std::fmt;

use crate::model::{CollegeId, Instance, Matching};
use crate::utility::min_utility;

/// Why an improvement loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltReason {
    /// No move could raise the worst-off college any further.
    NoImprovement,
    /// The iteration budget ran out first.
    IterationCap,
}

/// What a single improvement iteration did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepAction {
    /// Trajectory origin, before any improvement step.
    Start,
    /// Deterministic: admitted an unmatched student into a vacancy.
    AddUnassigned,
    /// Deterministic: swapped an unmatched student in for a member.
    ReplaceUnassigned,
    /// Deterministic: pulled a member from a donor college.
    DonorSwap,
    /// Stochastic: added the best sampled candidate.
    Added,
    /// Stochastic: exchanged a member for a donor's student.
    Swapped,
    /// Stochastic: nothing helped this round.
    NoGain,
}

impl fmt::Display for StepAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            StepAction::Start => "start",
            StepAction::AddUnassigned => "add_unassigned",
            StepAction::ReplaceUnassigned => "replace_unassigned",
            StepAction::DonorSwap => "donor_swap",
            StepAction::Added => "added",
            StepAction::Swapped => "swapped",
            StepAction::NoGain => "no_gain",
        };
        f.write_str(label)
    }
}

/// Per-iteration record: which college was targeted and the fairness
/// metrics after the step.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    pub iteration: usize,
    pub worst_college: CollegeId,
    pub min_utility: f64,
    pub avg_utility: f64,
    pub action: StepAction,
    /// Sampled candidate count; only the stochastic method sets this.
    pub r_drawn: Option<u64>,
}

/// Full record of one improvement run. The min-utility sequence over
/// `points` is non-decreasing by construction.
#[derive(Debug, Clone)]
pub struct MaxMinTrajectory {
    pub points: Vec<TrajectoryPoint>,
    pub matching: Matching,
    pub halt: HaltReason,
}

impl MaxMinTrajectory {
    pub fn final_min_utility(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.min_utility)
    }

    pub fn final_avg_utility(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.avg_utility)
    }
}

/// The college with the lowest utility under `m`, ties to the lowest id.
pub fn worst_off_college(inst: &Instance, m: &Matching) -> CollegeId {
    min_utility(inst, m).0
}
