//! Sampled greedy max-min improvement.
//!
//! Builds a matching from empty over one round per seat of total capacity.
//! Each round targets the worst-off college and draws a candidate count
//! from a hypergeometric over a virtually padded student pool — the pad is
//! never materialized, only the draw parameters see it — then samples that
//! many real unmatched students. The best positive marginal candidate is
//! added; when addition yields nothing, a donor exchange is tried. Every
//! draw flows through one seeded ChaCha12 generator, so a run is a pure
//! function of `(instance, epsilon, delta, seed)`.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Hypergeometric};

use crate::error::{Error, Result};
use crate::model::{CollegeId, Instance, Matching, StudentId};
use crate::utility::{avg_utility, college_utility, min_utility};

use super::{worst_off_college, HaltReason, MaxMinTrajectory, StepAction, TrajectoryPoint};

/// The fixed generator backing every stochastic run: ChaCha12, portable
/// and stable across platforms. Parallel trials derive their seeds as
/// `base_seed + trial_index`.
pub type SeededRng = ChaCha12Rng;

/// Most exploratory accuracy setting: the largest legal per-round sample.
pub const DEFAULT_EPSILON: f64 = 1.0 / std::f64::consts::E;

/// Middle-of-the-road pool padding.
pub const DEFAULT_DELTA: f64 = 0.5;

/// Generator seeded for one run or trial.
pub fn seeded_rng(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// Sampling parameters derived from the market size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StochParams {
    pub epsilon: f64,
    pub delta: f64,
    /// Total seat count across colleges; one improvement round per seat.
    pub total_capacity: u64,
    /// Virtually padded pool size `N`.
    pub virtual_pool: u64,
    /// Per-round draw budget `k`.
    pub sample_budget: u64,
}

/// Derives the padded pool size and per-round budget:
/// `N = max(students, K + ceil((2K - 1) / delta))` and
/// `k = floor((N / K) * ln(1 / epsilon))`.
///
/// Requires `epsilon` in `[1/e, 1)`, `delta` in `(0, 1)`, capacity >= 1.
pub fn derive_params(
    n_students: usize,
    total_capacity: u64,
    epsilon: f64,
    delta: f64,
) -> Result<StochParams> {
    let min_epsilon = 1.0 / std::f64::consts::E;
    if !(epsilon >= min_epsilon && epsilon < 1.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "epsilon must be in [1/e, 1), got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "delta must be in (0, 1), got {delta}"
        )));
    }
    if total_capacity == 0 {
        return Err(Error::ParameterOutOfRange(
            "total capacity must be at least 1".into(),
        ));
    }
    let padding = ((2 * total_capacity - 1) as f64 / delta).ceil() as u64;
    let virtual_pool = (n_students as u64).max(total_capacity + padding);
    // the nudge keeps the epsilon = 1/e boundary on its intended integer
    let raw = virtual_pool as f64 / total_capacity as f64 * (1.0 / epsilon).ln();
    let sample_budget = (raw + 1e-9).floor() as u64;
    Ok(StochParams {
        epsilon,
        delta,
        total_capacity,
        virtual_pool,
        sample_budget,
    })
}

/// One hypergeometric draw: the number of real students among `draws`
/// picks without replacement from `population` items of which `successes`
/// are real. `draws` is clamped to the population; oversampling just skips
/// pad elements.
pub fn hypergeometric_draw(
    rng: &mut impl rand::Rng,
    draws: u64,
    successes: u64,
    population: u64,
) -> Result<u64> {
    if successes > population {
        return Err(Error::ParameterOutOfRange(format!(
            "successes {successes} exceed population {population}"
        )));
    }
    let draws = draws.min(population);
    if draws == 0 || successes == 0 {
        return Ok(0);
    }
    if successes == population {
        return Ok(draws);
    }
    if draws == population {
        return Ok(successes);
    }
    let dist = Hypergeometric::new(population, successes, draws)
        .map_err(|e| Error::ParameterOutOfRange(e.to_string()))?;
    Ok(dist.sample(rng))
}

/// Uniform `r`-subset of the pool without replacement, returned in
/// ascending id order. Deterministic given the generator state.
pub fn sample_candidates(rng: &mut impl rand::Rng, pool: &[StudentId], r: usize) -> Vec<StudentId> {
    assert!(r <= pool.len(), "cannot sample {r} of {}", pool.len());
    if r == pool.len() {
        return pool.to_vec();
    }
    let mut picked: Vec<StudentId> = rand::seq::index::sample(rng, pool.len(), r)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort_unstable();
    picked
}

/// Outcome of one stochastic round.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub matching: Matching,
    pub action: StepAction,
    pub r_drawn: u64,
}

fn extended(roster: &[StudentId], extra: StudentId) -> Vec<StudentId> {
    let mut v = roster.to_vec();
    v.push(extra);
    v
}

/// One round for `target`: sample candidates, add the best positive
/// marginal one if the college has a vacancy, otherwise try exchanging a
/// positive-contribution member `w` for a donor's student `v` with a
/// strictly higher marginal, never worsening the donor. Ties everywhere go
/// to the lowest student index.
pub fn stochastic_step(
    inst: &Instance,
    m: &Matching,
    target: CollegeId,
    rng: &mut impl rand::Rng,
    params: &StochParams,
) -> StepResult {
    let roster = m.assigned(target);
    let population = params.virtual_pool - roster.len() as u64;
    let unmatched = m.unmatched();
    let r_drawn = hypergeometric_draw(
        rng,
        params.sample_budget,
        unmatched.len() as u64,
        population,
    )
    .expect("pool invariant guarantees successes <= population");
    let candidates = sample_candidates(rng, unmatched, r_drawn as usize);

    let current = college_utility(inst, target, roster);
    if roster.len() < inst.college(target).quota as usize {
        let mut best: Option<(StudentId, f64)> = None;
        for &candidate in &candidates {
            if !inst.acceptable(candidate, target) {
                continue; // unlisted colleges contribute nothing, ever
            }
            let marginal = college_utility(inst, target, &extended(roster, candidate)) - current;
            if marginal > 0.0 && best.is_none_or(|(_, m)| marginal > m) {
                best = Some((candidate, marginal));
            }
        }
        if let Some((chosen, _)) = best {
            let mut next = m.clone();
            next.move_student(inst, chosen, Some(target))
                .expect("vacancy checked");
            return StepResult {
                matching: next,
                action: StepAction::Added,
                r_drawn,
            };
        }
    }

    // swapping phase, only when addition produced no gain
    for (i, &outgoing) in roster.iter().enumerate() {
        let mut base = roster.to_vec();
        base.remove(i);
        let base_utility = college_utility(inst, target, &base);
        let outgoing_marginal = current - base_utility;
        if outgoing_marginal <= 0.0 {
            continue;
        }
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
                let incoming_marginal =
                    college_utility(inst, target, &extended(&base, incoming)) - base_utility;
                if incoming_marginal <= outgoing_marginal {
                    continue;
                }
                let donor_after: Vec<StudentId> = donor_roster
                    .iter()
                    .copied()
                    .filter(|&s| s != incoming)
                    .collect();
                if college_utility(inst, donor, &donor_after) < donor_current {
                    continue;
                }
                let mut next = m.clone();
                next.move_student(inst, outgoing, None)
                    .expect("member move cannot fail");
                next.move_student(inst, incoming, Some(target))
                    .expect("outgoing freed a seat");
                return StepResult {
                    matching: next,
                    action: StepAction::Swapped,
                    r_drawn,
                };
            }
        }
    }

    StepResult {
        matching: m.clone(),
        action: StepAction::NoGain,
        r_drawn,
    }
}

/// Whether any unmatched student could still strictly improve `target` by
/// addition. The swap phase scans donors exhaustively already, so after a
/// no-gain round this is the only branch a fuller sample could unlock.
fn addition_gain_possible(inst: &Instance, m: &Matching, target: CollegeId) -> bool {
    let roster = m.assigned(target);
    if roster.len() >= inst.college(target).quota as usize {
        return false;
    }
    let current = college_utility(inst, target, roster);
    m.unmatched().iter().any(|&u| {
        inst.acceptable(u, target) && college_utility(inst, target, &extended(roster, u)) > current
    })
}

/// Full stochastic run from the empty matching: one round per seat of
/// total capacity. A round without gain ends the run only when no gain is
/// possible at all for the worst college — an unlucky sample merely costs
/// the round. The recorded min-utility sequence is non-decreasing.
pub fn run_stochastic(
    inst: &Instance,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<MaxMinTrajectory> {
    let params = derive_params(inst.n_students(), inst.total_capacity(), epsilon, delta)?;
    let mut rng = SeededRng::seed_from_u64(seed);
    let mut matching = Matching::empty(inst);
    let mut points = vec![TrajectoryPoint {
        iteration: 0,
        worst_college: worst_off_college(inst, &matching),
        min_utility: 0.0,
        avg_utility: 0.0,
        action: StepAction::Start,
        r_drawn: None,
    }];
    let mut halt = HaltReason::IterationCap;
    for iteration in 1..=params.total_capacity {
        let target = worst_off_college(inst, &matching);
        let step = stochastic_step(inst, &matching, target, &mut rng, &params);
        debug_assert!(step.matching.is_feasible(inst));
        let min = min_utility(inst, &step.matching).1;
        debug_assert!(
            min >= points.last().unwrap().min_utility,
            "min utility regressed"
        );
        points.push(TrajectoryPoint {
            iteration: iteration as usize,
            worst_college: target,
            min_utility: min,
            avg_utility: avg_utility(inst, &step.matching),
            action: step.action,
            r_drawn: Some(step.r_drawn),
        });
        let stuck = step.action == StepAction::NoGain
            && !addition_gain_possible(inst, &step.matching, target);
        matching = step.matching;
        if stuck {
            halt = HaltReason::NoImprovement;
            break;
        }
    }
    Ok(MaxMinTrajectory {
        points,
        matching,
        halt,
    })
}
