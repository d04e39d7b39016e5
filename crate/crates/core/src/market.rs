//! Seeded synthetic market generator.
//!
//! Students draw uniform backgrounds and rank specialization-matching
//! colleges ahead of the rest (random order within each block). Colleges
//! draw a specialization, a quota, and a duplicate-free list of ranked
//! sets whose members are biased toward the college's own specialization.
//! Everything is a pure function of the config, so equal seeds give
//! byte-identical instances.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{College, CollegeId, Instance, Student, StudentId};

/// Generation knobs. Experiments usually fix only the market dimensions
/// and lambda; the rest are explicit defaults recorded in every output
/// header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketConfig {
    pub n_students: usize,
    pub m_colleges: usize,
    pub backgrounds: Vec<String>,
    pub max_quota: u32,
    /// Shared diversity weight for every college.
    pub lambda: f64,
    /// Ranked sets requested per college, clamped to the number of
    /// distinct sets the quota allows.
    pub sets_per_college: usize,
    /// Keep only this many entries of each student's list; `None` keeps
    /// all colleges.
    pub pref_list_truncation: Option<usize>,
    /// Probability that a set slot draws from the college's own
    /// specialization instead of the whole pool.
    pub specialization_bias: f64,
    pub seed: u64,
}

impl MarketConfig {
    pub fn new(n_students: usize, m_colleges: usize, seed: u64) -> MarketConfig {
        MarketConfig {
            n_students,
            m_colleges,
            backgrounds: ["sciences", "humanities", "engineering", "arts"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            max_quota: 2,
            lambda: 1.0,
            sets_per_college: 25,
            pref_list_truncation: None,
            specialization_bias: 0.7,
            seed,
        }
    }

    fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InfeasibleConfig(msg));
        if self.n_students == 0 {
            return fail("n_students must be at least 1".into());
        }
        if self.m_colleges == 0 {
            return fail("m_colleges must be at least 1".into());
        }
        if self.backgrounds.is_empty() {
            return fail("backgrounds must be non-empty".into());
        }
        if self.max_quota == 0 {
            return fail("max_quota must be at least 1".into());
        }
        if self.sets_per_college == 0 {
            return fail("sets_per_college must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.specialization_bias) {
            return fail(format!(
                "specialization_bias {} outside [0, 1]",
                self.specialization_bias
            ));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return fail(format!(
                "lambda {} must be finite and non-negative",
                self.lambda
            ));
        }
        Ok(())
    }
}

/// Number of distinct non-empty subsets of `n` students with size at most
/// `q`, saturating.
fn distinct_sets_available(n: usize, q: u32) -> u128 {
    let mut total: u128 = 0;
    let mut choose: u128 = 1;
    for k in 1..=(q as usize).min(n) {
        choose = choose.saturating_mul((n - k + 1) as u128) / k as u128;
        total = total.saturating_add(choose);
        if total > u64::MAX as u128 {
            return u64::MAX as u128; // already far beyond any realistic request
        }
    }
    total
}

/// All subsets of sizes `1..=q` in (size, lexicographic) order. Only used
/// when the subset space is small enough to enumerate.
fn enumerate_all_sets(n: usize, q: u32) -> Vec<Vec<StudentId>> {
    let mut out = Vec::new();
    let mut current: Vec<StudentId> = Vec::new();
    fn go(
        n: usize,
        size: usize,
        start: usize,
        current: &mut Vec<StudentId>,
        out: &mut Vec<Vec<StudentId>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(StudentId(i as u32));
            go(n, size, i + 1, current, out);
            current.pop();
        }
    }
    for size in 1..=(q as usize).min(n) {
        go(n, size, 0, &mut current, &mut out);
    }
    out
}

fn draw_set(
    rng: &mut ChaCha12Rng,
    size: usize,
    matching_pool: &[StudentId],
    n: usize,
    bias: f64,
) -> Vec<StudentId> {
    let mut members: Vec<StudentId> = Vec::with_capacity(size);
    let mut stalls = 0;
    while members.len() < size {
        let pick = if !matching_pool.is_empty() && rng.random_bool(bias) {
            matching_pool[rng.random_range(0..matching_pool.len())]
        } else {
            StudentId(rng.random_range(0..n as u32))
        };
        if !members.contains(&pick) {
            members.push(pick);
        } else {
            stalls += 1;
            if stalls > 64 {
                // the biased pool is nearly exhausted; finish uniformly
                let mut rest: Vec<StudentId> = (0..n as u32)
                    .map(StudentId)
                    .filter(|s| !members.contains(s))
                    .collect();
                while members.len() < size {
                    let i = rng.random_range(0..rest.len());
                    members.push(rest.swap_remove(i));
                }
            }
        }
    }
    members.sort_unstable();
    members
}

/// Generates a synthetic instance from the config. Deterministic in the
/// seed; the result always passes instance validation.
pub fn generate(config: &MarketConfig) -> Result<Instance> {
    config.check()?;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let n = config.n_students;
    let m = config.m_colleges;

    // college frames first: student preference blocks depend on them
    let specializations: Vec<String> = (0..m)
        .map(|_| config.backgrounds[rng.random_range(0..config.backgrounds.len())].clone())
        .collect();
    let quotas: Vec<u32> = (0..m)
        .map(|_| rng.random_range(1..=config.max_quota))
        .collect();

    let student_backgrounds: Vec<String> = (0..n)
        .map(|_| config.backgrounds[rng.random_range(0..config.backgrounds.len())].clone())
        .collect();

    let students: Vec<Student> = (0..n)
        .map(|i| {
            let background = student_backgrounds[i].clone();
            let mut matching: Vec<CollegeId> = (0..m as u32)
                .map(CollegeId)
                .filter(|c| specializations[c.index()] == background)
                .collect();
            let mut rest: Vec<CollegeId> = (0..m as u32)
                .map(CollegeId)
                .filter(|c| specializations[c.index()] != background)
                .collect();
            matching.shuffle(&mut rng);
            rest.shuffle(&mut rng);
            let mut prefs = matching;
            prefs.append(&mut rest);
            prefs.truncate(config.pref_list_truncation.unwrap_or(m));
            Student {
                id: StudentId(i as u32),
                background,
                prefs,
            }
        })
        .collect();

    let colleges: Vec<College> = (0..m)
        .map(|j| {
            let quota = quotas[j];
            let specialization = specializations[j].clone();
            let matching_pool: Vec<StudentId> = (0..n as u32)
                .map(StudentId)
                .filter(|s| student_backgrounds[s.index()] == specialization)
                .collect();
            let available = distinct_sets_available(n, quota);
            let wanted = (config.sets_per_college as u128).min(available) as usize;
            let mut sets: Vec<Vec<StudentId>> = Vec::with_capacity(wanted);
            if available <= 4 * config.sets_per_college as u128 {
                // small subset space: enumerate, shuffle, take
                let mut all = enumerate_all_sets(n, quota);
                all.shuffle(&mut rng);
                all.truncate(wanted);
                sets = all;
            } else {
                // each flagship set is followed by its shrinking fallbacks
                // at worse ranks, the shape the preference examples take:
                // a college wants its dream cohort first and partial
                // versions of it after
                let mut attempts = 0;
                while sets.len() < wanted && attempts < 200 * wanted {
                    attempts += 1;
                    let size = rng.random_range(1..=(quota as usize).min(n));
                    let flagship = draw_set(
                        &mut rng,
                        size,
                        &matching_pool,
                        n,
                        config.specialization_bias,
                    );
                    if sets.contains(&flagship) {
                        continue;
                    }
                    sets.push(flagship.clone());
                    let mut fallback = flagship;
                    while fallback.len() > 1 && sets.len() < wanted {
                        fallback.remove(rng.random_range(0..fallback.len()));
                        if sets.contains(&fallback) {
                            break;
                        }
                        sets.push(fallback.clone());
                    }
                }
            }
            College {
                id: CollegeId(j as u32),
                quota,
                lambda: config.lambda,
                specialization,
                ranked_sets: sets,
            }
        })
        .collect();

    let inst = Instance::new(students, colleges);
    debug_assert!(crate::model::validate_instance(&inst).is_empty());
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;

    #[test]
    fn generated_counts_match_the_config() {
        let inst = generate(&MarketConfig::new(10, 2, 1)).unwrap();
        assert_eq!(inst.n_students(), 10);
        assert_eq!(inst.n_colleges(), 2);
    }

    #[test]
    fn equal_seeds_give_equal_instances() {
        let config = MarketConfig::new(30, 4, 99);
        assert_eq!(generate(&config).unwrap(), generate(&config).unwrap());
    }

    #[test]
    fn different_seeds_give_different_instances() {
        let a = generate(&MarketConfig::new(30, 4, 1)).unwrap();
        let b = generate(&MarketConfig::new(30, 4, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn generated_instances_validate_cleanly() {
        for seed in 0..25 {
            let mut config = MarketConfig::new(20, 3, seed);
            config.lambda = [0.0, 0.3, 1.0, 2.0][seed as usize % 4];
            let inst = generate(&config).unwrap();
            assert!(validate_instance(&inst).is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn ranked_sets_are_duplicate_free() {
        for seed in 0..10 {
            let inst = generate(&MarketConfig::new(12, 3, seed)).unwrap();
            for college in inst.colleges() {
                for (i, a) in college.ranked_sets.iter().enumerate() {
                    for b in &college.ranked_sets[i + 1..] {
                        assert_ne!(a, b, "college {} seed {seed}", college.id);
                    }
                }
            }
        }
    }

    #[test]
    fn matching_colleges_always_precede_the_rest() {
        for seed in 0..10 {
            let inst = generate(&MarketConfig::new(25, 5, seed)).unwrap();
            for student in inst.students() {
                let mut seen_non_matching = false;
                for c in &student.prefs {
                    let matches = inst.college(*c).specialization == student.background;
                    if matches {
                        assert!(
                            !seen_non_matching,
                            "matching college after a non-matching one"
                        );
                    } else {
                        seen_non_matching = true;
                    }
                }
            }
        }
    }

    #[test]
    fn single_background_markets_rank_every_college() {
        let mut config = MarketConfig::new(8, 3, 5);
        config.backgrounds = vec!["only".into()];
        let inst = generate(&config).unwrap();
        for student in inst.students() {
            assert_eq!(student.prefs.len(), 3);
        }
    }

    #[test]
    fn truncation_caps_preference_lists() {
        let mut config = MarketConfig::new(8, 5, 5);
        config.pref_list_truncation = Some(2);
        let inst = generate(&config).unwrap();
        assert!(inst.students().iter().all(|s| s.prefs.len() <= 2));
    }

    #[test]
    fn requested_sets_clamp_to_the_distinct_space() {
        // two students, quota 1: only two distinct sets exist
        let mut config = MarketConfig::new(2, 1, 3);
        config.max_quota = 1;
        config.sets_per_college = 25;
        let inst = generate(&config).unwrap();
        assert_eq!(inst.colleges()[0].ranked_sets.len(), 2);
    }

    #[test]
    fn zero_sized_configs_are_rejected() {
        assert!(generate(&MarketConfig::new(0, 2, 1)).is_err());
        assert!(generate(&MarketConfig::new(2, 0, 1)).is_err());
        let mut config = MarketConfig::new(2, 2, 1);
        config.backgrounds.clear();
        assert!(generate(&config).is_err());
    }

    #[test]
    fn subset_counting_matches_enumeration() {
        for (n, q) in [(4, 2u32), (5, 3), (6, 1)] {
            assert_eq!(
                distinct_sets_available(n, q),
                enumerate_all_sets(n, q).len() as u128
            );
        }
    }
}
