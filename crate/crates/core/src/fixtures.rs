//! Two small built-in instances used as golden tests throughout the crate.
//!
//! Both use `lambda = 0` and pairwise-distinct backgrounds, so every college
//! comparison depends only on list rank and the expected traces are exact.
//! The same instances ship as files under `fixtures/` in the repository
//! root; a test keeps file and constructor in sync.

use crate::model::{College, CollegeId, Instance, Student, StudentId};

fn student(id: u32, background: &str, prefs: &[u32]) -> Student {
    Student {
        id: StudentId(id),
        background: background.to_string(),
        prefs: prefs.iter().map(|&c| CollegeId(c)).collect(),
    }
}

fn college(id: u32, quota: u32, specialization: &str, ranked_sets: &[&[u32]]) -> College {
    College {
        id: CollegeId(id),
        quota,
        lambda: 0.0,
        specialization: specialization.to_string(),
        ranked_sets: ranked_sets
            .iter()
            .map(|set| set.iter().map(|&s| StudentId(s)).collect())
            .collect(),
    }
}

/// Two colleges, four students. The propose phase ends unstable; two swap
/// resolutions then reach a stable matching.
pub fn a1_counterexample() -> Instance {
    Instance::new(
        vec![
            student(0, "b0", &[1, 0]),
            student(1, "b1", &[1, 0]),
            student(2, "b2", &[0, 1]),
            student(3, "b3", &[0, 1]),
        ],
        vec![
            college(0, 2, "b0", &[&[1, 3], &[0, 1], &[0, 2], &[2, 3]]),
            college(1, 1, "b1", &[&[3], &[2], &[1], &[0]]),
        ],
    )
}

/// Two colleges, five students. No stable matching exists: swap refinement
/// returns to its starting matching after nine resolutions.
pub fn a2_cycle() -> Instance {
    Instance::new(
        vec![
            student(0, "b0", &[0, 1]),
            student(1, "b1", &[0, 1]),
            student(2, "b2", &[1, 0]),
            student(3, "b3", &[1, 0]),
            student(4, "b4", &[1, 0]),
        ],
        vec![
            college(0, 2, "b0", &[&[1, 4], &[3, 4], &[0, 3], &[0, 1], &[1]]),
            college(
                1,
                2,
                "b1",
                &[&[0, 1], &[1, 2], &[2, 4], &[2, 3], &[0, 2], &[0], &[2]],
            ),
        ],
    )
}
