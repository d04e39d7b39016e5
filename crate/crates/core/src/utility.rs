//! Utility evaluation for students and colleges.
//!
//! A student values a college at `1/rank` of its position in their
//! preference list, zero when unmatched or unlisted. A college values a set
//! through its ranked list: `1/rank + lambda * diversity` for listed sets,
//! zero for unlisted sets and the empty set. The diversity factor is the
//! share of member pairs with differing backgrounds, defined as 1 for
//! singletons.
//!
//! All utilities are small-denominator rationals in `f64`; comparisons are
//! exact (`>` / `>=`) with no epsilon so tie-breaking is reproducible.

use crate::model::{CollegeId, Instance, Matching, StudentId};

/// Whether two students share the same background label.
pub fn same_background(inst: &Instance, a: StudentId, b: StudentId) -> bool {
    inst.student(a).background == inst.student(b).background
}

/// `1/rank` of `college` in the student's list; 0 for unmatched (`None`) or
/// an unlisted college.
pub fn student_utility(inst: &Instance, student: StudentId, college: Option<CollegeId>) -> f64 {
    match college {
        Some(c) => match inst.pref_rank(student, c) {
            Some(rank) => 1.0 / rank as f64,
            None => 0.0,
        },
        None => 0.0,
    }
}

/// 1-based rank of `set` in the college's list under order-insensitive set
/// equality; `None` when unlisted. The empty set is never listed.
pub fn rank_of_set(inst: &Instance, college: CollegeId, set: &[StudentId]) -> Option<u32> {
    inst.set_rank(college, set)
}

/// Proportion of unordered member pairs with differing backgrounds.
/// Singletons count as maximally diverse.
///
/// Panics on the empty set.
pub fn diversity_factor(inst: &Instance, set: &[StudentId]) -> f64 {
    assert!(!set.is_empty(), "diversity_factor of the empty set");
    let n = set.len();
    if n == 1 {
        return 1.0;
    }
    let mut same = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            if same_background(inst, set[i], set[j]) {
                same += 1;
            }
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    1.0 - same as f64 / pairs
}

/// College utility of holding `set`: 0 when empty or unlisted, otherwise
/// `1/rank + lambda * diversity_factor`.
///
/// Panics when the set exceeds the college's quota or an id is out of range.
pub fn college_utility(inst: &Instance, college: CollegeId, set: &[StudentId]) -> f64 {
    let c = inst.college(college);
    assert!(
        set.len() <= c.quota as usize,
        "set of size {} exceeds quota {} of {college}",
        set.len(),
        c.quota
    );
    match rank_of_set(inst, college, set) {
        Some(rank) => 1.0 / rank as f64 + c.lambda * diversity_factor(inst, set),
        None => 0.0,
    }
}

/// Utility delta for `college` from adding `student` to `base`. May be
/// negative when the extended set falls off the ranked list.
///
/// Panics when `student` is already in `base` or the extended set would
/// exceed the quota.
pub fn marginal_contribution(
    inst: &Instance,
    college: CollegeId,
    base: &[StudentId],
    student: StudentId,
) -> f64 {
    assert!(!base.contains(&student), "{student} is already a member");
    let mut extended = base.to_vec();
    extended.push(student);
    college_utility(inst, college, &extended) - college_utility(inst, college, base)
}

/// Current utility of `college` under `m`.
pub fn college_utility_of(inst: &Instance, m: &Matching, college: CollegeId) -> f64 {
    college_utility(inst, college, m.assigned(college))
}

/// The lowest-utility college (ties to the lowest id) and its value.
pub fn min_utility(inst: &Instance, m: &Matching) -> (CollegeId, f64) {
    let mut best = (CollegeId(0), f64::INFINITY);
    for c in inst.college_ids() {
        let u = college_utility_of(inst, m, c);
        if u < best.1 {
            best = (c, u);
        }
    }
    best
}

/// Arithmetic mean of college utilities under `m`.
pub fn avg_utility(inst: &Instance, m: &Matching) -> f64 {
    let total: f64 = inst
        .college_ids()
        .map(|c| college_utility_of(inst, m, c))
        .sum();
    total / inst.n_colleges() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{College, Instance, Matching, Student};
    use proptest::prelude::*;

    fn s(i: u32) -> StudentId {
        StudentId(i)
    }

    fn c(i: u32) -> CollegeId {
        CollegeId(i)
    }

    /// n students with the given backgrounds, one college with quota n and
    /// the given ranked sets.
    fn single_college(backgrounds: &[&str], lambda: f64, ranked: &[&[u32]]) -> Instance {
        let students = backgrounds
            .iter()
            .enumerate()
            .map(|(i, b)| Student {
                id: s(i as u32),
                background: b.to_string(),
                prefs: vec![c(0)],
            })
            .collect();
        let colleges = vec![College {
            id: c(0),
            quota: backgrounds.len() as u32,
            lambda,
            specialization: "a".into(),
            ranked_sets: ranked
                .iter()
                .map(|set| set.iter().map(|&i| s(i)).collect())
                .collect(),
        }];
        Instance::new(students, colleges)
    }

    #[test]
    fn student_utility_is_inverse_rank() {
        let inst = fixtures::a1_counterexample();
        // student 0 lists college 1 first, college 0 second
        assert_eq!(student_utility(&inst, s(0), Some(c(0))), 0.5);
        assert_eq!(student_utility(&inst, s(0), Some(c(1))), 1.0);
        assert_eq!(student_utility(&inst, s(0), None), 0.0);
    }

    #[test]
    fn rank_lookup_is_order_insensitive() {
        let inst = fixtures::a1_counterexample();
        assert_eq!(rank_of_set(&inst, c(0), &[s(0), s(2)]), Some(3));
        assert_eq!(rank_of_set(&inst, c(0), &[s(2), s(0)]), Some(3));
        assert_eq!(rank_of_set(&inst, c(0), &[s(0), s(3)]), None);
        assert_eq!(rank_of_set(&inst, c(0), &[]), None);
    }

    #[test]
    fn diversity_of_pairs() {
        let inst = single_college(&["a", "a", "b"], 0.0, &[]);
        assert_eq!(diversity_factor(&inst, &[s(0), s(1)]), 0.0);
        assert_eq!(diversity_factor(&inst, &[s(0), s(2)]), 1.0);
        assert_eq!(diversity_factor(&inst, &[s(0)]), 1.0);
    }

    #[test]
    fn diversity_of_mixed_triple() {
        // backgrounds (a, a, b): one similar pair out of three
        let inst = single_college(&["a", "a", "b"], 0.0, &[]);
        let d = diversity_factor(&inst, &[s(0), s(1), s(2)]);
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    #[should_panic(expected = "empty set")]
    fn diversity_rejects_empty_set() {
        let inst = single_college(&["a"], 0.0, &[]);
        diversity_factor(&inst, &[]);
    }

    #[test]
    fn college_utility_combines_rank_and_diversity() {
        // rank-2 pair with identical backgrounds and lambda = 1
        let inst = single_college(&["a", "a", "b"], 1.0, &[&[0, 2], &[0, 1]]);
        assert_eq!(college_utility(&inst, c(0), &[s(0), s(1)]), 0.5);
        // rank-1 pair with differing backgrounds gains the full bonus
        assert_eq!(college_utility(&inst, c(0), &[s(0), s(2)]), 2.0);
    }

    #[test]
    fn diversity_does_not_rescue_unranked_sets() {
        let inst = single_college(&["a", "b", "c"], 5.0, &[&[0, 1]]);
        assert_eq!(college_utility(&inst, c(0), &[s(1), s(2)]), 0.0);
        assert_eq!(college_utility(&inst, c(0), &[]), 0.0);
    }

    #[test]
    fn a1_top_set_has_unit_utility() {
        let inst = fixtures::a1_counterexample();
        assert_eq!(college_utility(&inst, c(0), &[s(1), s(3)]), 1.0);
    }

    #[test]
    fn marginal_of_first_ranked_singleton() {
        let inst = single_college(&["a", "b"], 0.0, &[&[0]]);
        assert_eq!(marginal_contribution(&inst, c(0), &[], s(0)), 1.0);
    }

    #[test]
    fn marginal_is_negative_when_addition_unranks_the_set() {
        // base {0} is ranked 2nd with diversity 1; adding 1 leaves the list
        let inst = single_college(&["a", "b"], 0.5, &[&[1], &[0]]);
        let m = marginal_contribution(&inst, c(0), &[s(0)], s(1));
        assert_eq!(m, -(0.5 + 0.5 * 1.0));
    }

    #[test]
    fn a1_marginal_of_completing_the_top_pair() {
        let inst = fixtures::a1_counterexample();
        // {1} is unlisted for college 0, {1,3} is its top set
        assert_eq!(marginal_contribution(&inst, c(0), &[s(1)], s(3)), 1.0);
    }

    #[test]
    fn min_and_avg_on_empty_matching() {
        let inst = fixtures::a1_counterexample();
        let m = Matching::empty(&inst);
        assert_eq!(min_utility(&inst, &m), (c(0), 0.0));
        assert_eq!(avg_utility(&inst, &m), 0.0);
    }

    #[test]
    fn min_equals_avg_for_single_college() {
        let inst = single_college(&["a", "b"], 0.0, &[&[0, 1]]);
        let mut m = Matching::empty(&inst);
        m.move_student(&inst, s(0), Some(c(0))).unwrap();
        m.move_student(&inst, s(1), Some(c(0))).unwrap();
        assert_eq!(min_utility(&inst, &m).1, avg_utility(&inst, &m));
        assert_eq!(avg_utility(&inst, &m), 1.0);
    }

    #[test]
    fn a2_min_and_avg_mid_trace() {
        let inst = fixtures::a2_cycle();
        let mut m = Matching::empty(&inst);
        m.move_student(&inst, s(1), Some(c(0))).unwrap();
        m.move_student(&inst, s(4), Some(c(0))).unwrap();
        m.move_student(&inst, s(0), Some(c(1))).unwrap();
        // college 0 holds its top set, college 1 holds {0} at rank 6
        let (worst, min) = min_utility(&inst, &m);
        assert_eq!(worst, c(1));
        assert_eq!(min, 1.0 / 6.0);
        assert_eq!(avg_utility(&inst, &m), (1.0 + 1.0 / 6.0) / 2.0);
    }

    /// Every subset of a small instance: utility is zero exactly for the
    /// empty or unlisted sets.
    #[test]
    fn zero_utility_iff_empty_or_unranked() {
        let inst = single_college(
            &["a", "b", "a", "c", "b", "a"],
            0.7,
            &[&[0, 1], &[2], &[1, 3, 4], &[0, 2, 4], &[5]],
        );
        let n = inst.n_students();
        for mask in 0u32..(1 << n) {
            let set: Vec<StudentId> = (0..n as u32)
                .filter(|i| mask & (1 << i) != 0)
                .map(s)
                .collect();
            let u = college_utility(&inst, c(0), &set);
            let ranked = rank_of_set(&inst, c(0), &set).is_some();
            assert_eq!(u == 0.0, set.is_empty() || !ranked, "set {set:?}");
        }
    }

    /// College utility stays within [0, 1 + lambda] on every subset.
    #[test]
    fn college_utility_is_bounded() {
        for lambda in [0.0, 0.3, 1.0, 2.0] {
            let inst = single_college(
                &["a", "b", "a", "c"],
                lambda,
                &[&[0], &[0, 1], &[1, 2, 3], &[2], &[0, 3]],
            );
            let n = inst.n_students();
            for mask in 0u32..(1 << n) {
                let set: Vec<StudentId> = (0..n as u32)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(s)
                    .collect();
                let u = college_utility(&inst, c(0), &set);
                assert!(
                    (0.0..=1.0 + lambda).contains(&u),
                    "lambda {lambda}, set {set:?}, u {u}"
                );
            }
        }
    }

    /// With lambda = 0, comparisons coincide with rank order.
    #[test]
    fn lambda_zero_reduces_to_rank_order() {
        for inst in [fixtures::a1_counterexample(), fixtures::a2_cycle()] {
            for college in inst.college_ids() {
                let sets = inst.college(college).ranked_sets.clone();
                for (i, a) in sets.iter().enumerate() {
                    for (j, b) in sets.iter().enumerate() {
                        let ua = college_utility(&inst, college, a);
                        let ub = college_utility(&inst, college, b);
                        assert_eq!(ua > ub, i < j, "{college} sets {i} vs {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn promoting_a_set_one_rank_raises_its_base_contribution() {
        let base = single_college(&["a", "b", "c"], 0.0, &[&[0], &[1], &[2]]);
        let promoted = single_college(&["a", "b", "c"], 0.0, &[&[0], &[2], &[1]]);
        assert!(college_utility(&promoted, c(0), &[s(2)]) > college_utility(&base, c(0), &[s(2)]));
    }

    proptest! {
        #[test]
        fn diversity_stays_in_unit_interval(labels in prop::collection::vec(0u8..4, 1..8)) {
            let backgrounds: Vec<String> = labels.iter().map(|b| format!("b{b}")).collect();
            let refs: Vec<&str> = backgrounds.iter().map(String::as_str).collect();
            let inst = single_college(&refs, 0.0, &[]);
            let set: Vec<StudentId> = (0..labels.len() as u32).map(s).collect();
            let d = diversity_factor(&inst, &set);
            prop_assert!((0.0..=1.0).contains(&d));
        }

        #[test]
        fn student_utility_is_in_unit_interval(rank in 1u32..50) {
            let prefs: Vec<CollegeId> = (0..rank).map(c).collect();
            let students = vec![Student { id: s(0), background: "a".into(), prefs }];
            let colleges = (0..rank)
                .map(|i| College { id: c(i), quota: 1, lambda: 0.0, specialization: "a".into(), ranked_sets: vec![] })
                .collect();
            let inst = Instance::new(students, colleges);
            let u = student_utility(&inst, s(0), Some(c(rank - 1)));
            prop_assert!(u > 0.0 && u <= 1.0);
        }
    }
}
