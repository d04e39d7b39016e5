//! Problem and matching data model.
//!
//! An [`Instance`] is immutable once built: students with background labels
//! and college preference lists, colleges with quotas and ranked lists of
//! admissible student sets. A [`Matching`] is the mutable assignment state
//! every algorithm transforms; it stores both directions plus the unmatched
//! pool, and [`Matching::validate`] enforces their coherence.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense zero-based student index. Total order by index is the tie-break
/// everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StudentId(pub u32);

/// Dense zero-based college index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CollegeId(pub u32);

impl fmt::Display for StudentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Display for CollegeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

impl StudentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl CollegeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A student: categorical background plus an ordered list of acceptable
/// colleges, most preferred first. Colleges absent from the list are
/// unacceptable and no algorithm will ever assign the student to them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Student {
    pub id: StudentId,
    pub background: String,
    pub prefs: Vec<CollegeId>,
}

/// A college: quota, diversity weight, specialization label, and an ordered
/// list of admissible student sets (rank 1 = most preferred).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct College {
    pub id: CollegeId,
    pub quota: u32,
    pub lambda: f64,
    pub specialization: String,
    pub ranked_sets: Vec<Vec<StudentId>>,
}

/// Immutable problem description with precomputed rank lookups.
///
/// Construction normalizes every ranked set to ascending member order, so
/// set equality is order-insensitive from here on.
#[derive(Debug, Clone)]
pub struct Instance {
    students: Vec<Student>,
    colleges: Vec<College>,
    // college index -> (sorted member list -> 1-based rank)
    set_rank: Vec<HashMap<Vec<StudentId>, u32>>,
    // student index -> (college -> 1-based position in prefs)
    pref_rank: Vec<HashMap<CollegeId, u32>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.students == other.students && self.colleges == other.colleges
    }
}

impl Instance {
    /// Builds an instance, sorting each ranked set into canonical member
    /// order and indexing ranks for O(1) lookup. Accepts malformed data;
    /// run [`validate_instance`] before trusting it.
    pub fn new(students: Vec<Student>, mut colleges: Vec<College>) -> Instance {
        for college in &mut colleges {
            for set in &mut college.ranked_sets {
                set.sort_unstable();
            }
        }
        let set_rank = colleges
            .iter()
            .map(|c| {
                let mut index = HashMap::new();
                for (i, set) in c.ranked_sets.iter().enumerate() {
                    // first occurrence wins; duplicates are a validation error
                    index.entry(set.clone()).or_insert(i as u32 + 1);
                }
                index
            })
            .collect();
        let pref_rank = students
            .iter()
            .map(|s| {
                let mut index = HashMap::new();
                for (i, c) in s.prefs.iter().enumerate() {
                    index.entry(*c).or_insert(i as u32 + 1);
                }
                index
            })
            .collect();
        Instance {
            students,
            colleges,
            set_rank,
            pref_rank,
        }
    }

    pub fn students(&self) -> &[Student] {
        &self.students
    }

    pub fn colleges(&self) -> &[College] {
        &self.colleges
    }

    pub fn n_students(&self) -> usize {
        self.students.len()
    }

    pub fn n_colleges(&self) -> usize {
        self.colleges.len()
    }

    /// Panics if the id is out of range.
    pub fn student(&self, id: StudentId) -> &Student {
        &self.students[id.index()]
    }

    /// Panics if the id is out of range.
    pub fn college(&self, id: CollegeId) -> &College {
        &self.colleges[id.index()]
    }

    pub fn student_ids(&self) -> impl Iterator<Item = StudentId> + '_ {
        (0..self.students.len() as u32).map(StudentId)
    }

    pub fn college_ids(&self) -> impl Iterator<Item = CollegeId> + '_ {
        (0..self.colleges.len() as u32).map(CollegeId)
    }

    /// Sum of all quotas.
    pub fn total_capacity(&self) -> u64 {
        self.colleges.iter().map(|c| c.quota as u64).sum()
    }

    /// 1-based rank of `set` (any member order) in `college`'s list, or
    /// `None` when the set is not listed. The empty set is never listed.
    pub fn set_rank(&self, college: CollegeId, set: &[StudentId]) -> Option<u32> {
        let index = &self.set_rank[college.index()];
        if set.is_empty() {
            return None;
        }
        if set.windows(2).all(|w| w[0] < w[1]) {
            return index.get(set).copied();
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        index.get(&sorted).copied()
    }

    /// 1-based position of `college` in `student`'s preference list, or
    /// `None` when the college is unacceptable to the student.
    pub fn pref_rank(&self, student: StudentId, college: CollegeId) -> Option<u32> {
        self.pref_rank[student.index()].get(&college).copied()
    }

    /// Whether `student` lists `college` at all.
    pub fn acceptable(&self, student: StudentId, college: CollegeId) -> bool {
        self.pref_rank(student, college).is_some()
    }
}

/// One invariant violation, with a path into the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn violation(path: impl Into<String>, message: impl Into<String>) -> Violation {
    Violation {
        path: path.into(),
        message: message.into(),
    }
}

/// Checks every structural invariant of an instance and returns all
/// violations found. An instance is well-formed iff the list is empty.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = inst.students.len() as u32;
    let m = inst.colleges.len() as u32;
    if n == 0 {
        out.push(violation("students", "no students"));
    }
    if m == 0 {
        out.push(violation("colleges", "no colleges"));
    }
    for (i, s) in inst.students.iter().enumerate() {
        let path = format!("students[{i}]");
        if s.id.0 != i as u32 {
            out.push(violation(
                &path,
                format!("id {} is not dense (expected {i})", s.id.0),
            ));
        }
        let mut seen = HashSet::new();
        for (j, c) in s.prefs.iter().enumerate() {
            if c.0 >= m {
                out.push(violation(
                    format!("{path}.prefs[{j}]"),
                    format!("unknown college {}", c.0),
                ));
            }
            if !seen.insert(*c) {
                out.push(violation(
                    format!("{path}.prefs[{j}]"),
                    format!("duplicate college {}", c.0),
                ));
            }
        }
    }
    for (i, c) in inst.colleges.iter().enumerate() {
        let path = format!("colleges[{i}]");
        if c.id.0 != i as u32 {
            out.push(violation(
                &path,
                format!("id {} is not dense (expected {i})", c.id.0),
            ));
        }
        if c.quota == 0 {
            out.push(violation(
                format!("{path}.quota"),
                "quota must be at least 1",
            ));
        }
        if !c.lambda.is_finite() || c.lambda < 0.0 {
            out.push(violation(
                format!("{path}.lambda"),
                "lambda must be finite and non-negative",
            ));
        }
        let mut seen_sets: HashSet<&[StudentId]> = HashSet::new();
        for (r, set) in c.ranked_sets.iter().enumerate() {
            let spath = format!("{path}.ranked_sets[{r}]");
            if set.is_empty() {
                out.push(violation(&spath, "set is empty"));
            }
            if set.len() > c.quota as usize {
                out.push(violation(
                    &spath,
                    format!("set exceeds quota ({} > {})", set.len(), c.quota),
                ));
            }
            for id in set {
                if id.0 >= n {
                    out.push(violation(&spath, format!("unknown student {}", id.0)));
                }
            }
            if set.windows(2).any(|w| w[0] == w[1]) {
                out.push(violation(&spath, "duplicate member"));
            }
            if !seen_sets.insert(set.as_slice()) {
                out.push(violation(&spath, "duplicate set"));
            }
        }
    }
    out
}

fn insert_sorted(v: &mut Vec<StudentId>, s: StudentId) {
    match v.binary_search(&s) {
        Ok(_) => {}
        Err(pos) => v.insert(pos, s),
    }
}

fn remove_sorted(v: &mut Vec<StudentId>, s: StudentId) -> bool {
    match v.binary_search(&s) {
        Ok(pos) => {
            v.remove(pos);
            true
        }
        Err(_) => false,
    }
}

/// Bidirectional student/college assignment plus the unmatched pool.
///
/// Rosters and the unmatched pool are kept in ascending id order, so two
/// equal matchings compare equal regardless of how they were built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    of_student: Vec<Option<CollegeId>>,
    of_college: Vec<Vec<StudentId>>,
    unmatched: Vec<StudentId>,
}

impl Matching {
    /// The all-unmatched matching: every college empty, every student in the
    /// pool.
    pub fn empty(inst: &Instance) -> Matching {
        Matching {
            of_student: vec![None; inst.n_students()],
            of_college: vec![Vec::new(); inst.n_colleges()],
            unmatched: inst.student_ids().collect(),
        }
    }

    /// Builds a matching directly from a per-student assignment vector.
    /// The caller guarantees quota feasibility.
    pub(crate) fn from_assignment(inst: &Instance, assignment: &[Option<CollegeId>]) -> Matching {
        debug_assert_eq!(assignment.len(), inst.n_students());
        let mut of_college = vec![Vec::new(); inst.n_colleges()];
        let mut unmatched = Vec::new();
        for (i, target) in assignment.iter().enumerate() {
            match target {
                Some(c) => of_college[c.index()].push(StudentId(i as u32)),
                None => unmatched.push(StudentId(i as u32)),
            }
        }
        let m = Matching {
            of_student: assignment.to_vec(),
            of_college,
            unmatched,
        };
        debug_assert!(m.is_feasible(inst));
        m
    }

    pub fn college_of(&self, s: StudentId) -> Option<CollegeId> {
        self.of_student[s.index()]
    }

    /// Roster of `c`, ascending by student id.
    pub fn assigned(&self, c: CollegeId) -> &[StudentId] {
        &self.of_college[c.index()]
    }

    /// Unmatched students, ascending by id.
    pub fn unmatched(&self) -> &[StudentId] {
        &self.unmatched
    }

    pub fn is_unmatched(&self, s: StudentId) -> bool {
        self.of_student[s.index()].is_none()
    }

    /// Moves `s` to `target` (or to the unmatched pool for `None`), keeping
    /// all four invariants. Fails without touching anything when the target
    /// is full or an id is out of range.
    pub fn move_student(
        &mut self,
        inst: &Instance,
        s: StudentId,
        target: Option<CollegeId>,
    ) -> Result<()> {
        if s.index() >= self.of_student.len() {
            return Err(Error::UnknownStudent(s.0));
        }
        if let Some(c) = target {
            if c.index() >= self.of_college.len() {
                return Err(Error::UnknownCollege(c.0));
            }
            let quota = inst.college(c).quota;
            if self.of_student[s.index()] != Some(c)
                && self.of_college[c.index()].len() >= quota as usize
            {
                return Err(Error::CapacityExceeded {
                    college: c.0,
                    quota,
                });
            }
        }
        match self.of_student[s.index()] {
            Some(old) if target == Some(old) => return Ok(()),
            Some(old) => {
                remove_sorted(&mut self.of_college[old.index()], s);
            }
            None => {
                remove_sorted(&mut self.unmatched, s);
            }
        }
        match target {
            Some(c) => insert_sorted(&mut self.of_college[c.index()], s),
            None => insert_sorted(&mut self.unmatched, s),
        }
        self.of_student[s.index()] = target;
        Ok(())
    }

    /// Deterministic, injective encoding of the assignment: rosters in
    /// college id order with members ascending, then the unmatched pool.
    /// Equal matchings produce byte-identical keys on every platform.
    pub fn canonical_key(&self) -> String {
        let mut key = String::new();
        for roster in &self.of_college {
            for (i, s) in roster.iter().enumerate() {
                if i > 0 {
                    key.push(',');
                }
                key.push_str(&s.0.to_string());
            }
            key.push('|');
        }
        key.push_str("u:");
        for (i, s) in self.unmatched.iter().enumerate() {
            if i > 0 {
                key.push(',');
            }
            key.push_str(&s.0.to_string());
        }
        key
    }

    /// Checks the four matching invariants against `inst`.
    pub fn validate(&self, inst: &Instance) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.of_student.len() != inst.n_students() || self.of_college.len() != inst.n_colleges()
        {
            out.push(violation("matching", "shape does not match instance"));
            return out;
        }
        for (ci, roster) in self.of_college.iter().enumerate() {
            let path = format!("of_college[{ci}]");
            if roster.len() > inst.colleges()[ci].quota as usize {
                out.push(violation(
                    &path,
                    format!(
                        "roster size {} exceeds quota {}",
                        roster.len(),
                        inst.colleges()[ci].quota
                    ),
                ));
            }
            if roster.windows(2).any(|w| w[0] >= w[1]) {
                out.push(violation(&path, "roster not sorted or has duplicates"));
            }
            for s in roster {
                if s.index() >= self.of_student.len() {
                    out.push(violation(&path, format!("unknown student {}", s.0)));
                } else if self.of_student[s.index()] != Some(CollegeId(ci as u32)) {
                    out.push(violation(
                        &path,
                        format!("student {} does not point back", s.0),
                    ));
                }
            }
        }
        for (si, assignment) in self.of_student.iter().enumerate() {
            let path = format!("of_student[{si}]");
            match assignment {
                Some(c) => {
                    if c.index() >= self.of_college.len() {
                        out.push(violation(&path, format!("unknown college {}", c.0)));
                    } else if self.of_college[c.index()]
                        .binary_search(&StudentId(si as u32))
                        .is_err()
                    {
                        out.push(violation(
                            &path,
                            format!("college {} does not list the student", c.0),
                        ));
                    }
                }
                None => {
                    if self.unmatched.binary_search(&StudentId(si as u32)).is_err() {
                        out.push(violation(&path, "unmatched student missing from pool"));
                    }
                }
            }
        }
        let assigned: usize = self.of_college.iter().map(Vec::len).sum();
        if assigned + self.unmatched.len() != self.of_student.len() {
            out.push(violation(
                "unmatched",
                "pool is not the complement of assigned students",
            ));
        }
        if self.unmatched.windows(2).any(|w| w[0] >= w[1]) {
            out.push(violation("unmatched", "pool not sorted or has duplicates"));
        }
        out
    }

    pub fn is_feasible(&self, inst: &Instance) -> bool {
        self.validate(inst).is_empty()
    }
}

/// FNV-1a 64-bit digest, used to shorten canonical keys in trace output.
/// Fixed algorithm, stable across platforms and versions.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
