//! Many-to-one matching where colleges rank *sets* of students rather than
//! individuals.
//!
//! The crate provides the problem model ([`model`]), rank/diversity utility
//! evaluation ([`utility`]), blocking-pair dynamics with swap refinement and
//! cycle detection ([`stability`]), max-min fair improvement in deterministic
//! and sampled variants ([`maxmin`]), a seeded synthetic market generator
//! ([`market`]), and an exhaustive small-instance oracle ([`oracle`]).
//!
//! Everything is deterministic: all randomness flows through explicitly
//! seeded generators, and every tie in every algorithm is broken by index
//! order, so a run is a pure function of its inputs.

pub mod error;
pub mod fixtures;
pub mod io;
pub mod market;
pub mod maxmin;
pub mod model;
pub mod oracle;
pub mod stability;
pub mod utility;

pub use error::Error;
pub use model::{College, CollegeId, Instance, Matching, Student, StudentId, Violation};
