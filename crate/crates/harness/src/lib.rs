//! Experiment harness: baselines, per-iteration fairness/efficiency
//! curves, lambda sweeps, scaling tables, and golden-trace verification,
//! all emitting reproducible CSV.

pub mod baseline;
pub mod experiments;
pub mod golden;
pub mod trace;
