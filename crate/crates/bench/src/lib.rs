//! Shared fixtures for the criterion benchmarks.

use pairclean_core::{CohortSpec, JudgingRule, OperatingPoint, SimulationConfig};

/// Cohort sizes benchmarked, from a small array up to a large one.
pub const CHANNEL_COUNTS: [usize; 4] = [4, 16, 50, 200];

pub fn cohort(channels: usize) -> CohortSpec {
    CohortSpec::from_proportion(channels, 0.8).expect("valid cohort")
}

pub fn reference_op() -> OperatingPoint {
    OperatingPoint::defined(0.8, 0.9).expect("valid recalls")
}

pub fn simulation(channels: usize, trials: u64, rule: JudgingRule) -> SimulationConfig {
    SimulationConfig {
        cohort: cohort(channels),
        op: reference_op(),
        rule,
        trials,
        seed: 42,
    }
}
