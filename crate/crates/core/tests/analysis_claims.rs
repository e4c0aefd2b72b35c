//! Rank-correlation claims about the measures on the default 6x6 grid.
//!
//! Reference rho values were computed independently (scipy.stats.spearmanr
//! over a separate implementation of the measures) and frozen here.

use pairclean_core::analysis::{correlation_report, measure_correlation, sweep, DEFAULT_STRONG_THRESHOLD};
use pairclean_core::{CohortSpec, Measure, SweepGrid};

fn rho(channels: usize, correct: usize, measure: Measure) -> f64 {
    let grid = SweepGrid::with_default_axes(CohortSpec::new(channels, correct).unwrap());
    measure_correlation(&sweep(&grid), measure).unwrap().unwrap()
}

const RHO_E4_50_10: f64 = 0.9893267801847266;
const RHO_E4_10_2: f64 = 0.9870538225248726;
const RHO_E4_50_40: f64 = 0.9950762871703867;

#[test]
fn frozen_e4_correlations() {
    assert!((rho(50, 10, Measure::E4) - RHO_E4_50_10).abs() < 1e-12);
    assert!((rho(10, 2, Measure::E4) - RHO_E4_10_2).abs() < 1e-12);
    assert!((rho(50, 40, Measure::E4) - RHO_E4_50_40).abs() < 1e-12);
}

#[test]
fn e1_rank_correlation_is_exactly_one() {
    for (channels, correct) in [(4, 3), (10, 2), (50, 10), (50, 40)] {
        assert_eq!(rho(channels, correct, Measure::E1), 1.0);
    }
}

#[test]
fn more_channels_strengthen_e4() {
    // Q1 = 0.19 realised as n = round(0.19 N)
    let big = CohortSpec::from_proportion(50, 0.19).unwrap();
    let small = CohortSpec::from_proportion(10, 0.19).unwrap();
    assert_eq!((big.correct(), small.correct()), (10, 2));
    assert!(rho(50, 10, Measure::E4) > rho(10, 2, Measure::E4));
}

/// A lower proportion of correct channels does not strengthen the E4-Q3
/// association on this grid: rho at Q1 = 0.2 is below rho at Q1 = 0.8.
#[test]
fn lower_correct_fraction_does_not_strengthen_e4() {
    let low_q1 = rho(50, 10, Measure::E4);
    let high_q1 = rho(50, 40, Measure::E4);
    println!("rho(E4, q3): N=50 n=10 -> {low_q1:.6}, N=50 n=40 -> {high_q1:.6}");
    assert!(low_q1 < high_q1);
}

#[test]
fn e4_is_strong_positive_and_report_is_deterministic() {
    let grid = SweepGrid::with_default_axes(CohortSpec::new(50, 10).unwrap());
    let rows = sweep(&grid);
    let a = correlation_report(&rows, DEFAULT_STRONG_THRESHOLD).unwrap();
    let b = correlation_report(&sweep(&grid), DEFAULT_STRONG_THRESHOLD).unwrap();
    assert_eq!(a, b);
    assert!(a.get(Measure::E1).strong_positive);
    assert!(a.get(Measure::E4).strong_positive);
    assert!(!a.get(Measure::E3).strong_positive);
    assert!(a.get(Measure::E3).rho.unwrap() < 0.0);
}
