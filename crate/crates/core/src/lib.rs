//! Channel-level correctness measures for pairwise-similarity data cleaning.
//!
//! A multi-channel measurement is cleaned by classifying every pair of
//! channels as similar or dissimilar and then judging each channel from
//! the pair predictions it takes part in. This crate maps the pair-level
//! recalls of such a classifier (`Q2` for similar pairs, `Q3` for
//! dissimilar pairs) to the probabilities of judging correct and incorrect
//! channels right or wrong, derives four task-oriented measures from them,
//! and ships a Monte Carlo simulator that checks the closed forms.
//!
//! | measure | meaning                      |
//! |---------|------------------------------|
//! | `E1`    | recall of incorrect channels |
//! | `E2`    | precision of incorrect       |
//! | `E3`    | recall of correct channels   |
//! | `E4`    | precision of correct         |

pub mod analysis;
pub mod closed_form;
pub mod error;
pub mod eval;
pub mod judging;
pub mod montecarlo;
pub mod sample_space;
pub mod selection;
pub mod similarity;

pub use analysis::{correlation_report, sweep, CorrelationReport, SweepGrid, SweepRow};
pub use closed_form::{
    outcome_probabilities, preference_measures, ChannelOutcomeProbabilities, Measure, OutcomeCounts, PreferenceMeasures,
};
pub use error::{Error, Result};
pub use eval::{evaluate, EvalReport};
pub use judging::{channel_confusion, judge, ChannelVerdicts, JudgingRule, PairPredictionSet, Verdict};
pub use montecarlo::{simulate, simulate_with_workers, SimulationConfig, SimulationEstimate};
pub use sample_space::{cohort_of, enumerate_pairs, ChannelLabeling, CohortSpec, Label, PairSample, PairTag};
pub use selection::{select, Candidate, RankedResult};
pub use similarity::{confusion_from_predictions, recalls_from_confusion, OperatingPoint, SimilarityConfusion};
