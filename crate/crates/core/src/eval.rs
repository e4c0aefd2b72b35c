//! End-to-end evaluation of one labelled prediction set.

use crate::closed_form::{preference_measures, ChannelOutcomeProbabilities, PreferenceMeasures};
use crate::error::{Error, Result};
use crate::judging::{channel_confusion, judge, ChannelVerdicts, JudgingRule, PairPredictionSet};
use crate::sample_space::{cohort_of, enumerate_pairs, ChannelLabeling, CohortSpec};
use crate::similarity::{confusion_from_predictions, recalls_from_confusion, OperatingPoint, SimilarityConfusion};

/// Empirical pair- and channel-level performance next to the closed-form
/// prediction at the observed recalls.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub cohort: CohortSpec,
    pub confusion: SimilarityConfusion,
    pub recalls: OperatingPoint,
    pub verdicts: ChannelVerdicts,
    pub channel_confusion: ChannelOutcomeProbabilities,
    pub measures: PreferenceMeasures,
    /// `None` when the observed recalls leave a required one undefined.
    pub closed_form: Option<(ChannelOutcomeProbabilities, PreferenceMeasures)>,
}

pub fn evaluate(predictions: &PairPredictionSet, truth: &ChannelLabeling, rule: JudgingRule) -> Result<EvalReport> {
    if predictions.channels() != truth.len() {
        return Err(Error::Structural(format!(
            "predictions cover {} channels but truth labels {}",
            predictions.channels(),
            truth.len()
        )));
    }
    let cohort = cohort_of(truth)?;
    let confusion = confusion_from_predictions(&enumerate_pairs(truth)?, predictions)?;
    let recalls = recalls_from_confusion(&confusion);
    let verdicts = judge(predictions, rule);
    let channel = channel_confusion(&verdicts, truth)?;
    let closed_form = crate::closed_form::outcome_probabilities(&cohort, &recalls)
        .and_then(|p| Ok((p, preference_measures(&cohort, &recalls)?)))
        .ok();
    Ok(EvalReport {
        cohort,
        confusion,
        recalls,
        verdicts,
        channel_confusion: channel,
        measures: PreferenceMeasures::from_outcomes(&channel),
        closed_form,
    })
}
