//! Ranking candidate classifiers by a preference measure.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::closed_form::{preference_measures, Measure};
use crate::error::{Error, Result};
use crate::sample_space::CohortSpec;
use crate::similarity::OperatingPoint;

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub id: String,
    pub op: OperatingPoint,
}

impl Candidate {
    pub fn new(id: impl Into<String>, q2: f64, q3: f64) -> Result<Self> {
        Ok(Self {
            id: id.into(),
            op: OperatingPoint::defined(q2, q3)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub id: String,
    pub op: OperatingPoint,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult {
    pub measure: Measure,
    pub ranking: Vec<RankedEntry>,
}

impl RankedResult {
    pub fn chosen(&self) -> &str {
        &self.ranking[0].id
    }
}

/// Orders entries best first: defined values descending, then higher Q3,
/// higher Q2, and finally ascending id. Undefined values sort last.
fn rank_order(x: &RankedEntry, y: &RankedEntry) -> Ordering {
    let by_value = match (x.value, y.value) {
        (Some(a), Some(b)) => b.total_cmp(&a),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    };
    let desc = |a: Option<f64>, b: Option<f64>| {
        b.unwrap_or(f64::NEG_INFINITY)
            .total_cmp(&a.unwrap_or(f64::NEG_INFINITY))
    };
    by_value
        .then_with(|| desc(x.op.q3, y.op.q3))
        .then_with(|| desc(x.op.q2, y.op.q2))
        .then_with(|| x.id.cmp(&y.id))
}

/// Ranks `candidates` by `measure` for `cohort`, closed-form evaluated.
pub fn select(candidates: &[Candidate], cohort: &CohortSpec, measure: Measure) -> Result<RankedResult> {
    select_by(candidates, cohort, measure, |v| v)
}

/// [`select`] with `transform` applied to every measure value first.
pub fn select_by<F>(
    candidates: &[Candidate],
    cohort: &CohortSpec,
    measure: Measure,
    transform: F,
) -> Result<RankedResult>
where
    F: Fn(f64) -> f64,
{
    if candidates.is_empty() {
        return Err(Error::Parameter("no candidates to select from".into()));
    }
    let mut ids = HashSet::new();
    for c in candidates {
        if c.id.is_empty() {
            return Err(Error::Parameter("candidate id must be nonempty".into()));
        }
        if !ids.insert(c.id.as_str()) {
            return Err(Error::Parameter(format!("duplicate candidate id '{}'", c.id)));
        }
    }
    let mut ranking: Vec<RankedEntry> = candidates
        .iter()
        .map(|c| RankedEntry {
            id: c.id.clone(),
            op: c.op,
            value: preference_measures(cohort, &c.op)
                .ok()
                .and_then(|m| m.get(measure))
                .map(&transform),
        })
        .collect();
    if ranking.iter().all(|e| e.value.is_none()) {
        return Err(Error::Selection(format!(
            "{measure} is undefined for every candidate on a cohort of {} channels with {} correct",
            cohort.channels(),
            cohort.correct()
        )));
    }
    ranking.sort_by(rank_order);
    Ok(RankedResult { measure, ranking })
}
