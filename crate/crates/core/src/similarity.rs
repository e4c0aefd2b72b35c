//! Pair-level confusion accounting and the recalls `Q2`, `Q3`.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::judging::PairPredictionSet;
use crate::sample_space::{choose2, pair_index, PairSample, PairTag};

/// Pair-level confusion kept as exact counts over all `C(N, 2)` pairs.
///
/// `k1` similar predicted similar, `k2` similar predicted dissimilar,
/// `k3` dissimilar predicted dissimilar, `k4` dissimilar predicted similar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimilarityConfusion {
    pub similar_hit: u64,
    pub similar_miss: u64,
    pub dissimilar_hit: u64,
    pub dissimilar_miss: u64,
}

impl SimilarityConfusion {
    pub fn total(&self) -> u64 {
        self.similar_hit + self.similar_miss + self.dissimilar_hit + self.dissimilar_miss
    }

    fn ratio(&self, count: u64) -> Ratio<u64> {
        Ratio::new(count, self.total().max(1))
    }

    pub fn k1_exact(&self) -> Ratio<u64> {
        self.ratio(self.similar_hit)
    }

    pub fn k2_exact(&self) -> Ratio<u64> {
        self.ratio(self.similar_miss)
    }

    pub fn k3_exact(&self) -> Ratio<u64> {
        self.ratio(self.dissimilar_hit)
    }

    pub fn k4_exact(&self) -> Ratio<u64> {
        self.ratio(self.dissimilar_miss)
    }

    pub fn k1(&self) -> f64 {
        to_f64(self.k1_exact())
    }

    pub fn k2(&self) -> f64 {
        to_f64(self.k2_exact())
    }

    pub fn k3(&self) -> f64 {
        to_f64(self.k3_exact())
    }

    pub fn k4(&self) -> f64 {
        to_f64(self.k4_exact())
    }

    pub fn merge(&mut self, other: &SimilarityConfusion) {
        self.similar_hit += other.similar_hit;
        self.similar_miss += other.similar_miss;
        self.dissimilar_hit += other.dissimilar_hit;
        self.dissimilar_miss += other.dissimilar_miss;
    }
}

pub(crate) fn to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Recalls of a similarity classifier. `None` marks a recall whose class is
/// empty for the cohort at hand.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OperatingPoint {
    /// Recall of similar pairs.
    pub q2: Option<f64>,
    /// Recall of dissimilar pairs.
    pub q3: Option<f64>,
}

impl OperatingPoint {
    pub fn new(q2: Option<f64>, q3: Option<f64>) -> Result<Self> {
        for (name, q) in [("Q2", q2), ("Q3", q3)] {
            if let Some(q) = q {
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::Parameter(format!("{name} must lie in [0, 1], got {q}")));
                }
            }
        }
        Ok(Self { q2, q3 })
    }

    /// Both recalls defined.
    pub fn defined(q2: f64, q3: f64) -> Result<Self> {
        Self::new(Some(q2), Some(q3))
    }
}

/// Counts the confusion of `predictions` against the truth tags of `pairs`.
///
/// `pairs` must cover every pair of the prediction set exactly once, in any order.
pub fn confusion_from_predictions(
    pairs: &[PairSample],
    predictions: &PairPredictionSet,
) -> Result<SimilarityConfusion> {
    let channels = predictions.channels();
    if pairs.len() != choose2(channels) {
        return Err(Error::Structural(format!(
            "{} pair samples do not match {} predicted pairs",
            pairs.len(),
            choose2(channels)
        )));
    }
    let mut seen = vec![false; pairs.len()];
    let mut conf = SimilarityConfusion::default();
    for p in pairs {
        if p.a >= p.b || p.b >= channels {
            return Err(Error::Structural(format!(
                "pair ({},{}) is not a canonical pair of {channels} channels",
                p.a, p.b
            )));
        }
        let idx = pair_index(channels, p.a, p.b);
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::Structural(format!("duplicate pair ({},{})", p.a, p.b)));
        }
        tally(&mut conf, p.tag, predictions.tags()[idx]);
    }
    Ok(conf)
}

#[inline]
pub(crate) fn tally(conf: &mut SimilarityConfusion, truth: PairTag, predicted: PairTag) {
    match (truth, predicted) {
        (PairTag::Similar, PairTag::Similar) => conf.similar_hit += 1,
        (PairTag::Similar, PairTag::Dissimilar) => conf.similar_miss += 1,
        (PairTag::Dissimilar, PairTag::Dissimilar) => conf.dissimilar_hit += 1,
        (PairTag::Dissimilar, PairTag::Similar) => conf.dissimilar_miss += 1,
    }
}

/// `Q2 = k1 / (k1 + k2)`, `Q3 = k3 / (k3 + k4)`; undefined on an empty class.
pub fn recalls_from_confusion(conf: &SimilarityConfusion) -> OperatingPoint {
    let recall = |hit: u64, miss: u64| (hit + miss > 0).then(|| hit as f64 / (hit + miss) as f64);
    OperatingPoint {
        q2: recall(conf.similar_hit, conf.similar_miss),
        q3: recall(conf.dissimilar_hit, conf.dissimilar_miss),
    }
}
