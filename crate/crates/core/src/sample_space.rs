//! Pairwise sample space of a multi-channel measurement.
//!
//! Every unordered pair of distinct channels forms one sample. A pair is
//! tagged [`PairTag::Similar`] exactly when both of its channels carry
//! correct data; every other pair is [`PairTag::Dissimilar`].

use std::fmt;

use crate::error::{Error, Result};

/// Ground-truth status of one channel's data sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Correct,
    Incorrect,
}

/// Similarity tag of a pair, used both for truth and for predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairTag {
    Similar,
    Dissimilar,
}

impl PairTag {
    pub fn flipped(self) -> Self {
        match self {
            PairTag::Similar => PairTag::Dissimilar,
            PairTag::Dissimilar => PairTag::Similar,
        }
    }
}

impl fmt::Display for PairTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairTag::Similar => "similar",
            PairTag::Dissimilar => "dissimilar",
        })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Correct => "correct",
            Label::Incorrect => "incorrect",
        })
    }
}

/// `C(k, 2)`, with `C(0, 2) = C(1, 2) = 0`.
pub const fn choose2(k: usize) -> usize {
    if k < 2 {
        0
    } else {
        k * (k - 1) / 2
    }
}

/// Position of the pair `(a, b)`, `a < b < channels`, in lexicographic order.
#[inline]
pub fn pair_index(channels: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < channels);
    a * (2 * channels - a - 1) / 2 + (b - a - 1)
}

/// Iterates `(a, b)` with `a < b < channels` in lexicographic order.
pub fn pair_indices(channels: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..channels).flat_map(move |a| (a + 1..channels).map(move |b| (a, b)))
}

/// Per-channel truth labels; channel identity is the position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelLabeling {
    labels: Vec<Label>,
}

impl ChannelLabeling {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::TooFewChannels(labels.len()));
        }
        Ok(Self { labels })
    }

    /// The labeling with channels `0..correct` correct and the rest incorrect.
    pub fn canonical(cohort: &CohortSpec) -> Self {
        let labels = (0..cohort.channels())
            .map(|i| {
                if i < cohort.correct() {
                    Label::Correct
                } else {
                    Label::Incorrect
                }
            })
            .collect();
        Self { labels }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, channel: usize) -> Label {
        self.labels[channel]
    }

    pub fn correct_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::Correct).count()
    }

    /// Truth tag of the pair `(a, b)`.
    pub fn tag(&self, a: usize, b: usize) -> PairTag {
        if self.labels[a] == Label::Correct && self.labels[b] == Label::Correct {
            PairTag::Similar
        } else {
            PairTag::Dissimilar
        }
    }
}

/// Sample space of one discharge: `N` channels of which `n` are correct.
///
/// `Q1 = n / N` and all pair counts are derived on demand, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CohortSpec {
    channels: usize,
    correct: usize,
}

impl CohortSpec {
    pub fn new(channels: usize, correct: usize) -> Result<Self> {
        if channels < 2 {
            return Err(Error::TooFewChannels(channels));
        }
        if correct > channels {
            return Err(Error::Parameter(format!(
                "correct-channel count {correct} exceeds channel count {channels}"
            )));
        }
        Ok(Self { channels, correct })
    }

    /// Nearest realizable cohort for a requested proportion of correct
    /// channels: `n = round(q1 * N)`, halves rounded away from zero.
    pub fn from_proportion(channels: usize, q1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q1) {
            return Err(Error::Parameter(format!("Q1 must lie in [0, 1], got {q1}")));
        }
        Self::new(channels, (q1 * channels as f64).round() as usize)
    }

    /// `N`
    pub fn channels(&self) -> usize {
        self.channels
    }

    /// `n`
    pub fn correct(&self) -> usize {
        self.correct
    }

    pub fn incorrect(&self) -> usize {
        self.channels - self.correct
    }

    /// `Q1 = n / N`
    pub fn q1(&self) -> f64 {
        self.correct as f64 / self.channels as f64
    }

    pub fn pairs_total(&self) -> usize {
        choose2(self.channels)
    }

    pub fn pairs_similar(&self) -> usize {
        choose2(self.correct)
    }

    pub fn pairs_dissimilar(&self) -> usize {
        self.pairs_total() - self.pairs_similar()
    }
}

/// One pair sample, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairSample {
    pub a: usize,
    pub b: usize,
    pub tag: PairTag,
}

/// All `C(N, 2)` pairs of the labeling in lexicographic `(a, b)` order.
pub fn enumerate_pairs(labeling: &ChannelLabeling) -> Result<Vec<PairSample>> {
    if labeling.len() < 2 {
        return Err(Error::TooFewChannels(labeling.len()));
    }
    Ok(pair_indices(labeling.len())
        .map(|(a, b)| PairSample {
            a,
            b,
            tag: labeling.tag(a, b),
        })
        .collect())
}

pub fn cohort_of(labeling: &ChannelLabeling) -> Result<CohortSpec> {
    CohortSpec::new(labeling.len(), labeling.correct_count())
}
