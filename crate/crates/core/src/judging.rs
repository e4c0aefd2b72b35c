//! Channel verdicts from pair-level similarity predictions.
//!
//! Two rules are supported. The absolute rule marks a channel correct as
//! soon as it appears in one pair predicted similar. The threshold rule
//! marks a channel incorrect when it is predicted dissimilar from at least
//! a fraction `theta` of the other channels, and correct otherwise.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::closed_form::{ChannelOutcomeProbabilities, OutcomeCounts};
use crate::error::{Error, Result};
use crate::sample_space::{choose2, pair_index, pair_indices, ChannelLabeling, PairTag};

/// Complete set of pair predictions over `N` channels, stored in
/// lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPredictionSet {
    channels: usize,
    tags: Vec<PairTag>,
}

impl PairPredictionSet {
    /// Wraps predictions already laid out in lexicographic `(a, b)` order.
    pub fn from_ordered(channels: usize, tags: Vec<PairTag>) -> Result<Self> {
        if channels < 2 {
            return Err(Error::TooFewChannels(channels));
        }
        if tags.len() != choose2(channels) {
            return Err(Error::Structural(format!(
                "{} predictions supplied for {} channels, expected {}",
                tags.len(),
                channels,
                choose2(channels)
            )));
        }
        Ok(Self { channels, tags })
    }

    /// Builds the set from unordered `(a, b, tag)` triples. Every pair must
    /// appear exactly once; `a` and `b` may come in either order.
    pub fn from_pairs<I>(channels: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, PairTag)>,
    {
        if channels < 2 {
            return Err(Error::TooFewChannels(channels));
        }
        let mut slots: Vec<Option<PairTag>> = vec![None; choose2(channels)];
        for (a, b, tag) in pairs {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            if a == b || b >= channels {
                return Err(Error::Structural(format!(
                    "invalid pair ({a},{b}) for {channels} channels"
                )));
            }
            let slot = &mut slots[pair_index(channels, a, b)];
            if slot.is_some() {
                return Err(Error::Structural(format!("duplicate pair ({a},{b})")));
            }
            *slot = Some(tag);
        }
        let mut tags = Vec::with_capacity(slots.len());
        for ((a, b), slot) in pair_indices(channels).zip(slots) {
            match slot {
                Some(tag) => tags.push(tag),
                None => return Err(Error::Structural(format!("missing pair ({a},{b})"))),
            }
        }
        Ok(Self { channels, tags })
    }

    /// Predictions that reproduce the truth tag of every pair.
    pub fn perfect(labeling: &ChannelLabeling) -> Self {
        let tags = pair_indices(labeling.len()).map(|(a, b)| labeling.tag(a, b)).collect();
        Self {
            channels: labeling.len(),
            tags,
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn get(&self, a: usize, b: usize) -> PairTag {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.tags[pair_index(self.channels, a, b)]
    }

    /// Predictions in lexicographic pair order.
    pub fn tags(&self) -> &[PairTag] {
        &self.tags
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, PairTag)> + '_ {
        pair_indices(self.channels)
            .zip(self.tags.iter())
            .map(|((a, b), t)| (a, b, *t))
    }
}

/// Fraction `theta` in `(0, 1]`, kept as an exact ratio.
pub type Theta = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JudgingRule {
    /// Correct iff the channel belongs to at least one pair predicted similar.
    Absolute,
    /// Incorrect iff predicted dissimilar from at least `theta * (N - 1)`
    /// of the other channels.
    Threshold(Theta),
}

impl JudgingRule {
    pub fn threshold(theta: Theta) -> Result<Self> {
        if *theta.numer() == 0 || theta > Ratio::from_integer(1) {
            return Err(Error::Parameter(format!(
                "threshold fraction must lie in (0, 1], got {theta}"
            )));
        }
        Ok(JudgingRule::Threshold(theta))
    }
}

/// Parses `absolute`, `threshold:<theta>` with `theta` a decimal (`0.9`)
/// or a fraction (`9/10`).
impl FromStr for JudgingRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("absolute") {
            return Ok(JudgingRule::Absolute);
        }
        let Some(theta) = s.strip_prefix("threshold:") else {
            return Err(Error::Parameter(format!(
                "unknown judging rule '{s}', expected 'absolute' or 'threshold:<theta>'"
            )));
        };
        JudgingRule::threshold(parse_fraction(theta)?)
    }
}

impl fmt::Display for JudgingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JudgingRule::Absolute => f.write_str("absolute"),
            JudgingRule::Threshold(theta) => write!(f, "threshold:{theta}"),
        }
    }
}

/// Exact rational value of a decimal literal or `p/q` fraction.
pub fn parse_fraction(text: &str) -> Result<Theta> {
    let bad = || Error::Parameter(format!("cannot parse '{text}' as a fraction"));
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if (int.is_empty() && frac.is_empty())
        || frac.len() > 18
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
    Ok(Ratio::new(num, den))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    JudgedCorrect,
    JudgedIncorrect,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::JudgedCorrect => "correct",
            Verdict::JudgedIncorrect => "incorrect",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelVerdicts {
    verdicts: Vec<Verdict>,
}

impl ChannelVerdicts {
    pub fn verdicts(&self) -> &[Verdict] {
        &self.verdicts
    }

    pub fn len(&self) -> usize {
        self.verdicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty()
    }
}

/// Applies `rule` to every channel. Truth labels play no part.
pub fn judge(predictions: &PairPredictionSet, rule: JudgingRule) -> ChannelVerdicts {
    let mut similar = vec![0usize; predictions.channels];
    let mut verdicts = vec![Verdict::JudgedCorrect; predictions.channels];
    judge_into(
        predictions.channels,
        &predictions.tags,
        rule,
        &mut similar,
        &mut verdicts,
    );
    ChannelVerdicts { verdicts }
}

/// Allocation-free core of [`judge`]; `similar` is scratch space of length `channels`.
pub(crate) fn judge_into(
    channels: usize,
    tags: &[PairTag],
    rule: JudgingRule,
    similar: &mut [usize],
    out: &mut [Verdict],
) {
    similar.iter_mut().for_each(|c| *c = 0);
    for ((a, b), tag) in pair_indices(channels).zip(tags) {
        if *tag == PairTag::Similar {
            similar[a] += 1;
            similar[b] += 1;
        }
    }
    let others = (channels - 1) as u128;
    for (verdict, &sim) in out.iter_mut().zip(similar.iter()) {
        let incorrect = match rule {
            JudgingRule::Absolute => sim == 0,
            JudgingRule::Threshold(theta) => {
                // dissimilar >= theta * (N - 1), compared exactly
                let dissimilar = (channels - 1 - sim) as u128;
                dissimilar * *theta.denom() as u128 >= *theta.numer() as u128 * others
            }
        };
        *verdict = if incorrect {
            Verdict::JudgedIncorrect
        } else {
            Verdict::JudgedCorrect
        };
    }
}

/// Tally of `(truth, verdict)` over all channels.
pub fn channel_counts(verdicts: &ChannelVerdicts, truth: &ChannelLabeling) -> Result<OutcomeCounts> {
    if verdicts.len() != truth.len() {
        return Err(Error::Structural(format!(
            "{} verdicts but {} truth labels",
            verdicts.len(),
            truth.len()
        )));
    }
    let mut counts = OutcomeCounts::default();
    for (v, t) in verdicts.verdicts.iter().zip(truth.labels()) {
        counts.record(*t, *v);
    }
    Ok(counts)
}

/// Empirical joint fractions of `(truth, verdict)` over all channels.
pub fn channel_confusion(verdicts: &ChannelVerdicts, truth: &ChannelLabeling) -> Result<ChannelOutcomeProbabilities> {
    Ok(channel_counts(verdicts, truth)?.fractions())
}
