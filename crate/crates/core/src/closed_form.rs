//! Closed-form channel outcome probabilities and preference measures.
//!
//! Under the absolute judging rule with independent pair predictions, a
//! correct channel is misjudged only when each of its `n - 1` similar pairs
//! is missed and each of its `N - n` dissimilar pairs is recognised, so
//!
//! ```text
//! P(R->W) = Q1 (1 - Q2)^(n-1) Q3^(N-n)      P(R->R) = Q1 - P(R->W)
//! P(W->W) = (1 - Q1) Q3^(N-1)               P(W->R) = (1 - Q1) - P(W->W)
//! ```
//!
//! Empty products (`n = 1`, `n = N`) evaluate to 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::judging::Verdict;
use crate::sample_space::{CohortSpec, Label};
use crate::similarity::OperatingPoint;

/// Exponents above this are evaluated as `exp(k ln x)`.
const LOG_SPACE_EXPONENT: u64 = 64;

/// Joint probabilities of (truth, verdict) for a randomly chosen channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelOutcomeProbabilities {
    /// correct, judged correct
    pub p_rr: f64,
    /// correct, judged incorrect
    pub p_rw: f64,
    /// incorrect, judged incorrect
    pub p_ww: f64,
    /// incorrect, judged correct
    pub p_wr: f64,
}

impl ChannelOutcomeProbabilities {
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_rr, self.p_rw, self.p_ww, self.p_wr]
    }

    pub const NAMES: [&'static str; 4] = ["p_rr", "p_rw", "p_ww", "p_wr"];
}

/// Integer tally of channel outcomes; merges associatively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutcomeCounts {
    pub rr: u64,
    pub rw: u64,
    pub ww: u64,
    pub wr: u64,
}

impl OutcomeCounts {
    #[inline]
    pub fn record(&mut self, truth: Label, verdict: Verdict) {
        match (truth, verdict) {
            (Label::Correct, Verdict::JudgedCorrect) => self.rr += 1,
            (Label::Correct, Verdict::JudgedIncorrect) => self.rw += 1,
            (Label::Incorrect, Verdict::JudgedIncorrect) => self.ww += 1,
            (Label::Incorrect, Verdict::JudgedCorrect) => self.wr += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.rr + self.rw + self.ww + self.wr
    }

    pub fn merge(mut self, other: OutcomeCounts) -> Self {
        self.rr += other.rr;
        self.rw += other.rw;
        self.ww += other.ww;
        self.wr += other.wr;
        self
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.rr, self.rw, self.ww, self.wr]
    }

    /// Fractions over the total; all zero for an empty tally.
    pub fn fractions(&self) -> ChannelOutcomeProbabilities {
        let total = self.total().max(1) as f64;
        ChannelOutcomeProbabilities {
            p_rr: self.rr as f64 / total,
            p_rw: self.rw as f64 / total,
            p_ww: self.ww as f64 / total,
            p_wr: self.wr as f64 / total,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    /// Recall of incorrect data.
    E1,
    /// Precision of incorrect data.
    E2,
    /// Recall of correct data.
    E3,
    /// Precision of correct data.
    E4,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::E1, Measure::E2, Measure::E3, Measure::E4];
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::E1 => "e1",
            Measure::E2 => "e2",
            Measure::E3 => "e3",
            Measure::E4 => "e4",
        })
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "e1" => Ok(Measure::E1),
            "e2" => Ok(Measure::E2),
            "e3" => Ok(Measure::E3),
            "e4" => Ok(Measure::E4),
            _ => Err(Error::Parameter(format!("unknown measure '{s}', expected e1..e4"))),
        }
    }
}

/// Task-preference measures; `None` where the conditional probability has
/// a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PreferenceMeasures {
    pub e1: Option<f64>,
    pub e2: Option<f64>,
    pub e3: Option<f64>,
    pub e4: Option<f64>,
}

impl PreferenceMeasures {
    pub fn get(&self, m: Measure) -> Option<f64> {
        match m {
            Measure::E1 => self.e1,
            Measure::E2 => self.e2,
            Measure::E3 => self.e3,
            Measure::E4 => self.e4,
        }
    }

    /// Measures read off joint outcome probabilities (empirical or not).
    pub fn from_outcomes(p: &ChannelOutcomeProbabilities) -> Self {
        Self {
            e1: ratio(p.p_ww, p.p_ww + p.p_wr),
            e2: ratio(p.p_ww, p.p_ww + p.p_rw),
            e3: ratio(p.p_rr, p.p_rr + p.p_rw),
            e4: ratio(p.p_rr, p.p_rr + p.p_wr),
        }
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| (num / den).min(1.0))
}

/// `base^exp` with `0^0 = 1`; large exponents go through log space.
pub fn power(base: f64, exp: u64) -> f64 {
    if exp == 0 {
        1.0
    } else if base == 0.0 {
        0.0
    } else if exp > LOG_SPACE_EXPONENT {
        (exp as f64 * base.ln()).exp()
    } else {
        base.powi(exp as i32)
    }
}

/// The two products the closed forms are built from:
/// `(1 - Q2)^(n-1) Q3^(N-n)` and `Q3^(N-1)`.
struct Products {
    correct_missed: f64,
    incorrect_caught: f64,
}

fn products(cohort: &CohortSpec, op: &OperatingPoint) -> Result<Products> {
    let n = cohort.correct() as u64;
    let big_n = cohort.channels() as u64;
    let q2 = match op.q2 {
        Some(q) => q,
        None if n >= 2 => {
            return Err(Error::Parameter(format!(
                "Q2 is undefined but required: the cohort has {n} correct channels"
            )))
        }
        None => 0.0,
    };
    let q3 = match op.q3 {
        Some(q) => q,
        None if n < big_n => {
            return Err(Error::Parameter(format!(
                "Q3 is undefined but required: the cohort has {} incorrect channels",
                big_n - n
            )))
        }
        None => 0.0,
    };
    let correct_missed = if n == 0 {
        0.0
    } else {
        power(1.0 - q2, n - 1) * power(q3, big_n - n)
    };
    Ok(Products {
        correct_missed,
        incorrect_caught: power(q3, big_n - 1),
    })
}

/// Joint channel outcome probabilities under the absolute judging rule.
pub fn outcome_probabilities(cohort: &CohortSpec, op: &OperatingPoint) -> Result<ChannelOutcomeProbabilities> {
    let pr = products(cohort, op)?;
    let q1 = cohort.q1();
    let q1_bar = 1.0 - q1;
    Ok(ChannelOutcomeProbabilities {
        p_rr: q1 * (1.0 - pr.correct_missed),
        p_rw: q1 * pr.correct_missed,
        p_ww: q1_bar * pr.incorrect_caught,
        p_wr: q1_bar * (1.0 - pr.incorrect_caught),
    })
}

/// `E1..E4` under the absolute judging rule.
///
/// `E1` and `E3` use their reduced forms `Q3^(N-1)` and
/// `1 - (1 - Q2)^(n-1) Q3^(N-n)`. `E2` and `E4` are ratios of joint
/// probabilities, which stays finite at `Q3 = 0`.
pub fn preference_measures(cohort: &CohortSpec, op: &OperatingPoint) -> Result<PreferenceMeasures> {
    let pr = products(cohort, op)?;
    let p = outcome_probabilities(cohort, op)?;
    let joint = PreferenceMeasures::from_outcomes(&p);
    Ok(PreferenceMeasures {
        e1: (cohort.incorrect() > 0).then_some(pr.incorrect_caught),
        e2: joint.e2,
        e3: (cohort.correct() > 0).then_some(1.0 - pr.correct_missed),
        e4: joint.e4,
    })
}
