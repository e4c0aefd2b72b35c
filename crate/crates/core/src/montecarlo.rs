//! Monte Carlo oracle for the channel outcome probabilities.
//!
//! Each trial draws one independent prediction per pair (similar pairs are
//! predicted similar with probability `Q2`, dissimilar pairs dissimilar with
//! probability `Q3`), judges every channel and tallies `(truth, verdict)`.
//!
//! Trial `i` draws from ChaCha8 stream `i` of the configured seed, so the
//! result depends only on `(config, seed)` and never on how trials are
//! split across threads.

use std::ops::Range;

use rand::distr::{Bernoulli, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::closed_form::{ChannelOutcomeProbabilities, OutcomeCounts};
use crate::error::{Error, Result};
use crate::judging::{judge_into, JudgingRule, PairPredictionSet, Verdict};
use crate::sample_space::{pair_indices, ChannelLabeling, CohortSpec, PairTag};
use crate::similarity::OperatingPoint;

const BATCH: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub cohort: CohortSpec,
    pub op: OperatingPoint,
    pub rule: JudgingRule,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationEstimate {
    pub estimates: ChannelOutcomeProbabilities,
    /// `sqrt(f (1 - f) / m)` per fraction, `m = trials * N`.
    pub std_errors: [f64; 4],
    pub trials: u64,
    pub counts: OutcomeCounts,
}

impl SimulationEstimate {
    pub fn from_counts(counts: OutcomeCounts, trials: u64) -> Self {
        let m = counts.total().max(1) as f64;
        let estimates = counts.fractions();
        let std_errors = estimates.as_array().map(|f| (f * (1.0 - f) / m).sqrt());
        Self {
            estimates,
            std_errors,
            trials,
            counts,
        }
    }

    /// Standardised deviation of each estimate from `expected`, using the
    /// binomial standard error at the expected value. Where that error is
    /// zero the score is 0 for an exact match and infinite otherwise.
    pub fn z_scores(&self, expected: &ChannelOutcomeProbabilities) -> [f64; 4] {
        let m = self.counts.total().max(1) as f64;
        let est = self.estimates.as_array();
        let exp = expected.as_array();
        std::array::from_fn(|i| {
            let sigma = (exp[i] * (1.0 - exp[i]) / m).max(0.0).sqrt();
            let diff = est[i] - exp[i];
            if sigma > 0.0 {
                diff / sigma
            } else if diff.abs() <= 1e-12 {
                0.0
            } else {
                f64::INFINITY.copysign(diff)
            }
        })
    }
}

/// Random stream of trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Per-pair prediction sampler for one cohort and operating point.
#[derive(Debug, Clone)]
pub struct PredictionSampler {
    labeling: ChannelLabeling,
    truth: Vec<PairTag>,
    similar_hit: Bernoulli,
    dissimilar_hit: Bernoulli,
}

impl PredictionSampler {
    /// Sampler over the canonical labeling (correct channels first).
    pub fn new(cohort: &CohortSpec, op: &OperatingPoint) -> Result<Self> {
        Self::for_labeling(ChannelLabeling::canonical(cohort), op)
    }

    pub fn for_labeling(labeling: ChannelLabeling, op: &OperatingPoint) -> Result<Self> {
        let truth: Vec<PairTag> = pair_indices(labeling.len()).map(|(a, b)| labeling.tag(a, b)).collect();
        let has = |t: PairTag| truth.contains(&t);
        let q2 = required(op.q2, has(PairTag::Similar), "Q2", "similar")?;
        let q3 = required(op.q3, has(PairTag::Dissimilar), "Q3", "dissimilar")?;
        let bern = |p: f64| Bernoulli::new(p).map_err(|e| Error::Parameter(format!("invalid recall {p}: {e}")));
        Ok(Self {
            labeling,
            truth,
            similar_hit: bern(q2)?,
            dissimilar_hit: bern(q3)?,
        })
    }

    pub fn labeling(&self) -> &ChannelLabeling {
        &self.labeling
    }

    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [PairTag]) {
        for (slot, truth) in out.iter_mut().zip(&self.truth) {
            *slot = match truth {
                PairTag::Similar if self.similar_hit.sample(rng) => PairTag::Similar,
                PairTag::Similar => PairTag::Dissimilar,
                PairTag::Dissimilar if self.dissimilar_hit.sample(rng) => PairTag::Dissimilar,
                PairTag::Dissimilar => PairTag::Similar,
            };
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PairPredictionSet {
        let mut tags = vec![PairTag::Similar; self.truth.len()];
        self.fill(rng, &mut tags);
        PairPredictionSet::from_ordered(self.labeling.len(), tags).expect("sampler produces one prediction per pair")
    }

    /// Runs the given trials and tallies outcomes.
    pub fn run(&self, rule: JudgingRule, seed: u64, trials: Range<u64>) -> OutcomeCounts {
        let channels = self.labeling.len();
        let mut tags = vec![PairTag::Similar; self.truth.len()];
        let mut similar = vec![0usize; channels];
        let mut verdicts = vec![Verdict::JudgedCorrect; channels];
        let base = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = OutcomeCounts::default();
        for trial in trials {
            let mut rng = base.clone();
            rng.set_stream(trial);
            self.fill(&mut rng, &mut tags);
            judge_into(channels, &tags, rule, &mut similar, &mut verdicts);
            for (label, verdict) in self.labeling.labels().iter().zip(&verdicts) {
                counts.record(*label, *verdict);
            }
        }
        counts
    }
}

fn required(q: Option<f64>, needed: bool, name: &str, class: &str) -> Result<f64> {
    match q {
        Some(q) => Ok(q),
        None if needed => Err(Error::Parameter(format!(
            "{name} is undefined but the cohort has {class} pairs"
        ))),
        None => Ok(0.0),
    }
}

/// One prediction set for the canonical labeling of `cohort`.
pub fn synthesize_predictions<R: Rng + ?Sized>(
    cohort: &CohortSpec,
    op: &OperatingPoint,
    rng: &mut R,
) -> Result<PairPredictionSet> {
    Ok(PredictionSampler::new(cohort, op)?.sample(rng))
}

fn validate(config: &SimulationConfig) -> Result<PredictionSampler> {
    if config.trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    PredictionSampler::new(&config.cohort, &config.op)
}

/// Tally for the trial indices in `trials`, evaluated in parallel batches.
pub fn simulate_trials(config: &SimulationConfig, trials: Range<u64>) -> Result<OutcomeCounts> {
    let sampler = PredictionSampler::new(&config.cohort, &config.op)?;
    Ok(run_batches(&sampler, config, trials))
}

fn run_batches(sampler: &PredictionSampler, config: &SimulationConfig, trials: Range<u64>) -> OutcomeCounts {
    let start = trials.start;
    let len = trials.end.saturating_sub(start);
    (0..len.div_ceil(BATCH))
        .into_par_iter()
        .map(|b| {
            let lo = start + b * BATCH;
            let hi = (lo + BATCH).min(trials.end);
            sampler.run(config.rule, config.seed, lo..hi)
        })
        .reduce(OutcomeCounts::default, OutcomeCounts::merge)
}

/// Runs `config.trials` trials on the global thread pool.
pub fn simulate(config: &SimulationConfig) -> Result<SimulationEstimate> {
    let sampler = validate(config)?;
    let counts = run_batches(&sampler, config, 0..config.trials);
    Ok(SimulationEstimate::from_counts(counts, config.trials))
}

/// Same as [`simulate`] on a dedicated pool of `workers` threads.
pub fn simulate_with_workers(config: &SimulationConfig, workers: usize) -> Result<SimulationEstimate> {
    let sampler = validate(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Parameter(format!("cannot build worker pool: {e}")))?;
    let counts = pool.install(|| run_batches(&sampler, config, 0..config.trials));
    Ok(SimulationEstimate::from_counts(counts, config.trials))
}
