//! Sweeps of the preference measures over `(Q2, Q3)` grids and their rank
//! correlation with `Q3`.

use rayon::prelude::*;

use crate::closed_form::{preference_measures, Measure, PreferenceMeasures};
use crate::error::{Error, Result};
use crate::sample_space::CohortSpec;
use crate::similarity::OperatingPoint;

pub const DEFAULT_STRONG_THRESHOLD: f64 = 0.95;

/// `0.5, 0.6, ..., 1.0`
pub fn default_axis() -> Vec<f64> {
    axis(0.5, 1.0, 0.1).expect("default axis is valid")
}

/// Inclusive range `start, start + step, ..., stop`. Points are snapped to
/// 1e-12 so that decimal steps land on their decimal values.
pub fn axis(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(Error::Parameter("grid bounds must be finite".into()));
    }
    if stop < start {
        return Err(Error::Parameter(format!("empty grid {start}:{stop}:{step}")));
    }
    if step <= 0.0 {
        if stop == start {
            return Ok(vec![start]);
        }
        return Err(Error::Parameter(format!("grid step must be positive, got {step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    cohort: CohortSpec,
    q2_values: Vec<f64>,
    q3_values: Vec<f64>,
}

impl SweepGrid {
    pub fn new(cohort: CohortSpec, q2_values: Vec<f64>, q3_values: Vec<f64>) -> Result<Self> {
        for (name, values) in [("q2", &q2_values), ("q3", &q3_values)] {
            if values.is_empty() {
                return Err(Error::Parameter(format!("{name} grid is empty")));
            }
            if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::Parameter(format!("{name} grid leaves [0, 1]")));
            }
            if values.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parameter(format!("{name} grid is not strictly ascending")));
            }
        }
        Ok(Self {
            cohort,
            q2_values,
            q3_values,
        })
    }

    pub fn with_default_axes(cohort: CohortSpec) -> Self {
        Self::new(cohort, default_axis(), default_axis()).expect("default grid is valid")
    }

    pub fn cohort(&self) -> &CohortSpec {
        &self.cohort
    }

    pub fn q2_values(&self) -> &[f64] {
        &self.q2_values
    }

    pub fn q3_values(&self) -> &[f64] {
        &self.q3_values
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub q2: f64,
    pub q3: f64,
    pub measures: PreferenceMeasures,
}

/// Rows in q2-major order. A row whose inputs are invalid for the cohort
/// carries all-undefined measures.
pub fn sweep(grid: &SweepGrid) -> Vec<SweepRow> {
    let points: Vec<(f64, f64)> = grid
        .q2_values
        .iter()
        .flat_map(|&q2| grid.q3_values.iter().map(move |&q3| (q2, q3)))
        .collect();
    points
        .into_par_iter()
        .map(|(q2, q3)| {
            let measures = OperatingPoint::defined(q2, q3)
                .and_then(|op| preference_measures(&grid.cohort, &op))
                .unwrap_or_default();
            SweepRow { q2, q3, measures }
        })
        .collect()
}

/// Same rows as [`sweep`], computed on a dedicated pool of `workers` threads.
pub fn sweep_with_workers(grid: &SweepGrid, workers: usize) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Parameter(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(|| sweep(grid)))
}

/// Average ranks (1-based), ties sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's rho; `None` when either side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (a - mean, b - mean);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman rho of `measure` against `q3`, over rows where it is defined.
/// Errors with fewer than three such rows; `Ok(None)` for tie-degenerate data.
pub fn measure_correlation(rows: &[SweepRow], measure: Measure) -> Result<Option<f64>> {
    let (q3, values): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|r| r.measures.get(measure).map(|v| (r.q3, v)))
        .unzip();
    if values.len() < 3 {
        return Err(Error::Analysis {
            measure: measure.to_string(),
            reason: format!("{} defined rows, at least 3 required", values.len()),
        });
    }
    Ok(spearman(&values, &q3))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureCorrelation {
    pub measure: Measure,
    pub rho: Option<f64>,
    pub strong_positive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub threshold: f64,
    pub entries: Vec<MeasureCorrelation>,
}

impl CorrelationReport {
    pub fn get(&self, measure: Measure) -> &MeasureCorrelation {
        self.entries
            .iter()
            .find(|e| e.measure == measure)
            .expect("report covers every measure")
    }
}

pub fn correlation_report(rows: &[SweepRow], threshold: f64) -> Result<CorrelationReport> {
    let entries = Measure::ALL
        .iter()
        .map(|&measure| {
            let rho = measure_correlation(rows, measure)?;
            Ok(MeasureCorrelation {
                measure,
                rho,
                strong_positive: rho.is_some_and(|r| r >= threshold),
            })
        })
        .collect::<Result<_>>()?;
    Ok(CorrelationReport { threshold, entries })
}
