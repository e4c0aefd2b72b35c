//! CSV schemas read and written by the command line.
//!
//! * predictions: `a,b,prediction` with `prediction` in {similar, dissimilar}
//! * truth: `channel,label` with `label` in {correct, incorrect}
//! * candidates: `id,q2,q3`, a recall may be empty or `undefined`

use std::fs::File;
use std::path::Path;

use pairclean_core::{Candidate, ChannelLabeling, Label, OperatingPoint, PairPredictionSet, PairTag};

use crate::CliError;

fn open(path: &Path) -> Result<csv::Reader<File>, CliError> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn check_header(rdr: &mut csv::Reader<File>, path: &Path, expected: &[&str]) -> Result<(), CliError> {
    let header = rdr
        .headers()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let got: Vec<String> = header.iter().map(|h| h.to_ascii_lowercase()).collect();
    if got != expected {
        return Err(CliError::Usage(format!(
            "{}: line 1: expected header '{}', found '{}'",
            path.display(),
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

/// Rows of a CSV file with their 1-based line numbers.
fn rows(path: &Path, expected: &[&str]) -> Result<Vec<(u64, Vec<String>)>, CliError> {
    let mut rdr = open(path)?;
    check_header(&mut rdr, path, expected)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            CliError::Usage(format!("{}: line {line}: {e}", path.display()))
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        out.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(out)
}

fn malformed(path: &Path, line: u64, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{}: line {line}: {msg}", path.display()))
}

/// Raw `(a, b, tag)` rows; channel count is settled by the caller.
pub fn read_predictions(path: &Path) -> Result<Vec<(usize, usize, PairTag)>, CliError> {
    let mut out = Vec::new();
    for (line, row) in rows(path, &["a", "b", "prediction"])? {
        let a: usize = row[0]
            .parse()
            .map_err(|_| malformed(path, line, format!("bad channel index '{}'", row[0])))?;
        let b: usize = row[1]
            .parse()
            .map_err(|_| malformed(path, line, format!("bad channel index '{}'", row[1])))?;
        if a >= b {
            return Err(malformed(path, line, format!("pair ({a},{b}) must satisfy a < b")));
        }
        let tag = match row[2].to_ascii_lowercase().as_str() {
            "similar" => PairTag::Similar,
            "dissimilar" => PairTag::Dissimilar,
            other => return Err(malformed(path, line, format!("unknown prediction '{other}'"))),
        };
        out.push((a, b, tag));
    }
    Ok(out)
}

pub fn build_predictions(channels: usize, rows: Vec<(usize, usize, PairTag)>) -> Result<PairPredictionSet, CliError> {
    PairPredictionSet::from_pairs(channels, rows).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn read_truth(path: &Path) -> Result<ChannelLabeling, CliError> {
    let mut labels: Vec<Option<Label>> = Vec::new();
    for (line, row) in rows(path, &["channel", "label"])? {
        let ch: usize = row[0]
            .parse()
            .map_err(|_| malformed(path, line, format!("bad channel index '{}'", row[0])))?;
        let label = match row[1].to_ascii_lowercase().as_str() {
            "correct" => Label::Correct,
            "incorrect" => Label::Incorrect,
            other => return Err(malformed(path, line, format!("unknown label '{other}'"))),
        };
        if labels.len() <= ch {
            labels.resize(ch + 1, None);
        }
        if labels[ch].replace(label).is_some() {
            return Err(malformed(path, line, format!("channel {ch} labelled twice")));
        }
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| CliError::Usage(format!("{}: channel {i} has no label", path.display()))))
        .collect::<Result<Vec<_>, _>>()?;
    ChannelLabeling::new(labels).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn recall(path: &Path, line: u64, text: &str) -> Result<Option<f64>, CliError> {
    if text.is_empty() || text.eq_ignore_ascii_case("undefined") {
        return Ok(None);
    }
    text.parse::<f64>()
        .map(Some)
        .map_err(|_| malformed(path, line, format!("bad recall '{text}'")))
}

pub fn read_candidates(path: &Path) -> Result<Vec<Candidate>, CliError> {
    let mut out = Vec::new();
    for (line, row) in rows(path, &["id", "q2", "q3"])? {
        let op = OperatingPoint::new(recall(path, line, &row[1])?, recall(path, line, &row[2])?)
            .map_err(|e| malformed(path, line, e))?;
        if row[0].is_empty() {
            return Err(malformed(path, line, "empty candidate id"));
        }
        out.push(Candidate { id: row[0].clone(), op });
    }
    Ok(out)
}
