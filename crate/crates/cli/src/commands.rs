use std::io::Write;

use pairclean_core::analysis::{self, measure_correlation, SweepGrid};
use pairclean_core::montecarlo as mc;
use pairclean_core::{
    evaluate, judge as judge_channels, outcome_probabilities, preference_measures, select as rank,
    ChannelOutcomeProbabilities, CohortSpec, JudgingRule, Measure, OperatingPoint, PreferenceMeasures,
    SimulationConfig,
};

use crate::format::{csv_cell, fmt_num, fmt_opt, Record};
use crate::io::{build_predictions, read_candidates, read_predictions, read_truth};
use crate::{
    write_out, CliError, CohortArgs, JudgeArgs, MeasuresArgs, RecallArgs, SelectArgs, SimulateArgs, SweepArgs,
};

type CmdResult = Result<i32, CliError>;

fn cohort(args: &CohortArgs, stderr: &mut dyn Write) -> Result<CohortSpec, CliError> {
    match (args.correct, args.q1) {
        (Some(n), _) => Ok(CohortSpec::new(args.channels, n)?),
        (None, Some(q1)) => {
            let c = CohortSpec::from_proportion(args.channels, q1)?;
            if (c.q1() - q1).abs() > 1e-12 {
                let _ = writeln!(
                    stderr,
                    "warning: Q1 = {q1} is not realizable with {} channels; using n = {} (Q1 = {})",
                    c.channels(),
                    c.correct(),
                    fmt_num(c.q1())
                );
            }
            Ok(c)
        }
        (None, None) => Err(CliError::Usage("either --correct or --q1 is required".into())),
    }
}

/// Recalls must be given exactly for the pair classes the cohort has.
fn operating_point(cohort: &CohortSpec, recalls: &RecallArgs) -> Result<OperatingPoint, CliError> {
    let has_similar = cohort.pairs_similar() > 0;
    let has_dissimilar = cohort.pairs_dissimilar() > 0;
    if recalls.q2.is_some() && !has_similar {
        return Err(CliError::Usage(format!(
            "--q2 supplied but a cohort with {} correct channels has no similar pairs",
            cohort.correct()
        )));
    }
    if recalls.q3.is_some() && !has_dissimilar {
        return Err(CliError::Usage(
            "--q3 supplied but a cohort with every channel correct has no dissimilar pairs".into(),
        ));
    }
    if recalls.q2.is_none() && has_similar {
        return Err(CliError::Usage("--q2 is required: the cohort has similar pairs".into()));
    }
    if recalls.q3.is_none() && has_dissimilar {
        return Err(CliError::Usage(
            "--q3 is required: the cohort has dissimilar pairs".into(),
        ));
    }
    Ok(OperatingPoint::new(recalls.q2, recalls.q3)?)
}

fn parse_rule(text: &str) -> Result<JudgingRule, CliError> {
    Ok(text.parse::<JudgingRule>()?)
}

fn push_cohort(rec: &mut Record, c: &CohortSpec) {
    rec.push("channels", c.channels())
        .push("correct", c.correct())
        .push("q1", c.q1())
        .push("pairs_total", c.pairs_total())
        .push("pairs_similar", c.pairs_similar())
        .push("pairs_dissimilar", c.pairs_dissimilar());
}

fn push_outcomes(rec: &mut Record, prefix: &str, p: &ChannelOutcomeProbabilities) {
    for (name, v) in ChannelOutcomeProbabilities::NAMES.iter().zip(p.as_array()) {
        rec.push(format!("{prefix}{name}"), v);
    }
}

fn push_measures(rec: &mut Record, prefix: &str, m: &PreferenceMeasures) {
    for measure in Measure::ALL {
        rec.push(format!("{prefix}{measure}"), m.get(measure));
    }
}

pub fn measures(args: &MeasuresArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let cohort = cohort(&args.cohort, stderr)?;
    let op = operating_point(&cohort, &args.recalls)?;
    let p = outcome_probabilities(&cohort, &op)?;
    let m = preference_measures(&cohort, &op)?;
    let mut rec = Record::new();
    push_cohort(&mut rec, &cohort);
    rec.push("q2", op.q2).push("q3", op.q3);
    push_outcomes(&mut rec, "", &p);
    push_measures(&mut rec, "", &m);
    stdout.write_all(rec.render(args.format).as_bytes())?;
    Ok(0)
}

pub fn simulate(args: &SimulateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let cohort = cohort(&args.cohort, stderr)?;
    let op = operating_point(&cohort, &args.recalls)?;
    let rule = parse_rule(&args.rule)?;
    if args.tolerance_sigma.is_nan() || args.tolerance_sigma <= 0.0 {
        return Err(CliError::Usage("--tolerance-sigma must be positive".into()));
    }
    let config = SimulationConfig {
        cohort,
        op,
        rule,
        trials: args.trials,
        seed: args.seed,
    };
    let est = match args.workers {
        Some(w) => mc::simulate_with_workers(&config, w)?,
        None => mc::simulate(&config)?,
    };

    let mut rec = Record::new();
    push_cohort(&mut rec, &cohort);
    rec.push("q2", op.q2)
        .push("q3", op.q3)
        .push("rule", rule.to_string())
        .push("trials", est.trials)
        .push("seed", args.seed);
    push_outcomes(&mut rec, "est_", &est.estimates);
    for (name, se) in ChannelOutcomeProbabilities::NAMES.iter().zip(est.std_errors) {
        rec.push(format!("se_{name}"), se);
    }

    let mut failed = Vec::new();
    match rule {
        JudgingRule::Absolute => {
            let expected = outcome_probabilities(&cohort, &op)?;
            push_outcomes(&mut rec, "cf_", &expected);
            for (name, z) in ChannelOutcomeProbabilities::NAMES.iter().zip(est.z_scores(&expected)) {
                rec.push(format!("z_{name}"), z);
                if z.abs() > args.tolerance_sigma {
                    failed.push(format!("{name} (z = {})", fmt_num(z)));
                }
            }
        }
        // no closed form for the threshold rule
        JudgingRule::Threshold(_) => {
            for name in ChannelOutcomeProbabilities::NAMES {
                rec.push(format!("cf_{name}"), None::<f64>);
            }
            for name in ChannelOutcomeProbabilities::NAMES {
                rec.push(format!("z_{name}"), None::<f64>);
            }
        }
    }
    rec.push("within_tolerance", failed.is_empty());
    stdout.write_all(rec.render(args.format).as_bytes())?;
    if failed.is_empty() {
        Ok(0)
    } else {
        Err(CliError::Validation(format!(
            "estimates outside {} sigma of the closed form: {}",
            fmt_num(args.tolerance_sigma),
            failed.join(", ")
        )))
    }
}

pub fn judge(args: &JudgeArgs, stdout: &mut dyn Write, _stderr: &mut dyn Write) -> CmdResult {
    let rule = parse_rule(&args.rule)?;
    let rows = read_predictions(&args.predictions)?;
    let truth = args.truth.as_deref().map(read_truth).transpose()?;
    let inferred = rows.iter().map(|(_, b, _)| b + 1).max().unwrap_or(0);
    let channels = match (args.channels, &truth) {
        (Some(n), _) => n,
        (None, Some(t)) => t.len().max(inferred),
        (None, None) => inferred,
    };
    let predictions = build_predictions(channels, rows)?;
    let verdicts = judge_channels(&predictions, rule);

    let mut out = String::from("channel,verdict\n");
    for (i, v) in verdicts.verdicts().iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }

    if let Some(truth) = truth {
        if truth.len() != channels {
            return Err(CliError::Usage(format!(
                "truth labels {} channels but predictions cover {channels}",
                truth.len()
            )));
        }
        let report = evaluate(&predictions, &truth, rule)?;
        let mut rec = Record::new();
        push_cohort(&mut rec, &report.cohort);
        rec.push("rule", rule.to_string())
            .push("k1", report.confusion.k1())
            .push("k2", report.confusion.k2())
            .push("k3", report.confusion.k3())
            .push("k4", report.confusion.k4())
            .push("q2", report.recalls.q2)
            .push("q3", report.recalls.q3);
        push_outcomes(&mut rec, "", &report.channel_confusion);
        push_measures(&mut rec, "", &report.measures);
        let (cf_p, cf_m) = match report.closed_form {
            Some((p, m)) => (Some(p), Some(m)),
            None => (None, None),
        };
        for (i, name) in ChannelOutcomeProbabilities::NAMES.iter().enumerate() {
            rec.push(format!("cf_{name}"), cf_p.map(|p| p.as_array()[i]));
        }
        for measure in Measure::ALL {
            rec.push(format!("cf_{measure}"), cf_m.and_then(|m| m.get(measure)));
        }
        out.push('\n');
        out.push_str(&rec.render_key_value("metric", "value"));
    }
    write_out(args.out.as_ref(), &out, stdout)?;
    Ok(0)
}

fn parse_axis(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("{flag}: cannot parse '{s}'")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [single] => vec![num(single)?],
        [start, stop, step] => {
            analysis::axis(num(start)?, num(stop)?, num(step)?).map_err(|e| CliError::Usage(format!("{flag}: {e}")))?
        }
        _ => {
            return Err(CliError::Usage(format!(
                "{flag}: expected start:stop:step, got '{text}'"
            )))
        }
    };
    Ok(values)
}

pub fn sweep(args: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let cohort = cohort(&args.cohort, stderr)?;
    let grid = SweepGrid::new(
        cohort,
        parse_axis("--q2-grid", &args.q2_grid)?,
        parse_axis("--q3-grid", &args.q3_grid)?,
    )?;
    let rows = match args.workers {
        Some(w) => analysis::sweep_with_workers(&grid, w)?,
        None => analysis::sweep(&grid),
    };

    let mut csv = String::from("q2,q3,e1,e2,e3,e4\n");
    for r in &rows {
        csv.push_str(&fmt_num(r.q2));
        csv.push(',');
        csv.push_str(&fmt_num(r.q3));
        for m in Measure::ALL {
            csv.push(',');
            csv.push_str(&fmt_opt(r.measures.get(m)));
        }
        csv.push('\n');
    }
    write_out(Some(&args.out), &csv, stdout)?;

    let mut rec = Record::new();
    rec.push("rows", rows.len());
    for m in Measure::ALL {
        let rho = match measure_correlation(&rows, m) {
            Ok(rho) => rho,
            Err(e) => {
                let _ = writeln!(stderr, "note: {e}");
                None
            }
        };
        rec.push(format!("rho_{m}_q3"), rho);
        rec.push(format!("strong_{m}"), rho.is_some_and(|r| r >= args.threshold));
    }
    rec.push("threshold", args.threshold);
    stdout.write_all(rec.render(args.format).as_bytes())?;
    Ok(0)
}

pub fn select(args: &SelectArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let measure: Measure = args.measure.parse()?;
    let cohort = cohort(&args.cohort, stderr)?;
    let candidates = read_candidates(&args.candidates)?;
    let ranked = rank(&candidates, &cohort, measure)?;
    let mut out = format!("rank,id,q2,q3,{measure}\n");
    for (i, e) in ranked.ranking.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            i + 1,
            csv_cell(&e.id),
            fmt_opt(e.op.q2),
            fmt_opt(e.op.q3),
            fmt_opt(e.value)
        ));
    }
    stdout.write_all(out.as_bytes())?;
    Ok(0)
}
