//! Test-only oracles, written without touching the library's judging or
//! closed-form code paths.
#![allow(dead_code)]

/// Exact joint outcome probabilities `[p_rr, p_rw, p_ww, p_wr]` under the
/// absolute rule, by summing over every possible prediction set.
///
/// Channels `0..n` are correct. Each similar pair is predicted similar with
/// probability `q2`, each dissimilar pair dissimilar with probability `q3`.
pub fn enumerate_absolute(channels: usize, correct: usize, q2: f64, q3: f64) -> [f64; 4] {
    let mut pairs = Vec::new();
    for a in 0..channels {
        for b in a + 1..channels {
            pairs.push((a, b, a < correct && b < correct));
        }
    }
    let mut out = [0.0; 4];
    for mask in 0u64..(1 << pairs.len()) {
        let mut weight = 1.0;
        let mut in_similar = vec![false; channels];
        for (i, &(a, b, truly_similar)) in pairs.iter().enumerate() {
            let predicted_similar = mask >> i & 1 == 1;
            weight *= match (truly_similar, predicted_similar) {
                (true, true) => q2,
                (true, false) => 1.0 - q2,
                (false, false) => q3,
                (false, true) => 1.0 - q3,
            };
            if predicted_similar {
                in_similar[a] = true;
                in_similar[b] = true;
            }
        }
        if weight == 0.0 {
            continue;
        }
        for (ch, judged_correct) in in_similar.iter().enumerate() {
            let idx = match (ch < correct, *judged_correct) {
                (true, true) => 0,
                (true, false) => 1,
                (false, false) => 2,
                (false, true) => 3,
            };
            out[idx] += weight / channels as f64;
        }
    }
    out
}

/// Reduced form of the incorrect-data precision, valid for `q3 > 0`.
pub fn e2_reduced(channels: usize, correct: usize, q2: f64, q3: f64) -> f64 {
    let q1 = correct as f64 / channels as f64;
    let n = correct as i32;
    (1.0 - q1) / (1.0 - q1 + q1 * (1.0 - q2).powi(n - 1) * q3.powi(1 - n))
}

/// Spec-style grid: `Q2`, `Q3` over quarters, undefined recalls dropped.
pub fn quarter_grid(channels: usize, correct: usize) -> Vec<(Option<f64>, Option<f64>)> {
    let values = [0.0, 0.25, 0.5, 0.75, 1.0];
    let q2s: Vec<Option<f64>> = if correct >= 2 {
        values.iter().map(|v| Some(*v)).collect()
    } else {
        vec![None]
    };
    let q3s: Vec<Option<f64>> = if correct < channels {
        values.iter().map(|v| Some(*v)).collect()
    } else {
        vec![None]
    };
    q2s.iter().flat_map(|q2| q3s.iter().map(move |q3| (*q2, *q3))).collect()
}
