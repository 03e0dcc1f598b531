//! Per-cell statistics and the Wilcoxon signed-rank test.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::benchmarks::registry_index;
use crate::error::{Error, Result};
use crate::harness::record::RunRecord;

/// Largest effective sample size handled by the exact permutation
/// distribution; larger samples use the normal approximation.
pub const EXACT_LIMIT: usize = 25;

/// Default significance level for declaring a winner.
pub const DEFAULT_ALPHA: f64 = 0.05;

/// Two-sided Wilcoxon signed-rank p-value for paired samples `a`, `b`.
///
/// Conventions: zero differences are dropped; tied absolute differences
/// receive average ranks; the exact permutation distribution is used for
/// up to [`EXACT_LIMIT`] non-zero differences and a normal approximation
/// with continuity and tie corrections above that.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::ShapeMismatch {
            expected: 1,
            actual: 0,
        });
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Err(Error::DegenerateSample);
    }
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&magnitudes);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    let n = diffs.len();
    let total = (n * (n + 1) / 2) as f64;
    let w = w_plus.min(total - w_plus);
    if n <= EXACT_LIMIT {
        Ok(exact_two_sided_p(&ranks, w))
    } else {
        Ok(normal_two_sided_p(&magnitudes, &ranks, w))
    }
}

/// Average ranks (1-based) of `values`, ties sharing their mean rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // ranks start+1 ..= end, averaged
        let average = (start + 1 + end) as f64 / 2.0;
        for &index in &order[start..end] {
            ranks[index] = average;
        }
        start = end;
    }
    ranks
}

/// Exact two-sided p-value: twice the null probability that the positive
/// rank sum is at most `w`, over all `2^n` equally likely sign
/// assignments, capped at 1.
///
/// Ranks are doubled to integers (average ranks are multiples of 1/2) and
/// the distribution of achievable sums is counted with subset-sum dynamic
/// programming, which reproduces full enumeration bit for bit.
fn exact_two_sided_p(ranks: &[f64], w: f64) -> f64 {
    let scaled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = scaled.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    for &r in &scaled {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let w_scaled = ((2.0 * w).round() as usize).min(total);
    let at_most: u64 = counts[..=w_scaled].iter().sum();
    let assignments = (1u64 << ranks.len()) as f64;
    (2.0 * at_most as f64 / assignments).min(1.0)
}

/// Normal approximation with continuity correction and the usual tie
/// correction of the variance.
fn normal_two_sided_p(magnitudes: &[f64], ranks: &[f64], w: f64) -> f64 {
    debug_assert_eq!(magnitudes.len(), ranks.len());
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut tie_term = 0.0;
    let mut sorted = magnitudes.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite values"));
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len() && sorted[end] == sorted[start] {
            end += 1;
        }
        let t = (end - start) as f64;
        tie_term += t * t * t - t;
        start = end;
    }
    let variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if variance <= 0.0 {
        return 1.0;
    }
    let z = (w - mean + 0.5) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * normal.cdf(z)).min(1.0)
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

/// Welford's algorithm; `std` is the sample standard deviation, 0 for a
/// single observation.
pub fn mean_std(values: &[f64]) -> MeanStd {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &value) in values.iter().enumerate() {
        let delta = value - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (value - mean);
    }
    let std = if values.len() > 1 {
        (m2 / (values.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    MeanStd { mean, std }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Qpso,
    Lio,
    Tie,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Winner::Qpso => write!(f, "qpso"),
            Winner::Lio => write!(f, "lio"),
            Winner::Tie => write!(f, "tie"),
        }
    }
}

/// Aggregated statistics of one (function, dimension) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub function: String,
    pub n: usize,
    pub runs: usize,
    pub baseline: MeanStd,
    pub refined: MeanStd,
    pub p_star: MeanStd,
    pub qpso_time_s: MeanStd,
    pub lio_time_s: MeanStd,
    /// Two-sided signed-rank p-value of baseline vs refined fitness;
    /// 1.0 when every paired difference is zero.
    pub wilcoxon_p: f64,
    pub winner: Winner,
}

/// [`aggregate_with_alpha`] at the default 0.05 significance level.
pub fn aggregate(records: &[RunRecord]) -> Result<Vec<CellStats>> {
    aggregate_with_alpha(records, DEFAULT_ALPHA)
}

/// Groups records into (function, n) cells and summarizes each one.
///
/// Cells must be complete: every cell must hold as many records as the
/// fullest one. Records are sorted by seed within a cell, so the output is
/// independent of input order. The winner is the side with the lower mean
/// fitness when the signed-rank test is significant at `alpha`, otherwise
/// a tie (a degenerate test — all differences zero — is a tie as well).
pub fn aggregate_with_alpha(records: &[RunRecord], alpha: f64) -> Result<Vec<CellStats>> {
    let mut cells: BTreeMap<(String, usize), Vec<&RunRecord>> = BTreeMap::new();
    for record in records {
        cells
            .entry((record.function.clone(), record.n))
            .or_default()
            .push(record);
    }
    let expected = cells.values().map(Vec::len).max().unwrap_or(0);
    let mut out = Vec::with_capacity(cells.len());
    for ((function, n), mut cell) in cells {
        if cell.len() < expected {
            return Err(Error::IncompleteCell {
                function,
                n,
                got: cell.len(),
                expected,
            });
        }
        cell.sort_by_key(|r| r.seed);
        let baseline: Vec<f64> = cell.iter().map(|r| r.baseline_fitness).collect();
        let refined: Vec<f64> = cell.iter().map(|r| r.refined_fitness).collect();
        let p_star: Vec<f64> = cell.iter().map(|r| r.p_star).collect();
        let qpso_time: Vec<f64> = cell.iter().map(|r| r.qpso_time_s).collect();
        let lio_time: Vec<f64> = cell.iter().map(|r| r.lio_time_s).collect();
        let wilcoxon_p = match wilcoxon_signed_rank(&baseline, &refined) {
            Ok(p) => p,
            Err(Error::DegenerateSample) => 1.0,
            Err(other) => return Err(other),
        };
        let baseline = mean_std(&baseline);
        let refined = mean_std(&refined);
        let winner = if wilcoxon_p < alpha {
            if refined.mean < baseline.mean {
                Winner::Lio
            } else if baseline.mean < refined.mean {
                Winner::Qpso
            } else {
                Winner::Tie
            }
        } else {
            Winner::Tie
        };
        out.push(CellStats {
            function,
            n,
            runs: cell.len(),
            baseline,
            refined,
            p_star: mean_std(&p_star),
            qpso_time_s: mean_std(&qpso_time),
            lio_time_s: mean_std(&lio_time),
            wilcoxon_p,
            winner,
        });
    }
    // Canonical report order: registry order, then dimension.
    out.sort_by(|a, b| {
        let ka = (registry_index(&a.function).unwrap_or(usize::MAX), a.n);
        let kb = (registry_index(&b.function).unwrap_or(usize::MAX), b.n);
        ka.cmp(&kb).then_with(|| a.function.cmp(&b.function))
    });
    Ok(out)
}
