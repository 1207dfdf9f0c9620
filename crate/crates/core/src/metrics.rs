//! External and internal clustering quality: Rand index, adjusted Rand index
//! and the silhouette score.
//!
//! Pair counts are exact integers; floating point only enters in the final
//! ratios.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::encoding::ScaledDataset;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("label vectors differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("silhouette needs at least 2 clusters, got {0}")]
    TooFewClusters(usize),
}

/// Counts of samples per (true class, predicted cluster).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub n: u64,
}

/// Exact pair counts derived from a contingency table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// Pairs together in both partitions.
    pub same_same: u64,
    /// Pairs separated in both partitions.
    pub diff_diff: u64,
    pub total: u64,
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

fn dense_ids(labels: &[usize]) -> (Vec<usize>, usize) {
    // sorted label order keeps the table layout canonical
    let distinct: BTreeSet<usize> = labels.iter().copied().collect();
    let sorted: BTreeMap<usize, usize> = distinct.into_iter().enumerate().map(|(i, l)| (l, i)).collect();
    (labels.iter().map(|l| sorted[l]).collect(), sorted.len())
}

pub fn contingency(true_labels: &[usize], pred_labels: &[usize]) -> Result<ContingencyTable, MetricsError> {
    if true_labels.len() != pred_labels.len() {
        return Err(MetricsError::LengthMismatch(true_labels.len(), pred_labels.len()));
    }
    if true_labels.len() < 2 {
        return Err(MetricsError::TooFewSamples(true_labels.len()));
    }
    let (t, r) = dense_ids(true_labels);
    let (p, s) = dense_ids(pred_labels);
    let mut counts = vec![vec![0u64; s]; r];
    for (&i, &j) in t.iter().zip(&p) {
        counts[i][j] += 1;
    }
    let row_sums = counts.iter().map(|row| row.iter().sum()).collect();
    let col_sums = (0..s).map(|j| counts.iter().map(|row| row[j]).sum()).collect();
    Ok(ContingencyTable { counts, row_sums, col_sums, n: true_labels.len() as u64 })
}

impl ContingencyTable {
    pub fn pair_counts(&self) -> PairCounts {
        let total = choose2(self.n);
        let same_same: u64 = self.counts.iter().flatten().map(|&c| choose2(c)).sum();
        let same_true: u64 = self.row_sums.iter().map(|&c| choose2(c)).sum();
        let same_pred: u64 = self.col_sums.iter().map(|&c| choose2(c)).sum();
        let diff_diff = total + same_same - same_true - same_pred;
        PairCounts { same_same, diff_diff, total }
    }
}

pub fn rand_index(t: &ContingencyTable) -> f64 {
    let p = t.pair_counts();
    (p.same_same + p.diff_diff) as f64 / p.total as f64
}

/// Chance-corrected Rand index under the hypergeometric model. Returns 1 when
/// the correction is degenerate (both partitions trivial in the same way).
pub fn adjusted_rand_index(t: &ContingencyTable) -> f64 {
    let total = choose2(t.n) as i128;
    let index: i128 = t.counts.iter().flatten().map(|&c| choose2(c) as i128).sum();
    let a: i128 = t.row_sums.iter().map(|&c| choose2(c) as i128).sum();
    let b: i128 = t.col_sums.iter().map(|&c| choose2(c) as i128).sum();
    // (index - a·b/total) / ((a + b)/2 - a·b/total), scaled by 2·total
    let num = 2 * (index * total - a * b);
    let den = (a + b) * total - 2 * a * b;
    if den == 0 {
        return 1.0;
    }
    num as f64 / den as f64
}

/// Mean silhouette coefficient with Euclidean distances on the scaled rows.
pub fn silhouette_score(data: &ScaledDataset, assignments: &[usize]) -> Result<f64, MetricsError> {
    silhouette_rows(&data.rows, assignments)
}

/// Silhouette on plain rows. Samples in singleton clusters score 0; the
/// separation term is the mean distance to the nearest other cluster.
pub fn silhouette_rows(rows: &[Vec<f64>], labels: &[usize]) -> Result<f64, MetricsError> {
    if rows.len() != labels.len() {
        return Err(MetricsError::LengthMismatch(rows.len(), labels.len()));
    }
    let (ids, k) = dense_ids(labels);
    if k < 2 {
        return Err(MetricsError::TooFewClusters(k));
    }
    let n = rows.len();
    let mut sizes = vec![0usize; k];
    for &c in &ids {
        sizes[c] += 1;
    }
    let mut total = 0.0;
    let mut sums = vec![0.0; k];
    for i in 0..n {
        sums.iter_mut().for_each(|s| *s = 0.0);
        for j in 0..n {
            if i != j {
                sums[ids[j]] += euclid(&rows[i], &rows[j]);
            }
        }
        let own = ids[i];
        if sizes[own] == 1 {
            continue;
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k).filter(|&c| c != own).map(|c| sums[c] / sizes[c] as f64).fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / n as f64)
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
