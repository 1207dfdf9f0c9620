//! Lloyd-style k-means with a pluggable assignment metric.
//!
//! Centroids are always classical means of their members; only the
//! assignment phase changes between modes. A run stops once the largest
//! centroid displacement has stayed below `tol` for `patience` consecutive
//! iterations (any violation resets the count), or after `max_iter`
//! iterations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::{euclidean_distance, DistanceError, DistanceForm, DistanceMode, Metric};
use crate::encoding::{feature_stats, select_hybrid_pair, EncodingConfig, EncodingError, ScaledDataset};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClusteringError {
    #[error("k must be positive")]
    ZeroK,
    #[error("k = {k} exceeds the {n} available samples")]
    KTooLarge { k: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("centroid matrix has shape {rows}x{cols}, expected {k}x{m}")]
    CentroidShape { rows: usize, cols: usize, k: usize, m: usize },
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InitStrategy {
    /// `k` distinct rows drawn uniformly.
    Random,
    /// First row uniform, then each next row drawn with probability
    /// proportional to its squared configured distance to the nearest chosen
    /// centroid.
    #[default]
    QuantumInspired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iter: usize,
    pub patience: usize,
    pub tol: f64,
    pub mode: DistanceMode,
    pub encoding: EncodingConfig,
    pub distance_form: DistanceForm,
    pub seed: u64,
    pub init: InitStrategy,
}

impl KMeansConfig {
    pub fn new(k: usize, mode: DistanceMode) -> Self {
        Self {
            k,
            max_iter: 300,
            patience: 3,
            tol: 1e-4,
            mode,
            encoding: EncodingConfig::default(),
            distance_form: DistanceForm::default(),
            seed: 0,
            init: InitStrategy::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_init(mut self, init: InitStrategy) -> Self {
        self.init = init;
        self
    }

    pub fn with_form(mut self, form: DistanceForm) -> Self {
        self.distance_form = form;
        self
    }

    pub fn with_encoding(mut self, encoding: EncodingConfig) -> Self {
        self.encoding = encoding;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_patience(mut self, patience: usize) -> Self {
        self.patience = patience;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self, n: usize) -> Result<(), ClusteringError> {
        if self.k == 0 {
            return Err(ClusteringError::ZeroK);
        }
        if self.k > n {
            return Err(ClusteringError::KTooLarge { k: self.k, n });
        }
        if self.max_iter == 0 {
            return Err(ClusteringError::InvalidConfig("max_iter must be positive".into()));
        }
        if self.patience == 0 {
            return Err(ClusteringError::InvalidConfig("patience must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(ClusteringError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub n_iterations: usize,
    /// Within-cluster SSE after each centroid update.
    pub sse_trace: Vec<f64>,
    pub converged: bool,
    /// The feature pair used by hybrid mode, if any.
    pub hybrid_pair: Option<(usize, usize)>,
}

impl ClusteringResult {
    pub fn final_sse(&self) -> f64 {
        self.sse_trace.last().copied().unwrap_or(f64::NAN)
    }
}

/// Resolves the assignment metric for a dataset, computing the hybrid
/// feature pair from its statistics when needed.
pub fn resolve_metric(data: &ScaledDataset, cfg: &KMeansConfig) -> Result<Metric, ClusteringError> {
    let pair = match cfg.mode {
        DistanceMode::QuantumHybrid => Some(select_hybrid_pair(&feature_stats(data)?, &cfg.encoding)?),
        _ => None,
    };
    Ok(Metric { mode: cfg.mode, form: cfg.distance_form, pair })
}

/// Index of the closest centroid under `metric`; ties go to the lower index.
fn nearest(metric: &Metric, x: &[f64], centroids: &[Vec<f64>]) -> Result<(usize, f64), DistanceError> {
    let mut best = (0, f64::INFINITY);
    for (i, c) in centroids.iter().enumerate() {
        let d = metric.distance(x, c)?;
        if d < best.1 {
            best = (i, d);
        }
    }
    Ok(best)
}

pub fn assign_with_metric(
    rows: &[Vec<f64>],
    centroids: &[Vec<f64>],
    metric: &Metric,
) -> Result<Vec<usize>, ClusteringError> {
    rows.iter().map(|x| nearest(metric, x, centroids).map(|(i, _)| i).map_err(Into::into)).collect()
}

/// Assigns every row to its nearest centroid under the configured metric.
pub fn assign_clusters(
    data: &ScaledDataset,
    centroids: &[Vec<f64>],
    cfg: &KMeansConfig,
) -> Result<Vec<usize>, ClusteringError> {
    check_centroids(centroids, centroids.len(), data.n_features())?;
    let metric = resolve_metric(data, cfg)?;
    assign_with_metric(&data.rows, centroids, &metric)
}

/// Mean of each cluster's members; an empty cluster keeps its previous
/// centroid.
pub fn update_centroids(data: &ScaledDataset, assignments: &[usize], k: usize, previous: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = data.n_features();
    let mut sums = vec![vec![0.0; m]; k];
    let mut counts = vec![0usize; k];
    for (row, &a) in data.rows.iter().zip(assignments) {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(row) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(counts)
        .enumerate()
        .map(
            |(i, (sum, count))| {
                if count > 0 {
                    sum.into_iter().map(|s| s / count as f64).collect()
                } else {
                    previous[i].clone()
                }
            },
        )
        .collect()
}

/// Within-cluster sum of squared Euclidean distances.
pub fn sse(data: &ScaledDataset, assignments: &[usize], centroids: &[Vec<f64>]) -> f64 {
    data.rows
        .iter()
        .zip(assignments)
        .map(|(row, &a)| row.iter().zip(&centroids[a]).map(|(x, c)| (x - c) * (x - c)).sum::<f64>())
        .sum()
}

/// `k` distinct rows drawn uniformly without replacement.
pub fn random_init<R: Rng + ?Sized>(
    data: &ScaledDataset,
    k: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>, ClusteringError> {
    let n = data.n_samples();
    if k == 0 {
        return Err(ClusteringError::ZeroK);
    }
    if k > n {
        return Err(ClusteringError::KTooLarge { k, n });
    }
    Ok(rand::seq::index::sample(rng, n, k).into_iter().map(|i| data.rows[i].clone()).collect())
}

/// Distance-weighted seeding with the configured metric.
///
/// Rows already chosen, and rows identical to a chosen centroid, get weight
/// zero. When every remaining weight is zero the next centroid is drawn
/// uniformly from the remaining distinct rows.
pub fn quantum_inspired_init<R: Rng + ?Sized>(
    data: &ScaledDataset,
    cfg: &KMeansConfig,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>, ClusteringError> {
    let metric = resolve_metric(data, cfg)?;
    seed_weighted(data, cfg.k, &metric, rng)
}

fn seed_weighted<R: Rng + ?Sized>(
    data: &ScaledDataset,
    k: usize,
    metric: &Metric,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>, ClusteringError> {
    let n = data.n_samples();
    if k == 0 {
        return Err(ClusteringError::ZeroK);
    }
    if k > n {
        return Err(ClusteringError::KTooLarge { k, n });
    }
    let rows = &data.rows;
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![rows[first].clone()];
    // nearest[i] = distance from row i to its closest chosen centroid
    let mut nearest_d: Vec<f64> = rows.iter().map(|x| metric.distance(x, &centroids[0])).collect::<Result<_, _>>()?;

    while centroids.len() < k {
        let eligible: Vec<usize> = (0..n).filter(|&i| !chosen[i] && !centroids.iter().any(|c| c == &rows[i])).collect();
        let pick = if eligible.is_empty() {
            // fewer than k distinct rows: fall back to any unchosen row
            let rest: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            rest[rng.random_range(0..rest.len())]
        } else {
            let weights: Vec<f64> = eligible.iter().map(|&i| nearest_d[i] * nearest_d[i]).collect();
            let total: f64 = weights.iter().sum();
            if total > 0.0 && total.is_finite() {
                let mut target = rng.random::<f64>() * total;
                let mut pick = *eligible.last().unwrap();
                for (&i, &w) in eligible.iter().zip(&weights) {
                    if w > 0.0 && target < w {
                        pick = i;
                        break;
                    }
                    target -= w;
                }
                pick
            } else {
                eligible[rng.random_range(0..eligible.len())]
            }
        };
        chosen[pick] = true;
        centroids.push(rows[pick].clone());
        let newest = centroids.last().unwrap();
        for (i, x) in rows.iter().enumerate() {
            let d = metric.distance(x, newest)?;
            if d < nearest_d[i] {
                nearest_d[i] = d;
            }
        }
    }
    Ok(centroids)
}

fn check_centroids(centroids: &[Vec<f64>], k: usize, m: usize) -> Result<(), ClusteringError> {
    let cols = centroids.first().map_or(0, Vec::len);
    if centroids.is_empty() || centroids.len() != k || centroids.iter().any(|c| c.len() != m) {
        return Err(ClusteringError::CentroidShape { rows: centroids.len(), cols, k, m });
    }
    Ok(())
}

/// Runs k-means from the configured initialization, seeded by `cfg.seed`.
pub fn kmeans_run(data: &ScaledDataset, cfg: &KMeansConfig) -> Result<ClusteringResult, ClusteringError> {
    cfg.validate(data.n_samples())?;
    let metric = resolve_metric(data, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let initial = match cfg.init {
        InitStrategy::Random => random_init(data, cfg.k, &mut rng)?,
        InitStrategy::QuantumInspired => seed_weighted(data, cfg.k, &metric, &mut rng)?,
    };
    iterate(data, cfg, metric, initial)
}

/// Runs k-means from caller-supplied initial centroids.
pub fn kmeans_run_from(
    data: &ScaledDataset,
    cfg: &KMeansConfig,
    initial: Vec<Vec<f64>>,
) -> Result<ClusteringResult, ClusteringError> {
    cfg.validate(data.n_samples())?;
    check_centroids(&initial, cfg.k, data.n_features())?;
    let metric = resolve_metric(data, cfg)?;
    iterate(data, cfg, metric, initial)
}

fn iterate(
    data: &ScaledDataset,
    cfg: &KMeansConfig,
    metric: Metric,
    mut centroids: Vec<Vec<f64>>,
) -> Result<ClusteringResult, ClusteringError> {
    let mut assignments = Vec::new();
    let mut sse_trace = Vec::new();
    let mut streak = 0;
    let mut converged = false;
    let mut n_iterations = 0;

    while n_iterations < cfg.max_iter {
        n_iterations += 1;
        assignments = assign_with_metric(&data.rows, &centroids, &metric)?;
        let updated = update_centroids(data, &assignments, cfg.k, &centroids);
        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| euclidean_distance(a, b))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))?;
        centroids = updated;
        sse_trace.push(sse(data, &assignments, &centroids));
        if shift < cfg.tol {
            streak += 1;
            if streak >= cfg.patience {
                converged = true;
                break;
            }
        } else {
            streak = 0;
        }
    }

    Ok(ClusteringResult { assignments, centroids, n_iterations, sse_trace, converged, hybrid_pair: metric.pair })
}
