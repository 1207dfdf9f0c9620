//! MinMax scaling, quantum state encodings and feature statistics.
//!
//! Angle encoding works on the difference `x - c` of two scaled vectors: each
//! component `d` becomes the polar angle `(d + 1)π/2` of its own qubit.
//! Amplitude encoding normalizes a raw vector into the amplitudes of
//! `⌈log₂ M⌉` qubits. Hybrid encoding amplitude-encodes a chosen pair of
//! features into one qubit and angle-encodes the remaining differences.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qstate::{QStateError, QuantumState, RotationAngle, MAX_QUBITS};

/// Slack allowed on `|d| <= 1` before a difference counts as unscaled.
const DIFF_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodingError {
    #[error("dataset has no rows")]
    EmptyDataset,
    #[error("dataset has no features")]
    NoFeatures,
    #[error("row {row} has {found} features, expected {expected}")]
    RaggedRow { row: usize, found: usize, expected: usize },
    #[error("{labels} labels for {rows} rows")]
    LabelCount { rows: usize, labels: usize },
    #[error("non-finite value at row {row}, feature {feature}")]
    NonFinite { row: usize, feature: usize },
    #[error("value {value} at row {row}, feature {feature} is outside [0, 1]")]
    OutOfUnitRange { row: usize, feature: usize, value: f64 },
    #[error("unscaled difference {0} (expected within [-1, 1])")]
    UnscaledDifference(f64),
    #[error("{0} features exceed the {MAX_QUBITS}-qubit limit")]
    TooManyQubits(usize),
    #[error("unencodable zero vector")]
    ZeroVector,
    #[error("feature statistics need at least 4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("hybrid requires >=3 features, got {0}")]
    HybridTooFewFeatures(usize),
    #[error("invalid hybrid pair ({0}, {1}) for {2} features")]
    BadPair(usize, usize, usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    State(#[from] QStateError),
}

/// Unscaled feature matrix with integer class labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDataset {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub feature_names: Vec<String>,
    pub name: String,
}

impl RawDataset {
    pub fn new(
        name: impl Into<String>,
        feature_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Result<Self, EncodingError> {
        let m = check_matrix(&rows)?;
        if labels.len() != rows.len() {
            return Err(EncodingError::LabelCount { rows: rows.len(), labels: labels.len() });
        }
        if feature_names.len() != m {
            return Err(EncodingError::LengthMismatch(feature_names.len(), m));
        }
        Ok(Self { rows, labels, feature_names, name: name.into() })
    }

    pub fn n_samples(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Number of distinct label values.
    pub fn n_classes(&self) -> usize {
        count_distinct(&self.labels)
    }
}

/// Feature matrix rescaled per column into `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledDataset {
    pub rows: Vec<Vec<f64>>,
    pub per_feature_min: Vec<f64>,
    pub per_feature_max: Vec<f64>,
    pub labels: Vec<usize>,
    pub feature_names: Vec<String>,
    pub name: String,
}

impl ScaledDataset {
    /// Wraps rows that are already in `[0, 1]` (synthetic data, tests).
    /// The recorded min/max are the observed column extremes.
    pub fn from_unit_rows(rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self, EncodingError> {
        let m = check_matrix(&rows)?;
        if labels.len() != rows.len() {
            return Err(EncodingError::LabelCount { rows: rows.len(), labels: labels.len() });
        }
        for (r, row) in rows.iter().enumerate() {
            for (f, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(EncodingError::OutOfUnitRange { row: r, feature: f, value: v });
                }
            }
        }
        let (per_feature_min, per_feature_max) = column_extremes(&rows, m);
        Ok(Self {
            rows,
            per_feature_min,
            per_feature_max,
            labels,
            feature_names: (0..m).map(|i| format!("f{i}")).collect(),
            name: "synthetic".into(),
        })
    }

    pub fn n_samples(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.per_feature_min.len()
    }

    pub fn n_classes(&self) -> usize {
        count_distinct(&self.labels)
    }

    /// Per-feature spread of the unscaled data.
    pub fn raw_spread(&self) -> Vec<f64> {
        self.per_feature_max.iter().zip(&self.per_feature_min).map(|(hi, lo)| hi - lo).collect()
    }

    /// The scaled rows as a `RawDataset` (used to check idempotence).
    pub fn to_raw(&self) -> RawDataset {
        RawDataset {
            rows: self.rows.clone(),
            labels: self.labels.clone(),
            feature_names: self.feature_names.clone(),
            name: self.name.clone(),
        }
    }
}

fn count_distinct(labels: &[usize]) -> usize {
    let mut seen = labels.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn check_matrix(rows: &[Vec<f64>]) -> Result<usize, EncodingError> {
    let first = rows.first().ok_or(EncodingError::EmptyDataset)?;
    let m = first.len();
    if m == 0 {
        return Err(EncodingError::NoFeatures);
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(EncodingError::RaggedRow { row: r, found: row.len(), expected: m });
        }
        if let Some(f) = row.iter().position(|v| !v.is_finite()) {
            return Err(EncodingError::NonFinite { row: r, feature: f });
        }
    }
    Ok(m)
}

fn column_extremes(rows: &[Vec<f64>], m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for row in rows {
        for (j, &v) in row.iter().enumerate() {
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    (lo, hi)
}

/// Per-feature `(x - min) / (max - min)`. Constant features map to 0.
pub fn minmax_fit_transform(raw: &RawDataset) -> ScaledDataset {
    let m = raw.rows.first().map_or(0, Vec::len);
    let (lo, hi) = column_extremes(&raw.rows, m);
    let rows = raw
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let span = hi[j] - lo[j];
                    if span > 0.0 {
                        ((v - lo[j]) / span).clamp(0.0, 1.0)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    ScaledDataset {
        rows,
        per_feature_min: lo,
        per_feature_max: hi,
        labels: raw.labels.clone(),
        feature_names: raw.feature_names.clone(),
        name: raw.name.clone(),
    }
}

/// Maps a scaled difference `d ∈ [-1, 1]` to the polar angle `(d + 1)π/2`.
pub fn theta_from_diff(d: f64) -> Result<RotationAngle, EncodingError> {
    if !d.is_finite() || d.abs() > 1.0 + DIFF_SLACK {
        return Err(EncodingError::UnscaledDifference(d));
    }
    Ok(RotationAngle::new((d.clamp(-1.0, 1.0) + 1.0) * PI / 2.0)?)
}

/// `(cos θ/2, sin θ/2)` for a scaled difference.
pub(crate) fn qubit_amplitudes(d: f64) -> Result<(f64, f64), EncodingError> {
    let (s, c) = (theta_from_diff(d)?.radians() / 2.0).sin_cos();
    Ok((c, s))
}

fn product_state(factors: &[(f64, f64)]) -> Vec<f64> {
    let mut amps = vec![1.0];
    for &(a0, a1) in factors {
        amps = amps.iter().flat_map(|&p| [p * a0, p * a1]).collect();
    }
    amps
}

fn real_state(amps: Vec<f64>) -> Result<QuantumState, EncodingError> {
    Ok(QuantumState::from_amplitudes(amps.into_iter().map(|a| Complex64::new(a, 0.0)).collect())?)
}

/// Angle encoding of a difference vector: `⊗ R_y(θ_k)|0⟩`.
pub fn encode_angle(diff: &[f64]) -> Result<QuantumState, EncodingError> {
    if diff.is_empty() {
        return Err(EncodingError::NoFeatures);
    }
    if diff.len() > MAX_QUBITS {
        return Err(EncodingError::TooManyQubits(diff.len()));
    }
    let factors = diff.iter().map(|&d| qubit_amplitudes(d)).collect::<Result<Vec<_>, _>>()?;
    real_state(product_state(&factors))
}

/// Amplitude encoding: zero-pad to the next power of two (at least 2) and
/// L2-normalize.
pub fn encode_amplitude(v: &[f64]) -> Result<QuantumState, EncodingError> {
    if v.is_empty() {
        return Err(EncodingError::NoFeatures);
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(EncodingError::ZeroVector);
    }
    let dim = v.len().next_power_of_two().max(2);
    if dim.trailing_zeros() as usize > MAX_QUBITS {
        return Err(EncodingError::TooManyQubits(dim.trailing_zeros() as usize));
    }
    let mut amps: Vec<f64> = v.iter().map(|x| x / norm).collect();
    amps.resize(dim, 0.0);
    real_state(amps)
}

/// Hybrid encoding of one operand: qubit 0 holds the normalized pair
/// `(x[p0], x[p1])`, the remaining qubits angle-encode `diff` (the
/// differences of the non-pair features).
pub fn encode_hybrid(x: &[f64], pair: (usize, usize), diff: &[f64]) -> Result<QuantumState, EncodingError> {
    let (p0, p1) = pair;
    if p0 == p1 || p0 >= x.len() || p1 >= x.len() {
        return Err(EncodingError::BadPair(p0, p1, x.len()));
    }
    if 1 + diff.len() > MAX_QUBITS {
        return Err(EncodingError::TooManyQubits(1 + diff.len()));
    }
    let (a, b) = (x[p0], x[p1]);
    let norm = a.hypot(b);
    if norm == 0.0 {
        return Err(EncodingError::ZeroVector);
    }
    let mut factors = Vec::with_capacity(1 + diff.len());
    factors.push((a / norm, b / norm));
    for &d in diff {
        factors.push(qubit_amplitudes(d)?);
    }
    real_state(product_state(&factors))
}

/// Indices of the features not in `pair`, ascending.
pub fn hybrid_rest(m: usize, pair: (usize, usize)) -> Vec<usize> {
    (0..m).filter(|&i| i != pair.0 && i != pair.1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingKind {
    #[default]
    Angle,
    Amplitude,
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingStat {
    Spread,
    Skewness,
    #[default]
    Kurtosis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingDirection {
    #[default]
    Ascending,
    Descending,
}

/// Encoding choice. The ordering fields only matter for `Hybrid`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct EncodingConfig {
    pub kind: EncodingKind,
    pub ordering_stat: OrderingStat,
    pub ordering_direction: OrderingDirection,
}

impl EncodingConfig {
    pub fn hybrid(ordering_stat: OrderingStat, ordering_direction: OrderingDirection) -> Self {
        Self { kind: EncodingKind::Hybrid, ordering_stat, ordering_direction }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureStats {
    /// `max - min` of the unscaled feature.
    pub spread: f64,
    pub variance: f64,
    pub skewness: f64,
    /// Excess kurtosis.
    pub kurtosis: f64,
}

impl FeatureStats {
    pub fn get(&self, stat: OrderingStat) -> f64 {
        match stat {
            OrderingStat::Spread => self.spread,
            OrderingStat::Skewness => self.skewness,
            OrderingStat::Kurtosis => self.kurtosis,
        }
    }
}

/// Population-moment statistics per feature. Spread comes from the unscaled
/// extremes; the moments are taken on the scaled values. A constant feature
/// has zero skewness and kurtosis.
pub fn feature_stats(scaled: &ScaledDataset) -> Result<Vec<FeatureStats>, EncodingError> {
    let n = scaled.n_samples();
    if n < 4 {
        return Err(EncodingError::TooFewSamples(n));
    }
    let spread = scaled.raw_spread();
    let stats = (0..scaled.n_features())
        .map(|j| {
            let col: Vec<f64> = scaled.rows.iter().map(|r| r[j]).collect();
            let (m2, m3, m4) = central_moments(&col);
            let (skewness, kurtosis) = if m2 > 0.0 { (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0) } else { (0.0, 0.0) };
            FeatureStats { spread: spread[j], variance: m2, skewness, kurtosis }
        })
        .collect();
    Ok(stats)
}

fn central_moments(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (m2 / n, m3 / n, m4 / n)
}

/// The two features ranked first under the configured statistic and
/// direction; ties go to the lower index.
pub fn select_hybrid_pair(stats: &[FeatureStats], config: &EncodingConfig) -> Result<(usize, usize), EncodingError> {
    if stats.len() < 3 {
        return Err(EncodingError::HybridTooFewFeatures(stats.len()));
    }
    let mut order: Vec<usize> = (0..stats.len()).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (stats[a].get(config.ordering_stat), stats[b].get(config.ordering_stat));
        let primary = match config.ordering_direction {
            OrderingDirection::Ascending => ka.total_cmp(&kb),
            OrderingDirection::Descending => kb.total_cmp(&ka),
        };
        primary.then(a.cmp(&b))
    });
    Ok((order[0], order[1]))
}
