//! Fidelities between encoded vectors and the distances built from them.
//!
//! Every closed form here has an explicit-statevector counterpart:
//! [`fidelity_oracle`] applied to the states produced by the encoders in
//! [`crate::encoding`]. Angle and hybrid fidelities are asymmetric in
//! `(x, c)` because the encoded difference `x - c` is mapped onto
//! `[0, π]` with `d = -1` as the identity rotation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{qubit_amplitudes, EncodingError};
use crate::qstate::{inner_product, QStateError, QuantumState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistanceError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("hybrid mode needs a feature pair")]
    MissingPair,
    #[error("{0:?} is not a quantum distance mode")]
    NotQuantum(DistanceMode),
    #[error("fidelity is not finite: {0}")]
    NonFinite(f64),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    State(#[from] QStateError),
}

/// Pure-state fidelity, clamped into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Fidelity(f64);

impl Fidelity {
    pub fn new(value: f64) -> Result<Self, DistanceError> {
        if value.is_nan() {
            return Err(DistanceError::NonFinite(value));
        }
        Ok(Self(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMode {
    ClassicalEuclidean,
    QuantumAngle,
    QuantumAmplitude,
    QuantumHybrid,
}

impl DistanceMode {
    pub fn is_quantum(self) -> bool {
        !matches!(self, DistanceMode::ClassicalEuclidean)
    }
}

/// How a fidelity is turned into an assignment distance in quantum modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceForm {
    /// `2 · F · ‖x − c‖`
    #[default]
    Weighted,
    /// `2 · (1 − F) · ‖x − c‖`
    WeightedDissim,
    /// `√(2 − 2√F)`
    Bures,
    /// `√(1 − F)`
    Trace,
}

fn check_len(x: &[f64], c: &[f64]) -> Result<(), DistanceError> {
    if x.len() != c.len() {
        return Err(DistanceError::LengthMismatch(x.len(), c.len()));
    }
    Ok(())
}

/// `Π_k cos²(θ_k / 2)` with `θ_k = ((x_k − c_k) + 1)π/2`: the overlap of the
/// angle-encoded difference with `|0…0⟩`.
pub fn fidelity_angle(x: &[f64], c: &[f64]) -> Result<Fidelity, DistanceError> {
    check_len(x, c)?;
    Fidelity::new(angle_product(x.iter().zip(c).map(|(a, b)| a - b))?)
}

fn angle_product(diffs: impl Iterator<Item = f64>) -> Result<f64, DistanceError> {
    let mut f = 1.0;
    for d in diffs {
        let (cos_half, _) = qubit_amplitudes(d)?;
        f *= cos_half * cos_half;
    }
    Ok(f)
}

/// Squared cosine similarity. If either operand is all-zero the fidelity is
/// 1 when both are, 0 otherwise.
pub fn fidelity_amplitude(x: &[f64], c: &[f64]) -> Result<Fidelity, DistanceError> {
    check_len(x, c)?;
    let dot: f64 = x.iter().zip(c).map(|(a, b)| a * b).sum();
    let nx: f64 = x.iter().map(|a| a * a).sum();
    let nc: f64 = c.iter().map(|a| a * a).sum();
    let f = match (nx == 0.0, nc == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        (false, false) => (dot * dot) / (nx * nc),
    };
    Fidelity::new(f)
}

/// Amplitude overlap of the pair slices times the angle fidelity of the
/// remaining features.
pub fn fidelity_hybrid(x: &[f64], c: &[f64], pair: (usize, usize)) -> Result<Fidelity, DistanceError> {
    check_len(x, c)?;
    let (p0, p1) = pair;
    if p0 == p1 || p0 >= x.len() || p1 >= x.len() {
        return Err(EncodingError::BadPair(p0, p1, x.len()).into());
    }
    let pair_f = fidelity_amplitude(&[x[p0], x[p1]], &[c[p0], c[p1]])?.value();
    let rest = (0..x.len()).filter(|&i| i != p0 && i != p1).map(|i| x[i] - c[i]);
    Fidelity::new(pair_f * angle_product(rest)?)
}

/// `|⟨a|b⟩|²` on explicit statevectors.
pub fn fidelity_oracle(a: &QuantumState, b: &QuantumState) -> Result<Fidelity, DistanceError> {
    Fidelity::new(inner_product(a, b)?.norm_sqr())
}

/// Probability of reading the swap-test ancilla as `|0⟩`.
pub fn swap_test_p0(f: Fidelity) -> f64 {
    (1.0 + f.value()) / 2.0
}

pub fn bures_distance(f: Fidelity) -> f64 {
    (2.0 - 2.0 * f.value().sqrt()).max(0.0).sqrt()
}

/// Trace distance between two pure states with fidelity `f`.
pub fn trace_distance_pure(f: Fidelity) -> f64 {
    (1.0 - f.value()).max(0.0).sqrt()
}

pub fn euclidean_distance(x: &[f64], c: &[f64]) -> Result<f64, DistanceError> {
    check_len(x, c)?;
    Ok(x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

/// Fidelity between data vector `x` and centroid `c` under a quantum mode.
pub fn fidelity(
    x: &[f64],
    c: &[f64],
    mode: DistanceMode,
    pair: Option<(usize, usize)>,
) -> Result<Fidelity, DistanceError> {
    match mode {
        DistanceMode::ClassicalEuclidean => Err(DistanceError::NotQuantum(mode)),
        DistanceMode::QuantumAngle => fidelity_angle(x, c),
        DistanceMode::QuantumAmplitude => fidelity_amplitude(x, c),
        DistanceMode::QuantumHybrid => fidelity_hybrid(x, c, pair.ok_or(DistanceError::MissingPair)?),
    }
}

/// `2 · F(x, c) · ‖x − c‖`.
pub fn quantum_distance(
    x: &[f64],
    c: &[f64],
    mode: DistanceMode,
    pair: Option<(usize, usize)>,
) -> Result<f64, DistanceError> {
    let f = fidelity(x, c, mode, pair)?;
    Ok(2.0 * f.value() * euclidean_distance(x, c)?)
}

/// A fully resolved assignment metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metric {
    pub mode: DistanceMode,
    pub form: DistanceForm,
    pub pair: Option<(usize, usize)>,
}

impl Metric {
    pub fn euclidean() -> Self {
        Self { mode: DistanceMode::ClassicalEuclidean, form: DistanceForm::Weighted, pair: None }
    }

    /// Distance from data vector `x` to centroid `c`. The form is ignored in
    /// classical mode.
    pub fn distance(&self, x: &[f64], c: &[f64]) -> Result<f64, DistanceError> {
        if !self.mode.is_quantum() {
            return euclidean_distance(x, c);
        }
        let f = fidelity(x, c, self.mode, self.pair)?;
        Ok(match self.form {
            DistanceForm::Weighted => 2.0 * f.value() * euclidean_distance(x, c)?,
            DistanceForm::WeightedDissim => 2.0 * (1.0 - f.value()) * euclidean_distance(x, c)?,
            DistanceForm::Bures => bures_distance(f),
            DistanceForm::Trace => trace_distance_pure(f),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{encode_amplitude, encode_angle, encode_hybrid, hybrid_rest};
    use crate::qstate::zero_state;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fid(v: f64) -> Fidelity {
        Fidelity::new(v).unwrap()
    }

    #[test]
    fn fidelity_clamps_and_rejects_nan() {
        assert_eq!(fid(1.0 + 1e-12).value(), 1.0);
        assert_eq!(fid(-1e-15).value(), 0.0);
        assert!(Fidelity::new(f64::NAN).is_err());
    }

    #[test]
    fn angle_examples() {
        assert!((fidelity_angle(&[0.3], &[0.3]).unwrap().value() - 0.5).abs() < 1e-15);
        assert!((fidelity_angle(&[0.0, 0.0], &[1.0, 1.0]).unwrap().value() - 1.0).abs() < 1e-15);
        assert!(fidelity_angle(&[1.0, 0.2], &[0.0, 0.2]).unwrap().value() < 1e-30);
        assert_eq!(fidelity_angle(&[0.0], &[0.0, 1.0]), Err(DistanceError::LengthMismatch(1, 2)));
    }

    #[test]
    fn angle_fidelity_is_asymmetric() {
        let xc = fidelity_angle(&[1.0], &[0.0]).unwrap().value();
        let cx = fidelity_angle(&[0.0], &[1.0]).unwrap().value();
        assert!(xc < 1e-30);
        assert!((cx - 1.0).abs() < 1e-15);
        assert_ne!(xc, cx);
    }

    #[test]
    fn amplitude_examples() {
        assert!((fidelity_amplitude(&[0.2, 0.7], &[0.2, 0.7]).unwrap().value() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity_amplitude(&[1.0, 0.0], &[0.0, 1.0]).unwrap().value(), 0.0);
        assert!((fidelity_amplitude(&[1.0, 1.0], &[1.0, 0.0]).unwrap().value() - 0.5).abs() < 1e-15);
        // zero-vector rule
        assert_eq!(fidelity_amplitude(&[0.0, 0.0], &[0.0, 0.0]).unwrap().value(), 1.0);
        assert_eq!(fidelity_amplitude(&[0.0, 0.0], &[0.5, 0.0]).unwrap().value(), 0.0);
    }

    #[test]
    fn hybrid_examples() {
        let x = [0.4, 0.8, 0.1];
        assert!((fidelity_hybrid(&x, &x, (0, 1)).unwrap().value() - 0.5).abs() < 1e-15);
        assert_eq!(fidelity_hybrid(&[1.0, 0.0, 0.5], &[0.0, 1.0, 0.1], (0, 1)).unwrap().value(), 0.0);
        assert!(fidelity_hybrid(&[0.5, 0.5, 1.0], &[0.5, 0.5, 0.0], (0, 1)).unwrap().value() < 1e-30);
        // zero pair slices on both sides count as identical
        let f = fidelity_hybrid(&[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0], (0, 1)).unwrap().value();
        assert!((f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hybrid_requires_valid_pair() {
        assert!(matches!(
            fidelity_hybrid(&[0.1, 0.2, 0.3], &[0.1, 0.2, 0.3], (0, 3)),
            Err(DistanceError::Encoding(EncodingError::BadPair(0, 3, 3)))
        ));
        assert_eq!(
            quantum_distance(&[0.1; 3], &[0.2; 3], DistanceMode::QuantumHybrid, None),
            Err(DistanceError::MissingPair)
        );
    }

    #[test]
    fn derived_maps() {
        assert_eq!(swap_test_p0(fid(1.0)), 1.0);
        assert_eq!(swap_test_p0(fid(0.0)), 0.5);
        assert_eq!(swap_test_p0(fid(0.5)), 0.75);
        assert_eq!(bures_distance(fid(1.0)), 0.0);
        assert!((bures_distance(fid(0.0)) - 2f64.sqrt()).abs() < 1e-15);
        assert!((bures_distance(fid(0.25)) - 1.0).abs() < 1e-15);
        assert_eq!(trace_distance_pure(fid(1.0)), 0.0);
        assert_eq!(trace_distance_pure(fid(0.0)), 1.0);
        assert!((trace_distance_pure(fid(0.75)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bures_strictly_decreasing_on_grid() {
        let values: Vec<f64> = (0..=100).map(|i| bures_distance(fid(i as f64 / 100.0))).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean_distance(&[0.3, 0.1], &[0.3, 0.1]).unwrap(), 0.0);
        assert_eq!(euclidean_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert!(euclidean_distance(&[0.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn quantum_distance_examples() {
        let x = [0.2, 0.9];
        for mode in [DistanceMode::QuantumAngle, DistanceMode::QuantumAmplitude] {
            assert_eq!(quantum_distance(&x, &x, mode, None).unwrap(), 0.0);
        }
        assert_eq!(quantum_distance(&x, &x, DistanceMode::QuantumHybrid, Some((0, 1))).unwrap(), 0.0);
        assert!(quantum_distance(&[1.0], &[0.0], DistanceMode::QuantumAngle, None).unwrap() < 1e-15);
        assert!((quantum_distance(&[0.0], &[1.0], DistanceMode::QuantumAngle, None).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(quantum_distance(&[1.0, 0.0], &[0.0, 1.0], DistanceMode::QuantumAmplitude, None).unwrap(), 0.0);
        assert_eq!(
            quantum_distance(&x, &x, DistanceMode::ClassicalEuclidean, None),
            Err(DistanceError::NotQuantum(DistanceMode::ClassicalEuclidean))
        );
    }

    #[test]
    fn metric_forms() {
        let x = [0.6, 0.2];
        let c = [0.1, 0.4];
        let f = fidelity_angle(&x, &c).unwrap();
        let d = euclidean_distance(&x, &c).unwrap();
        let metric = |form| Metric { mode: DistanceMode::QuantumAngle, form, pair: None };
        assert_eq!(metric(DistanceForm::Weighted).distance(&x, &c).unwrap(), 2.0 * f.value() * d);
        assert_eq!(metric(DistanceForm::WeightedDissim).distance(&x, &c).unwrap(), 2.0 * (1.0 - f.value()) * d);
        assert_eq!(metric(DistanceForm::Bures).distance(&x, &c).unwrap(), bures_distance(f));
        assert_eq!(metric(DistanceForm::Trace).distance(&x, &c).unwrap(), trace_distance_pure(f));
        assert_eq!(Metric::euclidean().distance(&x, &c).unwrap(), d);
    }

    fn unit_vec(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
        (0..m).map(|_| rng.random::<f64>()).collect()
    }

    #[test]
    fn fidelities_stay_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..10_000 {
            let m = 3 + i % 6;
            let x = unit_vec(&mut rng, m);
            let c = unit_vec(&mut rng, m);
            for f in [
                fidelity_angle(&x, &c).unwrap(),
                fidelity_amplitude(&x, &c).unwrap(),
                fidelity_hybrid(&x, &c, (m - 1, 0)).unwrap(),
            ] {
                assert!((0.0..=1.0).contains(&f.value()));
            }
        }
    }

    proptest! {
        #[test]
        fn angle_matches_oracle(
            xc in proptest::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..8),
        ) {
            let (x, c): (Vec<f64>, Vec<f64>) = xc.into_iter().unzip();
            let diff: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
            let state = encode_angle(&diff).unwrap();
            let oracle = fidelity_oracle(&zero_state(x.len()).unwrap(), &state).unwrap();
            prop_assert!((fidelity_angle(&x, &c).unwrap().value() - oracle.value()).abs() <= 1e-12);
        }

        #[test]
        fn amplitude_matches_oracle(
            xc in proptest::collection::vec((0.01f64..=1.0, 0.0f64..=1.0), 1..10),
        ) {
            let (x, c): (Vec<f64>, Vec<f64>) = xc.into_iter().unzip();
            prop_assume!(c.iter().any(|&v| v > 0.0));
            let oracle = fidelity_oracle(&encode_amplitude(&c).unwrap(), &encode_amplitude(&x).unwrap()).unwrap();
            prop_assert!((fidelity_amplitude(&x, &c).unwrap().value() - oracle.value()).abs() <= 1e-12);
        }

        #[test]
        fn hybrid_matches_oracle(
            xc in proptest::collection::vec((0.01f64..=1.0, 0.01f64..=1.0), 3..8),
            p in (0usize..8, 0usize..8),
        ) {
            let (x, c): (Vec<f64>, Vec<f64>) = xc.into_iter().unzip();
            let m = x.len();
            let pair = (p.0 % m, p.1 % m);
            prop_assume!(pair.0 != pair.1);
            let rest = hybrid_rest(m, pair);
            let diff: Vec<f64> = rest.iter().map(|&i| x[i] - c[i]).collect();
            let sx = encode_hybrid(&x, pair, &diff).unwrap();
            let sc = encode_hybrid(&c, pair, &vec![-1.0; rest.len()]).unwrap();
            let oracle = fidelity_oracle(&sc, &sx).unwrap();
            prop_assert!((fidelity_hybrid(&x, &c, pair).unwrap().value() - oracle.value()).abs() <= 1e-12);
        }

        #[test]
        fn swap_test_round_trips(v in 0.0f64..=1.0) {
            let p0 = swap_test_p0(fid(v));
            prop_assert!((0.5..=1.0).contains(&p0));
            prop_assert!((2.0 * p0 - 1.0 - v).abs() <= 1e-12);
        }
    }
}
