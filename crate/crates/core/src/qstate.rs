//! Minimal pure-state vector engine.
//!
//! Qubit 0 is the most significant bit of the basis-state index, so for two
//! qubits the amplitude order is `|00⟩, |01⟩, |10⟩, |11⟩` with qubit 1 the
//! right-hand factor. Amplitudes are complex even though the rotations used
//! here keep them real.

use num_complex::Complex64;
use thiserror::Error;

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 20;

const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QStateError {
    #[error("qubit count unsupported: {0} (expected 1..={MAX_QUBITS})")]
    UnsupportedQubitCount(usize),
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("amplitude vector length {0} is not a power of two >= 2")]
    BadLength(usize),
    #[error("amplitude vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("rotation angle must be finite, got {0}")]
    NonFiniteAngle(f64),
}

/// A rotation angle in radians. Only finiteness is enforced.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RotationAngle(f64);

impl RotationAngle {
    pub fn new(theta: f64) -> Result<Self, QStateError> {
        if theta.is_finite() {
            Ok(Self(theta))
        } else {
            Err(QStateError::NonFiniteAngle(theta))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Normalized amplitude vector of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// Builds a state from raw amplitudes, checking length and normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, QStateError> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(QStateError::BadLength(len));
        }
        if len.trailing_zeros() as usize > MAX_QUBITS {
            return Err(QStateError::UnsupportedQubitCount(len.trailing_zeros() as usize));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QStateError::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Real-amplitude convenience constructor.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self, QStateError> {
        Self::from_amplitudes(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tensor product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &QuantumState) -> Result<QuantumState, QStateError> {
        let n = self.n_qubits() + other.n_qubits();
        if n > MAX_QUBITS {
            return Err(QStateError::UnsupportedQubitCount(n));
        }
        let amplitudes = self.amplitudes.iter().flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b)).collect();
        Ok(QuantumState { amplitudes })
    }

    /// Applies `R_y(angle)` to one qubit and returns the new state.
    pub fn apply_ry(&self, qubit: usize, angle: RotationAngle) -> Result<QuantumState, QStateError> {
        apply_ry(self, qubit, angle)
    }
}

/// `|0…0⟩` on `n_qubits` qubits.
pub fn zero_state(n_qubits: usize) -> Result<QuantumState, QStateError> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(QStateError::UnsupportedQubitCount(n_qubits));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    amplitudes[0] = Complex64::new(1.0, 0.0);
    Ok(QuantumState { amplitudes })
}

/// The 2×2 real matrix of `R_y(theta)`, row-major.
pub fn ry_matrix(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [[c, -s], [s, c]]
}

pub fn apply_ry(state: &QuantumState, qubit: usize, angle: RotationAngle) -> Result<QuantumState, QStateError> {
    let n_qubits = state.n_qubits();
    if qubit >= n_qubits {
        return Err(QStateError::QubitOutOfRange { qubit, n_qubits });
    }
    let [[m00, m01], [m10, m11]] = ry_matrix(angle.radians());
    let stride = 1usize << (n_qubits - 1 - qubit);
    let mut out = state.amplitudes.clone();
    for i in 0..out.len() {
        if i & stride != 0 {
            continue;
        }
        let j = i | stride;
        let (a0, a1) = (state.amplitudes[i], state.amplitudes[j]);
        out[i] = a0 * m00 + a1 * m01;
        out[j] = a0 * m10 + a1 * m11;
    }
    Ok(QuantumState { amplitudes: out })
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &QuantumState, b: &QuantumState) -> Result<Complex64, QStateError> {
    if a.dim() != b.dim() {
        return Err(QStateError::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum())
}
