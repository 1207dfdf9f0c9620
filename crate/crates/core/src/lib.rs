//! Quantum-inspired k-means.
//!
//! Feature vectors are MinMax-scaled, encoded as product states of `R_y`
//! rotations (or as normalized amplitude vectors), and compared by fidelity.
//! The fidelity then drives the assignment step of an otherwise classical
//! k-means loop.
//!
//! ```
//! use qikm_core::{kmeans_run, minmax_fit_transform, DistanceMode, KMeansConfig, RawDataset};
//!
//! let raw = RawDataset::new(
//!     "toy",
//!     vec!["x".into()],
//!     vec![vec![0.0], vec![0.1], vec![0.9], vec![1.0]],
//!     vec![0, 0, 1, 1],
//! )
//! .unwrap();
//! let data = minmax_fit_transform(&raw);
//! let cfg = KMeansConfig::new(2, DistanceMode::QuantumAngle).with_seed(7);
//! let result = kmeans_run(&data, &cfg).unwrap();
//! assert_eq!(result.assignments[0], result.assignments[1]);
//! ```

pub mod clustering;
pub mod datasets;
pub mod distance;
pub mod encoding;
pub mod metrics;
pub mod qstate;

pub use clustering::{kmeans_run, ClusteringError, ClusteringResult, InitStrategy, KMeansConfig};
pub use datasets::{checksum, load, DataError, DatasetId, DatasetSpec};
pub use distance::{DistanceForm, DistanceMode, Fidelity, Metric};
pub use encoding::{
    minmax_fit_transform, EncodingConfig, EncodingKind, OrderingDirection, OrderingStat, RawDataset, ScaledDataset,
};
pub use metrics::{adjusted_rand_index, contingency, rand_index, silhouette_score, ContingencyTable};
pub use qstate::{QuantumState, RotationAngle};
