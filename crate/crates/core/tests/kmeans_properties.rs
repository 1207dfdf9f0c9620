use qikm_core::clustering::{kmeans_run, update_centroids, KMeansConfig};
use qikm_core::encoding::ScaledDataset;
use qikm_core::DistanceMode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn blobs(seed: u64) -> (ScaledDataset, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(10..80);
    let m = rng.random_range(1..6);
    let k = rng.random_range(2..6);
    let rows = (0..n).map(|_| (0..m).map(|_| rng.random::<f64>()).collect()).collect();
    (ScaledDataset::from_unit_rows(rows, vec![0; n]).unwrap(), k)
}

#[test]
fn euclidean_sse_never_increases() {
    for seed in 0..50 {
        let (data, k) = blobs(seed);
        let res = kmeans_run(&data, &KMeansConfig::new(k, DistanceMode::ClassicalEuclidean).with_seed(seed)).unwrap();
        for w in res.sse_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "seed {seed}: {:?}", res.sse_trace);
        }
    }
}

#[test]
fn identical_seeds_identical_runs() {
    for mode in [DistanceMode::ClassicalEuclidean, DistanceMode::QuantumAngle, DistanceMode::QuantumAmplitude] {
        let (data, k) = blobs(99);
        let cfg = KMeansConfig::new(k, mode).with_seed(1234);
        let a = kmeans_run(&data, &cfg).unwrap();
        let b = kmeans_run(&data, &cfg).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn empty_cluster_keeps_previous_centroid() {
    let data = ScaledDataset::from_unit_rows(vec![vec![0.1, 0.2], vec![0.3, 0.4]], vec![0, 0]).unwrap();
    let previous = vec![vec![0.0, 0.0], vec![0.9, 0.8], vec![0.5, 0.5]];
    let next = update_centroids(&data, &[0, 0], 3, &previous);
    assert_eq!(next[1], previous[1]);
    assert_eq!(next[2], previous[2]);
    assert!((next[0][0] - 0.2).abs() < 1e-15);
}

#[test]
fn quantum_modes_terminate() {
    for seed in 0..10 {
        let (data, k) = blobs(seed);
        for mode in [DistanceMode::QuantumAngle, DistanceMode::QuantumAmplitude] {
            let res = kmeans_run(&data, &KMeansConfig::new(k, mode).with_seed(seed)).unwrap();
            assert!(res.n_iterations <= 300);
            assert_eq!(res.assignments.len(), data.n_samples());
            assert!(res.assignments.iter().all(|&a| a < k));
        }
    }
}
