use proptest::prelude::*;
use qikm_core::metrics::{adjusted_rand_index, contingency, rand_index, silhouette_rows};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn naive_pairs(t: &[usize], p: &[usize]) -> (u64, u64, u64) {
    let (mut a, mut b, mut total) = (0, 0, 0);
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            total += 1;
            match (t[i] == t[j], p[i] == p[j]) {
                (true, true) => a += 1,
                (false, false) => b += 1,
                _ => {}
            }
        }
    }
    (a, b, total)
}

fn naive_silhouette(rows: &[Vec<f64>], labels: &[usize]) -> f64 {
    let dist =
        |i: usize, j: usize| -> f64 { rows[i].iter().zip(&rows[j]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt() };
    let clusters: std::collections::BTreeSet<usize> = labels.iter().copied().collect();
    let mut total = 0.0;
    for i in 0..rows.len() {
        let mean_to = |c: usize| {
            let members: Vec<usize> = (0..rows.len()).filter(|&j| j != i && labels[j] == c).collect();
            (members.iter().map(|&j| dist(i, j)).sum::<f64>(), members.len())
        };
        let (sa, na) = mean_to(labels[i]);
        if na == 0 {
            continue;
        }
        let a = sa / na as f64;
        let mut b = f64::INFINITY;
        for &c in &clusters {
            if c != labels[i] {
                let (s, m) = mean_to(c);
                b = b.min(s / m as f64);
            }
        }
        if a.max(b) > 0.0 {
            total += (b - a) / a.max(b);
        }
    }
    total / rows.len() as f64
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn random_labels(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..k)).collect()
}

#[test]
fn pair_counts_match_quadratic_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(2..=50);
        let (kt, kp) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let t = random_labels(&mut rng, n, kt);
        let p = random_labels(&mut rng, n, kp);
        let table = contingency(&t, &p).unwrap();
        let pc = table.pair_counts();
        let (a, b, total) = naive_pairs(&t, &p);
        assert_eq!((pc.same_same, pc.diff_diff, pc.total), (a, b, total));
        assert_eq!(rand_index(&table), (a + b) as f64 / total as f64);
    }
}

#[test]
fn ari_matches_permutation_expectation() {
    // exact expectation over all 8! relabelings of the prediction
    let perms = permutations(8);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 20 {
        let t = random_labels(&mut rng, 8, 3);
        let p = random_labels(&mut rng, 8, 3);
        let index = |p: &[usize]| contingency(&t, p).unwrap().pair_counts().same_same as f64;
        let table = contingency(&t, &p).unwrap();
        let same_true = naive_pairs(&t, &t).0 as f64;
        let same_pred = naive_pairs(&p, &p).0 as f64;
        let max = (same_true + same_pred) / 2.0;
        let expected: f64 =
            perms.iter().map(|perm| index(&perm.iter().map(|&i| p[i]).collect::<Vec<_>>())).sum::<f64>()
                / perms.len() as f64;
        if (max - expected).abs() < 1e-9 {
            continue;
        }
        let oracle = (index(&p) - expected) / (max - expected);
        let ari = adjusted_rand_index(&table);
        assert!((ari - oracle).abs() < 1e-9, "{ari} vs {oracle}");
        checked += 1;
    }
}

#[test]
fn silhouette_matches_triple_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let n = rng.random_range(3..=30);
        let m = rng.random_range(1..=4);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.random::<f64>()).collect()).collect();
        let k = rng.random_range(2..=4);
        let mut labels = random_labels(&mut rng, n, k);
        labels[0] = 0;
        labels[1] = 1;
        let s = silhouette_rows(&rows, &labels).unwrap();
        assert!((s - naive_silhouette(&rows, &labels)).abs() < 1e-10);
    }
}

proptest! {
    #[test]
    fn indices_invariant_under_relabeling(
        t in prop::collection::vec(0usize..3, 2..=8),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p: Vec<usize> = t.iter().map(|_| rng.random_range(0..3)).collect();
        let base = contingency(&t, &p).unwrap();
        for perm in permutations(3) {
            let relabeled: Vec<usize> = p.iter().map(|&l| perm[l] + 10).collect();
            let table = contingency(&t, &relabeled).unwrap();
            prop_assert_eq!(rand_index(&table), rand_index(&base));
            prop_assert_eq!(adjusted_rand_index(&table), adjusted_rand_index(&base));
            let self_relabel: Vec<usize> = t.iter().map(|&l| perm[l]).collect();
            prop_assert_eq!(adjusted_rand_index(&contingency(&t, &self_relabel).unwrap()), 1.0);
        }
    }

    #[test]
    fn ari_and_ri_ranges(
        t in prop::collection::vec(0usize..4, 2..=40),
        p_seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(p_seed);
        let p: Vec<usize> = t.iter().map(|_| rng.random_range(0..4)).collect();
        let table = contingency(&t, &p).unwrap();
        let ri = rand_index(&table);
        let ari = adjusted_rand_index(&table);
        prop_assert!((0.0..=1.0).contains(&ri));
        prop_assert!((-1.0..=1.0).contains(&ari));
        if ri == 1.0 {
            prop_assert_eq!(ari, 1.0);
        }
    }
}
