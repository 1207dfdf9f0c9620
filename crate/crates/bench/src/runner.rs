use std::time::Instant;

use qikm_core::clustering::ClusteringResult;
use qikm_core::{adjusted_rand_index, checksum, contingency, kmeans_run, load, minmax_fit_transform, silhouette_score};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{form_str, ExperimentConfig, MethodSpec, Selection};
use crate::BenchError;

/// One selected run per (method, seed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub dataset: String,
    pub method: String,
    pub seed: u64,
    /// Index of the selected restart and the seed it ran with.
    pub restart: usize,
    pub run_seed: u64,
    pub ari: f64,
    /// Empty when the run used a single cluster.
    pub silhouette: Option<f64>,
    pub sse: f64,
    pub n_iterations: usize,
    pub converged: bool,
    pub pair_first: Option<usize>,
    pub pair_second: Option<usize>,
    pub mode: String,
    pub distance_form: String,
    pub init: String,
    pub ordering: String,
    pub k: usize,
    pub restarts: usize,
    pub selection: String,
    pub max_iter: usize,
    pub patience: usize,
    pub tol: f64,
    pub checksum: String,
    #[serde(skip)]
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub dataset: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub checksum: String,
    pub selection: Selection,
    pub restarts: usize,
    pub seeds: Vec<u64>,
    /// Column order for the summary table.
    pub methods: Vec<String>,
    pub rows: Vec<RunRow>,
}

/// Per-restart seeds derived from the experiment seed; shared by all methods.
pub fn restart_seeds(seed: u64, restarts: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..restarts).map(|_| rng.random()).collect()
}

struct Attempt {
    result: ClusteringResult,
    ari: f64,
    runtime_ms: f64,
}

fn select(attempts: &[Attempt], rule: Selection) -> usize {
    let mut order: Vec<usize> = (0..attempts.len()).collect();
    match rule {
        Selection::BestSse => {
            order.sort_by(|&a, &b| attempts[a].result.final_sse().total_cmp(&attempts[b].result.final_sse()))
        }
        Selection::BestAri => order.sort_by(|&a, &b| attempts[b].ari.total_cmp(&attempts[a].ari)),
        Selection::MedianAri => {
            order.sort_by(|&a, &b| attempts[a].ari.total_cmp(&attempts[b].ari));
            return order[(order.len() - 1) / 2];
        }
    }
    order[0]
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, BenchError> {
    cfg.validate()?;
    let raw = load(&cfg.dataset)?;
    let digest = checksum(&cfg.dataset)?;
    let data = minmax_fit_transform(&raw);
    let k = cfg.dataset.expected_k;
    if k > data.n_samples() {
        return Err(BenchError::Config(format!("k = {k} exceeds {} samples", data.n_samples())));
    }

    let tasks: Vec<(usize, u64, usize, u64)> = cfg
        .methods
        .iter()
        .enumerate()
        .flat_map(|(mi, _)| {
            cfg.seeds.iter().flat_map(move |&seed| {
                restart_seeds(seed, cfg.restarts_per_seed).into_iter().enumerate().map(move |(r, rs)| (mi, seed, r, rs))
            })
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| BenchError::Runtime(e.to_string()))?;
    let attempts: Vec<Attempt> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(mi, _, _, run_seed)| {
                let km = cfg.kmeans(&cfg.methods[mi], run_seed);
                let start = Instant::now();
                let result = kmeans_run(&data, &km)?;
                let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
                let table =
                    contingency(&raw.labels, &result.assignments).map_err(|e| BenchError::Runtime(e.to_string()))?;
                Ok(Attempt { ari: adjusted_rand_index(&table), result, runtime_ms })
            })
            .collect::<Result<_, BenchError>>()
    })?;

    let mut rows = Vec::new();
    for (group, chunk) in attempts.chunks(cfg.restarts_per_seed).enumerate() {
        let (mi, seed, _, _) = tasks[group * cfg.restarts_per_seed];
        let method = &cfg.methods[mi];
        let pick = select(chunk, cfg.selection);
        let chosen = &chunk[pick];
        rows.push(make_row(cfg, method, seed, pick, chosen, &data, &digest, k)?);
    }

    Ok(Report {
        dataset: cfg.dataset.id.to_string(),
        n: data.n_samples(),
        m: data.n_features(),
        k,
        checksum: digest,
        selection: cfg.selection,
        restarts: cfg.restarts_per_seed,
        seeds: cfg.seeds.clone(),
        methods: cfg.methods.iter().map(MethodSpec::label).collect(),
        rows,
    })
}

#[allow(clippy::too_many_arguments)]
fn make_row(
    cfg: &ExperimentConfig,
    method: &MethodSpec,
    seed: u64,
    restart: usize,
    chosen: &Attempt,
    data: &qikm_core::ScaledDataset,
    digest: &str,
    k: usize,
) -> Result<RunRow, BenchError> {
    let silhouette = match silhouette_score(data, &chosen.result.assignments) {
        Ok(s) => Some(s),
        Err(qikm_core::metrics::MetricsError::TooFewClusters(_)) => None,
        Err(e) => return Err(BenchError::Runtime(e.to_string())),
    };
    let enc = method.encoding();
    Ok(RunRow {
        dataset: cfg.dataset.id.to_string(),
        method: method.label(),
        seed,
        restart,
        run_seed: restart_seeds(seed, cfg.restarts_per_seed)[restart],
        ari: chosen.ari,
        silhouette,
        sse: chosen.result.final_sse(),
        n_iterations: chosen.result.n_iterations,
        converged: chosen.result.converged,
        pair_first: chosen.result.hybrid_pair.map(|p| p.0),
        pair_second: chosen.result.hybrid_pair.map(|p| p.1),
        mode: method.name.as_str().to_string(),
        distance_form: form_str(method.distance_form).to_string(),
        init: kebab(&method.init),
        ordering: format!("{}/{}", kebab(&enc.ordering_stat), kebab(&enc.ordering_direction)),
        k,
        restarts: cfg.restarts_per_seed,
        selection: cfg.selection.to_string(),
        max_iter: cfg.max_iter,
        patience: cfg.patience,
        tol: cfg.tol,
        checksum: digest.to_string(),
        runtime_ms: chosen.runtime_ms,
    })
}

/// The serde (kebab-case) name of a unit enum value.
fn kebab<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}
