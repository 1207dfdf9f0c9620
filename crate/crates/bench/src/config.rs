//! TOML experiment files.
//!
//! ```toml
//! dataset = "iris"
//! data_dir = "../data"        # relative to this file
//! seeds = [0, 1, 2, 3, 4]
//! restarts = 10
//! selection = "best-sse"      # best-sse | best-ari | median-ari
//! output_dir = "out/iris"     # relative to this file
//! jobs = 4                    # 0 uses every core
//!
//! [[methods]]
//! name = "classical"
//!
//! [[methods]]
//! name = "angle"
//! distance_form = "weighted-dissim"
//! ```
//!
//! Optional top-level keys: `k`, `max_iter`, `patience`, `tol`. Optional
//! method keys: `distance_form`, `init`, `ordering_stat`,
//! `ordering_direction`, `label`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qikm_core::{
    DatasetId, DatasetSpec, DistanceForm, DistanceMode, EncodingConfig, EncodingKind, InitStrategy, KMeansConfig,
    OrderingDirection, OrderingStat,
};
use serde::{Deserialize, Serialize};

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Classical,
    Angle,
    Amplitude,
    Hybrid,
}

impl MethodName {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::Classical => "classical",
            MethodName::Angle => "angle",
            MethodName::Amplitude => "amplitude",
            MethodName::Hybrid => "hybrid",
        }
    }

    pub fn mode(self) -> DistanceMode {
        match self {
            MethodName::Classical => DistanceMode::ClassicalEuclidean,
            MethodName::Angle => DistanceMode::QuantumAngle,
            MethodName::Amplitude => DistanceMode::QuantumAmplitude,
            MethodName::Hybrid => DistanceMode::QuantumHybrid,
        }
    }

    fn encoding_kind(self) -> EncodingKind {
        match self {
            MethodName::Amplitude => EncodingKind::Amplitude,
            MethodName::Hybrid => EncodingKind::Hybrid,
            _ => EncodingKind::Angle,
        }
    }
}

impl FromStr for MethodName {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classical" => Ok(MethodName::Classical),
            "angle" => Ok(MethodName::Angle),
            "amplitude" => Ok(MethodName::Amplitude),
            "hybrid" => Ok(MethodName::Hybrid),
            other => Err(BenchError::Config(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// Lowest final SSE; earliest restart wins ties.
    #[default]
    BestSse,
    BestAri,
    /// Lower median of the restarts ranked by ARI.
    MedianAri,
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selection::BestSse => "best-sse",
            Selection::BestAri => "best-ari",
            Selection::MedianAri => "median-ari",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub name: MethodName,
    #[serde(default)]
    pub distance_form: DistanceForm,
    #[serde(default)]
    pub init: InitStrategy,
    #[serde(default)]
    pub ordering_stat: OrderingStat,
    #[serde(default)]
    pub ordering_direction: OrderingDirection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MethodSpec {
    pub fn new(name: MethodName) -> Self {
        Self {
            name,
            distance_form: DistanceForm::default(),
            init: InitStrategy::default(),
            ordering_stat: OrderingStat::default(),
            ordering_direction: OrderingDirection::default(),
            label: None,
        }
    }

    pub fn with_form(mut self, form: DistanceForm) -> Self {
        self.distance_form = form;
        self
    }

    /// Column name in reports: the explicit label, else the method name with
    /// a non-default distance form appended.
    pub fn label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        if self.name == MethodName::Classical || self.distance_form == DistanceForm::default() {
            self.name.as_str().to_string()
        } else {
            format!("{}/{}", self.name.as_str(), form_str(self.distance_form))
        }
    }

    pub fn encoding(&self) -> EncodingConfig {
        EncodingConfig {
            kind: self.name.encoding_kind(),
            ordering_stat: self.ordering_stat,
            ordering_direction: self.ordering_direction,
        }
    }
}

pub fn form_str(form: DistanceForm) -> &'static str {
    match form {
        DistanceForm::Weighted => "weighted",
        DistanceForm::WeightedDissim => "weighted-dissim",
        DistanceForm::Bures => "bures",
        DistanceForm::Trace => "trace",
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    dataset: String,
    #[serde(default)]
    data_dir: Option<PathBuf>,
    #[serde(default)]
    source_path: Option<PathBuf>,
    seeds: Vec<u64>,
    #[serde(default = "default_restarts")]
    restarts: usize,
    #[serde(default)]
    selection: Selection,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    jobs: usize,
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    max_iter: Option<usize>,
    #[serde(default)]
    patience: Option<usize>,
    #[serde(default)]
    tol: Option<f64>,
    methods: Vec<MethodSpec>,
}

fn default_restarts() -> usize {
    10
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub methods: Vec<MethodSpec>,
    pub seeds: Vec<u64>,
    pub restarts_per_seed: usize,
    pub selection: Selection,
    pub output_dir: PathBuf,
    /// Worker threads; 0 means one per core.
    pub jobs: usize,
    pub max_iter: usize,
    pub patience: usize,
    pub tol: f64,
}

impl ExperimentConfig {
    pub fn new(dataset: DatasetSpec, methods: Vec<MethodSpec>, seeds: Vec<u64>) -> Self {
        let defaults = KMeansConfig::new(1, DistanceMode::ClassicalEuclidean);
        Self {
            dataset,
            methods,
            seeds,
            restarts_per_seed: default_restarts(),
            selection: Selection::default(),
            output_dir: PathBuf::from("out"),
            jobs: 0,
            max_iter: defaults.max_iter,
            patience: defaults.patience,
            tol: defaults.tol,
        }
    }

    /// Reads a TOML file; relative paths inside it resolve against the
    /// file's directory.
    pub fn from_file(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml(&text, base)
    }

    pub fn from_toml(text: &str, base: &Path) -> Result<Self, BenchError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        let id: DatasetId =
            file.dataset.parse().map_err(|e: qikm_core::DataError| BenchError::Config(e.to_string()))?;
        let data_dir = base.join(file.data_dir.unwrap_or_else(|| PathBuf::from("data")));
        let mut dataset = DatasetSpec::new(id, &data_dir);
        if let Some(p) = file.source_path {
            dataset = dataset.with_path(base.join(p));
        }
        if let Some(k) = file.k {
            dataset = dataset.with_k(k);
        }
        let mut cfg = Self::new(dataset, file.methods, file.seeds);
        cfg.restarts_per_seed = file.restarts;
        cfg.selection = file.selection;
        cfg.output_dir = base.join(file.output_dir.unwrap_or_else(|| PathBuf::from("out")));
        cfg.jobs = file.jobs;
        cfg.max_iter = file.max_iter.unwrap_or(cfg.max_iter);
        cfg.patience = file.patience.unwrap_or(cfg.patience);
        cfg.tol = file.tol.unwrap_or(cfg.tol);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.methods.is_empty() {
            return fail("at least one method is required");
        }
        if self.seeds.is_empty() {
            return fail("at least one seed is required");
        }
        if self.restarts_per_seed == 0 {
            return fail("restarts must be at least 1");
        }
        if self.dataset.expected_k == 0 {
            return fail("k must be at least 1");
        }
        if self.max_iter == 0 || self.patience == 0 {
            return fail("max_iter and patience must be at least 1");
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return fail("tol must be a nonnegative number");
        }
        let labels: BTreeSet<String> = self.methods.iter().map(MethodSpec::label).collect();
        if labels.len() != self.methods.len() {
            return fail("method labels must be unique; set `label` to disambiguate");
        }
        let seeds: BTreeSet<u64> = self.seeds.iter().copied().collect();
        if seeds.len() != self.seeds.len() {
            return fail("seeds must be distinct");
        }
        Ok(())
    }

    pub fn kmeans(&self, method: &MethodSpec, seed: u64) -> KMeansConfig {
        KMeansConfig::new(self.dataset.expected_k, method.name.mode())
            .with_seed(seed)
            .with_init(method.init)
            .with_form(method.distance_form)
            .with_encoding(method.encoding())
            .with_max_iter(self.max_iter)
            .with_patience(self.patience)
            .with_tol(self.tol)
    }

    /// Keeps only methods with this name; adds a default one if none match.
    pub fn restrict_method(&mut self, name: MethodName) {
        self.methods.retain(|m| m.name == name);
        if self.methods.is_empty() {
            self.methods.push(MethodSpec::new(name));
        }
    }

    /// Switches dataset, keeping the data directory and any k override only
    /// when the id is unchanged.
    pub fn set_dataset(&mut self, id: DatasetId) {
        if id == self.dataset.id {
            return;
        }
        let dir = self.dataset.source_path.parent().map(Path::to_path_buf).unwrap_or_default();
        self.dataset = DatasetSpec::new(id, dir);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
dataset = "iris"
data_dir = "d"
seeds = [1, 2]
output_dir = "o"

[[methods]]
name = "classical"

[[methods]]
name = "angle"
distance_form = "weighted-dissim"

[[methods]]
name = "hybrid"
ordering_stat = "spread"
ordering_direction = "descending"
"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = ExperimentConfig::from_toml(BASIC, Path::new("/base")).unwrap();
        assert_eq!(cfg.dataset.id, DatasetId::Iris);
        assert_eq!(cfg.dataset.source_path, PathBuf::from("/base/d/iris.data"));
        assert_eq!(cfg.output_dir, PathBuf::from("/base/o"));
        assert_eq!(cfg.restarts_per_seed, 10);
        assert_eq!(cfg.selection, Selection::BestSse);
        assert_eq!((cfg.max_iter, cfg.patience, cfg.tol), (300, 3, 1e-4));
        let labels: Vec<String> = cfg.methods.iter().map(MethodSpec::label).collect();
        assert_eq!(labels, ["classical", "angle/weighted-dissim", "hybrid"]);
        let h = cfg.methods[2].encoding();
        assert_eq!(h.kind, EncodingKind::Hybrid);
        assert_eq!(h.ordering_stat, OrderingStat::Spread);
        assert_eq!(h.ordering_direction, OrderingDirection::Descending);
        let km = cfg.kmeans(&cfg.methods[1], 9);
        assert_eq!(km.distance_form, DistanceForm::WeightedDissim);
        assert_eq!(km.k, 3);
        assert_eq!(km.seed, 9);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = Path::new(".");
        for bad in [
            "dataset = \"iris\"\nseeds = [1]\nmethods = []\n",
            "dataset = \"iris\"\nseeds = []\n[[methods]]\nname = \"angle\"\n",
            "dataset = \"mnist\"\nseeds = [1]\n[[methods]]\nname = \"angle\"\n",
            "dataset = \"iris\"\nseeds = [1]\nrestarts = 0\n[[methods]]\nname = \"angle\"\n",
            "dataset = \"iris\"\nseeds = [1]\n[[methods]]\nname = \"qubit\"\n",
            "dataset = \"iris\"\nseeds = [1]\ncolour = 3\n[[methods]]\nname = \"angle\"\n",
            "dataset = \"iris\"\nseeds = [1, 1]\n[[methods]]\nname = \"angle\"\n",
            "dataset = \"iris\"\nseeds = [1]\n[[methods]]\nname = \"angle\"\n[[methods]]\nname = \"angle\"\n",
        ] {
            let err = ExperimentConfig::from_toml(bad, base).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{bad}");
        }
    }

    #[test]
    fn overrides() {
        let mut cfg = ExperimentConfig::from_toml(BASIC, Path::new("/base")).unwrap();
        cfg.restrict_method(MethodName::Amplitude);
        assert_eq!(cfg.methods, vec![MethodSpec::new(MethodName::Amplitude)]);
        cfg.set_dataset(DatasetId::Wine);
        assert_eq!(cfg.dataset.source_path, PathBuf::from("/base/d/wine.data"));
        assert_eq!(cfg.dataset.expected_k, 3);
    }

    #[test]
    fn algerian_k_override() {
        let text = "dataset = \"algerian-fires\"\nk = 6\nseeds = [1]\n[[methods]]\nname = \"angle\"\n";
        let cfg = ExperimentConfig::from_toml(text, Path::new(".")).unwrap();
        assert_eq!(cfg.dataset.expected_k, 6);
    }
}
