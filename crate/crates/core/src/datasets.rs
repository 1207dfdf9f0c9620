//! Loaders for the eight benchmark datasets.
//!
//! Files are read in their original distribution layout and all cleaning
//! happens here: row filtering, column dropping, categorical encoding and
//! label remapping to contiguous `0..k`.
//!
//! | id               | file                                        | label     | features |
//! |------------------|---------------------------------------------|-----------|----------|
//! | `iris`           | `iris.data`                                 | species   | 4 |
//! | `wine`           | `wine.data`                                 | cultivar  | 13 |
//! | `seeds`          | `seeds_dataset.txt`                         | variety   | 7 |
//! | `glass`          | `glass.data`                                | type      | 9 (Id dropped) |
//! | `penguins`       | `penguins.csv`                              | island    | 4 measurements + sex (female 0, male 1) |
//! | `algerian-fires` | `Algerian_forest_fires_dataset_UPDATE.csv`  | Classes   | 10 (Bejaia block, dates dropped) |
//! | `wholesale`      | `Wholesale customers data.csv`              | Channel   | 6 (Region dropped) |
//! | `ecoli`          | `ecoli.data`                                | site      | 7 (imS, imL rows dropped) |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::encoding::{EncodingError, RawDataset};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("data file not found: {}", .0.display())]
    Missing(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: u64, message: String },
    #[error("{dataset}: observed shape n={n}, m={m}, classes={k}; expected n={expected_n}, m={expected_m}, classes={expected_k}")]
    Shape { dataset: DatasetId, n: usize, m: usize, k: usize, expected_n: usize, expected_m: usize, expected_k: usize },
    #[error("unknown dataset '{0}'")]
    UnknownId(String),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetId {
    Iris,
    Wine,
    Seeds,
    Glass,
    Penguins,
    AlgerianFires,
    Wholesale,
    #[serde(rename = "ecoli")]
    EColi,
}

impl DatasetId {
    pub const ALL: [DatasetId; 8] = [
        DatasetId::Iris,
        DatasetId::Wine,
        DatasetId::Seeds,
        DatasetId::Glass,
        DatasetId::Penguins,
        DatasetId::AlgerianFires,
        DatasetId::Wholesale,
        DatasetId::EColi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DatasetId::Iris => "iris",
            DatasetId::Wine => "wine",
            DatasetId::Seeds => "seeds",
            DatasetId::Glass => "glass",
            DatasetId::Penguins => "penguins",
            DatasetId::AlgerianFires => "algerian-fires",
            DatasetId::Wholesale => "wholesale",
            DatasetId::EColi => "ecoli",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            DatasetId::Iris => "iris.data",
            DatasetId::Wine => "wine.data",
            DatasetId::Seeds => "seeds_dataset.txt",
            DatasetId::Glass => "glass.data",
            DatasetId::Penguins => "penguins.csv",
            DatasetId::AlgerianFires => "Algerian_forest_fires_dataset_UPDATE.csv",
            DatasetId::Wholesale => "Wholesale customers data.csv",
            DatasetId::EColi => "ecoli.data",
        }
    }

    /// `(n, m, label classes)` after preprocessing.
    pub fn shape(self) -> (usize, usize, usize) {
        match self {
            DatasetId::Iris => (150, 4, 3),
            DatasetId::Wine => (178, 13, 3),
            DatasetId::Seeds => (210, 7, 3),
            DatasetId::Glass => (214, 9, 6),
            DatasetId::Penguins => (333, 5, 3),
            DatasetId::AlgerianFires => (122, 10, 2),
            DatasetId::Wholesale => (440, 6, 2),
            DatasetId::EColi => (332, 7, 6),
        }
    }
}

impl fmt::Display for DatasetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DatasetId {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        DatasetId::ALL.into_iter().find(|id| id.as_str() == key).ok_or_else(|| DataError::UnknownId(s.to_string()))
    }
}

/// Where a dataset lives and what it must look like once loaded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub id: DatasetId,
    pub source_path: PathBuf,
    pub expected_n: usize,
    pub expected_m: usize,
    /// Number of clusters to fit. Defaults to the label class count; only
    /// the Algerian fires data is commonly run with a different value.
    pub expected_k: usize,
}

impl DatasetSpec {
    pub fn new(id: DatasetId, data_dir: impl AsRef<Path>) -> Self {
        let (n, m, k) = id.shape();
        Self { id, source_path: data_dir.as_ref().join(id.file_name()), expected_n: n, expected_m: m, expected_k: k }
    }

    pub fn with_path(mut self, path: impl Into<PathBuf>) -> Self {
        self.source_path = path.into();
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.expected_k = k;
        self
    }
}

/// Loads, cleans and shape-checks a dataset. The label class count is always
/// checked against the dataset's own class count, independent of
/// `expected_k`.
pub fn load(spec: &DatasetSpec) -> Result<RawDataset, DataError> {
    let text = read_file(&spec.source_path)?;
    let src = spec.source_path.display().to_string();
    let raw = parse(spec.id, &text, &src)?;
    let k_labels = spec.id.shape().2;
    if raw.n_samples() != spec.expected_n || raw.n_features() != spec.expected_m || raw.n_classes() != k_labels {
        return Err(DataError::Shape {
            dataset: spec.id,
            n: raw.n_samples(),
            m: raw.n_features(),
            k: raw.n_classes(),
            expected_n: spec.expected_n,
            expected_m: spec.expected_m,
            expected_k: k_labels,
        });
    }
    Ok(raw)
}

/// Parses file contents without any shape check. `source` is only used in
/// error messages.
pub fn parse(id: DatasetId, text: &str, source: &str) -> Result<RawDataset, DataError> {
    let table = match id {
        DatasetId::Iris => parse_iris(text, source)?,
        DatasetId::Wine => parse_wine(text, source)?,
        DatasetId::Seeds => parse_seeds(text, source)?,
        DatasetId::Glass => parse_glass(text, source)?,
        DatasetId::Penguins => parse_penguins(text, source)?,
        DatasetId::AlgerianFires => parse_algerian(text, source)?,
        DatasetId::Wholesale => parse_wholesale(text, source)?,
        DatasetId::EColi => parse_ecoli(text, source)?,
    };
    let labels = remap_labels(&table.labels);
    Ok(RawDataset::new(id.as_str(), table.names, table.rows, labels)?)
}

/// SHA-256 of the raw file bytes, lowercase hex.
pub fn checksum(spec: &DatasetSpec) -> Result<String, DataError> {
    let path = &spec.source_path;
    let mut file = fs::File::open(path).map_err(|e| io_error(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 8192];
    loop {
        let read = file.read(&mut buf).map_err(|e| io_error(path, e))?;
        if read == 0 {
            break;
        }
        hasher.update(&buf[..read]);
    }
    Ok(hex::encode(hasher.finalize()))
}

fn io_error(path: &Path, e: std::io::Error) -> DataError {
    if e.kind() == std::io::ErrorKind::NotFound {
        DataError::Missing(path.to_path_buf())
    } else {
        DataError::Io { path: path.to_path_buf(), source: e }
    }
}

fn read_file(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

struct Table {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    labels: Vec<String>,
}

impl Table {
    fn new(names: &[&str]) -> Self {
        Self { names: names.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), labels: Vec::new() }
    }
}

/// Sorted label order; numeric when every label parses as an integer.
fn remap_labels(labels: &[String]) -> Vec<usize> {
    let numeric: Option<Vec<i64>> = labels.iter().map(|l| l.parse().ok()).collect();
    match numeric {
        Some(nums) => dense(&nums),
        None => dense(labels),
    }
}

fn dense<T: Ord + Clone>(labels: &[T]) -> Vec<usize> {
    let distinct: BTreeSet<&T> = labels.iter().collect();
    let index: BTreeMap<&T, usize> = distinct.into_iter().enumerate().map(|(i, l)| (l, i)).collect();
    labels.iter().map(|l| index[l]).collect()
}

fn parse_err(source: &str, line: u64, message: impl Into<String>) -> DataError {
    DataError::Parse { path: source.to_string(), line, message: message.into() }
}

fn number(field: &str, source: &str, line: u64) -> Result<f64, DataError> {
    let v: f64 =
        field.trim().parse().map_err(|_| parse_err(source, line, format!("not a number: '{}'", field.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(source, line, format!("non-finite value '{}'", field.trim())));
    }
    Ok(v)
}

/// Comma-separated records with their 1-based line numbers. Blank lines are
/// skipped.
fn csv_records(text: &str, source: &str) -> Result<Vec<(u64, Vec<String>)>, DataError> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(source, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        out.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(out)
}

fn whitespace_records(text: &str) -> impl Iterator<Item = (u64, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i as u64 + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, f)| !f.is_empty())
}

fn expect_len(fields: usize, want: usize, source: &str, line: u64) -> Result<(), DataError> {
    if fields != want {
        return Err(parse_err(source, line, format!("expected {want} fields, found {fields}")));
    }
    Ok(())
}

fn numbers(fields: &[impl AsRef<str>], source: &str, line: u64) -> Result<Vec<f64>, DataError> {
    fields.iter().map(|f| number(f.as_ref(), source, line)).collect()
}

fn parse_iris(text: &str, source: &str) -> Result<Table, DataError> {
    let mut t = Table::new(&["sepal_length", "sepal_width", "petal_length", "petal_width"]);
    for (line, f) in csv_records(text, source)? {
        expect_len(f.len(), 5, source, line)?;
        t.rows.push(numbers(&f[..4], source, line)?);
        t.labels.push(f[4].clone());
    }
    Ok(t)
}

fn parse_wine(text: &str, source: &str) -> Result<Table, DataError> {
    let mut t = Table::new(&[
        "alcohol",
        "malic_acid",
        "ash",
        "alcalinity_of_ash",
        "magnesium",
        "total_phenols",
        "flavanoids",
        "nonflavanoid_phenols",
        "proanthocyanins",
        "color_intensity",
        "hue",
        "od280_od315",
        "proline",
    ]);
    for (line, f) in csv_records(text, source)? {
        expect_len(f.len(), 14, source, line)?;
        t.rows.push(numbers(&f[1..], source, line)?);
        t.labels.push(f[0].clone());
    }
    Ok(t)
}

fn parse_seeds(text: &str, source: &str) -> Result<Table, DataError> {
    let mut t = Table::new(&[
        "area",
        "perimeter",
        "compactness",
        "kernel_length",
        "kernel_width",
        "asymmetry",
        "groove_length",
    ]);
    // some rows of the original file carry doubled tabs
    for (line, f) in whitespace_records(text) {
        expect_len(f.len(), 8, source, line)?;
        t.rows.push(numbers(&f[..7], source, line)?);
        t.labels.push(f[7].to_string());
    }
    Ok(t)
}

fn parse_glass(text: &str, source: &str) -> Result<Table, DataError> {
    let mut t = Table::new(&["RI", "Na", "Mg", "Al", "Si", "K", "Ca", "Ba", "Fe"]);
    for (line, f) in csv_records(text, source)? {
        expect_len(f.len(), 11, source, line)?;
        t.rows.push(numbers(&f[1..10], source, line)?);
        t.labels.push(f[10].clone());
    }
    Ok(t)
}

fn parse_penguins(text: &str, source: &str) -> Result<Table, DataError> {
    let mut t = Table::new(&["bill_length_mm", "bill_depth_mm", "flipper_length_mm", "body_mass_g", "sex"]);
    let records = csv_records(text, source)?;
    let Some(((_, header), body)) = records.split_first() else {
        return Err(parse_err(source, 1, "empty file"));
    };
    let col = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| parse_err(source, 1, format!("missing column '{name}'")))
    };
    let island = col("island")?;
    let measures = [col("bill_length_mm")?, col("bill_depth_mm")?, col("flipper_length_mm")?, col("body_mass_g")?];
    let sex = col("sex")?;
    for (line, f) in body {
        let line = *line;
        expect_len(f.len(), header.len(), source, line)?;
        let missing = |s: &str| s.is_empty() || s.eq_ignore_ascii_case("na");
        if missing(&f[island]) || missing(&f[sex]) || measures.iter().any(|&c| missing(&f[c])) {
            continue;
        }
        let mut row = measures.iter().map(|&c| number(&f[c], source, line)).collect::<Result<Vec<_>, _>>()?;
        row.push(match f[sex].to_ascii_lowercase().as_str() {
            "female" => 0.0,
            "male" => 1.0,
            other => return Err(parse_err(source, line, format!("unknown sex '{other}'"))),
        });
        t.rows.push(row);
        t.labels.push(f[island].clone());
    }
    Ok(t)
}

fn parse_algerian(text: &str, source: &str) -> Result<Table, DataError> {
    let mut t = Table::new(&["Temperature", "RH", "Ws", "Rain", "FFMC", "DMC", "DC", "ISI", "BUI", "FWI"]);
    let mut in_block = false;
    let mut header: Option<Vec<String>> = None;
    for (line, f) in csv_records(text, source)? {
        let first = f[0].to_ascii_lowercase();
        if first.contains("region") {
            // the file holds two blocks, Bejaia first
            if in_block || header.is_some() {
                break;
            }
            in_block = first.contains("bejaia");
            continue;
        }
        if !in_block {
            continue;
        }
        if header.is_none() {
            header = Some(f.iter().map(|h| h.trim().to_string()).collect());
            continue;
        }
        let head = header.as_ref().map_or(0, Vec::len);
        expect_len(f.len(), head, source, line)?;
        if f.len() != 14 {
            return Err(parse_err(source, line, "expected 14 columns"));
        }
        t.rows.push(numbers(&f[3..13], source, line)?);
        t.labels.push(f[13].split_whitespace().collect::<Vec<_>>().join(" ").to_ascii_lowercase());
    }
    if header.is_none() {
        return Err(parse_err(source, 1, "no Bejaia region block found"));
    }
    Ok(t)
}

fn parse_wholesale(text: &str, source: &str) -> Result<Table, DataError> {
    let mut t = Table::new(&["Fresh", "Milk", "Grocery", "Frozen", "Detergents_Paper", "Delicassen"]);
    let records = csv_records(text, source)?;
    let Some(((_, header), body)) = records.split_first() else {
        return Err(parse_err(source, 1, "empty file"));
    };
    if header.first().map(String::as_str) != Some("Channel") || header.len() != 8 {
        return Err(parse_err(source, 1, "expected header starting with Channel, Region and 6 spending columns"));
    }
    for (line, f) in body {
        expect_len(f.len(), 8, source, *line)?;
        t.rows.push(numbers(&f[2..], source, *line)?);
        t.labels.push(f[0].clone());
    }
    Ok(t)
}

fn parse_ecoli(text: &str, source: &str) -> Result<Table, DataError> {
    let mut t = Table::new(&["mcg", "gvh", "lip", "chg", "aac", "alm1", "alm2"]);
    for (line, f) in whitespace_records(text) {
        expect_len(f.len(), 9, source, line)?;
        let class = f[8];
        if class == "imS" || class == "imL" {
            continue;
        }
        t.rows.push(numbers(&f[1..8], source, line)?);
        t.labels.push(class.to_string());
    }
    Ok(t)
}
