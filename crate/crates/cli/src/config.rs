//! Benchmark configuration: versioned TOML, unknown keys rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use idsbench::classifier::{ClassifierKind, ClassifierSpec};
use idsbench::data::{DatasetSchema, SplitPlan};
use idsbench::eval::search::{apply_param, ParamRange, ParamSpace};
use idsbench::stats::DEFAULT_ALPHAS;

pub const CONFIG_VERSION: u32 = 1;
pub const ALL_METRICS: [&str; 5] = ["accuracy", "specificity", "sensitivity", "fpr", "auc"];

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid config: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    version: u32,
    master_seed: u64,
    output_dir: Option<PathBuf>,
    workers: Option<usize>,
    alphas: Option<Vec<f64>>,
    metrics: Option<Vec<String>>,
    #[serde(default)]
    dataset: Vec<RawDataset>,
    #[serde(default)]
    classifier: Vec<RawClassifier>,
    validation: RawValidation,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    name: String,
    path: PathBuf,
    /// Builtin schema id (cidds001, unswnb15, unswnb15-part, nslkdd) or a
    /// path to a descriptor file.
    schema: String,
    sample: Option<RawSample>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSample {
    normal: usize,
    attack: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClassifier {
    kind: String,
    n_estimators: Option<usize>,
    max_depth: Option<usize>,
    min_leaf_size: Option<usize>,
    min_split_size: Option<usize>,
    learning_rate: Option<f64>,
    min_child_weight: Option<f64>,
    gamma: Option<f64>,
    subsample: Option<f64>,
    lambda: Option<f64>,
    hidden_size: Option<usize>,
    max_iter: Option<usize>,
    batch_size: Option<usize>,
    search: Option<RawSearch>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSearch {
    budget: usize,
    k: Option<usize>,
    #[serde(default)]
    param: Vec<RawSearchParam>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSearchParam {
    name: String,
    min: Option<f64>,
    max: Option<f64>,
    choices: Option<Vec<f64>>,
    #[serde(default)]
    log: bool,
    #[serde(default)]
    int: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawValidation {
    kind: String,
    train_fraction: Option<f64>,
    /// Holdout only: preserve the class ratio in each partition.
    stratified: Option<bool>,
    k: Option<usize>,
    rounds: Option<usize>,
    repeats: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct DatasetPlan {
    pub name: String,
    pub path: PathBuf,
    pub schema_id: String,
    pub schema: DatasetSchema,
    pub sample: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct SearchPlan {
    pub budget: usize,
    pub k: usize,
    pub space: ParamSpace,
}

#[derive(Debug, Clone)]
pub struct ClassifierPlan {
    pub spec: ClassifierSpec,
    pub search: Option<SearchPlan>,
}

#[derive(Debug, Clone)]
pub struct Benchmark {
    pub master_seed: u64,
    pub output_dir: PathBuf,
    pub workers: Option<usize>,
    pub alphas: Vec<f64>,
    pub metrics: Vec<String>,
    pub datasets: Vec<DatasetPlan>,
    pub classifiers: Vec<ClassifierPlan>,
    pub plan: SplitPlan,
    pub rounds: usize,
    pub repeats: usize,
}

/// Resolve a schema argument: builtin id first, then descriptor file path.
pub fn resolve_schema(id_or_path: &str, config_dir: &Path) -> Result<DatasetSchema, ConfigError> {
    if let Some(builtin) = DatasetSchema::builtin(id_or_path) {
        return Ok(builtin);
    }
    let path = config_dir.join(id_or_path);
    let candidate = if path.exists() {
        path
    } else {
        PathBuf::from(id_or_path)
    };
    DatasetSchema::from_descriptor_file(&candidate)
        .map_err(|e| invalid(format!("schema {id_or_path:?}: {e}")))
}

fn resolve_classifier(raw: &RawClassifier) -> Result<ClassifierPlan, ConfigError> {
    let kind = ClassifierKind::parse(&raw.kind)
        .ok_or_else(|| invalid(format!("unknown classifier kind {:?}", raw.kind)))?;
    let mut spec = ClassifierSpec::published_default(kind);
    let overrides: [(&str, Option<f64>); 12] = [
        ("n_estimators", raw.n_estimators.map(|v| v as f64)),
        ("max_depth", raw.max_depth.map(|v| v as f64)),
        ("min_leaf_size", raw.min_leaf_size.map(|v| v as f64)),
        ("min_split_size", raw.min_split_size.map(|v| v as f64)),
        ("learning_rate", raw.learning_rate),
        ("min_child_weight", raw.min_child_weight),
        ("gamma", raw.gamma),
        ("subsample", raw.subsample),
        ("lambda", raw.lambda),
        ("hidden_size", raw.hidden_size.map(|v| v as f64)),
        ("max_iter", raw.max_iter.map(|v| v as f64)),
        ("batch_size", raw.batch_size.map(|v| v as f64)),
    ];
    for (name, value) in overrides {
        if let Some(v) = value {
            apply_param(&mut spec, name, v)
                .map_err(|e| invalid(format!("classifier {:?}: {e}", raw.kind)))?;
        }
    }

    let search = match &raw.search {
        None => None,
        Some(s) => {
            if s.budget == 0 {
                return Err(invalid("search budget must be >= 1"));
            }
            let mut params = Vec::new();
            for p in &s.param {
                let range = match (&p.choices, p.min, p.max) {
                    (Some(choices), _, _) => {
                        if choices.is_empty() {
                            return Err(invalid(format!("empty choices for {:?}", p.name)));
                        }
                        ParamRange::IntChoice(choices.iter().map(|&c| c as i64).collect())
                    }
                    (None, Some(min), Some(max)) => {
                        if min >= max {
                            return Err(invalid(format!("bad range for {:?}", p.name)));
                        }
                        if p.int {
                            ParamRange::IntUniform {
                                min: min as i64,
                                max: max as i64,
                            }
                        } else if p.log {
                            ParamRange::FloatLogUniform { min, max }
                        } else {
                            ParamRange::FloatUniform { min, max }
                        }
                    }
                    _ => {
                        return Err(invalid(format!(
                            "search param {:?} needs choices or min+max",
                            p.name
                        )))
                    }
                };
                params.push((p.name.clone(), range));
            }
            if params.is_empty() {
                return Err(invalid("search section declares no params"));
            }
            Some(SearchPlan {
                budget: s.budget,
                k: s.k.unwrap_or(3),
                space: ParamSpace { kind, params },
            })
        }
    };

    Ok(ClassifierPlan { spec, search })
}

/// Parse and validate a config file. Paths are resolved relative to the
/// config's directory; referenced files must exist.
pub fn load_config(path: &Path) -> Result<Benchmark, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let raw: RawConfig =
        toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    if raw.version != CONFIG_VERSION {
        return Err(invalid(format!(
            "config version {} unsupported (expected {CONFIG_VERSION})",
            raw.version
        )));
    }
    let config_dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();

    if raw.dataset.is_empty() {
        return Err(invalid("at least one [[dataset]] required"));
    }
    if raw.classifier.is_empty() {
        return Err(invalid("at least one [[classifier]] required"));
    }

    let mut datasets = Vec::with_capacity(raw.dataset.len());
    for d in &raw.dataset {
        let data_path = if d.path.is_absolute() {
            d.path.clone()
        } else {
            config_dir.join(&d.path)
        };
        if !data_path.exists() {
            return Err(invalid(format!(
                "dataset {:?}: path {} does not exist",
                d.name,
                data_path.display()
            )));
        }
        if datasets.iter().any(|p: &DatasetPlan| p.name == d.name) {
            return Err(invalid(format!("duplicate dataset name {:?}", d.name)));
        }
        datasets.push(DatasetPlan {
            name: d.name.clone(),
            path: data_path,
            schema_id: d.schema.clone(),
            schema: resolve_schema(&d.schema, &config_dir)?,
            sample: d.sample.as_ref().map(|s| (s.normal, s.attack)),
        });
    }

    let mut classifiers = Vec::with_capacity(raw.classifier.len());
    for c in &raw.classifier {
        let plan = resolve_classifier(c)?;
        if classifiers
            .iter()
            .any(|p: &ClassifierPlan| p.spec.kind() == plan.spec.kind())
        {
            return Err(invalid(format!("duplicate classifier kind {:?}", c.kind)));
        }
        classifiers.push(plan);
    }

    let plan = match raw.validation.kind.as_str() {
        "holdout" => {
            let f = raw.validation.train_fraction.unwrap_or(0.6);
            if !(f > 0.0 && f < 1.0) {
                return Err(invalid(format!("train_fraction {f} outside (0, 1)")));
            }
            if raw.validation.stratified.unwrap_or(false) {
                SplitPlan::StratifiedHoldout { train_fraction: f }
            } else {
                SplitPlan::Holdout { train_fraction: f }
            }
        }
        "kfold" => {
            if raw.validation.stratified.is_some() {
                return Err(invalid("stratified applies to holdout only"));
            }
            let k = raw.validation.k.unwrap_or(10);
            if k < 2 {
                return Err(invalid(format!("k = {k} must be >= 2")));
            }
            SplitPlan::KFold { k }
        }
        other => return Err(invalid(format!("validation kind {other:?}"))),
    };
    let rounds = raw.validation.rounds.unwrap_or(100);
    let repeats = raw.validation.repeats.unwrap_or(10);
    if rounds == 0 || repeats == 0 {
        return Err(invalid("rounds and repeats must be >= 1"));
    }

    let alphas = raw.alphas.unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
    if alphas.is_empty() || alphas.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
        return Err(invalid("alphas must lie in (0, 1)"));
    }
    let metrics = raw
        .metrics
        .unwrap_or_else(|| ALL_METRICS.iter().map(|s| s.to_string()).collect());
    for m in &metrics {
        if !ALL_METRICS.contains(&m.as_str()) {
            return Err(invalid(format!(
                "unknown metric {m:?} (choose from {ALL_METRICS:?})"
            )));
        }
    }

    Ok(Benchmark {
        master_seed: raw.master_seed,
        output_dir: raw
            .output_dir
            .map(|p| {
                if p.is_absolute() {
                    p
                } else {
                    config_dir.join(p)
                }
            })
            .unwrap_or_else(|| config_dir.join("out")),
        workers: raw.workers,
        alphas,
        metrics,
        datasets,
        classifiers,
        plan,
        rounds,
        repeats,
    })
}

impl Benchmark {
    /// Apply the reduced-ensemble profile to every classifier.
    pub fn desk_scale(mut self) -> Self {
        for c in &mut self.classifiers {
            c.spec = c.spec.clone().desk_scale();
        }
        self
    }
}
