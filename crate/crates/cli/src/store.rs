//! Filesystem model store for the staged train / evaluate pipeline.
//! One directory per cell: {key}.model.json files plus a times.json sidecar
//! mapping key -> fit seconds.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use idsbench::classifier::TrainedModel;
use idsbench::error::{Error, Result};
use idsbench::eval::ModelStore;
use idsbench::model_io::{load_model, save_model};

pub struct DirModelStore {
    dir: PathBuf,
    times: Mutex<BTreeMap<String, f64>>,
}

impl DirModelStore {
    /// Open a cell directory for writing (created if absent).
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(DirModelStore {
            dir: dir.to_path_buf(),
            times: Mutex::new(BTreeMap::new()),
        })
    }

    /// Open an existing cell directory for reading.
    pub fn open(dir: &Path) -> Result<Self> {
        let times_path = dir.join("times.json");
        let times: BTreeMap<String, f64> = if times_path.exists() {
            serde_json::from_str(&std::fs::read_to_string(&times_path)?)?
        } else {
            BTreeMap::new()
        };
        Ok(DirModelStore {
            dir: dir.to_path_buf(),
            times: Mutex::new(times),
        })
    }

    /// Persist the fit-time sidecar after a training pass.
    pub fn flush_times(&self) -> Result<()> {
        let times = self.times.lock().unwrap();
        std::fs::write(
            self.dir.join("times.json"),
            serde_json::to_string_pretty(&*times)?,
        )?;
        Ok(())
    }

    fn model_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.model.json"))
    }
}

impl ModelStore for DirModelStore {
    fn save(&self, key: &str, model: &TrainedModel, fit_seconds: f64) -> Result<()> {
        save_model(model, &self.model_path(key))?;
        self.times
            .lock()
            .unwrap()
            .insert(key.to_string(), fit_seconds);
        Ok(())
    }

    fn load(&self, key: &str) -> Result<(TrainedModel, f64)> {
        let path = self.model_path(key);
        if !path.exists() {
            return Err(Error::BadModelFile(format!(
                "missing model {} (run `idsbench train` first)",
                path.display()
            )));
        }
        let model = load_model(&path)?;
        let secs = self.times.lock().unwrap().get(key).copied().unwrap_or(0.0);
        Ok((model, secs))
    }
}
