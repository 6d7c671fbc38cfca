//! Wall-clock measurements: model build time and average response time.
//! Monotonic clock, fit only (no preprocessing), one instance at a time for
//! response timing (no batching).

use std::time::Instant;

use crate::classifier::{Classifier, ClassifierSpec, TrainedModel};
use crate::data::Dataset;
use crate::error::{Error, Result};

/// Model build time: median of 3 timed fits, in seconds.
pub fn measure_mbt(spec: &ClassifierSpec, train: &Dataset, seed: u64) -> Result<f64> {
    let mut times = Vec::with_capacity(3);
    for _ in 0..3 {
        let start = Instant::now();
        let model = spec.fit(train, seed)?;
        times.push(start.elapsed().as_secs_f64());
        drop(model);
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(times[1])
}

/// Total single-instance classification time divided by the test-set size.
pub fn measure_response_time(model: &TrainedModel, test: &Dataset) -> Result<f64> {
    if test.n_rows() == 0 {
        return Err(Error::EmptyTestSet);
    }
    let start = Instant::now();
    for row in test.rows() {
        let _ = model.predict(row)?;
    }
    Ok(start.elapsed().as_secs_f64() / test.n_rows() as f64)
}
