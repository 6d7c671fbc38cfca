//! One-hidden-layer perceptron with logistic activations, trained by
//! mini-batch SGD on binary cross-entropy. Glorot-uniform initialization,
//! per-epoch reshuffling from the seeded stream, no momentum or decay.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from};

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden_size: usize,
    pub learning_rate: f64,
    /// Training epochs.
    pub max_iter: usize,
    pub batch_size: usize,
}

impl MlpParams {
    /// Published benchmark settings: hidden layer 100, logistic activation, sgd, lr 0.001,
    /// 200 iterations. Batch size is not stated; 32 is used.
    pub fn published() -> Self {
        MlpParams {
            hidden_size: 100,
            learning_rate: 0.001,
            max_iter: 200,
            batch_size: 32,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlpModel {
    /// Hidden weights, row-major: w1[j * d + i] connects input i to unit j.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
    pub n_features: usize,
    pub params: MlpParams,
}

impl MlpModel {
    /// Glorot-uniform initialized, untrained model.
    pub fn init(n_features: usize, params: MlpParams, seed: u64) -> Self {
        let mut rng = rng_from(derive_seed(seed, "mlp-init", &[]));
        let h = params.hidden_size;
        let bound1 = (6.0 / (n_features + h) as f64).sqrt();
        let bound2 = (6.0 / (h + 1) as f64).sqrt();
        MlpModel {
            w1: (0..h * n_features)
                .map(|_| rng.gen_range(-bound1..bound1))
                .collect(),
            b1: vec![0.0; h],
            w2: (0..h).map(|_| rng.gen_range(-bound2..bound2)).collect(),
            b2: 0.0,
            n_features,
            params,
        }
    }

    fn hidden(&self, x: &[f64], out: &mut [f64]) {
        let d = self.n_features;
        for (j, o) in out.iter_mut().enumerate() {
            let row = &self.w1[j * d..(j + 1) * d];
            let z: f64 = row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>() + self.b1[j];
            *o = logistic(z);
        }
    }

    /// Attack probability in (0, 1).
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let mut h = vec![0.0; self.params.hidden_size];
        self.hidden(x, &mut h);
        let z: f64 = self.w2.iter().zip(&h).map(|(w, hi)| w * hi).sum::<f64>() + self.b2;
        Ok(logistic(z))
    }

    pub fn predict(&self, x: &[f64]) -> Result<(u8, f64)> {
        let score = self.forward(x)?;
        Ok((u8::from(score > 0.5), score))
    }

    /// Accumulate the batch-mean BCE gradient at (rows, labels) into grads.
    /// Returns the batch loss. Exposed for the finite-difference check.
    pub fn accumulate_gradients(
        &self,
        rows: &[&[f64]],
        labels: &[f64],
        grads: &mut MlpGradients,
    ) -> f64 {
        let d = self.n_features;
        let hsize = self.params.hidden_size;
        let scale = 1.0 / rows.len() as f64;
        let mut hidden = vec![0.0; hsize];
        let mut loss = 0.0;
        for (x, &y) in rows.iter().zip(labels) {
            self.hidden(x, &mut hidden);
            let z: f64 = self
                .w2
                .iter()
                .zip(&hidden)
                .map(|(w, hi)| w * hi)
                .sum::<f64>()
                + self.b2;
            let o = logistic(z);
            let p = o.clamp(1e-15, 1.0 - 1e-15);
            loss -= scale * (y * p.ln() + (1.0 - y) * (1.0 - p).ln());

            // BCE + logistic output: delta2 = o - y.
            let delta2 = (o - y) * scale;
            grads.b2 += delta2;
            for j in 0..hsize {
                grads.w2[j] += delta2 * hidden[j];
                let delta1 = delta2 * self.w2[j] * hidden[j] * (1.0 - hidden[j]);
                grads.b1[j] += delta1;
                let grow = &mut grads.w1[j * d..(j + 1) * d];
                for (g, xi) in grow.iter_mut().zip(*x) {
                    *g += delta1 * xi;
                }
            }
        }
        loss
    }

    fn apply(&mut self, grads: &MlpGradients, lr: f64) {
        for (w, g) in self.w1.iter_mut().zip(&grads.w1) {
            *w -= lr * g;
        }
        for (b, g) in self.b1.iter_mut().zip(&grads.b1) {
            *b -= lr * g;
        }
        for (w, g) in self.w2.iter_mut().zip(&grads.w2) {
            *w -= lr * g;
        }
        self.b2 -= lr * grads.b2;
    }
}

#[derive(Debug, Clone)]
pub struct MlpGradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

impl MlpGradients {
    pub fn zeros(n_features: usize, hidden: usize) -> Self {
        MlpGradients {
            w1: vec![0.0; hidden * n_features],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
        }
    }

    fn reset(&mut self) {
        self.w1.iter_mut().for_each(|g| *g = 0.0);
        self.b1.iter_mut().for_each(|g| *g = 0.0);
        self.w2.iter_mut().for_each(|g| *g = 0.0);
        self.b2 = 0.0;
    }
}

pub fn fit_mlp(train: &Dataset, params: &MlpParams, seed: u64) -> Result<MlpModel> {
    if train.n_rows() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let n = train.n_rows();
    let mut model = MlpModel::init(train.n_features(), *params, seed);
    let labels: Vec<f64> = train.labels().iter().map(|&l| f64::from(l)).collect();
    let batch = params.batch_size.max(1);

    let mut order: Vec<usize> = (0..n).collect();
    let mut grads = MlpGradients::zeros(train.n_features(), params.hidden_size);
    for epoch in 0..params.max_iter {
        let mut rng = rng_from(derive_seed(seed, "mlp-epoch", &[epoch as u64]));
        rand::seq::SliceRandom::shuffle(&mut order[..], &mut rng);
        for chunk in order.chunks(batch) {
            let rows: Vec<&[f64]> = chunk.iter().map(|&i| train.row(i)).collect();
            let ys: Vec<f64> = chunk.iter().map(|&i| labels[i]).collect();
            grads.reset();
            model.accumulate_gradients(&rows, &ys, &mut grads);
            model.apply(&grads, params.learning_rate);
        }
    }
    Ok(model)
}
