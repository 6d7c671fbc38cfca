//! Versioned model files: a JSON envelope with a kind tag, the params block,
//! pre-order node lists for trees and stage weights for boosted models.
//! One format serves CART, the forests, the boosting variants and the MLP.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classifier::TrainedModel;
use crate::ensemble::{BoostKind, BoostModel, ForestModel, ForestParams};
use crate::error::{Error, Result};
use crate::mlp::MlpModel;
use crate::tree::{flatten, unflatten, CartModel, FlatNode, TreeParams};

pub const MODEL_FORMAT: &str = "idsbench-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelEnvelope {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub body: ModelBody,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BoostStage {
    pub weight: f64,
    pub nodes: Vec<FlatNode>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ModelBody {
    #[serde(rename = "cart")]
    Cart {
        params: TreeParams,
        n_features: usize,
        nodes: Vec<FlatNode>,
    },
    #[serde(rename = "random_forest")]
    RandomForest {
        params: ForestParams,
        n_features: usize,
        seed: u64,
        trees: Vec<Vec<FlatNode>>,
    },
    #[serde(rename = "extra_trees")]
    ExtraTrees {
        params: ForestParams,
        n_features: usize,
        seed: u64,
        trees: Vec<Vec<FlatNode>>,
    },
    #[serde(rename = "adaboost")]
    AdaBoost {
        learning_rate: f64,
        n_features: usize,
        stages: Vec<BoostStage>,
    },
    #[serde(rename = "gbm")]
    Gbm {
        learning_rate: f64,
        base_score: f64,
        n_features: usize,
        stages: Vec<BoostStage>,
    },
    #[serde(rename = "regularized_gb")]
    RegularizedGb {
        learning_rate: f64,
        base_score: f64,
        n_features: usize,
        stages: Vec<BoostStage>,
    },
    #[serde(rename = "mlp")]
    Mlp { model: MlpModel },
}

fn boost_stages(model: &BoostModel) -> Vec<BoostStage> {
    model
        .stages
        .iter()
        .map(|(tree, weight)| BoostStage {
            weight: *weight,
            nodes: flatten(tree),
        })
        .collect()
}

fn stages_back(stages: Vec<BoostStage>) -> Result<Vec<(crate::tree::TreeNode, f64)>> {
    stages
        .into_iter()
        .map(|s| Ok((unflatten(&s.nodes)?, s.weight)))
        .collect()
}

pub fn to_envelope(model: &TrainedModel) -> ModelEnvelope {
    let body = match model {
        TrainedModel::Cart(m) => ModelBody::Cart {
            params: m.params,
            n_features: m.n_features,
            nodes: flatten(&m.root),
        },
        TrainedModel::Forest(m) => {
            let trees = m.trees.iter().map(flatten).collect();
            if m.params.bootstrap {
                ModelBody::RandomForest {
                    params: m.params,
                    n_features: m.n_features,
                    seed: m.seed,
                    trees,
                }
            } else {
                ModelBody::ExtraTrees {
                    params: m.params,
                    n_features: m.n_features,
                    seed: m.seed,
                    trees,
                }
            }
        }
        TrainedModel::Boost(m) => match m.kind {
            BoostKind::AdaBoost => ModelBody::AdaBoost {
                learning_rate: m.learning_rate,
                n_features: m.n_features,
                stages: boost_stages(m),
            },
            BoostKind::Gbm => ModelBody::Gbm {
                learning_rate: m.learning_rate,
                base_score: m.base_score,
                n_features: m.n_features,
                stages: boost_stages(m),
            },
            BoostKind::RegularizedGb => ModelBody::RegularizedGb {
                learning_rate: m.learning_rate,
                base_score: m.base_score,
                n_features: m.n_features,
                stages: boost_stages(m),
            },
        },
        TrainedModel::Mlp(m) => ModelBody::Mlp { model: m.clone() },
    };
    ModelEnvelope {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        body,
    }
}

pub fn from_envelope(env: ModelEnvelope) -> Result<TrainedModel> {
    if env.format != MODEL_FORMAT {
        return Err(Error::BadModelFile(format!("format {:?}", env.format)));
    }
    if env.version != MODEL_VERSION {
        return Err(Error::BadModelFile(format!("version {}", env.version)));
    }
    Ok(match env.body {
        ModelBody::Cart {
            params,
            n_features,
            nodes,
        } => TrainedModel::Cart(CartModel {
            root: unflatten(&nodes)?,
            n_features,
            params,
        }),
        ModelBody::RandomForest {
            params,
            n_features,
            seed,
            trees,
        }
        | ModelBody::ExtraTrees {
            params,
            n_features,
            seed,
            trees,
        } => {
            let trees = trees
                .iter()
                .map(|nodes| unflatten(nodes))
                .collect::<Result<Vec<_>>>()?;
            TrainedModel::Forest(ForestModel {
                trees,
                params,
                n_features,
                seed,
            })
        }
        ModelBody::AdaBoost {
            learning_rate,
            n_features,
            stages,
        } => TrainedModel::Boost(BoostModel {
            kind: BoostKind::AdaBoost,
            stages: stages_back(stages)?,
            learning_rate,
            base_score: 0.0,
            n_features,
            diagnostics: Default::default(),
        }),
        ModelBody::Gbm {
            learning_rate,
            base_score,
            n_features,
            stages,
        } => TrainedModel::Boost(BoostModel {
            kind: BoostKind::Gbm,
            stages: stages_back(stages)?,
            learning_rate,
            base_score,
            n_features,
            diagnostics: Default::default(),
        }),
        ModelBody::RegularizedGb {
            learning_rate,
            base_score,
            n_features,
            stages,
        } => TrainedModel::Boost(BoostModel {
            kind: BoostKind::RegularizedGb,
            stages: stages_back(stages)?,
            learning_rate,
            base_score,
            n_features,
            diagnostics: Default::default(),
        }),
        ModelBody::Mlp { model } => TrainedModel::Mlp(model),
    })
}

/// Deterministic textual form (used by determinism checks as well).
pub fn model_to_json(model: &TrainedModel) -> Result<String> {
    Ok(serde_json::to_string(&to_envelope(model))?)
}

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    std::fs::write(path, model_to_json(model)?)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path)?;
    let env: ModelEnvelope =
        serde_json::from_str(&text).map_err(|e| Error::BadModelFile(e.to_string()))?;
    from_envelope(env)
}
