//! CART: Gini-impurity binary decision trees, used directly as a classifier
//! and as the base learner for every ensemble. Supports exhaustive best-split
//! search and the random-cut mode used by extremely randomized trees, in
//! classification (Gini) and regression (MSE) tasks.

use serde::{Deserialize, Serialize};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::seed::rng_from;

/// Gains below this are treated as zero; split search refuses them.
const GAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitMode {
    /// Exhaustive scan over midpoints of consecutive distinct values.
    Best,
    /// One uniform random cut per candidate feature (extra-trees style).
    RandomCut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeTask {
    ClassifyGini,
    RegressMse,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf_size: usize,
    pub min_split_size: usize,
    /// Features sampled per node; None = all.
    pub feature_subset: Option<usize>,
    pub split_mode: SplitMode,
    pub task: TreeTask,
}

impl TreeParams {
    /// Published benchmark settings for the standalone CART classifier: depth 10, at least
    /// 2 observations per terminal node.
    pub fn cart_published() -> Self {
        TreeParams {
            max_depth: 10,
            min_leaf_size: 2,
            min_split_size: 2,
            feature_subset: None,
            split_mode: SplitMode::Best,
            task: TreeTask::ClassifyGini,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRule {
    pub feature_index: usize,
    /// Rows with value <= threshold go left.
    pub threshold: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Internal {
        rule: SplitRule,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    /// Classification leaves carry class counts (value = attack fraction);
    /// regression leaves carry the fitted value (counts = (rows, 0)).
    Leaf {
        n_normal: u32,
        n_attack: u32,
        value: f64,
    },
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    /// Route a feature vector to its leaf.
    pub fn route(&self, x: &[f64]) -> &TreeNode {
        match self {
            TreeNode::Leaf { .. } => self,
            TreeNode::Internal { rule, left, right } => {
                if x[rule.feature_index] <= rule.threshold {
                    left.route(x)
                } else {
                    right.route(x)
                }
            }
        }
    }

    /// Regression-mode output (leaf value) for x.
    pub fn value_at(&self, x: &[f64]) -> f64 {
        match self.route(x) {
            TreeNode::Leaf { value, .. } => *value,
            TreeNode::Internal { .. } => unreachable!("route ends at a leaf"),
        }
    }

    /// Walk every internal rule (used by invariant checks).
    pub fn for_each_rule(&self, f: &mut impl FnMut(&SplitRule)) {
        if let TreeNode::Internal { rule, left, right } = self {
            f(rule);
            left.for_each_rule(f);
            right.for_each_rule(f);
        }
    }
}

/// Gini impurity of a two-class count pair: 1 - p0^2 - p1^2.
pub fn gini_impurity(counts: (u64, u64)) -> Result<f64> {
    let total = counts.0 + counts.1;
    if total == 0 {
        return Err(Error::EmptyNode);
    }
    let p0 = counts.0 as f64 / total as f64;
    let p1 = counts.1 as f64 / total as f64;
    Ok(1.0 - p0 * p0 - p1 * p1)
}

/// Classify with a fitted tree: majority-class label (tie -> normal) and
/// attack-probability score from the leaf counts.
pub fn predict_tree(root: &TreeNode, x: &[f64]) -> (u8, f64) {
    match root.route(x) {
        TreeNode::Leaf {
            n_normal, n_attack, ..
        } => {
            let total = n_normal + n_attack;
            let score = if total == 0 {
                0.5
            } else {
                f64::from(*n_attack) / f64::from(total)
            };
            (u8::from(n_attack > n_normal), score)
        }
        TreeNode::Internal { .. } => unreachable!("route ends at a leaf"),
    }
}

/// A fitted CART classifier (tree plus the trained feature count).
#[derive(Debug, Clone)]
pub struct CartModel {
    pub root: TreeNode,
    pub n_features: usize,
    pub params: TreeParams,
}

impl CartModel {
    pub fn predict(&self, x: &[f64]) -> Result<(u8, f64)> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        Ok(predict_tree(&self.root, x))
    }
}

/// Fit a CART classifier on an encoded dataset.
pub fn fit_cart(train: &Dataset, params: &TreeParams, seed: u64) -> Result<CartModel> {
    if train.n_rows() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let targets: Vec<f64> = train.labels().iter().map(|&l| f64::from(l)).collect();
    let indices: Vec<usize> = (0..train.n_rows()).collect();
    let root = fit_tree_on(train.rows(), &targets, &indices, params, seed)?;
    Ok(CartModel {
        root,
        n_features: train.n_features(),
        params: *params,
    })
}

/// Fit a tree on explicit rows/targets (ensembles pass resamples and
/// residuals through this).
pub fn fit_tree_on(
    rows: &[Vec<f64>],
    targets: &[f64],
    indices: &[usize],
    params: &TreeParams,
    seed: u64,
) -> Result<TreeNode> {
    if indices.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let mut rng = rng_from(seed);
    Ok(grow(rows, targets, indices, 0, params, &mut rng))
}

fn grow(
    rows: &[Vec<f64>],
    targets: &[f64],
    idx: &[usize],
    depth: usize,
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    let stop = depth >= params.max_depth || idx.len() < params.min_split_size;
    let rule = if stop {
        None
    } else {
        best_split(rows, targets, idx, params, rng)
    };
    match rule {
        None => make_leaf(targets, idx, params.task),
        Some(rule) => {
            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idx
                .iter()
                .partition(|&&i| rows[i][rule.feature_index] <= rule.threshold);
            let left = grow(rows, targets, &left_idx, depth + 1, params, rng);
            let right = grow(rows, targets, &right_idx, depth + 1, params, rng);
            TreeNode::Internal {
                rule,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

fn make_leaf(targets: &[f64], idx: &[usize], task: TreeTask) -> TreeNode {
    match task {
        TreeTask::ClassifyGini => {
            let n_attack = idx.iter().filter(|&&i| targets[i] > 0.5).count() as u32;
            let n_normal = idx.len() as u32 - n_attack;
            let value = f64::from(n_attack) / idx.len() as f64;
            TreeNode::Leaf {
                n_normal,
                n_attack,
                value,
            }
        }
        TreeTask::RegressMse => {
            let mean = idx.iter().map(|&i| targets[i]).sum::<f64>() / idx.len() as f64;
            TreeNode::Leaf {
                n_normal: idx.len() as u32,
                n_attack: 0,
                value: mean,
            }
        }
    }
}

/// Pick the best split at a node, or None when nothing yields positive gain.
pub fn best_split(
    rows: &[Vec<f64>],
    targets: &[f64],
    idx: &[usize],
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
) -> Option<SplitRule> {
    let n_features = rows.first()?.len();
    let features = sample_features(rng, n_features, params.feature_subset);

    let parent = Impurity::of(targets, idx.iter().copied(), params.task);
    let mut best: Option<SplitRule> = None;

    for &feature in &features {
        match params.split_mode {
            SplitMode::Best => {
                // Sort node rows by this feature's value, then scan.
                let mut order: Vec<usize> = idx.to_vec();
                order.sort_by(|&a, &b| rows[a][feature].partial_cmp(&rows[b][feature]).unwrap());
                scan_boundaries(rows, targets, &order, feature, &parent, params, &mut best);
            }
            SplitMode::RandomCut => {
                // No sorting: a min/max pass, one uniform draw, one
                // partition pass. This is what makes the randomized trees
                // cheaper to grow than exhaustive search.
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for &i in idx {
                    let v = rows[i][feature];
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                if lo < hi {
                    let threshold = rng.gen_range(lo..hi);
                    eval_threshold(
                        rows, targets, idx, feature, threshold, &parent, params, &mut best,
                    );
                }
            }
        }
    }
    best
}

/// Running impurity bookkeeping for one side of a candidate split.
#[derive(Clone, Copy)]
struct Impurity {
    n: f64,
    // classification: attack count; regression: sum / sum of squares
    pos: f64,
    sum: f64,
    sum_sq: f64,
    task: TreeTask,
}

impl Impurity {
    fn empty(task: TreeTask) -> Self {
        Impurity {
            n: 0.0,
            pos: 0.0,
            sum: 0.0,
            sum_sq: 0.0,
            task,
        }
    }

    fn of(targets: &[f64], idx: impl Iterator<Item = usize>, task: TreeTask) -> Self {
        let mut s = Self::empty(task);
        for i in idx {
            s.add(targets[i]);
        }
        s
    }

    fn add(&mut self, t: f64) {
        self.n += 1.0;
        if t > 0.5 {
            self.pos += 1.0;
        }
        self.sum += t;
        self.sum_sq += t * t;
    }

    fn remove(&mut self, t: f64) {
        self.n -= 1.0;
        if t > 0.5 {
            self.pos -= 1.0;
        }
        self.sum -= t;
        self.sum_sq -= t * t;
    }

    fn impurity(&self) -> f64 {
        if self.n <= 0.0 {
            return 0.0;
        }
        match self.task {
            TreeTask::ClassifyGini => {
                let p1 = self.pos / self.n;
                let p0 = 1.0 - p1;
                1.0 - p0 * p0 - p1 * p1
            }
            TreeTask::RegressMse => {
                let mean = self.sum / self.n;
                (self.sum_sq / self.n - mean * mean).max(0.0)
            }
        }
    }
}

fn weighted_gain(parent: &Impurity, left: &Impurity, right: &Impurity) -> f64 {
    let n = parent.n;
    parent.impurity() - (left.n / n) * left.impurity() - (right.n / n) * right.impurity()
}

/// Exhaustive scan: thresholds at midpoints of consecutive distinct sorted
/// values. `order` is sorted by the feature; prefix state moves one row at a
/// time so the whole scan is O(n) after sorting.
#[allow(clippy::too_many_arguments)]
fn scan_boundaries(
    rows: &[Vec<f64>],
    targets: &[f64],
    order: &[usize],
    feature: usize,
    parent: &Impurity,
    params: &TreeParams,
    best: &mut Option<SplitRule>,
) {
    let mut left = Impurity::empty(params.task);
    let mut right = *parent;
    let n = order.len();
    for pos in 0..n - 1 {
        let t = targets[order[pos]];
        left.add(t);
        right.remove(t);
        let v = rows[order[pos]][feature];
        let v_next = rows[order[pos + 1]][feature];
        if v >= v_next {
            continue; // not a boundary between distinct values
        }
        let n_left = pos + 1;
        let n_right = n - n_left;
        if n_left < params.min_leaf_size || n_right < params.min_leaf_size {
            continue;
        }
        let gain = weighted_gain(parent, &left, &right);
        let threshold = v + 0.5 * (v_next - v);
        consider(best, feature, threshold, gain);
    }
}

/// Evaluate one explicit threshold (random-cut mode) in a single pass.
#[allow(clippy::too_many_arguments)]
fn eval_threshold(
    rows: &[Vec<f64>],
    targets: &[f64],
    idx: &[usize],
    feature: usize,
    threshold: f64,
    parent: &Impurity,
    params: &TreeParams,
    best: &mut Option<SplitRule>,
) {
    let mut left = Impurity::empty(params.task);
    let mut right = Impurity::empty(params.task);
    for &i in idx {
        if rows[i][feature] <= threshold {
            left.add(targets[i]);
        } else {
            right.add(targets[i]);
        }
    }
    if (left.n as usize) < params.min_leaf_size || (right.n as usize) < params.min_leaf_size {
        return;
    }
    let gain = weighted_gain(parent, &left, &right);
    consider(best, feature, threshold, gain);
}

/// Keep the candidate if its gain strictly beats the incumbent. Candidates
/// arrive in ascending (feature, threshold) order, so exact ties resolve to
/// the lowest feature index, then the lowest threshold.
fn consider(best: &mut Option<SplitRule>, feature: usize, threshold: f64, gain: f64) {
    if gain <= GAIN_EPS {
        return;
    }
    let better = match best {
        None => true,
        Some(b) => gain > b.gain,
    };
    if better {
        *best = Some(SplitRule {
            feature_index: feature,
            threshold,
            gain,
        });
    }
}

/// Sample `m` distinct feature indices (ascending) or all of them.
fn sample_features(rng: &mut ChaCha8Rng, n_features: usize, subset: Option<usize>) -> Vec<usize> {
    match subset {
        None => (0..n_features).collect(),
        Some(m) if m >= n_features => (0..n_features).collect(),
        Some(m) => {
            // Partial Fisher-Yates, then sort for deterministic tie-breaks.
            let mut pool: Vec<usize> = (0..n_features).collect();
            for i in 0..m {
                let j = rng.gen_range(i..pool.len());
                pool.swap(i, j);
            }
            let mut picked = pool[..m].to_vec();
            picked.sort_unstable();
            picked
        }
    }
}

/// Pre-order node list for the model file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node")]
pub enum FlatNode {
    #[serde(rename = "split")]
    Split {
        feature: usize,
        threshold: f64,
        gain: f64,
    },
    #[serde(rename = "leaf")]
    Leaf {
        n_normal: u32,
        n_attack: u32,
        value: f64,
    },
}

pub fn flatten(root: &TreeNode) -> Vec<FlatNode> {
    fn walk(node: &TreeNode, out: &mut Vec<FlatNode>) {
        match node {
            TreeNode::Internal { rule, left, right } => {
                out.push(FlatNode::Split {
                    feature: rule.feature_index,
                    threshold: rule.threshold,
                    gain: rule.gain,
                });
                walk(left, out);
                walk(right, out);
            }
            TreeNode::Leaf {
                n_normal,
                n_attack,
                value,
            } => out.push(FlatNode::Leaf {
                n_normal: *n_normal,
                n_attack: *n_attack,
                value: *value,
            }),
        }
    }
    let mut out = Vec::new();
    walk(root, &mut out);
    out
}

pub fn unflatten(nodes: &[FlatNode]) -> Result<TreeNode> {
    fn build(nodes: &[FlatNode], pos: &mut usize) -> Result<TreeNode> {
        let node = nodes
            .get(*pos)
            .ok_or_else(|| Error::BadModelFile("truncated node list".into()))?;
        *pos += 1;
        match *node {
            FlatNode::Leaf {
                n_normal,
                n_attack,
                value,
            } => Ok(TreeNode::Leaf {
                n_normal,
                n_attack,
                value,
            }),
            FlatNode::Split {
                feature,
                threshold,
                gain,
            } => {
                let left = build(nodes, pos)?;
                let right = build(nodes, pos)?;
                Ok(TreeNode::Internal {
                    rule: SplitRule {
                        feature_index: feature,
                        threshold,
                        gain,
                    },
                    left: Box::new(left),
                    right: Box::new(right),
                })
            }
        }
    }
    let mut pos = 0;
    let root = build(nodes, &mut pos)?;
    if pos != nodes.len() {
        return Err(Error::BadModelFile("trailing nodes after tree".into()));
    }
    Ok(root)
}
