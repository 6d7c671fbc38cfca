//! Seeded sampling and partitioning: stratified subsampling, hold-out splits
//! and k-fold partitions. All index sets are bit-identical for a fixed seed.

use rand::seq::SliceRandom;

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::seed::rng_from;

/// How a dataset is split for validation. Hold-out is a plain shuffle by
/// default; the stratified variant preserves the class ratio per partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitPlan {
    Holdout { train_fraction: f64 },
    StratifiedHoldout { train_fraction: f64 },
    KFold { k: usize },
}

impl SplitPlan {
    pub fn holdout_default() -> Self {
        SplitPlan::Holdout {
            train_fraction: 0.6,
        }
    }

    pub fn kfold_default() -> Self {
        SplitPlan::KFold { k: 10 }
    }
}

/// Sample exactly `n_normal` + `n_attack` rows without replacement,
/// stratified by class. Output row order follows the original dataset order.
pub fn sample_stratified(
    ds: &Dataset,
    n_normal: usize,
    n_attack: usize,
    seed: u64,
) -> Result<Dataset> {
    let mut normal_idx = Vec::new();
    let mut attack_idx = Vec::new();
    for (i, &l) in ds.labels().iter().enumerate() {
        if l == 1 {
            attack_idx.push(i);
        } else {
            normal_idx.push(i);
        }
    }
    if normal_idx.len() < n_normal {
        return Err(Error::InsufficientInstances {
            class: "normal",
            available: normal_idx.len(),
            requested: n_normal,
        });
    }
    if attack_idx.len() < n_attack {
        return Err(Error::InsufficientInstances {
            class: "attack",
            available: attack_idx.len(),
            requested: n_attack,
        });
    }
    let mut rng = rng_from(seed);
    normal_idx.shuffle(&mut rng);
    attack_idx.shuffle(&mut rng);
    let mut picked: Vec<usize> = normal_idx[..n_normal]
        .iter()
        .chain(attack_idx[..n_attack].iter())
        .copied()
        .collect();
    picked.sort_unstable();
    Ok(ds.subset(&picked))
}

/// Shuffle-and-cut hold-out split: |train| = round(train_fraction * n).
pub fn split_holdout(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::BadTrainFraction(train_fraction));
    }
    let n = ds.n_rows();
    let n_train = (train_fraction * n as f64).round() as usize;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng_from(seed));
    let (train_idx, test_idx) = perm.split_at(n_train);
    Ok((ds.subset(train_idx), ds.subset(test_idx)))
}

/// Class-preserving hold-out: each class is shuffled and cut at
/// round(train_fraction * class size) separately.
pub fn split_holdout_stratified(
    ds: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::BadTrainFraction(train_fraction));
    }
    let mut rng = rng_from(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for class in [0u8, 1u8] {
        let mut members: Vec<usize> = ds
            .labels()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect();
        members.shuffle(&mut rng);
        let n_train = (train_fraction * members.len() as f64).round() as usize;
        train_idx.extend_from_slice(&members[..n_train]);
        test_idx.extend_from_slice(&members[n_train..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((ds.subset(&train_idx), ds.subset(&test_idx)))
}

/// k disjoint folds covering every index; sizes differ by at most one.
/// Returns (train indices, test indices) per fold, each sorted ascending.
pub fn kfold_partitions(
    ds: &Dataset,
    k: usize,
    seed: u64,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let n = ds.n_rows();
    if k < 2 || k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng_from(seed));

    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0usize;
    for i in 0..k {
        let size = base + usize::from(i < extra);
        folds.push(&perm[start..start + size]);
        start += size;
    }

    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut test: Vec<usize> = folds[i].to_vec();
        let mut train: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, f)| f.iter().copied())
            .collect();
        test.sort_unstable();
        train.sort_unstable();
        out.push((train, test));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::synth;

    fn toy(n_normal: usize, n_attack: usize) -> Dataset {
        synth::generate(n_normal, n_attack, 7)
    }

    #[test]
    fn stratified_counts_and_determinism() {
        let ds = toy(6, 4);
        let s1 = sample_stratified(&ds, 3, 2, 1).unwrap();
        let s2 = sample_stratified(&ds, 3, 2, 1).unwrap();
        assert_eq!(s1.class_counts(), (3, 2));
        assert_eq!(s1.rows(), s2.rows());
        assert_eq!(s1.labels(), s2.labels());
    }

    #[test]
    fn stratified_empty_request() {
        let ds = toy(6, 4);
        let s = sample_stratified(&ds, 0, 0, 1).unwrap();
        assert_eq!(s.n_rows(), 0);
    }

    #[test]
    fn stratified_insufficient() {
        let ds = toy(6, 4);
        match sample_stratified(&ds, 3, 9, 1) {
            Err(Error::InsufficientInstances {
                class,
                available,
                requested,
            }) => {
                assert_eq!(class, "attack");
                assert_eq!(available, 4);
                assert_eq!(requested, 9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn holdout_sizes() {
        let ds = toy(6, 4);
        let (train, test) = split_holdout(&ds, 0.6, 3).unwrap();
        assert_eq!(train.n_rows(), 6);
        assert_eq!(test.n_rows(), 4);
    }

    #[test]
    fn holdout_deterministic_and_disjoint() {
        let ds = toy(60, 40);
        let (tr1, te1) = split_holdout(&ds, 0.6, 11).unwrap();
        let (tr2, te2) = split_holdout(&ds, 0.6, 11).unwrap();
        assert_eq!(tr1.rows(), tr2.rows());
        assert_eq!(te1.rows(), te2.rows());
        assert_eq!(tr1.n_rows() + te1.n_rows(), ds.n_rows());
    }

    #[test]
    fn holdout_rejects_bad_fraction() {
        let ds = toy(5, 5);
        assert!(matches!(
            split_holdout(&ds, 0.0, 1),
            Err(Error::BadTrainFraction(_))
        ));
        assert!(matches!(
            split_holdout(&ds, 1.0, 1),
            Err(Error::BadTrainFraction(_))
        ));
    }

    #[test]
    fn stratified_holdout_preserves_class_ratio() {
        let ds = toy(80, 20);
        let (train, test) = split_holdout_stratified(&ds, 0.6, 4).unwrap();
        assert_eq!(train.class_counts(), (48, 12));
        assert_eq!(test.class_counts(), (32, 8));
        assert_eq!(train.n_rows() + test.n_rows(), 100);
        let (t2, _) = split_holdout_stratified(&ds, 0.6, 4).unwrap();
        assert_eq!(train.rows(), t2.rows());
    }

    #[test]
    fn kfold_sizes_25192() {
        // 25192 = 10*2519 + 2: two folds of 2520, eight of 2519.
        let ds = toy(12596, 12596);
        let folds = kfold_partitions(&ds, 10, 5).unwrap();
        let mut sizes: Vec<usize> = folds.iter().map(|(_, test)| test.len()).collect();
        sizes.sort_unstable();
        assert_eq!(&sizes[..8], &[2519; 8]);
        assert_eq!(&sizes[8..], &[2520; 2]);
    }

    #[test]
    fn kfold_singletons() {
        let ds = toy(5, 5);
        let folds = kfold_partitions(&ds, 10, 5).unwrap();
        assert!(folds.iter().all(|(_, test)| test.len() == 1));
    }

    #[test]
    fn kfold_union_disjoint() {
        let ds = toy(500, 500);
        let folds = kfold_partitions(&ds, 7, 9).unwrap();
        let mut seen = vec![0u8; ds.n_rows()];
        for (train, test) in &folds {
            for &i in test {
                seen[i] += 1;
            }
            // train and test disjoint within a fold
            let t: std::collections::HashSet<_> = test.iter().collect();
            assert!(train.iter().all(|i| !t.contains(i)));
            assert_eq!(train.len() + test.len(), ds.n_rows());
        }
        assert!(
            seen.iter().all(|&c| c == 1),
            "each index in exactly one test fold"
        );
    }

    #[test]
    fn kfold_too_large() {
        let ds = toy(3, 2);
        assert!(matches!(
            kfold_partitions(&ds, 6, 1),
            Err(Error::KTooLarge { k: 6, n: 5 })
        ));
        assert!(matches!(
            kfold_partitions(&ds, 1, 1),
            Err(Error::KTooLarge { .. })
        ));
    }
}
