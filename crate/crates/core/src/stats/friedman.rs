//! Friedman omnibus test over a rank matrix.
//!
//! Q = 12 / (d k (k+1)) * sum_j (R_j - d(k+1)/2)^2,
//! F = (d-1) Q / (d(k-1) - Q), tested against the F distribution with
//! df1 = k-1, df2 = (d-1)(k-1).

use serde::{Deserialize, Serialize};

use super::dist::f_upper_tail;
use super::rank::RankMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_ALPHAS: [f64; 2] = [0.05, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Reject,
    Accept,
}

impl Decision {
    pub fn mark(&self) -> &'static str {
        match self {
            Decision::Reject => "R",
            Decision::Accept => "A",
        }
    }
}

/// Reject H0 (no performance difference) iff p < alpha, per alpha.
pub fn decide(p_value: f64, alphas: &[f64]) -> Vec<(f64, Decision)> {
    alphas
        .iter()
        .map(|&a| {
            (
                a,
                if p_value < a {
                    Decision::Reject
                } else {
                    Decision::Accept
                },
            )
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub q: f64,
    pub f_statistic: f64,
    pub df1: usize,
    pub df2: usize,
    pub p_value: f64,
    pub decisions: Vec<(f64, Decision)>,
}

pub fn friedman(ranks: &RankMatrix, alphas: &[f64]) -> Result<FriedmanResult> {
    let d = ranks.d;
    let k = ranks.k;
    if d < 2 || k < 2 {
        return Err(Error::MatrixTooSmall { d, k });
    }
    let df = d as f64;
    let kf = k as f64;
    let center = df * (kf + 1.0) / 2.0;
    let q = 12.0 / (df * kf * (kf + 1.0))
        * ranks
            .rank_sums
            .iter()
            .map(|&rj| (rj - center).powi(2))
            .sum::<f64>();
    let denom = df * (kf - 1.0) - q;
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateStatistic { q });
    }
    let f_statistic = (df - 1.0) * q / denom;
    let df1 = k - 1;
    let df2 = (d - 1) * (k - 1);
    let p_value = f_upper_tail(f_statistic, df1, df2);
    Ok(FriedmanResult {
        q,
        f_statistic,
        df1,
        df2,
        p_value,
        decisions: decide(p_value, alphas),
    })
}
