use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Problem sizes. Serialized with the single-letter names used throughout
/// the configs: K arms, D objectives, N users, T rounds.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Dimensions {
    #[serde(rename = "K")]
    pub num_arms: usize,
    #[serde(rename = "D")]
    pub num_objectives: usize,
    #[serde(rename = "N")]
    pub num_users: usize,
    #[serde(rename = "T")]
    pub horizon: usize,
}

/// One observed D-dimensional reward. Entries live in [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct RewardVector(pub Vec<f64>);

/// One observed D-dimensional preference. Entries are nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct PreferenceVector(pub Vec<f64>);

impl RewardVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl PreferenceVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Gaussian reward generator for one arm: independent per-objective draws
/// with the given means and variances, clipped to [0, 1].
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ArmModel {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

/// Gaussian preference generator for one user: independent per-objective
/// draws clipped below at 0, optionally L1-normalized afterwards.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct UserModel {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    #[serde(default)]
    pub normalize: bool,
}

/// Arm indices one user may pull this round, sorted ascending.
pub type ArmSet = Vec<usize>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn l2_norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

pub fn l2_norm(v: &[f64]) -> f64 {
    l2_norm_sq(v).sqrt()
}

/// Scalar feedback g = c^T r for one interaction.
pub fn overall_reward(preference: &PreferenceVector, reward: &RewardVector) -> Result<f64> {
    if preference.dim() != reward.dim() {
        return Err(Error::DimensionMismatch {
            expected: preference.dim(),
            actual: reward.dim(),
        });
    }
    Ok(dot(preference.as_slice(), reward.as_slice()))
}
