use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::config::{AlgorithmSpec, Protocol, RunConfig};
use crate::error::{Error, Result};
use crate::rng::{derive_stream, StreamRole};
use crate::stats::{clipped_mean_interval, clipped_mean_lower};
use crate::types::{ArmModel, ArmSet, Dimensions, PreferenceVector, RewardVector, UserModel};

/// Sample count for the Monte-Carlo fallback in `preference_true_mean`.
/// Only the normalized case with positive variance needs it; there the
/// post-normalization mean has no closed form.
const NORMALIZED_MEAN_SAMPLES: u64 = 400_000;
const NORMALIZED_MEAN_SEED: u64 = 0x5052_4546_4d43_4d50;

/// One reward draw: independent Gaussians per objective, clipped to [0, 1].
pub fn draw_reward(model: &ArmModel, rng: &mut ChaCha8Rng) -> RewardVector {
    let values = model
        .mean
        .iter()
        .zip(&model.variance)
        .map(|(&mean, &var)| {
            let normal = Normal::new(mean, var.sqrt()).expect("validated model");
            normal.sample(rng).clamp(0.0, 1.0)
        })
        .collect();
    RewardVector(values)
}

/// One preference draw: independent Gaussians per objective, clipped below
/// at 0. With `normalize` set, a draw whose L1 norm exceeds 1 is scaled
/// down to L1 norm 1 (a cap, not a projection; smaller draws pass through).
pub fn draw_preference(model: &UserModel, rng: &mut ChaCha8Rng) -> PreferenceVector {
    let mut values: Vec<f64> = model
        .mean
        .iter()
        .zip(&model.variance)
        .map(|(&mean, &var)| {
            let normal = Normal::new(mean, var.sqrt()).expect("validated model");
            normal.sample(rng).max(0.0)
        })
        .collect();
    if model.normalize {
        let sum: f64 = values.iter().sum();
        if sum > 1.0 {
            for v in &mut values {
                *v /= sum;
            }
        }
    }
    PreferenceVector(values)
}

/// Post-clipping expectation of each reward coordinate.
pub fn reward_true_mean(model: &ArmModel) -> Vec<f64> {
    model
        .mean
        .iter()
        .zip(&model.variance)
        .map(|(&mean, &var)| clipped_mean_interval(mean, var.sqrt(), 0.0, 1.0))
        .collect()
}

/// Expectation of the preference draw actually produced by
/// `draw_preference`, i.e. after clipping and optional normalization.
pub fn preference_true_mean(model: &UserModel) -> Vec<f64> {
    if !model.normalize {
        return model
            .mean
            .iter()
            .zip(&model.variance)
            .map(|(&mean, &var)| clipped_mean_lower(mean, var.sqrt(), 0.0))
            .collect();
    }
    if model.variance.iter().all(|&v| v == 0.0) {
        let clipped: Vec<f64> = model.mean.iter().map(|&m| m.max(0.0)).collect();
        let sum: f64 = clipped.iter().sum();
        if sum > 1.0 {
            return clipped.iter().map(|c| c / sum).collect();
        }
        return clipped;
    }
    // Deterministic Monte-Carlo estimate on a fixed internal stream.
    let mut rng = derive_stream(NORMALIZED_MEAN_SEED, 0, StreamRole::Preference);
    let dim = model.mean.len();
    let mut acc = vec![0.0; dim];
    for _ in 0..NORMALIZED_MEAN_SAMPLES {
        let draw = draw_preference(model, &mut rng);
        for (a, v) in acc.iter_mut().zip(draw.as_slice()) {
            *a += v;
        }
    }
    acc.iter().map(|a| a / NORMALIZED_MEAN_SAMPLES as f64).collect()
}

/// Uniformly random assignment of the N fixed arm blocks to the N users.
/// Block j holds arms [j * block_size, (j + 1) * block_size).
pub fn assign_blocks(dims: &Dimensions, block_size: usize, rng: &mut ChaCha8Rng) -> Vec<ArmSet> {
    debug_assert_eq!(dims.num_arms, dims.num_users * block_size);
    let mut block_of_user: Vec<usize> = (0..dims.num_users).collect();
    block_of_user.shuffle(rng);
    block_of_user
        .into_iter()
        .map(|block| (block * block_size..(block + 1) * block_size).collect())
        .collect()
}

/// The generative side of one trial: arm and user models plus the three
/// environment-owned random streams.
pub struct Environment {
    dims: Dimensions,
    arms: Vec<ArmModel>,
    users: Vec<UserModel>,
    protocol: Protocol,
    reward_rng: ChaCha8Rng,
    preference_rng: ChaCha8Rng,
    protocol_rng: ChaCha8Rng,
    arm_means: Vec<Vec<f64>>,
    user_means: Vec<Vec<f64>>,
}

impl Environment {
    pub fn new(cfg: &RunConfig, trial: u64) -> Self {
        let arm_means = cfg.arms.iter().map(reward_true_mean).collect();
        let user_means = cfg.users.iter().map(preference_true_mean).collect();
        Environment {
            dims: cfg.dims,
            arms: cfg.arms.clone(),
            users: cfg.users.clone(),
            protocol: cfg.protocol.clone(),
            reward_rng: derive_stream(cfg.base_seed, trial, StreamRole::Reward),
            preference_rng: derive_stream(cfg.base_seed, trial, StreamRole::Preference),
            protocol_rng: derive_stream(cfg.base_seed, trial, StreamRole::Protocol),
            arm_means,
            user_means,
        }
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    /// Arm sets for the current round, one per user.
    pub fn availability(&mut self) -> Vec<ArmSet> {
        match self.protocol {
            Protocol::FullAccess => {
                vec![(0..self.dims.num_arms).collect(); self.dims.num_users]
            }
            Protocol::BlockSwitching { block_size } => {
                assign_blocks(&self.dims, block_size, &mut self.protocol_rng)
            }
        }
    }

    pub fn draw_reward(&mut self, arm: usize) -> RewardVector {
        draw_reward(&self.arms[arm], &mut self.reward_rng)
    }

    pub fn draw_preference(&mut self, user: usize) -> PreferenceVector {
        draw_preference(&self.users[user], &mut self.preference_rng)
    }

    /// Post-clipping mean rewards; the quantities bandit regret is
    /// measured against.
    pub fn arm_means(&self) -> &[Vec<f64>] {
        &self.arm_means
    }

    /// Post-clipping mean preferences, one per user.
    pub fn user_means(&self) -> &[Vec<f64>] {
        &self.user_means
    }
}

/// Two-point separation instance: two deterministic single-objective arms
/// and two users with opposite deterministic preferences. Any policy that
/// ignores preferences cannot serve both users and pays linear regret.
pub fn two_point_config(algorithms: Vec<AlgorithmSpec>) -> RunConfig {
    RunConfig {
        schema_version: crate::config::SCHEMA_VERSION,
        dims: Dimensions {
            num_arms: 2,
            num_objectives: 2,
            num_users: 2,
            horizon: 5000,
        },
        arms: vec![
            ArmModel {
                mean: vec![1.0, 0.0],
                variance: vec![0.0, 0.0],
            },
            ArmModel {
                mean: vec![0.0, 1.0],
                variance: vec![0.0, 0.0],
            },
        ],
        users: vec![
            UserModel {
                mean: vec![1.0, 0.0],
                variance: vec![0.0, 0.0],
                normalize: false,
            },
            UserModel {
                mean: vec![0.0, 1.0],
                variance: vec![0.0, 0.0],
                normalize: false,
            },
        ],
        protocol: Protocol::FullAccess,
        algorithms,
        trials: 10,
        base_seed: 7,
    }
}

/// `two_point_config` for every registered algorithm.
pub fn two_point_config_all() -> RunConfig {
    two_point_config(
        crate::policies::ALGORITHM_NAMES
            .iter()
            .map(|name| AlgorithmSpec::named(name))
            .collect(),
    )
}

pub fn check_availability(available: &[usize], user: usize, round: usize) -> Result<()> {
    if available.is_empty() {
        return Err(Error::EmptyAvailability { user, round });
    }
    Ok(())
}
