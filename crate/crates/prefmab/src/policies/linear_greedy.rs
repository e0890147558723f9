use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::estimators::{RewardEstimate, RidgeState};
use crate::policies::{argmax_arm, Observation, Policy};
use crate::types::{dot, Dimensions};

/// Epsilon-greedy linear baseline: per-user unit-weight ridge regression
/// of the overall reward on the reward vector, exploitation by
/// argmax c^T r_i, uniform exploration with probability epsilon. It learns
/// preferences but carries no optimism on either estimate.
pub struct LinearGreedy {
    epsilon: f64,
    rewards: RewardEstimate,
    pending: Vec<(usize, Vec<f64>)>,
    users: Vec<RidgeState>,
    rng: ChaCha8Rng,
}

impl LinearGreedy {
    pub fn new(dims: Dimensions, lambda: f64, epsilon: f64, rng: ChaCha8Rng) -> Result<Self> {
        let users = (0..dims.num_users)
            .map(|_| RidgeState::new(dims.num_objectives, lambda))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearGreedy {
            epsilon,
            rewards: RewardEstimate::new(dims.num_arms, dims.num_objectives),
            pending: Vec::new(),
            users,
            rng,
        })
    }
}

impl Policy for LinearGreedy {
    fn name(&self) -> &str {
        "oful-eps"
    }

    fn select(&mut self, _round: u64, user: usize, available: &[usize]) -> Result<usize> {
        let explore: f64 = self.rng.random();
        if explore < self.epsilon {
            let pick = self.rng.random_range(0..available.len());
            return Ok(available[pick]);
        }
        let chat = self.users[user].solve()?;
        Ok(argmax_arm(available, |arm| {
            dot(&chat, self.rewards.mean(arm))
        }))
    }

    fn observe(&mut self, obs: &Observation) -> Result<()> {
        self.users[obs.user].update(obs.reward.as_slice(), obs.overall);
        self.pending.push((obs.arm, obs.reward.as_slice().to_vec()));
        Ok(())
    }

    fn finish_round(&mut self, _round: u64) -> Result<()> {
        for (arm, reward) in self.pending.drain(..) {
            self.rewards.update(arm, &reward)?;
        }
        Ok(())
    }

    fn preference_estimate(&self, user: usize) -> Option<Vec<f64>> {
        self.users[user].solve().ok()
    }
}
