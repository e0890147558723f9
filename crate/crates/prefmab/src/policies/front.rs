use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::estimators::RewardEstimate;
use crate::pareto::pareto_front;
use crate::policies::{Observation, Policy};
use crate::types::Dimensions;

/// Lowest-index arm that has never been pulled, if any. The front
/// baselines pull every arm once before trusting their statistics.
fn unpulled(available: &[usize], rewards: &RewardEstimate) -> Option<usize> {
    available.iter().copied().find(|&arm| rewards.count(arm) == 0)
}

fn flush(pending: &mut Vec<(usize, Vec<f64>)>, rewards: &mut RewardEstimate) -> Result<()> {
    for (arm, reward) in pending.drain(..) {
        rewards.update(arm, &reward)?;
    }
    Ok(())
}

/// Preference-free baseline: UCB vectors per arm, then a uniform draw from
/// their Pareto front. `factor` inflates the time index inside the bonus;
/// the conventional choice is (D * K)^(1/4).
pub struct ParetoUcb {
    factor: f64,
    rewards: RewardEstimate,
    pending: Vec<(usize, Vec<f64>)>,
    rng: ChaCha8Rng,
}

impl ParetoUcb {
    pub fn new(dims: Dimensions, factor: f64, rng: ChaCha8Rng) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "pareto_factor",
                value: factor,
            });
        }
        Ok(ParetoUcb {
            factor,
            rewards: RewardEstimate::new(dims.num_arms, dims.num_objectives),
            pending: Vec::new(),
            rng,
        })
    }
}

impl Policy for ParetoUcb {
    fn name(&self) -> &str {
        "pareto-ucb"
    }

    fn select(&mut self, round: u64, _user: usize, available: &[usize]) -> Result<usize> {
        if let Some(arm) = unpulled(available, &self.rewards) {
            return Ok(arm);
        }
        let optimistic: Vec<Vec<f64>> = available
            .iter()
            .map(|&arm| {
                let bonus =
                    (2.0 * (round as f64 * self.factor).ln() / self.rewards.count(arm) as f64).sqrt();
                self.rewards.mean(arm).iter().map(|m| m + bonus).collect()
            })
            .collect();
        let front = pareto_front(&optimistic)?;
        let pick = self.rng.random_range(0..front.members.len());
        Ok(available[front.members[pick]])
    }

    fn observe(&mut self, obs: &Observation) -> Result<()> {
        self.pending.push((obs.arm, obs.reward.as_slice().to_vec()));
        Ok(())
    }

    fn finish_round(&mut self, _round: u64) -> Result<()> {
        flush(&mut self.pending, &mut self.rewards)
    }

    fn preference_estimate(&self, _user: usize) -> Option<Vec<f64>> {
        None
    }
}

/// Preference-free baseline: one Gaussian posterior sample per arm and
/// objective, then a uniform draw from the Pareto front of the samples.
pub struct ParetoTs {
    rewards: RewardEstimate,
    pending: Vec<(usize, Vec<f64>)>,
    rng: ChaCha8Rng,
}

impl ParetoTs {
    pub fn new(dims: Dimensions, rng: ChaCha8Rng) -> Self {
        ParetoTs {
            rewards: RewardEstimate::new(dims.num_arms, dims.num_objectives),
            pending: Vec::new(),
            rng,
        }
    }
}

impl Policy for ParetoTs {
    fn name(&self) -> &str {
        "pareto-ts"
    }

    fn select(&mut self, _round: u64, _user: usize, available: &[usize]) -> Result<usize> {
        if let Some(arm) = unpulled(available, &self.rewards) {
            return Ok(arm);
        }
        let samples: Vec<Vec<f64>> = available
            .iter()
            .map(|&arm| {
                let spread = 1.0 / ((self.rewards.count(arm) + 1) as f64).sqrt();
                self.rewards
                    .mean(arm)
                    .iter()
                    .map(|m| {
                        let z: f64 = StandardNormal.sample(&mut self.rng);
                        m + spread * z
                    })
                    .collect()
            })
            .collect();
        let front = pareto_front(&samples)?;
        let pick = self.rng.random_range(0..front.members.len());
        Ok(available[front.members[pick]])
    }

    fn observe(&mut self, obs: &Observation) -> Result<()> {
        self.pending.push((obs.arm, obs.reward.as_slice().to_vec()));
        Ok(())
    }

    fn finish_round(&mut self, _round: u64) -> Result<()> {
        flush(&mut self.pending, &mut self.rewards)
    }

    fn preference_estimate(&self, _user: usize) -> Option<Vec<f64>> {
        None
    }
}
