use crate::config::BetaSchedule;
use crate::error::{Error, Result};
use crate::estimators::{beta_value, exploration_bonus, GramState, RewardEstimate, RunningMean};
use crate::policies::{argmax_arm, Observation, Policy};
use crate::types::{dot, l1_norm, l2_norm_sq, Dimensions};

/// Per-round buffer of (arm, reward) pairs. Shared arm statistics update
/// from it only after every user has acted, in arrival order.
#[derive(Default)]
struct PendingRewards(Vec<(usize, Vec<f64>)>);

impl PendingRewards {
    fn push(&mut self, arm: usize, reward: &[f64]) {
        self.0.push((arm, reward.to_vec()));
    }

    fn flush(&mut self, rewards: &mut RewardEstimate) -> Result<()> {
        for (arm, reward) in self.0.drain(..) {
            rewards.update(arm, &reward)?;
        }
        Ok(())
    }
}

/// Preference-aware UCB with hidden preferences. Each user's preference is
/// estimated by weighted least squares from (reward, overall reward)
/// pairs; selection is optimistic in both the reward estimate and the
/// preference estimate:
///
///   argmax  c^T r_i + rho_i ||c||_1 + beta_t ||r_i + rho_i e||_{V^-1}
pub struct PrucbHp {
    dims: Dimensions,
    alpha: f64,
    lambda: f64,
    omega: f64,
    beta: BetaSchedule,
    rewards: RewardEstimate,
    pending: PendingRewards,
    users: Vec<HpUserState>,
}

struct HpUserState {
    gram: GramState,
    chat: Vec<f64>,
    skipped: u64,
}

impl PrucbHp {
    pub fn new(
        dims: Dimensions,
        alpha: f64,
        lambda: f64,
        omega: f64,
        beta: BetaSchedule,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
            });
        }
        let d = dims.num_objectives;
        let users = (0..dims.num_users)
            .map(|_| {
                Ok(HpUserState {
                    gram: GramState::new(d, lambda, omega)?,
                    // Uninformed start: equal weight on every objective.
                    chat: vec![1.0 / d as f64; d],
                    skipped: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PrucbHp {
            dims,
            alpha,
            lambda,
            omega,
            beta,
            rewards: RewardEstimate::new(dims.num_arms, d),
            pending: PendingRewards::default(),
            users,
        })
    }

    pub fn user_gram(&self, user: usize) -> &GramState {
        &self.users[user].gram
    }

    /// Observations dropped for a user because the clipped reward vector was
    /// identically zero (no weight is defined for them).
    pub fn skipped(&self, user: usize) -> u64 {
        self.users[user].skipped
    }
}

impl Policy for PrucbHp {
    fn name(&self) -> &str {
        "prucb-hp"
    }

    fn select(&mut self, round: u64, user: usize, available: &[usize]) -> Result<usize> {
        let state = &self.users[user];
        let factor = state.gram.factor()?;
        let beta = beta_value(
            &self.beta,
            round as f64,
            self.lambda,
            self.omega,
            self.dims.num_objectives,
        )?;
        let pref_l1 = l1_norm(&state.chat);
        Ok(argmax_arm(available, |arm| {
            let rho = exploration_bonus(round, self.alpha, self.rewards.count(arm));
            let shifted: Vec<f64> = self.rewards.mean(arm).iter().map(|m| m + rho).collect();
            dot(&state.chat, self.rewards.mean(arm)) + rho * pref_l1 + beta * factor.inv_norm(&shifted)
        }))
    }

    fn observe(&mut self, obs: &Observation) -> Result<()> {
        let state = &mut self.users[obs.user];
        if l2_norm_sq(obs.reward.as_slice()) == 0.0 {
            state.skipped += 1;
        } else {
            state.gram.update(obs.reward.as_slice(), obs.overall)?;
            state.chat = state.gram.solve()?;
        }
        self.pending.push(obs.arm, obs.reward.as_slice());
        Ok(())
    }

    fn finish_round(&mut self, _round: u64) -> Result<()> {
        self.pending.flush(&mut self.rewards)
    }

    fn preference_estimate(&self, user: usize) -> Option<Vec<f64>> {
        Some(self.users[user].chat.clone())
    }
}

/// Selection rule shared by the revealed- and known-preference variants:
/// optimism only on the reward side, argmax of c^T (r_i + rho_i e).
fn select_with_preference(
    chat: &[f64],
    rewards: &RewardEstimate,
    round: u64,
    alpha: f64,
    available: &[usize],
) -> usize {
    let pref_sum: f64 = chat.iter().sum();
    argmax_arm(available, |arm| {
        let rho = exploration_bonus(round, alpha, rewards.count(arm));
        dot(chat, rewards.mean(arm)) + rho * pref_sum
    })
}

/// Preference-aware UCB with unknown-but-revealed preferences: after each
/// interaction the sampled preference vector is observed and folded into a
/// per-user running mean.
pub struct PrucbUp {
    alpha: f64,
    rewards: RewardEstimate,
    pending: PendingRewards,
    prefs: Vec<RunningMean>,
}

impl PrucbUp {
    pub fn new(dims: Dimensions, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
            });
        }
        Ok(PrucbUp {
            alpha,
            rewards: RewardEstimate::new(dims.num_arms, dims.num_objectives),
            pending: PendingRewards::default(),
            prefs: (0..dims.num_users)
                .map(|_| RunningMean::new(dims.num_objectives))
                .collect(),
        })
    }
}

impl Policy for PrucbUp {
    fn name(&self) -> &str {
        "prucb-up"
    }

    fn wants_preference_feedback(&self) -> bool {
        true
    }

    fn select(&mut self, round: u64, user: usize, available: &[usize]) -> Result<usize> {
        Ok(select_with_preference(
            self.prefs[user].mean(),
            &self.rewards,
            round,
            self.alpha,
            available,
        ))
    }

    fn observe(&mut self, obs: &Observation) -> Result<()> {
        let preference = obs.preference.ok_or_else(|| Error::MissingPreference {
            policy: self.name().to_string(),
        })?;
        self.prefs[obs.user].update(preference.as_slice());
        self.pending.push(obs.arm, obs.reward.as_slice());
        Ok(())
    }

    fn finish_round(&mut self, _round: u64) -> Result<()> {
        self.pending.flush(&mut self.rewards)
    }

    fn preference_estimate(&self, user: usize) -> Option<Vec<f64>> {
        Some(self.prefs[user].mean().to_vec())
    }
}

/// Ground-truth baseline: the same selection rule fed the true mean
/// preferences, so only reward uncertainty remains.
pub struct PrucbKp {
    alpha: f64,
    rewards: RewardEstimate,
    pending: PendingRewards,
    true_prefs: Vec<Vec<f64>>,
}

impl PrucbKp {
    pub fn new(dims: Dimensions, alpha: f64, true_prefs: Vec<Vec<f64>>) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
            });
        }
        debug_assert_eq!(true_prefs.len(), dims.num_users);
        Ok(PrucbKp {
            alpha,
            rewards: RewardEstimate::new(dims.num_arms, dims.num_objectives),
            pending: PendingRewards::default(),
            true_prefs,
        })
    }
}

impl Policy for PrucbKp {
    fn name(&self) -> &str {
        "prucb-kp"
    }

    fn select(&mut self, round: u64, user: usize, available: &[usize]) -> Result<usize> {
        Ok(select_with_preference(
            &self.true_prefs[user],
            &self.rewards,
            round,
            self.alpha,
            available,
        ))
    }

    fn observe(&mut self, obs: &Observation) -> Result<()> {
        self.pending.push(obs.arm, obs.reward.as_slice());
        Ok(())
    }

    fn finish_round(&mut self, _round: u64) -> Result<()> {
        self.pending.flush(&mut self.rewards)
    }

    fn preference_estimate(&self, user: usize) -> Option<Vec<f64>> {
        Some(self.true_prefs[user].clone())
    }
}
