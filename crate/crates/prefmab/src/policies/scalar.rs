use crate::error::Result;
use crate::policies::{argmax_arm, Observation, Policy};
use crate::types::{dot, Dimensions};

/// Which scalar each interaction contributes to the per-arm mean.
pub enum ScalarSignal {
    /// Fixed scalarization w^T r of the reward vector.
    Weighted(Vec<f64>),
    /// The overall reward g, pooled across users.
    Overall,
}

impl ScalarSignal {
    /// Equal weights 1/D unless explicit weights are supplied.
    pub fn weighted(dim: usize, weights: Option<Vec<f64>>) -> Self {
        ScalarSignal::Weighted(weights.unwrap_or_else(|| vec![1.0 / dim as f64; dim]))
    }
}

pub enum BonusRule {
    /// sqrt(2 ln t / n)
    Ucb,
    /// sqrt(max(0, ln(T / (K n))) / n)
    Moss,
}

/// Single-objective baseline over a derived scalar signal. Covers the
/// scalarized pair (s-ucb, s-moss) and the overall-reward pair (ucb, moss).
pub struct Scalarized {
    name: &'static str,
    bonus: BonusRule,
    signal: ScalarSignal,
    horizon: u64,
    num_arms: usize,
    counts: Vec<u64>,
    means: Vec<f64>,
    pending: Vec<(usize, f64)>,
}

impl Scalarized {
    pub fn new(name: &'static str, dims: Dimensions, bonus: BonusRule, signal: ScalarSignal) -> Self {
        Scalarized {
            name,
            bonus,
            signal,
            horizon: dims.horizon as u64,
            num_arms: dims.num_arms,
            counts: vec![0; dims.num_arms],
            means: vec![0.0; dims.num_arms],
            pending: Vec::new(),
        }
    }

    fn bonus(&self, round: u64, pulls: u64) -> f64 {
        let n = pulls as f64;
        match self.bonus {
            BonusRule::Ucb => (2.0 * (round as f64).ln() / n).sqrt(),
            BonusRule::Moss => {
                let ratio = self.horizon as f64 / (self.num_arms as f64 * n);
                (ratio.ln().max(0.0) / n).sqrt()
            }
        }
    }
}

impl Policy for Scalarized {
    fn name(&self) -> &str {
        self.name
    }

    fn select(&mut self, round: u64, _user: usize, available: &[usize]) -> Result<usize> {
        if let Some(arm) = available.iter().copied().find(|&a| self.counts[a] == 0) {
            return Ok(arm);
        }
        Ok(argmax_arm(available, |arm| {
            self.means[arm] + self.bonus(round, self.counts[arm])
        }))
    }

    fn observe(&mut self, obs: &Observation) -> Result<()> {
        let value = match &self.signal {
            ScalarSignal::Weighted(weights) => dot(weights, obs.reward.as_slice()),
            ScalarSignal::Overall => obs.overall,
        };
        self.pending.push((obs.arm, value));
        Ok(())
    }

    fn finish_round(&mut self, _round: u64) -> Result<()> {
        for (arm, value) in self.pending.drain(..) {
            self.counts[arm] += 1;
            let n = self.counts[arm] as f64;
            self.means[arm] += (value - self.means[arm]) / n;
        }
        Ok(())
    }

    fn preference_estimate(&self, _user: usize) -> Option<Vec<f64>> {
        None
    }
}
