use rand_chacha::ChaCha8Rng;

use crate::config::{AlgorithmSpec, RunConfig};
use crate::env::preference_true_mean;
use crate::error::{Error, Result};
use crate::types::{PreferenceVector, RewardVector};

mod front;
mod linear_greedy;
mod prucb;
mod scalar;

pub use front::{ParetoTs, ParetoUcb};
pub use linear_greedy::LinearGreedy;
pub use prucb::{PrucbHp, PrucbKp, PrucbUp};
pub use scalar::{BonusRule, ScalarSignal, Scalarized};

/// Registry order is the canonical presentation order in outputs.
pub const ALGORITHM_NAMES: [&str; 10] = [
    "prucb-hp",
    "prucb-up",
    "prucb-kp",
    "pareto-ucb",
    "pareto-ts",
    "s-ucb",
    "s-moss",
    "ucb",
    "moss",
    "oful-eps",
];

/// Everything a policy is told about one interaction. `preference` is
/// populated only for policies that request revealed preference feedback;
/// all other policies learn from the reward vector and the scalar overall
/// reward alone.
pub struct Observation<'a> {
    pub round: u64,
    pub user: usize,
    pub arm: usize,
    pub reward: &'a RewardVector,
    pub overall: f64,
    pub preference: Option<&'a PreferenceVector>,
}

/// A bandit policy serving all N users.
///
/// Round protocol: `select` and `observe` are called once per user in user
/// order, then `finish_round` once. Per-user state (preference estimates)
/// may update inside `observe`; statistics shared across users (arm pull
/// counts, reward means) must only update in `finish_round`, so that
/// within one round every user's selection sees identical shared state.
pub trait Policy: Send {
    fn name(&self) -> &str;

    /// Whether the environment should reveal the sampled preference vector.
    fn wants_preference_feedback(&self) -> bool {
        false
    }

    /// Picks one arm from `available` (non-empty, ascending indices).
    /// Index ties break toward the lowest arm index.
    fn select(&mut self, round: u64, user: usize, available: &[usize]) -> Result<usize>;

    fn observe(&mut self, obs: &Observation) -> Result<()>;

    fn finish_round(&mut self, round: u64) -> Result<()>;

    /// Current preference estimate for a user, for policies that form one.
    fn preference_estimate(&self, user: usize) -> Option<Vec<f64>>;
}

/// Highest-index arm among `available`, lowest index on ties.
pub(crate) fn argmax_arm(available: &[usize], mut index: impl FnMut(usize) -> f64) -> usize {
    debug_assert!(!available.is_empty());
    let mut best_arm = available[0];
    let mut best_value = index(best_arm);
    for &arm in &available[1..] {
        let value = index(arm);
        if value > best_value {
            best_value = value;
            best_arm = arm;
        }
    }
    best_arm
}

/// Instantiates a policy by registry name. `policy_rng` feeds the
/// policies that randomize (front sampling, epsilon exploration); the
/// others ignore it. The ground-truth variant reads the post-clipping
/// preference means off the user models.
pub fn build_policy(
    spec: &AlgorithmSpec,
    cfg: &RunConfig,
    policy_rng: ChaCha8Rng,
) -> Result<Box<dyn Policy>> {
    let dims = cfg.dims;
    let omega = spec.omega.unwrap_or(dims.num_objectives as f64);
    match spec.name.as_str() {
        "prucb-hp" => Ok(Box::new(PrucbHp::new(
            dims,
            spec.alpha,
            spec.lambda,
            omega,
            spec.beta.clone(),
        )?)),
        "prucb-up" => Ok(Box::new(PrucbUp::new(dims, spec.alpha)?)),
        "prucb-kp" => {
            let true_prefs = cfg.users.iter().map(preference_true_mean).collect();
            Ok(Box::new(PrucbKp::new(dims, spec.alpha, true_prefs)?))
        }
        "pareto-ucb" => {
            let factor = spec
                .pareto_factor
                .unwrap_or_else(|| ((dims.num_objectives * dims.num_arms) as f64).powf(0.25));
            Ok(Box::new(ParetoUcb::new(dims, factor, policy_rng)?))
        }
        "pareto-ts" => Ok(Box::new(ParetoTs::new(dims, policy_rng))),
        "s-ucb" => Ok(Box::new(Scalarized::new(
            "s-ucb",
            dims,
            BonusRule::Ucb,
            ScalarSignal::weighted(dims.num_objectives, spec.weights.clone()),
        ))),
        "s-moss" => Ok(Box::new(Scalarized::new(
            "s-moss",
            dims,
            BonusRule::Moss,
            ScalarSignal::weighted(dims.num_objectives, spec.weights.clone()),
        ))),
        "ucb" => Ok(Box::new(Scalarized::new(
            "ucb",
            dims,
            BonusRule::Ucb,
            ScalarSignal::Overall,
        ))),
        "moss" => Ok(Box::new(Scalarized::new(
            "moss",
            dims,
            BonusRule::Moss,
            ScalarSignal::Overall,
        ))),
        "oful-eps" => Ok(Box::new(LinearGreedy::new(
            dims,
            spec.lambda,
            spec.epsilon,
            policy_rng,
        )?)),
        other => Err(Error::UnknownAlgorithm(other.to_string())),
    }
}
