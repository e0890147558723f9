use crate::error::{Error, Result};
use crate::types::dot;

/// One-step regret for one user: the gap, under the user's true mean
/// preference, between the best available arm and the chosen arm. The
/// chosen arm participates in the maximum, so the increment is exactly
/// nonnegative in floating point.
pub fn regret_increment(
    true_pref: &[f64],
    arm_means: &[Vec<f64>],
    available: &[usize],
    chosen: usize,
    user: usize,
    round: usize,
) -> Result<f64> {
    if available.is_empty() {
        return Err(Error::EmptyAvailability { user, round });
    }
    if !available.contains(&chosen) {
        return Err(Error::ArmNotAvailable { arm: chosen, user });
    }
    let value = |arm: usize| dot(true_pref, &arm_means[arm]);
    let best = available
        .iter()
        .map(|&arm| value(arm))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(best - value(chosen))
}

/// One (algorithm, trial) outcome. Increments are per round, summed over
/// users; `per_user_cumulative` holds one cumulative curve per user.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub algorithm: String,
    pub trial: u32,
    pub increments: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub per_user_cumulative: Vec<Vec<f64>>,
    /// ||c_hat_t - c_bar||_2 per user per round, for policies that expose
    /// a preference estimate.
    pub pref_error: Option<Vec<Vec<f64>>>,
}

impl TrialRecord {
    pub fn final_per_user(&self) -> Vec<f64> {
        self.per_user_cumulative
            .iter()
            .map(|curve| curve.last().copied().unwrap_or(0.0))
            .collect()
    }

    pub fn final_pref_error(&self) -> Option<Vec<f64>> {
        self.pref_error.as_ref().map(|per_user| {
            per_user
                .iter()
                .map(|curve| curve.last().copied().unwrap_or(0.0))
                .collect()
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmSummary {
    pub name: String,
    pub trials: u32,
    pub mean_curve: Vec<f64>,
    pub std_curve: Vec<f64>,
    pub final_mean: f64,
    pub final_std: f64,
}

/// Groups records by algorithm (first-appearance order) and reduces the
/// cumulative-regret curves to pointwise mean and sample standard
/// deviation (n - 1 denominator; zero for a single trial).
pub fn aggregate(records: &[TrialRecord]) -> Result<Vec<AlgorithmSummary>> {
    if let Some(first) = records.first() {
        let horizon = first.cumulative.len();
        for record in records {
            if record.cumulative.len() != horizon {
                return Err(Error::DimensionMismatch {
                    expected: horizon,
                    actual: record.cumulative.len(),
                });
            }
        }
    }
    let mut order: Vec<&str> = Vec::new();
    for record in records {
        if !order.contains(&record.algorithm.as_str()) {
            order.push(&record.algorithm);
        }
    }
    Ok(order
        .iter()
        .map(|name| {
            let curves: Vec<&[f64]> = records
                .iter()
                .filter(|r| r.algorithm == *name)
                .map(|r| r.cumulative.as_slice())
                .collect();
            let n = curves.len();
            let horizon = curves[0].len();
            let mut mean_curve = vec![0.0; horizon];
            let mut std_curve = vec![0.0; horizon];
            for t in 0..horizon {
                let mean = curves.iter().map(|c| c[t]).sum::<f64>() / n as f64;
                mean_curve[t] = mean;
                if n > 1 {
                    let ss = curves.iter().map(|c| (c[t] - mean).powi(2)).sum::<f64>();
                    std_curve[t] = (ss / (n - 1) as f64).sqrt();
                }
            }
            AlgorithmSummary {
                name: name.to_string(),
                trials: n as u32,
                final_mean: mean_curve[horizon - 1],
                final_std: std_curve[horizon - 1],
                mean_curve,
                std_curve,
            }
        })
        .collect())
}
