//! Estimator comparison on a two-arm toy instance. The overall-reward
//! noise (c - c_bar)^T r has variance proportional to ||r||^2, so weighted
//! least squares with w = omega / ||r||^2 is the efficient fit while plain
//! linear regression over-trusts the large-norm arm. Single-arm fits show
//! the same effect: the small-norm arm pins the preference down more
//! accurately than the large-norm arm.

use std::fmt::Write as _;

use crate::error::Result;
use crate::estimators::{ols_solve, GramState};
use crate::plot::{render_line_chart, Series};
use crate::rng::{derive_stream, StreamRole};
use crate::types::{ArmModel, UserModel};
use crate::{env, types};

pub const DEMO_SAMPLE_COUNTS: [usize; 4] = [20, 50, 80, 200];
const DEMO_TARGET: [f64; 2] = [0.5, 0.5];

fn demo_arms() -> [ArmModel; 2] {
    [
        ArmModel {
            mean: vec![0.2, 0.2],
            variance: vec![0.01, 0.01],
        },
        ArmModel {
            mean: vec![0.8, 0.8],
            variance: vec![0.01, 0.01],
        },
    ]
}

fn demo_user() -> UserModel {
    UserModel {
        mean: DEMO_TARGET.to_vec(),
        variance: vec![0.05, 0.05],
        normalize: false,
    }
}

#[derive(Clone, Debug)]
pub struct EstimatorCurve {
    pub name: String,
    /// Mean L2 error to the target preference, per sample count.
    pub mean_error: Vec<f64>,
    /// Standard error of that mean, per sample count.
    pub std_error: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct WlsDemoResult {
    pub seeds: u32,
    pub sample_counts: Vec<usize>,
    pub curves: Vec<EstimatorCurve>,
}

impl WlsDemoResult {
    pub fn curve(&self, name: &str) -> &EstimatorCurve {
        self.curves
            .iter()
            .find(|c| c.name == name)
            .expect("known curve name")
    }
}

/// Runs the comparison over independent seeds. For each seed the same
/// sample stream is reused across sample counts (estimates at a larger
/// count extend the smaller one, as they would during a live run).
pub fn run_wls_demo(seeds: u32, base_seed: u64) -> Result<WlsDemoResult> {
    let arms = demo_arms();
    let user = demo_user();
    let max_count = *DEMO_SAMPLE_COUNTS.iter().max().expect("non-empty");
    let estimators = ["wls", "ols", "ols-arm-1", "ols-arm-2"];
    let mut errors: Vec<Vec<Vec<f64>>> =
        vec![vec![Vec::new(); DEMO_SAMPLE_COUNTS.len()]; estimators.len()];

    for seed in 0..seeds {
        let mut reward_rng = derive_stream(base_seed, seed as u64, StreamRole::Reward);
        let mut pref_rng = derive_stream(base_seed, seed as u64, StreamRole::Preference);
        let mut per_arm: [Vec<(Vec<f64>, f64)>; 2] = [Vec::new(), Vec::new()];
        for _ in 0..max_count {
            for (arm, samples) in arms.iter().zip(per_arm.iter_mut()) {
                let reward = env::draw_reward(arm, &mut reward_rng);
                let pref = env::draw_preference(&user, &mut pref_rng);
                let overall = types::overall_reward(&pref, &reward)?;
                samples.push((reward.as_slice().to_vec(), overall));
            }
        }

        for (ci, &count) in DEMO_SAMPLE_COUNTS.iter().enumerate() {
            let half = count / 2;
            let mixed: Vec<(Vec<f64>, f64)> = per_arm[0][..half]
                .iter()
                .chain(&per_arm[1][..half])
                .cloned()
                .collect();
            let wls = GramState::from_samples(2, 1.0, 2.0, &mixed)?.solve()?;
            let ols = ols_solve(&mixed, 0.0, 2)?;
            let ols_arm1 = ols_solve(&per_arm[0][..count], 0.0, 2)?;
            let ols_arm2 = ols_solve(&per_arm[1][..count], 0.0, 2)?;
            for (ei, estimate) in [wls, ols, ols_arm1, ols_arm2].iter().enumerate() {
                let diff: Vec<f64> = estimate
                    .iter()
                    .zip(DEMO_TARGET)
                    .map(|(a, b)| a - b)
                    .collect();
                errors[ei][ci].push(types::l2_norm(&diff));
            }
        }
    }

    let curves = estimators
        .iter()
        .zip(errors)
        .map(|(name, per_count)| {
            let mut mean_error = Vec::new();
            let mut std_error = Vec::new();
            for errs in per_count {
                let n = errs.len() as f64;
                let mean = errs.iter().sum::<f64>() / n;
                let var = if errs.len() > 1 {
                    errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)
                } else {
                    0.0
                };
                mean_error.push(mean);
                std_error.push((var / n).sqrt());
            }
            EstimatorCurve {
                name: name.to_string(),
                mean_error,
                std_error,
            }
        })
        .collect();

    Ok(WlsDemoResult {
        seeds,
        sample_counts: DEMO_SAMPLE_COUNTS.to_vec(),
        curves,
    })
}

/// CSV table: one row per (estimator, sample count).
pub fn demo_csv(result: &WlsDemoResult) -> String {
    let mut out = String::from("estimator,samples,mean_l2_error,std_error\n");
    for curve in &result.curves {
        for (i, &count) in result.sample_counts.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                curve.name, count, curve.mean_error[i], curve.std_error[i]
            );
        }
    }
    out
}

pub fn demo_chart(result: &WlsDemoResult) -> Result<String> {
    let series: Vec<Series> = result
        .curves
        .iter()
        .map(|curve| Series {
            name: curve.name.clone(),
            xs: result.sample_counts.iter().map(|&c| c as f64).collect(),
            ys: curve.mean_error.clone(),
            band: Some(curve.std_error.clone()),
        })
        .collect();
    render_line_chart(
        "Preference estimation error",
        "samples",
        "mean L2 error",
        &series,
    )
}
