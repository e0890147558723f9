use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{canonical_json, config_digest, AlgorithmSpec, RunConfig};
use crate::env::{check_availability, Environment};
use crate::error::{Error, Result};
use crate::metrics::{aggregate, regret_increment, AlgorithmSummary, TrialRecord};
use crate::policies::{build_policy, Observation};
use crate::rng::{derive_stream, StreamRole};
use crate::types::{l2_norm, overall_reward};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Serial,
    /// Worker count; 0 picks the rayon default.
    Threads(usize),
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TrialFailure {
    pub algorithm: String,
    pub trial: u32,
    pub error: String,
}

pub struct ExperimentResult {
    pub config: RunConfig,
    pub canonical: String,
    pub digest: String,
    pub records: Vec<TrialRecord>,
    pub failures: Vec<TrialFailure>,
    pub summaries: Vec<AlgorithmSummary>,
    pub elapsed: Duration,
}

fn at_round(round: usize) -> impl Fn(Error) -> Error {
    move |source| Error::AtRound {
        round,
        source: Box::new(source),
    }
}

/// Runs one (algorithm, trial) pair to the horizon. All randomness comes
/// from streams keyed by (base_seed, trial, role), never by algorithm, so
/// trial k of every algorithm faces the same environment realization.
pub fn run_trial(cfg: &RunConfig, spec: &AlgorithmSpec, trial: u32) -> Result<TrialRecord> {
    let dims = cfg.dims;
    let mut env = Environment::new(cfg, trial as u64);
    let policy_rng = derive_stream(cfg.base_seed, trial as u64, StreamRole::Policy);
    let mut policy = build_policy(spec, cfg, policy_rng)?;
    let arm_means = env.arm_means().to_vec();
    let user_means = env.user_means().to_vec();

    let mut increments = Vec::with_capacity(dims.horizon);
    let mut cumulative = Vec::with_capacity(dims.horizon);
    let mut per_user_cumulative = vec![Vec::with_capacity(dims.horizon); dims.num_users];
    let mut per_user_total = vec![0.0; dims.num_users];
    let mut total = 0.0;
    let mut pref_error: Option<Vec<Vec<f64>>> =
        Some(vec![Vec::with_capacity(dims.horizon); dims.num_users]);

    for round in 1..=dims.horizon {
        let availability = env.availability();
        let mut round_sum = 0.0;
        for user in 0..dims.num_users {
            let available = &availability[user];
            check_availability(available, user, round)?;
            let arm = policy
                .select(round as u64, user, available)
                .map_err(at_round(round))?;
            let increment =
                regret_increment(&user_means[user], &arm_means, available, arm, user, round)?;
            let reward = env.draw_reward(arm);
            // The preference is sampled for every user each round, whether
            // or not it is revealed, so the preference stream advances
            // identically under every policy.
            let preference = env.draw_preference(user);
            let overall = overall_reward(&preference, &reward)?;
            let obs = Observation {
                round: round as u64,
                user,
                arm,
                reward: &reward,
                overall,
                preference: policy.wants_preference_feedback().then_some(&preference),
            };
            policy.observe(&obs).map_err(at_round(round))?;
            round_sum += increment;
            per_user_total[user] += increment;
        }
        policy.finish_round(round as u64).map_err(at_round(round))?;
        total += round_sum;
        increments.push(round_sum);
        cumulative.push(total);
        for (curve, user_total) in per_user_cumulative.iter_mut().zip(&per_user_total) {
            curve.push(*user_total);
        }
        if let Some(trajectories) = pref_error.as_mut() {
            let mut exposed = true;
            for user in 0..dims.num_users {
                match policy.preference_estimate(user) {
                    Some(chat) => {
                        let diff: Vec<f64> = chat
                            .iter()
                            .zip(&user_means[user])
                            .map(|(a, b)| a - b)
                            .collect();
                        trajectories[user].push(l2_norm(&diff));
                    }
                    None => {
                        exposed = false;
                        break;
                    }
                }
            }
            if !exposed {
                pref_error = None;
            }
        }
    }

    Ok(TrialRecord {
        algorithm: spec.name.clone(),
        trial,
        increments,
        cumulative,
        per_user_cumulative,
        pref_error,
    })
}

/// Runs every (algorithm, trial) pair. Individual failures are recorded
/// and do not abort the remaining pairs. Results are ordered by algorithm
/// position then trial index regardless of execution order.
pub fn run_experiment(cfg: &RunConfig, parallelism: Parallelism) -> Result<ExperimentResult> {
    let start = Instant::now();
    let jobs: Vec<(&AlgorithmSpec, u32)> = cfg
        .algorithms
        .iter()
        .flat_map(|spec| (0..cfg.trials).map(move |trial| (spec, trial)))
        .collect();

    let outcomes: Vec<(String, u32, Result<TrialRecord>)> = match parallelism {
        Parallelism::Serial => jobs
            .iter()
            .map(|(spec, trial)| (spec.name.clone(), *trial, run_trial(cfg, spec, *trial)))
            .collect(),
        Parallelism::Threads(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::Parallel(e.to_string()))?;
            pool.install(|| {
                jobs.par_iter()
                    .map(|(spec, trial)| (spec.name.clone(), *trial, run_trial(cfg, spec, *trial)))
                    .collect()
            })
        }
    };

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (algorithm, trial, outcome) in outcomes {
        match outcome {
            Ok(record) => records.push(record),
            Err(err) => failures.push(TrialFailure {
                algorithm,
                trial,
                error: err.to_string(),
            }),
        }
    }

    Ok(ExperimentResult {
        canonical: canonical_json(cfg),
        digest: config_digest(cfg),
        config: cfg.clone(),
        summaries: aggregate(&records)?,
        records,
        failures,
        elapsed: start.elapsed(),
    })
}

#[derive(Serialize)]
struct SummaryDoc<'a> {
    schema_version: u32,
    config_digest: &'a str,
    algorithms: Vec<SummaryRow<'a>>,
    failures: &'a [TrialFailure],
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    name: &'a str,
    trials: u32,
    final_regret_mean: f64,
    final_regret_std: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_pref_error_mean: Option<f64>,
}

/// One persisted artifact: where it was written and how many bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileEntry {
    pub path: PathBuf,
    pub bytes: u64,
}

fn manifest_entry(path: PathBuf) -> Result<FileEntry> {
    let bytes = fs::metadata(&path)?.len();
    Ok(FileEntry { path, bytes })
}

/// Writes results.csv, summary.json, and config.echo.json into `dir` and
/// returns a manifest of the written files. Output bytes are a pure
/// function of the experiment result, so repeated runs with the same seed
/// produce identical files. An empty record list still yields a
/// header-only CSV and a valid summary.
pub fn persist(result: &ExperimentResult, dir: &Path) -> Result<Vec<FileEntry>> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join("results.csv");
    let mut csv = BufWriter::new(fs::File::create(&csv_path)?);
    writeln!(csv, "algorithm,trial,t,increment,cumulative")?;
    for record in &result.records {
        for (i, (inc, cum)) in record.increments.iter().zip(&record.cumulative).enumerate() {
            writeln!(
                csv,
                "{},{},{},{},{}",
                record.algorithm,
                record.trial,
                i + 1,
                inc,
                cum
            )?;
        }
    }
    csv.flush()?;

    let rows = result
        .summaries
        .iter()
        .map(|summary| {
            let errors: Vec<f64> = result
                .records
                .iter()
                .filter(|r| r.algorithm == summary.name)
                .filter_map(|r| r.final_pref_error())
                .map(|per_user| per_user.iter().sum::<f64>() / per_user.len() as f64)
                .collect();
            SummaryRow {
                name: &summary.name,
                trials: summary.trials,
                final_regret_mean: summary.final_mean,
                final_regret_std: summary.final_std,
                final_pref_error_mean: if errors.is_empty() {
                    None
                } else {
                    Some(errors.iter().sum::<f64>() / errors.len() as f64)
                },
            }
        })
        .collect();
    let doc = SummaryDoc {
        schema_version: crate::config::SCHEMA_VERSION,
        config_digest: &result.digest,
        algorithms: rows,
        failures: &result.failures,
    };
    let summary_path = dir.join("summary.json");
    let mut summary_text = serde_json::to_string_pretty(&doc).expect("summary serializes");
    summary_text.push('\n');
    fs::write(&summary_path, summary_text)?;

    let echo_path = dir.join("config.echo.json");
    fs::write(&echo_path, &result.canonical)?;

    Ok(vec![
        manifest_entry(csv_path)?,
        manifest_entry(summary_path)?,
        manifest_entry(echo_path)?,
    ])
}
