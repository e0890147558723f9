use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::types::{ArmModel, Dimensions, UserModel};

pub const SCHEMA_VERSION: u32 = 1;

/// How arm availability is generated each round.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Protocol {
    /// Every arm is available to every user in every round.
    FullAccess,
    /// Arms are partitioned into N fixed blocks of `block_size` at
    /// construction; each round a uniform random permutation assigns one
    /// block to each user. Requires K = N * block_size.
    BlockSwitching { block_size: usize },
}

/// Confidence-width schedule for the preference ellipsoid term.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BetaSchedule {
    /// beta_t = kappa * sqrt(D * ln t). The practical schedule used in
    /// simulation runs.
    Experiment {
        #[serde(default = "default_kappa")]
        kappa: f64,
    },
    /// beta_t = R * sqrt(omega * D * ln((1 + omega t / lambda) / vartheta))
    /// + sqrt(lambda) with half-range R = 1/2 for [0, 1] entries.
    Theory {
        #[serde(default = "default_vartheta")]
        vartheta: f64,
    },
}

impl Default for BetaSchedule {
    fn default() -> Self {
        BetaSchedule::Experiment {
            kappa: default_kappa(),
        }
    }
}

/// One algorithm entry. Unused knobs are ignored by policies that do not
/// read them; `omega = None` resolves to D at build time, `weights = None`
/// to the equal scalarization 1/D, `pareto_factor = None` to (D*K)^(1/4).
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub name: String,
    #[serde(default = "default_one")]
    pub alpha: f64,
    #[serde(default = "default_one")]
    pub lambda: f64,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub beta: BetaSchedule,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub pareto_factor: Option<f64>,
}

impl AlgorithmSpec {
    pub fn named(name: &str) -> Self {
        AlgorithmSpec {
            name: name.to_string(),
            alpha: default_one(),
            lambda: default_one(),
            omega: None,
            beta: BetaSchedule::default(),
            epsilon: default_epsilon(),
            weights: None,
            pareto_factor: None,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub dims: Dimensions,
    pub arms: Vec<ArmModel>,
    pub users: Vec<UserModel>,
    pub protocol: Protocol,
    pub algorithms: Vec<AlgorithmSpec>,
    pub trials: u32,
    pub base_seed: u64,
}

fn default_one() -> f64 {
    1.0
}

fn default_epsilon() -> f64 {
    0.05
}

fn default_kappa() -> f64 {
    0.1
}

fn default_vartheta() -> f64 {
    0.1
}

/// Parses a config document, applies `--set`-style overrides, and
/// validates the result. Each override is a `path=value` pair; the value
/// is parsed as JSON when possible and treated as a bare string otherwise.
pub fn parse_with_overrides(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut doc: Value = serde_json::from_str(text)?;
    for entry in overrides {
        let (path, raw) = entry
            .split_once('=')
            .ok_or_else(|| Error::BadOverrideValue {
                path: entry.clone(),
                value: "missing '='".to_string(),
            })?;
        let value = parse_override_value(raw);
        set_path(&mut doc, path, value)?;
    }
    let cfg: RunConfig = serde_json::from_value(doc)?;
    validate(&cfg)?;
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_with_overrides(text, &[])
}

fn parse_override_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Walks `path` ("dims.T", "algorithms.0.alpha") through the document.
/// Every intermediate segment must exist; the final segment may introduce
/// a new key inside an object so optional fields can be set. Typos in such
/// keys are still rejected because the config structs deny unknown fields.
fn set_path(doc: &mut Value, path: &str, value: Value) -> Result<()> {
    let segments: Vec<&str> = path.split('.').collect();
    let mut node = doc;
    for (pos, segment) in segments.iter().enumerate() {
        let last = pos == segments.len() - 1;
        let missing = || Error::UnknownOverridePath {
            path: path.to_string(),
        };
        match node {
            Value::Object(map) => {
                if last {
                    map.insert(segment.to_string(), value);
                    return Ok(());
                }
                node = map.get_mut(*segment).ok_or_else(missing)?;
            }
            Value::Array(items) => {
                let index: usize = segment.parse().map_err(|_| missing())?;
                let slot = items.get_mut(index).ok_or_else(missing)?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                node = slot;
            }
            _ => return Err(missing()),
        }
    }
    unreachable!("set_path returns from the last segment")
}

/// Validates every field and reports all violations at once.
pub fn validate(cfg: &RunConfig) -> Result<()> {
    let mut problems = Vec::new();

    if cfg.schema_version != SCHEMA_VERSION {
        problems.push(format!(
            "schema_version: expected {SCHEMA_VERSION}, got {}",
            cfg.schema_version
        ));
    }

    let d = cfg.dims.num_objectives;
    if cfg.dims.num_arms < 1 {
        problems.push("dims.K: need at least 1 arm".to_string());
    }
    if d < 1 {
        problems.push("dims.D: need at least 1 objective".to_string());
    }
    if cfg.dims.num_users < 1 {
        problems.push("dims.N: need at least 1 user".to_string());
    }
    if cfg.dims.horizon < 1 {
        problems.push("dims.T: need at least 1 round".to_string());
    }

    if cfg.arms.len() != cfg.dims.num_arms {
        problems.push(format!(
            "arms: expected {} entries to match dims.K, got {}",
            cfg.dims.num_arms,
            cfg.arms.len()
        ));
    }
    for (i, arm) in cfg.arms.iter().enumerate() {
        check_vector(&mut problems, &format!("arms.{i}.mean"), &arm.mean, d, 0.0, 1.0);
        check_vector(
            &mut problems,
            &format!("arms.{i}.variance"),
            &arm.variance,
            d,
            0.0,
            f64::INFINITY,
        );
    }

    if cfg.users.len() != cfg.dims.num_users {
        problems.push(format!(
            "users: expected {} entries to match dims.N, got {}",
            cfg.dims.num_users,
            cfg.users.len()
        ));
    }
    for (i, user) in cfg.users.iter().enumerate() {
        check_vector(
            &mut problems,
            &format!("users.{i}.mean"),
            &user.mean,
            d,
            0.0,
            f64::INFINITY,
        );
        check_vector(
            &mut problems,
            &format!("users.{i}.variance"),
            &user.variance,
            d,
            0.0,
            f64::INFINITY,
        );
    }

    if let Protocol::BlockSwitching { block_size } = cfg.protocol {
        if block_size < 1 {
            problems.push("protocol.block_size: must be at least 1".to_string());
        } else if cfg.dims.num_arms != cfg.dims.num_users * block_size {
            problems.push(format!(
                "protocol.block_size: need K = N * block_size, got {} != {} * {}",
                cfg.dims.num_arms, cfg.dims.num_users, block_size
            ));
        }
    }

    if cfg.trials < 1 {
        problems.push("trials: need at least 1".to_string());
    }

    if cfg.algorithms.is_empty() {
        problems.push("algorithms: need at least one entry".to_string());
    }
    let mut seen = std::collections::BTreeSet::new();
    for (i, alg) in cfg.algorithms.iter().enumerate() {
        let field = |name: &str| format!("algorithms.{i}.{name}");
        if !crate::policies::ALGORITHM_NAMES.contains(&alg.name.as_str()) {
            problems.push(format!(
                "{}: unknown algorithm '{}' (known: {})",
                field("name"),
                alg.name,
                crate::policies::ALGORITHM_NAMES.join(", ")
            ));
        }
        if !seen.insert(alg.name.clone()) {
            problems.push(format!("{}: duplicate algorithm '{}'", field("name"), alg.name));
        }
        if !(alg.alpha > 0.0 && alg.alpha.is_finite()) {
            problems.push(format!("{}: must be finite and positive, got {}", field("alpha"), alg.alpha));
        }
        if !(alg.lambda > 0.0 && alg.lambda.is_finite()) {
            problems.push(format!("{}: must be finite and positive, got {}", field("lambda"), alg.lambda));
        }
        if let Some(omega) = alg.omega {
            if !(omega > 0.0 && omega.is_finite()) {
                problems.push(format!("{}: must be finite and positive, got {omega}", field("omega")));
            }
        }
        match alg.beta {
            BetaSchedule::Experiment { kappa } => {
                if !(kappa >= 0.0 && kappa.is_finite()) {
                    problems.push(format!("{}: must be finite and nonnegative, got {kappa}", field("beta.kappa")));
                }
            }
            BetaSchedule::Theory { vartheta } => {
                if !(vartheta > 0.0 && vartheta < 1.0) {
                    problems.push(format!("{}: must lie in (0, 1), got {vartheta}", field("beta.vartheta")));
                }
            }
        }
        if !(0.0..=1.0).contains(&alg.epsilon) || !alg.epsilon.is_finite() {
            problems.push(format!("{}: must lie in [0, 1], got {}", field("epsilon"), alg.epsilon));
        }
        if let Some(weights) = &alg.weights {
            if weights.len() != d {
                problems.push(format!(
                    "{}: expected {d} entries, got {}",
                    field("weights"),
                    weights.len()
                ));
            }
            if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                problems.push(format!("{}: entries must be finite and nonnegative", field("weights")));
            } else if weights.iter().sum::<f64>() <= 0.0 {
                problems.push(format!("{}: entries must not all be zero", field("weights")));
            }
        }
        if let Some(factor) = alg.pareto_factor {
            if !(factor > 0.0 && factor.is_finite()) {
                problems.push(format!("{}: must be finite and positive, got {factor}", field("pareto_factor")));
            }
        }
    }

    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(problems))
    }
}

fn check_vector(problems: &mut Vec<String>, field: &str, v: &[f64], dim: usize, lo: f64, hi: f64) {
    if v.len() != dim {
        problems.push(format!("{field}: expected {dim} entries, got {}", v.len()));
        return;
    }
    for (d, x) in v.iter().enumerate() {
        if !x.is_finite() || *x < lo || *x > hi {
            problems.push(format!("{field}.{d}: {x} outside [{lo}, {hi}]"));
        }
    }
}

/// Canonical serialized form: pretty JSON with struct field order, plus a
/// trailing newline. Two configs differing only in input formatting
/// canonicalize to identical bytes.
pub fn canonical_json(cfg: &RunConfig) -> String {
    let mut text = serde_json::to_string_pretty(cfg).expect("config serializes");
    text.push('\n');
    text
}

/// SHA-256 of the canonical form, hex-encoded. Stable across machines.
pub fn config_digest(cfg: &RunConfig) -> String {
    let digest = Sha256::digest(canonical_json(cfg).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
