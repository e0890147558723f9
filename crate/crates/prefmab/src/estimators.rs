use crate::config::BetaSchedule;
use crate::error::{Error, Result};
use crate::linalg::{self, CholFactor};
use crate::types::l2_norm_sq;

/// Per-arm empirical reward means and pull counts, shared across users.
#[derive(Clone, Debug)]
pub struct RewardEstimate {
    counts: Vec<u64>,
    means: Vec<Vec<f64>>,
}

impl RewardEstimate {
    pub fn new(num_arms: usize, dim: usize) -> Self {
        RewardEstimate {
            counts: vec![0; num_arms],
            means: vec![vec![0.0; dim]; num_arms],
        }
    }

    pub fn update(&mut self, arm: usize, reward: &[f64]) -> Result<()> {
        if arm >= self.counts.len() {
            return Err(Error::InvalidArm {
                arm,
                num_arms: self.counts.len(),
            });
        }
        if reward.len() != self.means[arm].len() {
            return Err(Error::DimensionMismatch {
                expected: self.means[arm].len(),
                actual: reward.len(),
            });
        }
        self.counts[arm] += 1;
        let n = self.counts[arm] as f64;
        for (m, r) in self.means[arm].iter_mut().zip(reward) {
            *m += (r - *m) / n;
        }
        Ok(())
    }

    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn mean(&self, arm: usize) -> &[f64] {
        &self.means[arm]
    }
}

/// Weighted least-squares accumulator for one user's preference estimate:
/// V = lambda I + sum w_s r_s r_s^T and b = sum w_s g_s r_s with
/// w_s = omega / ||r_s||^2. The weighting gives every observation the same
/// spectral contribution omega, so V stays well conditioned.
#[derive(Clone, Debug)]
pub struct GramState {
    dim: usize,
    lambda: f64,
    omega: f64,
    v: Vec<f64>,
    b: Vec<f64>,
    samples: u64,
}

impl GramState {
    pub fn new(dim: usize, lambda: f64, omega: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
            });
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: omega,
            });
        }
        let mut v = vec![0.0; dim * dim];
        for i in 0..dim {
            v[i * dim + i] = lambda;
        }
        Ok(GramState {
            dim,
            lambda,
            omega,
            v,
            b: vec![0.0; dim],
            samples: 0,
        })
    }

    /// Folds in one (reward, overall reward) pair. A zero reward vector has
    /// no defined weight and carries no preference signal; the caller decides
    /// whether to drop it or abort.
    pub fn update(&mut self, reward: &[f64], overall: f64) -> Result<()> {
        if reward.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: reward.len(),
            });
        }
        let norm_sq = l2_norm_sq(reward);
        if norm_sq == 0.0 {
            return Err(Error::DegenerateObservation);
        }
        let w = self.omega / norm_sq;
        // In the clipped-reward regime (entries in [0,1], so |r|^2 <= D)
        // choosing omega >= D forces w >= 1; trip if float handling breaks it.
        debug_assert!(self.omega < self.dim as f64 || norm_sq > self.dim as f64 || w >= 1.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.v[i * self.dim + j] += w * reward[i] * reward[j];
            }
        }
        for (bi, ri) in self.b.iter_mut().zip(reward) {
            *bi += w * overall * ri;
        }
        self.samples += 1;
        Ok(())
    }

    /// Current estimate, the solution of V c = b. With no samples this is
    /// the zero vector.
    pub fn solve(&self) -> Result<Vec<f64>> {
        linalg::solve_refined(&self.v, &self.b, self.dim)
    }

    pub fn factor(&self) -> Result<CholFactor> {
        linalg::cholesky(&self.v, self.dim)
    }

    /// sqrt(x^T V x), the ellipsoid norm of self-normalized bounds.
    pub fn v_norm(&self, x: &[f64]) -> f64 {
        let vx = linalg::mat_vec(&self.v, x, self.dim);
        x.iter().zip(&vx).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt()
    }

    pub fn gram_matrix(&self) -> &[f64] {
        &self.v
    }

    pub fn moment_vector(&self) -> &[f64] {
        &self.b
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Builds the state from a batch, dropping zero-norm reward vectors
    /// (they carry no preference signal and have no defined weight).
    pub fn from_samples(
        dim: usize,
        lambda: f64,
        omega: f64,
        samples: &[(Vec<f64>, f64)],
    ) -> Result<Self> {
        let mut state = GramState::new(dim, lambda, omega)?;
        for (reward, overall) in samples {
            if l2_norm_sq(reward) == 0.0 {
                continue;
            }
            state.update(reward, *overall)?;
        }
        Ok(state)
    }
}

/// Unit-weight ridge accumulator (the classical linear-bandit update).
#[derive(Clone, Debug)]
pub struct RidgeState {
    dim: usize,
    v: Vec<f64>,
    b: Vec<f64>,
    samples: u64,
}

impl RidgeState {
    pub fn new(dim: usize, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
            });
        }
        let mut v = vec![0.0; dim * dim];
        for i in 0..dim {
            v[i * dim + i] = lambda;
        }
        Ok(RidgeState {
            dim,
            v,
            b: vec![0.0; dim],
            samples: 0,
        })
    }

    pub fn update(&mut self, reward: &[f64], overall: f64) {
        debug_assert_eq!(reward.len(), self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.v[i * self.dim + j] += reward[i] * reward[j];
            }
        }
        for (bi, ri) in self.b.iter_mut().zip(reward) {
            *bi += overall * ri;
        }
        self.samples += 1;
    }

    pub fn solve(&self) -> Result<Vec<f64>> {
        linalg::solve_refined(&self.v, &self.b, self.dim)
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }
}

/// Unweighted least squares over a sample batch: solves
/// (lambda I + sum r r^T) c = sum g r. `lambda = 0` is plain linear
/// regression and fails on a rank-deficient design.
pub fn ols_solve(samples: &[(Vec<f64>, f64)], lambda: f64, dim: usize) -> Result<Vec<f64>> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
        });
    }
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = lambda;
    }
    let mut b = vec![0.0; dim];
    for (reward, overall) in samples {
        debug_assert_eq!(reward.len(), dim);
        for i in 0..dim {
            for j in 0..dim {
                v[i * dim + j] += reward[i] * reward[j];
            }
        }
        for (bi, ri) in b.iter_mut().zip(reward) {
            *bi += overall * ri;
        }
    }
    linalg::solve_refined(&v, &b, dim).map_err(|err| match err {
        Error::NotPositiveDefinite { .. } => Error::RankDeficient {
            samples: samples.len(),
            dim,
        },
        other => other,
    })
}

/// Running mean of revealed preference vectors, starting from zero.
#[derive(Clone, Debug)]
pub struct RunningMean {
    mean: Vec<f64>,
    count: u64,
}

impl RunningMean {
    pub fn new(dim: usize) -> Self {
        RunningMean {
            mean: vec![0.0; dim],
            count: 0,
        }
    }

    pub fn update(&mut self, value: &[f64]) {
        debug_assert_eq!(value.len(), self.mean.len());
        self.count += 1;
        let n = self.count as f64;
        for (m, x) in self.mean.iter_mut().zip(value) {
            *m += (x - *m) / n;
        }
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

/// Optimism width sqrt(ln(t / alpha) / max(1, pulls)), clamped so rounds
/// before t = alpha contribute no bonus.
pub fn exploration_bonus(t: u64, alpha: f64, pulls: u64) -> f64 {
    debug_assert!(alpha > 0.0);
    let log_term = (t as f64 / alpha).ln().max(0.0);
    (log_term / pulls.max(1) as f64).sqrt()
}

/// Ellipsoid radius of the self-normalized preference bound:
/// R sqrt(omega D ln((1 + omega t / lambda) / vartheta)) + sqrt(lambda),
/// where R is the half-range of preference entries. A log argument in
/// (0, 1] clamps to a zero log term (degenerate but defined); a
/// nonpositive argument is a domain error.
pub fn lemma_radius(
    t: f64,
    lambda: f64,
    omega: f64,
    dim: usize,
    vartheta: f64,
    half_range: f64,
) -> Result<f64> {
    let inflation = (1.0 + omega * t / lambda) / vartheta;
    if !inflation.is_finite() || inflation <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "lemma log argument",
            value: inflation,
        });
    }
    Ok(half_range * (omega * dim as f64 * inflation.ln().max(0.0)).sqrt() + lambda.sqrt())
}

/// Confidence width used by the policy's preference-uncertainty bonus.
/// Experiment mode clamps to zero before t = 1 so early rounds never
/// produce NaN.
pub fn beta_value(
    schedule: &BetaSchedule,
    t: f64,
    lambda: f64,
    omega: f64,
    dim: usize,
) -> Result<f64> {
    match *schedule {
        BetaSchedule::Experiment { kappa } => {
            let log_t = if t > 1.0 { t.ln() } else { 0.0 };
            Ok(kappa * (dim as f64 * log_t).sqrt())
        }
        BetaSchedule::Theory { vartheta } => lemma_radius(t, lambda, omega, dim, vartheta, 0.5),
    }
}
