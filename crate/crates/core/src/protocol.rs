//! The depth-k recovery protocol as a random walk on `{0, …, k}`.
//!
//! A trial prepares `φ` at cost `d`, then walks from position 1. At position
//! `i` the circuit in play succeeds with probability `Q_i` and the walk steps
//! left; otherwise it steps right. Each step consumes one `ψ`. Reaching 0 is
//! success and reaching `k` discards the trial. `N_k` is the total cost over
//! all trials divided by the number of successes.
//!
//! Trial `t` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `t`, so
//! results do not depend on how trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::recovery::recovery_success_rate;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProtocolConfig {
    pub k: usize,
    pub d: f64,
    pub z: f64,
    pub q1: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig { k: 3, d: 1000.0, z: 0.0, q1: 0.5, trials: 100_000, seed: 0 }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidConfig(format!("k = {} must be at least 2", self.k)));
        }
        if !(self.d.is_finite() && self.d >= 0.0) {
            return Err(Error::InvalidConfig(format!("d = {} must be a non-negative number", self.d)));
        }
        if !(-1.0..=1.0).contains(&self.z) {
            return Err(Error::InvalidConfig(format!("z = {} must lie in [-1, 1]", self.z)));
        }
        if !(self.q1 > 0.0 && self.q1 <= 1.0) {
            return Err(Error::InvalidConfig(format!("q1 = {} must lie in (0, 1]", self.q1)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be positive".into()));
        }
        Ok(())
    }

    /// `Q_1, …, Q_{k−1}`.
    pub fn probabilities(&self) -> Result<Vec<f64>> {
        self.validate()?;
        probability_sequence(self.q1, self.z, self.k - 1)
    }
}

/// `Q_1 = q1`, `Q_{i+1} = ((1 − z²)/4)/(1 − Q_i)`, for `count` terms.
///
/// Fails if a term would need `Q_i = 1` or leaves `[0, 1]`.
pub fn probability_sequence(q1: f64, z: f64, count: usize) -> Result<Vec<f64>> {
    if !(q1 > 0.0 && q1 <= 1.0) || !(-1.0..=1.0).contains(&z) {
        return Err(Error::InvalidConfig(format!("need q1 in (0, 1] and |z| <= 1, got q1 = {q1}, z = {z}")));
    }
    let mut seq = Vec::with_capacity(count);
    let mut q = q1;
    for i in 0..count {
        if i > 0 {
            q = recovery_success_rate(q, z).map_err(|_| {
                Error::DegenerateConfig(format!("Q_{i} = 1 leaves nothing to recover at step {}", i + 1))
            })?;
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::DegenerateConfig(format!("Q_{} = {q} is not a probability", i + 1)));
            }
        }
        seq.push(q);
    }
    Ok(seq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub steps: u64,
    pub success: bool,
}

/// One walk, with `probs[i − 1] = Q_i`.
pub fn run_trial(probs: &[f64], seed: u64, trial: u64) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let k = probs.len() + 1;
    let mut position = 1;
    let mut steps = 0;
    loop {
        steps += 1;
        if rng.random::<f64>() < probs[position - 1] {
            position -= 1;
        } else {
            position += 1;
        }
        if position == 0 || position == k {
            return TrialOutcome { steps, success: position == 0 };
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolResult {
    pub trials: u64,
    pub successes: u64,
    pub total_cost: f64,
    /// `total_cost / successes`, infinite without successes.
    pub n_k: f64,
    /// Delta-method standard error of `n_k`.
    pub std_error: f64,
    pub prob_sequence: Vec<f64>,
}

pub fn simulate(config: &ProtocolConfig) -> Result<ProtocolResult> {
    let probs = config.probabilities()?;
    let outcomes: Vec<TrialOutcome> =
        (0..config.trials).into_par_iter().map(|t| run_trial(&probs, config.seed, t)).collect();
    Ok(aggregate(config, &outcomes, probs))
}

/// Same as [`simulate`] on the calling thread.
pub fn simulate_sequential(config: &ProtocolConfig) -> Result<ProtocolResult> {
    let probs = config.probabilities()?;
    let outcomes: Vec<TrialOutcome> = (0..config.trials).map(|t| run_trial(&probs, config.seed, t)).collect();
    Ok(aggregate(config, &outcomes, probs))
}

fn aggregate(config: &ProtocolConfig, outcomes: &[TrialOutcome], prob_sequence: Vec<f64>) -> ProtocolResult {
    let n = outcomes.len() as f64;
    let (mut steps, mut successes) = (0u64, 0u64);
    let (mut sum_c2, mut sum_cs) = (0.0, 0.0);
    for o in outcomes {
        let cost = config.d + o.steps as f64;
        steps += o.steps;
        successes += o.success as u64;
        sum_c2 += cost * cost;
        if o.success {
            sum_cs += cost;
        }
    }
    let total_cost = config.trials as f64 * config.d + steps as f64;
    let n_k = if successes == 0 { f64::INFINITY } else { total_cost / successes as f64 };
    let std_error = if successes == 0 {
        f64::INFINITY
    } else {
        let mean_c = total_cost / n;
        let mean_s = successes as f64 / n;
        let var_c = sum_c2 / n - mean_c * mean_c;
        let var_s = mean_s - mean_s * mean_s;
        let cov = sum_cs / n - mean_c * mean_s;
        let var = (var_c - 2.0 * n_k * cov + n_k * n_k * var_s) / (n * mean_s * mean_s);
        var.max(0.0).sqrt()
    };
    ProtocolResult { trials: config.trials, successes, total_cost, n_k, std_error, prob_sequence }
}

/// Solves `a_i x_{i−1} + x_i + c_i x_{i+1} = r_i` for `i = 1..n` with
/// `x_0 = x_{n+1} = 0` folded into `r`.
fn solve_tridiagonal(lower: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut r = vec![0.0; n];
    for i in 0..n {
        let denom = 1.0 - if i > 0 { lower[i] * c[i - 1] } else { 0.0 };
        c[i] = upper[i] / denom;
        r[i] = (rhs[i] - if i > 0 { lower[i] * r[i - 1] } else { 0.0 }) / denom;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        r[i] -= c[i] * r[i + 1];
    }
    r
}

/// Exact `N_k = (d + t_1)/u_1`, where `u_i` is the probability of absorbing
/// at 0 and `t_i` the expected number of steps, both from position `i`.
pub fn analytic_cost(config: &ProtocolConfig) -> Result<f64> {
    let probs = config.probabilities()?;
    let lower: Vec<f64> = probs.iter().map(|q| -q).collect();
    let upper: Vec<f64> = probs.iter().map(|q| -(1.0 - q)).collect();
    // u_0 = 1 enters the first equation
    let mut rhs_u = vec![0.0; probs.len()];
    rhs_u[0] = probs[0];
    let u = solve_tridiagonal(&lower, &upper, &rhs_u);
    let t = solve_tridiagonal(&lower, &upper, &vec![1.0; probs.len()]);
    if u[0] <= 0.0 {
        return Err(Error::DegenerateConfig("the walk never reaches 0".into()));
    }
    Ok((config.d + t[0]) / u[0])
}

/// One line of a simulation report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationRow {
    pub k: usize,
    pub d: f64,
    pub z: f64,
    pub q1: f64,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub total_cost: f64,
    pub n_k_mc: f64,
    pub n_k_analytic: f64,
}

impl SimulationRow {
    pub fn new(config: &ProtocolConfig, result: &ProtocolResult, analytic: f64) -> Self {
        SimulationRow {
            k: config.k,
            d: config.d,
            z: config.z,
            q1: config.q1,
            trials: config.trials,
            seed: config.seed,
            successes: result.successes,
            total_cost: result.total_cost,
            n_k_mc: result.n_k,
            n_k_analytic: analytic,
        }
    }
}
