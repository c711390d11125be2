//! The update operator: feedback amplification, bounded novelty, optional
//! noise, and trajectory evolution.
//!
//! One step is `noise(novelty(feedback(p, α), β(t)), σ)`. Each stage is a pure
//! function of its input and, for noise, of the caller's [`RngStream`].

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{self, EntropyMeasure};
use crate::rng::RngStream;
use crate::simplex::{StateDistribution, PROB_FLOOR};

/// Largest admissible noise scale.
pub const MAX_NOISE_SIGMA: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateRule {
    /// w(s) = p(s)^(1+α)
    Multiplicative,
    /// w(s) = p(s)·exp(α·N·p(s))
    #[serde(rename = "softmax")]
    SoftmaxReinforcement,
    /// w(s) = p(s)·(1 + α·(p(s) − Σp²)), fitness multiplier floored at ε
    Replicator,
}

impl UpdateRule {
    pub const ALL: [UpdateRule; 3] = [
        UpdateRule::Multiplicative,
        UpdateRule::SoftmaxReinforcement,
        UpdateRule::Replicator,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            UpdateRule::Multiplicative => "multiplicative",
            UpdateRule::SoftmaxReinforcement => "softmax",
            UpdateRule::Replicator => "replicator",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "multiplicative" => Ok(UpdateRule::Multiplicative),
            "softmax" => Ok(UpdateRule::SoftmaxReinforcement),
            "replicator" => Ok(UpdateRule::Replicator),
            other => Err(Error::param(
                "rule",
                format!("unknown rule `{other}` (expected multiplicative, softmax or replicator)"),
            )),
        }
    }
}

impl std::fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Time profile of the novelty mass β(t) around its base value β₀.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BetaSchedule {
    Constant,
    /// β₀·(1 + amplitude·sin(2πt/period))
    Sinusoidal { amplitude: f64, period: f64 },
    /// β₀·multiplier for start ≤ t < end, β₀ otherwise
    Shock { start: usize, end: usize, multiplier: f64 },
}

impl BetaSchedule {
    pub fn beta_at(&self, base: f64, t: usize) -> f64 {
        match *self {
            BetaSchedule::Constant => base,
            BetaSchedule::Sinusoidal { amplitude, period } => {
                let phase = std::f64::consts::TAU * t as f64 / period;
                base * (1.0 + amplitude * phase.sin())
            }
            BetaSchedule::Shock {
                start,
                end,
                multiplier,
            } => {
                if (start..end).contains(&t) {
                    base * multiplier
                } else {
                    base
                }
            }
        }
    }

    /// Upper bound of β(t) over all t.
    fn peak(&self, base: f64) -> f64 {
        match *self {
            BetaSchedule::Constant => base,
            BetaSchedule::Sinusoidal { amplitude, .. } => base * (1.0 + amplitude),
            BetaSchedule::Shock { multiplier, .. } => base * multiplier.max(1.0),
        }
    }

    fn validate(&self, base: f64) -> Result<()> {
        match *self {
            BetaSchedule::Constant => {}
            BetaSchedule::Sinusoidal { amplitude, period } => {
                if !(0.0..=1.0).contains(&amplitude) {
                    return Err(Error::param(
                        "schedule_amplitude",
                        format!("must be in [0, 1], got {amplitude}"),
                    ));
                }
                if !(period > 0.0) || !period.is_finite() {
                    return Err(Error::param(
                        "schedule_period",
                        format!("must be positive, got {period}"),
                    ));
                }
            }
            BetaSchedule::Shock {
                start,
                end,
                multiplier,
            } => {
                if start > end {
                    return Err(Error::param(
                        "shock_end",
                        format!("shock ends ({end}) before it starts ({start})"),
                    ));
                }
                if !(multiplier >= 0.0) || !multiplier.is_finite() {
                    return Err(Error::param(
                        "shock_multiplier",
                        format!("must be non-negative, got {multiplier}"),
                    ));
                }
            }
        }
        let peak = self.peak(base);
        if peak > 1.0 {
            return Err(Error::param(
                "beta",
                format!("schedule drives beta to {peak}, above 1"),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub alpha: f64,
    pub beta: f64,
    pub rule: UpdateRule,
    pub noise_sigma: f64,
    pub schedule: BetaSchedule,
}

impl DynamicsParams {
    pub fn new(alpha: f64, beta: f64, rule: UpdateRule) -> Self {
        Self {
            alpha,
            beta,
            rule,
            noise_sigma: 0.0,
            schedule: BetaSchedule::Constant,
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn with_schedule(mut self, schedule: BetaSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_beta(self.beta)?;
        check_sigma(self.noise_sigma)?;
        self.schedule.validate(self.beta)
    }

    pub fn beta_at(&self, t: usize) -> f64 {
        self.schedule.beta_at(self.beta, t)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("must be finite and >= 0, got {alpha}")))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::param("beta", format!("must be in [0, 1], got {beta}")))
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if (0.0..=MAX_NOISE_SIGMA).contains(&sigma) {
        Ok(())
    } else {
        Err(Error::param(
            "noise_sigma",
            format!("must be in [0, {MAX_NOISE_SIGMA}], got {sigma}"),
        ))
    }
}

/// Reinforce prevalent states. Identity at α = 0 for every rule.
pub fn apply_feedback(
    p: &StateDistribution,
    alpha: f64,
    rule: UpdateRule,
) -> Result<StateDistribution> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(p.clone());
    }
    let probs = p.probs();
    let n = probs.len() as f64;
    let pmax = metrics::dominant_share(p);
    // Multiplicative and softmax weights are divided by their value at pmax
    // so that the largest weight is exactly 1 and nothing overflows.
    let weights: Vec<f64> = match rule {
        UpdateRule::Multiplicative => {
            let exponent = 1.0 + alpha;
            probs.iter().map(|&x| (x / pmax).powf(exponent)).collect()
        }
        UpdateRule::SoftmaxReinforcement => probs
            .iter()
            .map(|&x| x / pmax * (alpha * n * (x - pmax)).exp())
            .collect(),
        UpdateRule::Replicator => {
            let mean_fitness: f64 = probs.iter().map(|x| x * x).sum();
            probs
                .iter()
                .map(|&x| x * (1.0 + alpha * (x - mean_fitness)).max(PROB_FLOOR))
                .collect()
        }
    };
    StateDistribution::renormalize(weights)
}

/// Mix toward uniform: (1−β)·p + β/N. β = 0 is the identity.
pub fn inject_novelty(p: &StateDistribution, beta: f64) -> Result<StateDistribution> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Ok(p.clone());
    }
    let share = beta / p.len() as f64;
    let keep = 1.0 - beta;
    StateDistribution::renormalize(p.probs().iter().map(|&x| keep * x + share).collect())
}

/// Perturb each entry by N(0, (σ/N)²), floor at ε, renormalize. σ = 0 is the identity
/// and draws nothing from `rng`.
pub fn apply_noise(
    p: &StateDistribution,
    sigma: f64,
    rng: &mut RngStream,
) -> Result<StateDistribution> {
    check_sigma(sigma)?;
    if sigma == 0.0 {
        return Ok(p.clone());
    }
    let normal = Normal::new(0.0, sigma / p.len() as f64)
        .map_err(|e| Error::param("noise_sigma", e.to_string()))?;
    let raw = p
        .probs()
        .iter()
        .map(|&x| (x + normal.sample(rng)).max(PROB_FLOOR))
        .collect();
    StateDistribution::renormalize(raw)
}

/// One application of the update operator at step index `t`.
pub fn step(
    p: &StateDistribution,
    params: &DynamicsParams,
    t: usize,
    rng: &mut RngStream,
) -> Result<StateDistribution> {
    let amplified = apply_feedback(p, params.alpha, params.rule)?;
    let mixed = inject_novelty(&amplified, params.beta_at(t))?;
    apply_noise(&mixed, params.noise_sigma, rng)
}

/// Summary of the state at one step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub t: usize,
    /// Shannon entropy, nats.
    pub entropy: f64,
    /// Shannon entropy over ln N.
    pub entropy_norm: f64,
    pub dominant_share: f64,
    pub top5_mass: f64,
    /// exp(H)
    pub eff_dim: f64,
    /// 1/Σp²
    pub eff_dim2: f64,
    /// β(t): the novelty mass applied when leaving this step.
    pub beta_effective: f64,
    /// Normalized entropy under the trajectory's configured measure.
    pub measure_norm: f64,
}

impl StepRecord {
    pub fn observe(
        p: &StateDistribution,
        t: usize,
        beta_effective: f64,
        measure: EntropyMeasure,
    ) -> Self {
        let entropy = metrics::shannon_entropy(p);
        let ln_n = (p.len() as f64).ln();
        let k = p.len().min(5);
        Self {
            t,
            entropy,
            entropy_norm: entropy / ln_n,
            dominant_share: metrics::dominant_share(p),
            top5_mass: metrics::top_k_mass(p, k).expect("k within 1..=N"),
            eff_dim: entropy.exp(),
            eff_dim2: metrics::effective_dimension_order2(p),
            beta_effective,
            measure_norm: match measure {
                EntropyMeasure::Shannon => entropy / ln_n,
                m => metrics::normalized_entropy(p, m),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub steps: Vec<StepRecord>,
    pub params: DynamicsParams,
    pub n_states: usize,
    pub master_seed: u64,
    pub stream_index: u64,
    pub measure: EntropyMeasure,
    #[serde(skip)]
    pub final_state: Option<StateDistribution>,
}

impl Trajectory {
    /// Per-step normalized entropy under the configured measure.
    pub fn measured(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.measure_norm).collect()
    }

    pub fn entropy_norm(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.entropy_norm).collect()
    }
}

/// Run `horizon` steps from `p0`, recording `horizon + 1` step summaries.
pub fn evolve(
    p0: &StateDistribution,
    params: &DynamicsParams,
    horizon: usize,
    rng: &mut RngStream,
    measure: EntropyMeasure,
) -> Result<Trajectory> {
    if horizon == 0 {
        return Err(Error::param("horizon", "must be at least 1"));
    }
    params.validate()?;
    let (master_seed, stream_index) = (rng.master_seed(), rng.stream_index());
    let mut steps = Vec::with_capacity(horizon + 1);
    let mut p = p0.clone();
    for t in 0..horizon {
        steps.push(StepRecord::observe(&p, t, params.beta_at(t), measure));
        p = step(&p, params, t, rng)?;
    }
    steps.push(StepRecord::observe(&p, horizon, params.beta_at(horizon), measure));
    Ok(Trajectory {
        steps,
        params: *params,
        n_states: p0.len(),
        master_seed,
        stream_index,
        measure,
        final_state: Some(p),
    })
}

/// E[H(P_{t+1}) − H(P_t) | P_t = p] in nats.
///
/// Without noise the step is deterministic and the value is exact; otherwise
/// it is the mean over `mc_samples` independent noise draws from `rng`.
pub fn expected_entropy_change(
    p: &StateDistribution,
    params: &DynamicsParams,
    t: usize,
    mc_samples: usize,
    rng: &mut RngStream,
) -> Result<f64> {
    if mc_samples == 0 {
        return Err(Error::param("mc_samples", "must be at least 1"));
    }
    params.validate()?;
    let h0 = metrics::shannon_entropy(p);
    if params.noise_sigma == 0.0 {
        return Ok(metrics::shannon_entropy(&step(p, params, t, rng)?) - h0);
    }
    let mut total = 0.0;
    for _ in 0..mc_samples {
        total += metrics::shannon_entropy(&step(p, params, t, rng)?) - h0;
    }
    Ok(total / mc_samples as f64)
}
