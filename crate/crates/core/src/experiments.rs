//! The experiment battery: α-sweeps with threshold detection, regime
//! classification, phase diagrams, the shock protocol, the cross-rule
//! comparison and the sensitivity suite.
//!
//! Every experiment unit (grid point × replicate) owns an [`RngStream`] whose
//! index is [`derive_stream_index`] of the experiment kind, the unit's axis
//! indices and the replicate. Units run on the rayon pool and results are
//! gathered by unit index, so outputs do not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::dynamics::{evolve, BetaSchedule, DynamicsParams, Trajectory, UpdateRule};
use crate::error::{Error, Result};
use crate::metrics::{rescale_time, EntropyMeasure};
use crate::rng::{derive_stream_index, RngStream};
use crate::simplex::StateDistribution;

pub const STEADY_WINDOW: usize = 100;
pub const STEADY_TOL: f64 = 1e-3;
pub const ADAPTIVE_LEVEL: f64 = 0.8;
pub const COLLAPSED_LEVEL: f64 = 0.3;
/// Smallest first-to-last drop of steady entropy that counts as a transition.
pub const MIN_TRANSITION_DROP: f64 = 0.2;

const BASELINE_STEPS: usize = 20;
const FLOOR_STEPS: usize = 50;
const UNIVERSAL_GRID: usize = 200;
const DILATION_RANGE: (f64, f64) = (1e-2, 1e2);

/// 25 log-spaced values from 1e-4 to 3.
pub fn default_alpha_grid() -> Vec<f64> {
    log_space(1e-4, 3.0, 25)
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SteadyState {
    /// Mean over the final window.
    pub value: f64,
    pub reached: bool,
    pub window_min: f64,
    /// Least-squares change across the window (slope × (window − 1)).
    pub drift: f64,
}

/// Steady state of a normalized-entropy series over its final `window` points.
///
/// The window is steady when its fitted linear drift is smaller than
/// `tol` plus twice the residual standard deviation, i.e. when whatever
/// trend remains is within tolerance or buried in fluctuation.
pub fn steady_state_of(series: &[f64], window: usize, tol: f64) -> Result<SteadyState> {
    if window < 2 || window > series.len() {
        return Err(Error::param(
            "window",
            format!("must be in 2..={}, got {window}", series.len()),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("must be positive, got {tol}")));
    }
    let w = &series[series.len() - window..];
    let n = window as f64;
    let mean = w.iter().sum::<f64>() / n;
    let x_mean = (n - 1.0) / 2.0;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in w.iter().enumerate() {
        let dx = i as f64 - x_mean;
        sxy += dx * (y - mean);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let resid_var = w
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let r = y - (mean + slope * (i as f64 - x_mean));
            r * r
        })
        .sum::<f64>()
        / n;
    let drift = slope * (n - 1.0);
    Ok(SteadyState {
        value: mean,
        reached: drift.abs() < tol + 2.0 * resid_var.sqrt(),
        window_min: w.iter().copied().fold(f64::INFINITY, f64::min),
        drift,
    })
}

/// Steady state of the trajectory's configured entropy measure.
pub fn detect_steady_state(traj: &Trajectory, window: usize, tol: f64) -> Result<SteadyState> {
    steady_state_of(&traj.measured(), window, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Adaptive,
    Metastable,
    Collapsed,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Adaptive => "adaptive",
            Regime::Metastable => "metastable",
            Regime::Collapsed => "collapsed",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Collapsed: steady at or below 0.3. Adaptive: mean at or above 0.8 and either
/// steady or never below 0.8 within the window. Metastable otherwise.
pub fn classify_regime(steady: &SteadyState) -> Regime {
    if steady.value >= ADAPTIVE_LEVEL && (steady.reached || steady.window_min >= ADAPTIVE_LEVEL) {
        Regime::Adaptive
    } else if steady.reached && steady.value <= COLLAPSED_LEVEL {
        Regime::Collapsed
    } else {
        Regime::Metastable
    }
}

/// Mean over replicates, step by step.
fn mean_series(runs: &[Vec<f64>]) -> Vec<f64> {
    let len = runs[0].len();
    (0..len)
        .map(|t| runs.iter().map(|r| r[t]).sum::<f64>() / runs.len() as f64)
        .collect()
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// A configured run minus its initial state and stream.
#[derive(Clone, Copy, Debug)]
struct RunSpec {
    n_states: usize,
    horizon: usize,
    params: DynamicsParams,
    measure: EntropyMeasure,
    master_seed: u64,
}

impl RunSpec {
    fn from_config(base: &ExperimentConfig) -> Result<Self> {
        base.validate()?;
        Ok(Self {
            n_states: base.n_states,
            horizon: base.horizon,
            params: base.dynamics()?,
            measure: base.entropy_measure()?,
            master_seed: base.master_seed,
        })
    }

    /// Evolve from a Dirichlet(1) draw on the given stream.
    fn run(&self, params: &DynamicsParams, stream: u64) -> Result<Trajectory> {
        let mut rng = RngStream::new(self.master_seed, stream);
        let p0 = StateDistribution::sample_dirichlet_uniform(self.n_states, &mut rng)?;
        evolve(&p0, params, self.horizon, &mut rng, self.measure)
    }
}

/// Replicate runs at one grid point, summarized.
#[derive(Clone, Debug)]
struct PointRuns {
    steady: SteadyState,
    per_replicate: Vec<f64>,
    first: Trajectory,
    transient: f64,
}

fn run_point(
    spec: &RunSpec,
    params: &DynamicsParams,
    kind: &str,
    axis: &[usize],
    replicates: usize,
) -> Result<PointRuns> {
    let runs: Vec<Trajectory> = (0..replicates)
        .into_par_iter()
        .map(|r| spec.run(params, derive_stream_index(kind, axis, r)))
        .collect::<Result<_>>()?;
    let measured: Vec<Vec<f64>> = runs.iter().map(Trajectory::measured).collect();
    let window = STEADY_WINDOW.min(spec.horizon + 1);
    let steady = steady_state_of(&mean_series(&measured), window, STEADY_TOL)?;
    let per_replicate = measured
        .iter()
        .map(|m| steady_state_of(m, window, STEADY_TOL).map(|s| s.value))
        .collect::<Result<_>>()?;
    let shannon: Vec<Vec<f64>> = runs.iter().map(Trajectory::entropy_norm).collect();
    let mean = mean_series(&shannon);
    let transient = mean[1..].iter().sum::<f64>() / (mean.len() - 1) as f64;
    Ok(PointRuns {
        steady,
        per_replicate,
        first: runs.into_iter().next().expect("replicates >= 1"),
        transient,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    /// Mean over replicates of the per-run steady value.
    pub steady_mean: f64,
    pub steady_std: f64,
    /// Whether the replicate-mean trajectory reached a steady state.
    pub reached: bool,
    pub regime: Regime,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaCritical {
    /// Steepest-drop midpoint, absent when the sweep shows no transition.
    pub alpha_c: Option<f64>,
    /// First minus last steady value.
    pub total_drop: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub alpha_c: Option<f64>,
    pub total_drop: f64,
    pub beta: f64,
    pub rule: UpdateRule,
    pub n_states: usize,
    pub noise_sigma: f64,
    pub measure: EntropyMeasure,
    pub replicates: usize,
    /// Replicate 0 at each α, in sweep order.
    #[serde(skip)]
    pub trajectories: Vec<Trajectory>,
}

impl SweepResult {
    pub fn regimes(&self) -> Vec<Regime> {
        self.points.iter().map(|p| p.regime).collect()
    }

    pub fn has_all_regimes(&self) -> bool {
        let r = self.regimes();
        [Regime::Adaptive, Regime::Metastable, Regime::Collapsed]
            .iter()
            .all(|x| r.contains(x))
    }
}

fn check_sweep_grid(alphas: &[f64]) -> Result<()> {
    if alphas.len() < 3 {
        return Err(Error::param(
            "alphas",
            format!("a sweep needs at least 3 values, got {}", alphas.len()),
        ));
    }
    if alphas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("alphas", "values must be strictly increasing"));
    }
    Ok(())
}

/// Steady entropy at each α, averaged over `replicates` seeds; other
/// parameters come from `base`.
pub fn sweep_alpha(base: &ExperimentConfig, alphas: &[f64], replicates: usize) -> Result<SweepResult> {
    check_sweep_grid(alphas)?;
    if replicates == 0 {
        return Err(Error::param("replicates", "must be at least 1"));
    }
    let spec = RunSpec::from_config(base)?;
    let points: Vec<PointRuns> = alphas
        .par_iter()
        .enumerate()
        .map(|(i, &alpha)| {
            let params = DynamicsParams { alpha, ..spec.params };
            params.validate()?;
            run_point(&spec, &params, "sweep", &[i], replicates)
        })
        .collect::<Result<_>>()?;
    let summary: Vec<SweepPoint> = alphas
        .iter()
        .zip(&points)
        .map(|(&alpha, pr)| {
            let (steady_mean, steady_std) = mean_std(&pr.per_replicate);
            SweepPoint {
                alpha,
                steady_mean,
                steady_std,
                reached: pr.steady.reached,
                regime: classify_regime(&pr.steady),
            }
        })
        .collect();
    let critical = estimate_alpha_c(&summary)?;
    Ok(SweepResult {
        points: summary,
        alpha_c: critical.alpha_c,
        total_drop: critical.total_drop,
        beta: base.beta,
        rule: base.rule,
        n_states: base.n_states,
        noise_sigma: base.noise_sigma,
        measure: spec.measure,
        replicates,
        trajectories: points.into_iter().map(|p| p.first).collect(),
    })
}

/// Midpoint of the consecutive α pair with the largest fall in steady entropy.
pub fn estimate_alpha_c(points: &[SweepPoint]) -> Result<AlphaCritical> {
    if points.len() < 3 {
        return Err(Error::param("points", "need at least 3 sweep points"));
    }
    let total_drop = points[0].steady_mean - points[points.len() - 1].steady_mean;
    if total_drop < MIN_TRANSITION_DROP {
        return Ok(AlphaCritical {
            alpha_c: None,
            total_drop,
        });
    }
    let (i, _) = points
        .windows(2)
        .map(|w| w[0].steady_mean - w[1].steady_mean)
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, d)| if d > best.1 { (i, d) } else { best });
    Ok(AlphaCritical {
        alpha_c: Some(0.5 * (points[i].alpha + points[i + 1].alpha)),
        total_drop,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseCell {
    pub alpha: f64,
    pub beta: f64,
    pub steady_entropy_norm: f64,
    pub reached: bool,
    pub regime: Regime,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseDiagram {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// β-major: all α for the first β, then the next β.
    pub cells: Vec<PhaseCell>,
}

impl PhaseDiagram {
    pub fn cell(&self, alpha_index: usize, beta_index: usize) -> &PhaseCell {
        &self.cells[beta_index * self.alphas.len() + alpha_index]
    }

    pub fn row(&self, beta_index: usize) -> &[PhaseCell] {
        let n = self.alphas.len();
        &self.cells[beta_index * n..(beta_index + 1) * n]
    }
}

/// Classify every (α, β) cell, averaging `base.replicates` seeds per cell.
pub fn run_phase_diagram(alphas: &[f64], betas: &[f64], base: &ExperimentConfig) -> Result<PhaseDiagram> {
    if alphas.is_empty() || betas.is_empty() {
        return Err(Error::param("alphas", "phase axes must be non-empty"));
    }
    let spec = RunSpec::from_config(base)?;
    let units: Vec<(usize, usize)> = (0..betas.len())
        .flat_map(|j| (0..alphas.len()).map(move |i| (i, j)))
        .collect();
    let cells = units
        .par_iter()
        .map(|&(i, j)| {
            let params = DynamicsParams {
                alpha: alphas[i],
                beta: betas[j],
                ..spec.params
            };
            params.validate()?;
            let pr = run_point(&spec, &params, "phase", &[j, i], base.replicates)?;
            Ok(PhaseCell {
                alpha: alphas[i],
                beta: betas[j],
                steady_entropy_norm: pr.steady.value,
                reached: pr.steady.reached,
                regime: classify_regime(&pr.steady),
            })
        })
        .collect::<Result<_>>()?;
    Ok(PhaseDiagram {
        alphas: alphas.to_vec(),
        betas: betas.to_vec(),
        cells,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrreversibilityReport {
    pub alpha: f64,
    pub beta: f64,
    pub shock_start: usize,
    pub shock_end: usize,
    pub shock_multiplier: f64,
    pub replicate: usize,
    /// Mean over the 20 steps before the shock.
    pub collapsed_baseline: f64,
    /// Maximum from the baseline window through the end of the shock.
    pub shock_peak: f64,
    /// Mean over the final 50 steps.
    pub post_shock_floor: f64,
    pub recovery_gap: f64,
    pub dominant_share_final: f64,
    pub top5_before: f64,
    pub top5_after: f64,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

/// Shock protocol: β is multiplied by `shock.2` for `shock.0 <= t < shock.1`.
/// `replicate` selects the initial state.
pub fn run_irreversibility(
    base: &ExperimentConfig,
    shock: (usize, usize, f64),
    replicate: usize,
) -> Result<IrreversibilityReport> {
    let (start, end, multiplier) = shock;
    if start == 0 || start > end || end > base.horizon {
        return Err(Error::param(
            "shock",
            format!("interval {start}..{end} must satisfy 1 <= start <= end <= horizon ({})", base.horizon),
        ));
    }
    let spec = RunSpec::from_config(base)?;
    let params = spec.params.with_schedule(BetaSchedule::Shock {
        start,
        end,
        multiplier,
    });
    params.validate()?;
    let trajectory = spec.run(&params, derive_stream_index("irreversibility", &[], replicate))?;
    let h = trajectory.entropy_norm();
    let lo = start.saturating_sub(BASELINE_STEPS);
    let collapsed_baseline = h[lo..start].iter().sum::<f64>() / (start - lo) as f64;
    let shock_peak = h[lo..=end].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail = &h[h.len().saturating_sub(FLOOR_STEPS)..];
    let post_shock_floor = tail.iter().sum::<f64>() / tail.len() as f64;
    let last = trajectory.steps.last().expect("horizon >= 1");
    Ok(IrreversibilityReport {
        alpha: params.alpha,
        beta: params.beta,
        shock_start: start,
        shock_end: end,
        shock_multiplier: multiplier,
        replicate,
        collapsed_baseline,
        shock_peak,
        post_shock_floor,
        recovery_gap: post_shock_floor - collapsed_baseline,
        dominant_share_final: last.dominant_share,
        top5_before: trajectory.steps[start].top5_mass,
        top5_after: last.top5_mass,
        trajectory,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleCurve {
    pub rule: UpdateRule,
    /// c such that this rule's profile at c·τ matches the reference at τ.
    pub dilation: f64,
    pub rms_to_reference: f64,
    /// RMS to the reference before fitting the dilation.
    pub rms_undilated: f64,
    /// Dilated normalized entropy on the common grid.
    pub curve: Vec<f64>,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniversalityReport {
    pub alpha: f64,
    pub beta: f64,
    pub n_states: usize,
    pub reference: UpdateRule,
    /// Rescaled time t·β/α·100.
    pub grid: Vec<f64>,
    pub rules: Vec<RuleCurve>,
    pub max_pairwise_rms: f64,
}

/// Piecewise-linear interpolation of (x, y) samples at `x`, clamped at both ends.
fn interpolate(curve: &[(f64, f64)], x: f64) -> f64 {
    let first = curve[0];
    let last = curve[curve.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let k = curve.partition_point(|&(t, _)| t <= x);
    let (x0, y0) = curve[k - 1];
    let (x1, y1) = curve[k];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn rms(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64).sqrt()
}

fn dilated(curve: &[(f64, f64)], grid: &[f64], c: f64) -> Vec<f64> {
    grid.iter().map(|&t| interpolate(curve, c * t)).collect()
}

/// Least-squares dilation over [1e-2, 1e2]: a log-spaced scan, then golden
/// section in the bracket around the best scan point.
fn fit_dilation(curve: &[(f64, f64)], grid: &[f64], reference: &[f64]) -> f64 {
    let cost = |c: f64| rms(&dilated(curve, grid, c), reference);
    let scan = log_space(DILATION_RANGE.0, DILATION_RANGE.1, 401);
    let best = (0..scan.len())
        .min_by(|&a, &b| cost(scan[a]).total_cmp(&cost(scan[b])))
        .expect("non-empty scan");
    let (mut lo, mut hi) = (
        scan[best.saturating_sub(1)].ln(),
        scan[(best + 1).min(scan.len() - 1)].ln(),
    );
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (cost(x1.exp()), cost(x2.exp()));
    for _ in 0..60 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = cost(x1.exp());
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = cost(x2.exp());
        }
    }
    let refined = (0.5 * (lo + hi)).exp();
    if cost(refined) <= cost(scan[best]) {
        refined
    } else {
        scan[best]
    }
}

/// Evolve each rule from the same initial state and compare the normalized
/// entropy profiles on rescaled time. The first rule is the reference.
pub fn run_universality(rules: &[UpdateRule], base: &ExperimentConfig) -> Result<UniversalityReport> {
    if rules.is_empty() {
        return Err(Error::param("rules", "need at least one rule"));
    }
    if !(base.alpha > 0.0) || !(base.beta > 0.0) {
        return Err(Error::param("alpha", "time rescaling needs alpha > 0 and beta > 0"));
    }
    let spec = RunSpec::from_config(base)?;
    let stream = derive_stream_index("universality", &[], 0);
    let trajectories: Vec<Trajectory> = rules
        .par_iter()
        .map(|&rule| spec.run(&DynamicsParams { rule, ..spec.params }, stream))
        .collect::<Result<_>>()?;
    let curves: Vec<Vec<(f64, f64)>> = trajectories
        .iter()
        .map(rescale_time)
        .collect::<Result<_>>()?;
    let t_max = curves[0].last().expect("horizon >= 1").0;
    let grid: Vec<f64> = (0..UNIVERSAL_GRID)
        .map(|i| t_max * i as f64 / (UNIVERSAL_GRID - 1) as f64)
        .collect();
    let reference = dilated(&curves[0], &grid, 1.0);
    let fitted: Vec<(f64, Vec<f64>)> = curves
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            let d = if k == 0 { 1.0 } else { fit_dilation(c, &grid, &reference) };
            (d, dilated(c, &grid, d))
        })
        .collect();
    let mut max_pairwise_rms: f64 = 0.0;
    for a in 0..fitted.len() {
        for b in a + 1..fitted.len() {
            max_pairwise_rms = max_pairwise_rms.max(rms(&fitted[a].1, &fitted[b].1));
        }
    }
    let rule_curves = rules
        .iter()
        .zip(fitted)
        .zip(trajectories)
        .zip(&curves)
        .map(|(((&rule, (dilation, curve)), trajectory), raw)| RuleCurve {
            rule,
            dilation,
            rms_to_reference: rms(&curve, &reference),
            rms_undilated: rms(&dilated(raw, &grid, 1.0), &reference),
            curve,
            trajectory,
        })
        .collect();
    Ok(UniversalityReport {
        alpha: base.alpha,
        beta: base.beta,
        n_states: base.n_states,
        reference: rules[0],
        grid,
        rules: rule_curves,
        max_pairwise_rms,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityEntry {
    /// Which axis was varied: `n_states`, `renyi_q` or `noise_sigma`.
    pub axis: &'static str,
    pub value: f64,
    pub alpha_c: Option<f64>,
    pub alpha_c_over_beta: Option<f64>,
    pub regimes_present: Vec<Regime>,
    pub all_regimes: bool,
    pub sweep: SweepResult,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoiseTransient {
    pub alpha: f64,
    pub noise_sigma: f64,
    pub transient_noiseless: f64,
    pub transient_noisy: f64,
    pub regime_noiseless: Regime,
    pub regime_noisy: Regime,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub beta: f64,
    pub rule: UpdateRule,
    pub alphas: Vec<f64>,
    pub entries: Vec<SensitivityEntry>,
    /// (max − min)/(max + min) of α_c/β over the N axis: the ± relative half-range.
    pub alpha_c_ratio_spread: Option<f64>,
    pub noise: Vec<NoiseTransient>,
}

pub const DEFAULT_N_AXIS: [usize; 4] = [10, 50, 100, 500];
pub const DEFAULT_Q_AXIS: [f64; 3] = [0.5, 1.0, 2.0];
pub const DEFAULT_SIGMA_AXIS: [f64; 3] = [0.0, 0.05, 0.1];

/// α-sweeps along the N, Rényi-order and noise axes, one axis at a time.
///
/// Sweeps share stream indices, so changing q re-measures the same
/// trajectories and changing σ keeps the same initial states.
pub fn run_sensitivity(base: &ExperimentConfig) -> Result<SensitivityReport> {
    base.validate()?;
    let alphas = base.alphas.clone().unwrap_or_else(default_alpha_grid);
    let n_axis = base.n_axis.clone().unwrap_or_else(|| DEFAULT_N_AXIS.to_vec());
    let q_axis = base.q_axis.clone().unwrap_or_else(|| DEFAULT_Q_AXIS.to_vec());
    let sigma_axis = base.sigma_axis.clone().unwrap_or_else(|| DEFAULT_SIGMA_AXIS.to_vec());

    let mut variants: Vec<(&'static str, f64, ExperimentConfig)> = Vec::new();
    for &n in &n_axis {
        variants.push(("n_states", n as f64, ExperimentConfig { n_states: n, ..base.clone() }));
    }
    for &q in &q_axis {
        let mut c = base.clone();
        match EntropyMeasure::renyi(q)? {
            EntropyMeasure::Shannon => {
                c.measure = crate::config::MeasureKind::Shannon;
                c.renyi_q = None;
            }
            EntropyMeasure::Renyi { q } => {
                c.measure = crate::config::MeasureKind::Renyi;
                c.renyi_q = Some(q);
            }
        }
        variants.push(("renyi_q", q, c));
    }
    for &sigma in &sigma_axis {
        variants.push(("noise_sigma", sigma, ExperimentConfig { noise_sigma: sigma, ..base.clone() }));
    }

    let mut entries = Vec::with_capacity(variants.len());
    for (axis, value, config) in variants {
        let sweep = sweep_alpha(&config, &alphas, base.replicates)?;
        let mut regimes_present = sweep.regimes();
        regimes_present.sort();
        regimes_present.dedup();
        entries.push(SensitivityEntry {
            axis,
            value,
            alpha_c: sweep.alpha_c,
            alpha_c_over_beta: sweep.alpha_c.map(|a| a / base.beta),
            all_regimes: sweep.has_all_regimes(),
            regimes_present,
            sweep,
        });
    }

    let ratios: Option<Vec<f64>> = entries
        .iter()
        .filter(|e| e.axis == "n_states")
        .map(|e| e.alpha_c_over_beta)
        .collect();
    let alpha_c_ratio_spread = ratios.filter(|r| !r.is_empty()).map(|r| {
        let max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = r.iter().copied().fold(f64::INFINITY, f64::min);
        (max - min) / (max + min)
    });

    let noise = noise_transients(base, &entries, &sigma_axis)?;
    Ok(SensitivityReport {
        beta: base.beta,
        rule: base.rule,
        alphas,
        entries,
        alpha_c_ratio_spread,
        noise,
    })
}

/// Noiseless versus noisy runs at one super-critical α: the base α when it is
/// above the detected threshold, else twice the threshold.
fn noise_transients(
    base: &ExperimentConfig,
    entries: &[SensitivityEntry],
    sigma_axis: &[f64],
) -> Result<Vec<NoiseTransient>> {
    let alpha_c = entries
        .iter()
        .find(|e| e.axis == "noise_sigma" && e.value == 0.0)
        .or_else(|| entries.iter().find(|e| e.axis == "n_states" && e.value == base.n_states as f64))
        .and_then(|e| e.alpha_c);
    let alpha = match alpha_c {
        Some(ac) if base.alpha <= ac => 2.0 * ac,
        _ => base.alpha,
    };
    let point = |sigma: f64| -> Result<PointRuns> {
        let config = ExperimentConfig {
            alpha,
            noise_sigma: sigma,
            ..base.clone()
        };
        let spec = RunSpec::from_config(&config)?;
        run_point(&spec, &spec.params, "sensitivity", &[], base.replicates)
    };
    let quiet = point(0.0)?;
    sigma_axis
        .iter()
        .filter(|&&s| s > 0.0)
        .map(|&sigma| {
            let noisy = point(sigma)?;
            Ok(NoiseTransient {
                alpha,
                noise_sigma: sigma,
                transient_noiseless: quiet.transient,
                transient_noisy: noisy.transient,
                regime_noiseless: classify_regime(&quiet.steady),
                regime_noisy: classify_regime(&noisy.steady),
            })
        })
        .collect()
}
