//! Experiment configuration: a flat TOML document.
//!
//! Required keys are `kind`, `n_states`, `alpha`, `beta` and `rule`. Everything
//! else has a default. Unknown keys are rejected.
//!
//! ```toml
//! kind = "irreversibility"
//! n_states = 100
//! alpha = 1.5
//! beta = 0.003
//! rule = "multiplicative"
//! horizon = 300
//! schedule = "shock"
//! shock_start = 50
//! shock_end = 100
//! shock_multiplier = 15.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{BetaSchedule, DynamicsParams, UpdateRule, MAX_NOISE_SIGMA};
use crate::error::{Error, Result};
use crate::metrics::EntropyMeasure;

pub const DEFAULT_HORIZON: usize = 500;
pub const DEFAULT_REPLICATES: usize = 10;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SHOCK: (usize, usize, f64) = (50, 100, 15.0);
const DEFAULT_AMPLITUDE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Single,
    Sweep,
    Phase,
    Irreversibility,
    Universality,
    Sensitivity,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Single => "single",
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::Phase => "phase",
            ExperimentKind::Irreversibility => "irreversibility",
            ExperimentKind::Universality => "universality",
            ExperimentKind::Sensitivity => "sensitivity",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    #[default]
    Constant,
    Sinusoidal,
    Shock,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    #[default]
    Shannon,
    Renyi,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n_states: usize,
    pub alpha: f64,
    pub beta: f64,
    pub rule: UpdateRule,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub schedule: ScheduleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_period: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shock_start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shock_end: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shock_multiplier: Option<f64>,
    #[serde(default)]
    pub measure: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub renyi_q: Option<f64>,
    /// α grid for sweeps, phase diagrams and the sensitivity suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    /// β axis of the phase diagram.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_axis: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_axis: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_axis: Option<Vec<f64>>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

fn default_horizon() -> usize {
    DEFAULT_HORIZON
}
fn default_replicates() -> usize {
    DEFAULT_REPLICATES
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    /// Defaults used when no file is given: N = 100, α = 1.5, β = 0.003, Multiplicative.
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            n_states: 100,
            alpha: 1.5,
            beta: 0.003,
            rule: UpdateRule::Multiplicative,
            horizon: DEFAULT_HORIZON,
            replicates: DEFAULT_REPLICATES,
            master_seed: DEFAULT_SEED,
            noise_sigma: 0.0,
            schedule: ScheduleKind::Constant,
            schedule_amplitude: None,
            schedule_period: None,
            shock_start: None,
            shock_end: None,
            shock_multiplier: None,
            measure: MeasureKind::Shannon,
            renyi_q: None,
            alphas: None,
            betas: None,
            n_axis: None,
            q_axis: None,
            sigma_axis: None,
            out_dir: default_out_dir(),
        }
    }

    pub fn beta_schedule(&self) -> Result<BetaSchedule> {
        let sinusoid_keys = self.schedule_amplitude.is_some() || self.schedule_period.is_some();
        let shock_keys =
            self.shock_start.is_some() || self.shock_end.is_some() || self.shock_multiplier.is_some();
        if sinusoid_keys && self.schedule != ScheduleKind::Sinusoidal {
            return Err(validation("schedule", "amplitude/period keys need schedule = \"sinusoidal\""));
        }
        if shock_keys && self.schedule != ScheduleKind::Shock {
            return Err(validation("schedule", "shock_* keys need schedule = \"shock\""));
        }
        Ok(match self.schedule {
            ScheduleKind::Constant => BetaSchedule::Constant,
            ScheduleKind::Sinusoidal => BetaSchedule::Sinusoidal {
                amplitude: self.schedule_amplitude.unwrap_or(DEFAULT_AMPLITUDE),
                period: self.schedule_period.unwrap_or(self.horizon as f64 / 4.0),
            },
            ScheduleKind::Shock => BetaSchedule::Shock {
                start: self.shock_start.unwrap_or(DEFAULT_SHOCK.0),
                end: self.shock_end.unwrap_or(DEFAULT_SHOCK.1),
                multiplier: self.shock_multiplier.unwrap_or(DEFAULT_SHOCK.2),
            },
        })
    }

    /// Shock used by the irreversibility protocol: the configured one, or 50..100 ×15.
    pub fn shock(&self) -> Result<(usize, usize, f64)> {
        match self.beta_schedule()? {
            BetaSchedule::Shock {
                start,
                end,
                multiplier,
            } => Ok((start, end, multiplier)),
            _ => Ok(DEFAULT_SHOCK),
        }
    }

    pub fn entropy_measure(&self) -> Result<EntropyMeasure> {
        match (self.measure, self.renyi_q) {
            (MeasureKind::Shannon, None) => Ok(EntropyMeasure::Shannon),
            (MeasureKind::Shannon, Some(_)) => {
                Err(validation("renyi_q", "only allowed with measure = \"renyi\""))
            }
            (MeasureKind::Renyi, None) => Err(validation("renyi_q", "required with measure = \"renyi\"")),
            (MeasureKind::Renyi, Some(q)) => EntropyMeasure::renyi(q).map_err(|_| {
                Error::param("renyi_q", format!("Rényi order must be positive, got {q}"))
            }),
        }
    }

    pub fn dynamics(&self) -> Result<DynamicsParams> {
        let params = DynamicsParams::new(self.alpha, self.beta, self.rule)
            .with_noise(self.noise_sigma)
            .with_schedule(self.beta_schedule()?);
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_states < 2 {
            return Err(Error::param("n_states", format!("must be at least 2, got {}", self.n_states)));
        }
        if self.horizon == 0 {
            return Err(Error::param("horizon", "must be at least 1"));
        }
        if self.replicates == 0 {
            return Err(Error::param("replicates", "must be at least 1"));
        }
        self.dynamics()?;
        self.entropy_measure()?;
        if let Some(alphas) = &self.alphas {
            check_axis("alphas", alphas, |a| a >= 0.0 && a.is_finite(), "values must be finite and >= 0")?;
        }
        if let Some(betas) = &self.betas {
            check_axis("betas", betas, |b| (0.0..=1.0).contains(&b), "values must be in [0, 1]")?;
        }
        if let Some(ns) = &self.n_axis {
            if ns.is_empty() || ns.iter().any(|&n| n < 2) {
                return Err(Error::param("n_axis", "needs at least one value, each >= 2"));
            }
        }
        if let Some(qs) = &self.q_axis {
            check_axis("q_axis", qs, |q| q > 0.0 && q.is_finite(), "values must be positive")?;
        }
        if let Some(sigmas) = &self.sigma_axis {
            check_axis(
                "sigma_axis",
                sigmas,
                |s| (0.0..=MAX_NOISE_SIGMA).contains(&s),
                "values must be in [0, 0.1]",
            )?;
        }
        Ok(())
    }
}

fn check_axis(
    name: &'static str,
    values: &[f64],
    ok: impl Fn(f64) -> bool,
    message: &str,
) -> Result<()> {
    if values.is_empty() {
        return Err(Error::param(name, "needs at least one value"));
    }
    if !values.iter().all(|&v| ok(v)) {
        return Err(Error::param(name, message));
    }
    Ok(())
}

fn validation(field: &str, message: impl Into<String>) -> Error {
    Error::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

/// Parse and validate a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let config = parse_unchecked(text)?;
    config.validate()?;
    Ok(config)
}

/// Schema check only; ranges are left to [`ExperimentConfig::validate`].
pub(crate) fn parse_unchecked(text: &str) -> Result<ExperimentConfig> {
    toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        // serde names the offending key in backticks
        let field = message
            .split('`')
            .nth(1)
            .unwrap_or("config")
            .to_string();
        Error::Validation { field, message }
    })
}

pub fn serialize_config(config: &ExperimentConfig) -> String {
    toml::to_string(config).expect("config fields are all TOML-representable")
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let config = load_unchecked(path)?;
    config.validate()?;
    Ok(config)
}

pub(crate) fn load_unchecked(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_unchecked(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
kind = "single"
n_states = 100
alpha = 1.5
beta = 0.003
rule = "multiplicative"
"#;

    #[test]
    fn minimal_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.horizon, 500);
        assert_eq!(c.replicates, 10);
        assert_eq!(c.master_seed, 42);
        assert_eq!(c.noise_sigma, 0.0);
        assert_eq!(c.beta_schedule().unwrap(), BetaSchedule::Constant);
        assert_eq!(c.entropy_measure().unwrap(), EntropyMeasure::Shannon);
        assert_eq!(c, {
            let mut d = ExperimentConfig::new(ExperimentKind::Single);
            d.rule = UpdateRule::Multiplicative;
            d
        });
    }

    #[test]
    fn beta_out_of_range_names_beta() {
        let err = parse_config(&MINIMAL.replace("beta = 0.003", "beta = 1.5")).unwrap_err();
        assert!(matches!(err, Error::Parameter { name: "beta", .. }), "{err}");
    }

    #[test]
    fn unknown_and_missing_keys_name_the_field() {
        let err = parse_config(&format!("{MINIMAL}alpah = 2.0\n")).unwrap_err();
        assert!(matches!(&err, Error::Validation { field, .. } if field == "alpah"), "{err}");
        let err = parse_config(&MINIMAL.replace("alpha = 1.5\n", "")).unwrap_err();
        assert!(matches!(&err, Error::Validation { field, .. } if field == "alpha"), "{err}");
        let err = parse_config(&MINIMAL.replace("\"multiplicative\"", "\"hebbian\"")).unwrap_err();
        assert!(matches!(err, Error::Validation { .. }), "{err}");
    }

    #[test]
    fn shock_recipe() {
        let text = format!(
            "{}horizon = 300\nschedule = \"shock\"\nshock_start = 50\nshock_end = 100\nshock_multiplier = 15.0\n",
            MINIMAL.replace("single", "irreversibility")
        );
        let c = parse_config(&text).unwrap();
        assert_eq!(
            c.beta_schedule().unwrap(),
            BetaSchedule::Shock {
                start: 50,
                end: 100,
                multiplier: 15.0
            }
        );
        assert!((c.dynamics().unwrap().beta_at(75) - 0.045).abs() < 1e-15);
        assert_eq!(c.shock().unwrap(), (50, 100, 15.0));
    }

    #[test]
    fn schedule_keys_need_matching_schedule() {
        let err = parse_config(&format!("{MINIMAL}shock_start = 10\n")).unwrap_err();
        assert!(matches!(&err, Error::Validation { field, .. } if field == "schedule"));
        let c = parse_config(&format!("{MINIMAL}schedule = \"sinusoidal\"\n")).unwrap();
        assert_eq!(
            c.beta_schedule().unwrap(),
            BetaSchedule::Sinusoidal {
                amplitude: 0.5,
                period: 125.0
            }
        );
    }

    #[test]
    fn measure_selection() {
        let c = parse_config(&format!("{MINIMAL}measure = \"renyi\"\nrenyi_q = 2.0\n")).unwrap();
        assert_eq!(c.entropy_measure().unwrap(), EntropyMeasure::Renyi { q: 2.0 });
        assert!(parse_config(&format!("{MINIMAL}measure = \"renyi\"\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}renyi_q = 2.0\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}measure = \"renyi\"\nrenyi_q = 0.0\n")).is_err());
    }

    #[test]
    fn range_checks() {
        for (from, to, field) in [
            ("n_states = 100", "n_states = 1", "n_states"),
            ("alpha = 1.5", "alpha = -1.0", "alpha"),
            ("beta = 0.003", "beta = -0.1", "beta"),
        ] {
            let err = parse_config(&MINIMAL.replace(from, to)).unwrap_err();
            assert!(matches!(err, Error::Parameter { name, .. } if name == field));
        }
        for extra in [
            "noise_sigma = 0.2",
            "horizon = 0",
            "replicates = 0",
            "alphas = []",
            "betas = [0.1, 2.0]",
            "n_axis = [1]",
            "q_axis = [-1.0]",
            "sigma_axis = [0.5]",
        ] {
            assert!(parse_config(&format!("{MINIMAL}{extra}\n")).is_err(), "{extra}");
        }
    }

    #[test]
    fn round_trip() {
        let mut c = parse_config(MINIMAL).unwrap();
        assert_eq!(parse_config(&serialize_config(&c)).unwrap(), c);
        c.kind = ExperimentKind::Sensitivity;
        c.alphas = Some(vec![0.1, 0.30000000000000004, 2.5]);
        c.betas = Some(vec![0.003]);
        c.n_axis = Some(vec![10, 500]);
        c.q_axis = Some(vec![0.5, 2.0]);
        c.sigma_axis = Some(vec![0.0, 0.1]);
        c.schedule = ScheduleKind::Shock;
        c.shock_multiplier = Some(7.5);
        c.measure = MeasureKind::Renyi;
        c.renyi_q = Some(0.5);
        c.out_dir = PathBuf::from("results/run 1");
        c.master_seed = u64::MAX >> 1;
        assert_eq!(parse_config(&serialize_config(&c)).unwrap(), c);
    }

    #[test]
    fn missing_file_is_io() {
        let err = load_config(Path::new("/nonexistent/ecl.toml")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
