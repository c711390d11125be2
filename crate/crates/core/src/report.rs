//! CSV and JSON serialization of trajectories and experiment reports.
//!
//! Reals are written with Rust's `Display`, the shortest decimal that parses
//! back to the same `f64`. JSON keys follow struct field order.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::experiments::{
    IrreversibilityReport, PhaseDiagram, SensitivityReport, SweepResult, UniversalityReport,
};

pub const TRAJECTORY_HEADER: &str = "step,alpha,beta_effective,rule,n_states,entropy_nats,entropy_norm,dominant_share,top5_mass,eff_dim_order1,eff_dim_order2";
pub const SWEEP_HEADER: &str = "alpha,steady_mean,steady_std,reached";
pub const PHASE_HEADER: &str = "alpha,beta,steady_entropy_norm,regime";

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(128 * (traj.steps.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    let alpha = traj.params.alpha;
    let rule = traj.params.rule;
    for s in &traj.steps {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            s.t,
            alpha,
            s.beta_effective,
            rule,
            traj.n_states,
            s.entropy,
            s.entropy_norm,
            s.dominant_share,
            s.top5_mass,
            s.eff_dim,
            s.eff_dim2
        )
        .expect("writing to a String");
    }
    out
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    write_text(path, &trajectory_csv(traj))
}

/// Anything `write_report` can serialize.
pub trait Report {
    fn render(&self) -> String;
}

/// One row per α, then `alpha_c,<value or nan>,,<detected>`.
impl Report for SweepResult {
    fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(SWEEP_HEADER);
        out.push('\n');
        for p in &self.points {
            writeln!(out, "{},{},{},{}", p.alpha, p.steady_mean, p.steady_std, p.reached)
                .expect("writing to a String");
        }
        match self.alpha_c {
            Some(a) => writeln!(out, "alpha_c,{a},,true"),
            None => writeln!(out, "alpha_c,nan,,false"),
        }
        .expect("writing to a String");
        out
    }
}

impl Report for PhaseDiagram {
    fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(PHASE_HEADER);
        out.push('\n');
        for c in &self.cells {
            writeln!(out, "{},{},{},{}", c.alpha, c.beta, c.steady_entropy_norm, c.regime)
                .expect("writing to a String");
        }
        out
    }
}

macro_rules! json_report {
    ($($t:ty),*) => {$(
        impl Report for $t {
            fn render(&self) -> String {
                to_json(self)
            }
        }
    )*};
}

json_report!(IrreversibilityReport, Vec<IrreversibilityReport>, UniversalityReport, SensitivityReport);

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize to JSON");
    s.push('\n');
    s
}

pub fn write_report<R: Report + ?Sized>(report: &R, path: &Path) -> Result<()> {
    write_text(path, &report.render())
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    write_text(path, &to_json(value))
}

/// Write `contents` to `path`, creating parent directories.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
