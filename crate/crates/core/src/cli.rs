//! The `ecl` command line.
//!
//! Each subcommand runs one experiment kind and writes
//! `<out>/<experiment>/<name>.csv|.json`. Exit codes: 0 success, 1 validation
//! or usage error, 2 I/O error. `ECL_THREADS` sets the worker count (0 or
//! unset = one per core).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::config::{self, ExperimentConfig, ExperimentKind};
use crate::dynamics::{evolve, UpdateRule};
use crate::error::{Error, Result};
use crate::experiments::{self, classify_regime, detect_steady_state};
use crate::report::{write_json, write_report, write_trajectory_csv};
use crate::rng::{derive_stream_index, RngStream};
use crate::simplex::StateDistribution;

const DEFAULT_BETAS: [f64; 6] = [0.001, 0.003, 0.01, 0.03, 0.1, 0.3];

#[derive(Debug, Parser)]
#[command(name = "ecl", version, about = "Entropy collapse simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one trajectory
    Run(Overrides),
    /// Steady entropy across an alpha grid, with threshold detection
    Sweep(Overrides),
    /// Regime classification over an (alpha, beta) grid
    Phase(Overrides),
    /// Novelty-shock protocol
    Irrev(Overrides),
    /// Compare the update rules on rescaled time
    Universal(Overrides),
    /// Alpha sweeps across N, Renyi order and noise
    Sense(Overrides),
}

#[derive(Debug, Args)]
struct Overrides {
    /// TOML config file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// multiplicative, softmax or replicator
    #[arg(long)]
    rule: Option<String>,
    /// Number of states
    #[arg(long)]
    n: Option<usize>,
    /// Horizon
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the resolved config and exit
    #[arg(long)]
    describe: bool,
}

impl Command {
    fn parts(&self) -> (ExperimentKind, &Overrides) {
        match self {
            Command::Run(o) => (ExperimentKind::Single, o),
            Command::Sweep(o) => (ExperimentKind::Sweep, o),
            Command::Phase(o) => (ExperimentKind::Phase, o),
            Command::Irrev(o) => (ExperimentKind::Irreversibility, o),
            Command::Universal(o) => (ExperimentKind::Universality, o),
            Command::Sense(o) => (ExperimentKind::Sensitivity, o),
        }
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn resolve(kind: ExperimentKind, o: &Overrides) -> Result<ExperimentConfig> {
    let mut c = match &o.config {
        Some(path) => config::load_unchecked(path)?,
        None => ExperimentConfig::new(kind),
    };
    c.kind = kind;
    if let Some(v) = o.alpha {
        c.alpha = v;
    }
    if let Some(v) = o.beta {
        c.beta = v;
    }
    if let Some(v) = &o.rule {
        c.rule = UpdateRule::parse(v)?;
    }
    if let Some(v) = o.n {
        c.n_states = v;
    }
    if let Some(v) = o.steps {
        c.horizon = v;
    }
    if let Some(v) = o.seed {
        c.master_seed = v;
    }
    if let Some(v) = &o.out {
        c.out_dir = v.clone();
    }
    c.validate()?;
    Ok(c)
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var("ECL_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| Error::Validation {
            field: "ECL_THREADS".into(),
            message: format!("expected a non-negative integer, got `{v}`"),
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Validation {
            field: "ECL_THREADS".into(),
            message: e.to_string(),
        })
}

fn execute(cli: &Cli) -> Result<()> {
    let (kind, overrides) = cli.command.parts();
    let config = resolve(kind, overrides)?;
    if overrides.describe {
        print!("{}", config::serialize_config(&config));
        return Ok(());
    }
    let dir = config.out_dir.join(kind.name());
    thread_pool()?.install(|| match kind {
        ExperimentKind::Single => run_single(&config, &dir),
        ExperimentKind::Sweep => run_sweep(&config, &dir),
        ExperimentKind::Phase => run_phase(&config, &dir),
        ExperimentKind::Irreversibility => run_irrev(&config, &dir),
        ExperimentKind::Universality => run_universal(&config, &dir),
        ExperimentKind::Sensitivity => run_sense(&config, &dir),
    })
}

#[derive(serde::Serialize)]
struct SingleSummary {
    master_seed: u64,
    stream_index: u64,
    steady: experiments::SteadyState,
    regime: experiments::Regime,
    final_entropy_norm: f64,
    final_dominant_share: f64,
}

fn run_single(c: &ExperimentConfig, dir: &Path) -> Result<()> {
    let stream = derive_stream_index(ExperimentKind::Single.name(), &[], 0);
    let mut rng = RngStream::new(c.master_seed, stream);
    let p0 = StateDistribution::sample_dirichlet_uniform(c.n_states, &mut rng)?;
    let traj = evolve(&p0, &c.dynamics()?, c.horizon, &mut rng, c.entropy_measure()?)?;
    let window = experiments::STEADY_WINDOW.min(traj.steps.len());
    let steady = detect_steady_state(&traj, window, experiments::STEADY_TOL)?;
    let last = traj.steps.last().expect("horizon >= 1");
    let summary = SingleSummary {
        master_seed: c.master_seed,
        stream_index: stream,
        steady,
        regime: classify_regime(&steady),
        final_entropy_norm: last.entropy_norm,
        final_dominant_share: last.dominant_share,
    };
    write_trajectory_csv(&traj, &dir.join("trajectory.csv"))?;
    write_json(&summary, &dir.join("summary.json"))?;
    println!(
        "{}: regime {}, steady {:.4}",
        dir.display(),
        summary.regime,
        summary.steady.value
    );
    Ok(())
}

fn run_sweep(c: &ExperimentConfig, dir: &Path) -> Result<()> {
    let alphas = c.alphas.clone().unwrap_or_else(experiments::default_alpha_grid);
    let sweep = experiments::sweep_alpha(c, &alphas, c.replicates)?;
    write_report(&sweep, &dir.join("sweep.csv"))?;
    for (i, traj) in sweep.trajectories.iter().enumerate() {
        write_trajectory_csv(traj, &dir.join(format!("trajectory_{i:03}.csv")))?;
    }
    match sweep.alpha_c {
        Some(a) => println!("{}: alpha_c = {a}", dir.display()),
        None => println!("{}: no transition detected", dir.display()),
    }
    Ok(())
}

fn run_phase(c: &ExperimentConfig, dir: &Path) -> Result<()> {
    let alphas = c.alphas.clone().unwrap_or_else(|| experiments::log_space(1e-4, 3.0, 12));
    let betas = c.betas.clone().unwrap_or_else(|| DEFAULT_BETAS.to_vec());
    let pd = experiments::run_phase_diagram(&alphas, &betas, c)?;
    write_report(&pd, &dir.join("phase.csv"))?;
    println!("{}: {} cells", dir.display(), pd.cells.len());
    Ok(())
}

fn run_irrev(c: &ExperimentConfig, dir: &Path) -> Result<()> {
    let shock = c.shock()?;
    let reports = (0..c.replicates)
        .map(|r| experiments::run_irreversibility(c, shock, r))
        .collect::<Result<Vec<_>>>()?;
    write_report(&reports, &dir.join("report.json"))?;
    for r in &reports {
        write_trajectory_csv(&r.trajectory, &dir.join(format!("trajectory_{:03}.csv", r.replicate)))?;
    }
    let worst = reports.iter().map(|r| r.recovery_gap.abs()).fold(0.0, f64::max);
    println!("{}: max |recovery_gap| = {worst:.4}", dir.display());
    Ok(())
}

fn run_universal(c: &ExperimentConfig, dir: &Path) -> Result<()> {
    let report = experiments::run_universality(&UpdateRule::ALL, c)?;
    write_report(&report, &dir.join("report.json"))?;
    for r in &report.rules {
        write_trajectory_csv(&r.trajectory, &dir.join(format!("trajectory_{}.csv", r.rule)))?;
    }
    println!("{}: max pairwise RMS = {:.4}", dir.display(), report.max_pairwise_rms);
    Ok(())
}

fn run_sense(c: &ExperimentConfig, dir: &Path) -> Result<()> {
    let report = experiments::run_sensitivity(c)?;
    write_report(&report, &dir.join("report.json"))?;
    for e in &report.entries {
        write_report(&e.sweep, &dir.join(format!("sweep_{}_{}.csv", e.axis, e.value)))?;
    }
    let all = report.entries.iter().all(|e| e.all_regimes);
    println!("{}: all regimes on every axis: {all}", dir.display());
    Ok(())
}
