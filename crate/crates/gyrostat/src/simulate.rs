//! Run a scenario and write its artifacts.

use std::path::{Path, PathBuf};

use gyrostat_core::dynamics::{run, Outcome, RunConfig, RunResult, Stepper};
use gyrostat_core::SystemSetup;
use serde_json::{json, Value};

use crate::checkpoint::Checkpoint;
use crate::error::{ShellError, ShellResult};
use crate::scenario::{Format, Scenario};
use crate::timeseries::{write_plot_data, write_timeseries};

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const FINAL_CHECKPOINT: &str = "final.lgy";
pub const PLOT_DIR: &str = "plot";

#[derive(Debug, Clone)]
pub struct Simulation {
    pub setup: SystemSetup,
    pub dt: f64,
    pub result: RunResult,
    /// Files written, in order.
    pub artifacts: Vec<PathBuf>,
}

pub fn checkpoint_name(step: u64) -> String {
    format!("checkpoint_{step:08}.lgy")
}

fn create_dir(dir: &Path) -> ShellResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| ShellError::io(dir, e))
}

/// Integrate the scenario without writing anything.
pub fn integrate(scenario: &Scenario) -> ShellResult<Simulation> {
    integrate_with(scenario, None)
}

fn integrate_with(scenario: &Scenario, checkpoint_dir: Option<&Path>) -> ShellResult<Simulation> {
    let setup = scenario.setup()?;
    let stepper = Stepper::new(&setup)?.with_sweeps(scenario.sim.sweeps);
    let initial = scenario.initial_state(&setup)?;
    let dt = scenario.resolve_dt(&stepper, &initial);
    let cfg = RunConfig {
        dt,
        t_end: scenario.sim.t_end,
        sample_every: scenario.sim.sample_every,
        checkpoint_every: if checkpoint_dir.is_some() { scenario.sim.checkpoint_every } else { 0 },
    };
    let mut artifacts = Vec::new();
    let mut io_error = None;
    let result = run(&stepper, initial, &cfg, |s| {
        let dir = checkpoint_dir.expect("hook only runs with a checkpoint directory");
        let path = dir.join(checkpoint_name(s.step));
        match Checkpoint::from_state(s, &setup).write(&path) {
            Ok(()) => artifacts.push(path),
            Err(e) => {
                if io_error.is_none() {
                    io_error = Some(e);
                }
            }
        }
        Ok(())
    });
    if let Some(e) = io_error {
        return Err(e);
    }
    Ok(Simulation { setup, dt, result: result?, artifacts })
}

/// Integrate the scenario and write the configured outputs into its output directory.
pub fn simulate(scenario: &Scenario) -> ShellResult<Simulation> {
    let out = &scenario.output;
    create_dir(&out.dir)?;
    let ck_dir = out.wants(Format::Checkpoint).then_some(out.dir.as_path());
    let mut sim = integrate_with(scenario, ck_dir)?;
    let dir = &out.dir;
    let scenario_path = dir.join("scenario.toml");
    std::fs::write(&scenario_path, scenario.to_toml()).map_err(|e| ShellError::io(&scenario_path, e))?;
    sim.artifacts.push(scenario_path);
    if out.wants(Format::Csv) {
        let path = dir.join(TIMESERIES_FILE);
        write_timeseries(&path, &sim.result.rows)?;
        sim.artifacts.push(path);
    }
    if out.wants(Format::Plot) {
        let path = dir.join(PLOT_DIR);
        write_plot_data(&path, &sim.result.rows)?;
        sim.artifacts.push(path);
    }
    if out.wants(Format::Checkpoint) {
        let path = dir.join(FINAL_CHECKPOINT);
        Checkpoint::from_state(&sim.result.final_state, &sim.setup).write(&path)?;
        sim.artifacts.push(path);
    }
    if out.wants(Format::Json) {
        let path = dir.join("run.json");
        write_json(&path, &run_summary(scenario, &sim))?;
        sim.artifacts.push(path);
    }
    Ok(sim)
}

pub fn write_json(path: &Path, value: &Value) -> ShellResult<()> {
    let text = serde_json::to_string_pretty(value).expect("json serializes") + "\n";
    std::fs::write(path, text).map_err(|e| ShellError::io(path, e))
}

pub fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn run_summary(scenario: &Scenario, sim: &Simulation) -> Value {
    let r = &sim.result;
    let first = &r.rows[0];
    let last = r.rows.last().expect("rows hold the initial state");
    let outcome = match r.outcome {
        Outcome::Completed => json!({"status": "completed"}),
        Outcome::Diverged { step, t } => json!({"status": "diverged", "step": step, "t": t}),
    };
    let s = &r.final_state;
    json!({
        "mode": scenario.mode().to_string(),
        "outcome": outcome,
        "dt": sim.dt,
        "steps": s.step,
        "t_final": s.t,
        "rows": r.rows.len(),
        "omega_final": [s.omega.x, s.omega.y, s.omega.z],
        "m_norm_initial": first.m_norm,
        "m_norm_final": last.m_norm,
        "l2v_initial": first.l2v,
        "l2v_final": last.l2v,
        "energy_residual_final": finite(last.energy_residual),
        "residual_budget": r.residual_budget,
        "max_step_residual": r.max_step_residual,
    })
}
