use super::diagnostics::{audited_energy, diagnostics, DiagnosticsRow};
use super::state::State;
use super::step::Stepper;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Emit a row every this many steps (the initial and final states are always emitted).
    pub sample_every: u64,
    /// Call the checkpoint hook every this many steps; 0 disables it.
    pub checkpoint_every: u64,
}

impl RunConfig {
    /// Number of steps to reach `t_end` from `t0`.
    pub fn steps_from(&self, t0: f64) -> u64 {
        let n = (self.t_end - t0) / self.dt;
        if n <= 0.0 {
            0
        } else {
            (n - 1e-9).ceil() as u64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Completed,
    /// Blow-up; the result holds the last finite state.
    Diverged { step: u64, t: f64 },
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub rows: Vec<DiagnosticsRow>,
    pub final_state: State,
    pub outcome: Outcome,
    /// Sum of the absolute per-step energy residuals.
    pub residual_budget: f64,
    /// Largest absolute per-step energy residual.
    pub max_step_residual: f64,
}

impl RunResult {
    pub fn diverged(&self) -> bool {
        matches!(self.outcome, Outcome::Diverged { .. })
    }
}

/// Integrate from `initial` to `cfg.t_end`.
///
/// The energy residual reported in each row is cumulative from the start of
/// this call: `E(t) - E(t0) + c nu integral of |grad v|^2`, with `E = script_E`,
/// `c = 1` in nonlinear mode and `E = V`, `c = 2` in linearized mode; the
/// dissipation integral uses the trapezoidal rule per step.
pub fn run(
    stepper: &Stepper,
    initial: State,
    cfg: &RunConfig,
    mut on_checkpoint: impl FnMut(&State) -> Result<()>,
) -> Result<RunResult> {
    if !(cfg.dt > 0.0) || !(cfg.t_end >= initial.t) || cfg.sample_every == 0 {
        return Err(Error::InvalidParameter(format!(
            "need dt > 0, t_end >= t0 and sample_every > 0 (dt={}, t_end={}, sample_every={})",
            cfg.dt, cfg.t_end, cfg.sample_every
        )));
    }
    let setup = &stepper.setup;
    let mode = initial.mode;
    let weight = match mode {
        super::state::Mode::Nonlinear => 1.0,
        super::state::Mode::Linearized => 2.0,
    };
    let nu = setup.nu;
    let n_steps = cfg.steps_from(initial.t);

    let first = diagnostics(&initial, setup, None);
    let e0 = audited_energy(&first, mode);
    let mut rows = vec![first];
    let mut energy = e0;
    let mut h1_sq = first.h1v * first.h1v;
    let mut dissipation = 0.0;
    let mut budget = 0.0;
    let mut max_step = 0.0f64;
    let mut state = initial;
    let mut outcome = Outcome::Completed;

    for k in 1..=n_steps {
        let next = match stepper.step(&state, cfg.dt) {
            Ok(next) => next,
            Err(Error::NonFinite { step, t }) => {
                outcome = Outcome::Diverged { step, t };
                break;
            }
            Err(e) => return Err(e),
        };
        let sample = k % cfg.sample_every == 0 || k == n_steps;
        let row = diagnostics(&next, setup, sample.then_some((&state.v, cfg.dt)));
        let new_energy = audited_energy(&row, mode);
        let new_h1_sq = row.h1v * row.h1v;
        let step_dissipation = weight * nu * 0.5 * cfg.dt * (h1_sq + new_h1_sq);
        let step_residual = new_energy - energy + step_dissipation;
        budget += step_residual.abs();
        max_step = max_step.max(step_residual.abs());
        dissipation += step_dissipation;
        energy = new_energy;
        h1_sq = new_h1_sq;
        state = next;
        if sample {
            rows.push(DiagnosticsRow { energy_residual: energy - e0 + dissipation, ..row });
        }
        if cfg.checkpoint_every > 0 && k % cfg.checkpoint_every == 0 {
            on_checkpoint(&state)?;
        }
    }
    Ok(RunResult { rows, final_state: state, outcome, residual_budget: budget, max_step_residual: max_step })
}
