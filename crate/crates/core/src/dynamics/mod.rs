//! Coupled time integration and diagnostics.

pub mod diagnostics;
pub mod run;
pub mod state;
pub mod step;

pub use diagnostics::{audited_energy, diagnostics, g_functional, lyapunov, DiagnosticsRow};
pub use run::{run, Outcome, RunConfig, RunResult};
pub use state::{Mode, State};
pub use step::{auto_dt, dt_limit, recover_omega, rotate_m, Stepper, DEFAULT_SWEEPS};
