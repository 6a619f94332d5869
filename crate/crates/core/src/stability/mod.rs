//! Closed-form stability decisions, the steady-coupling null space,
//! attainability predicates and exponential-rate fitting.

pub mod attain;
pub mod classify;
pub mod fit;
pub mod nullspace;

pub use attain::{attainability, Attainability};
pub use classify::{classify, classify_f64, CaseId, NotAPermanentAxis, StabilityVerdict, Verdict};
pub use fit::{fit_decay, fit_growth, DecayFit, DecayPolicy};
pub use nullspace::{principal_angle, steady_coupling_matrix, steady_coupling_nullspace};
