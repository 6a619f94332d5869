//! Rigid body with a liquid-filled cavity: setup, staggered-grid fields,
//! coupled time integration, linearized spectra and stability predicates.
//!
//! Closed-form routines are generic over [`Scalar`]; the grid and solver
//! machinery works in `f64`.

pub mod dynamics;
pub mod error;
pub mod fields;
pub mod reduce;
pub mod scalar;
pub mod setup;
pub mod spectral;
pub mod stability;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use setup::{build_system, Cavity, Eigenspace, InertiaModel, SetupParams, SystemSetup};

/// Three-component vector used for angular quantities.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Double-precision eigenspace of the inertia tensor.
pub type Eigenspace64 = setup::Eigenspace<f64>;
/// Exact rational eigenspace, for tolerance-free checks.
pub type EigenspaceQ = setup::Eigenspace<num_rational::Ratio<i64>>;
/// Double-precision classification verdict.
pub type Verdict64 = stability::classify::StabilityVerdict<f64>;
/// Exact rational classification verdict.
pub type VerdictQ = stability::classify::StabilityVerdict<num_rational::Ratio<i64>>;
