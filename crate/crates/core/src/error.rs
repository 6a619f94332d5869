use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid cavity: {0}")]
    InvalidCavity(String),
    #[error("moments of inertia must satisfy A <= B <= C (got {a}, {b}, {c})")]
    OrderViolation { a: f64, b: f64, c: f64 },
    #[error("solid part of the inertia is not positive on axis {axis} (total {total}, liquid {liquid})")]
    SolidInertiaNonpositive { axis: usize, total: f64, liquid: f64 },
    #[error("not a permanent rotation axis: {0:?} is not an eigenvector of the inertia tensor")]
    NotPermanentAxis([f64; 3]),
    #[error("{0} is not a central moment of inertia")]
    UnknownEigenvalue(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pressure solve did not reach tolerance (relative residual {residual:e})")]
    SolverFailure { residual: f64 },
    #[error("time step {dt} exceeds the stability limit {limit}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("non-finite values at step {step} (t = {t})")]
    NonFinite { step: u64, t: f64 },
    #[error("eigensolver did not converge after {iterations} iterations (worst relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("eigenvalue {value:e} lies within a factor 10 of the zero-cluster radius {radius:e}")]
    ClusterAmbiguous { value: f64, radius: f64 },
    #[error("signal never enters the fitting window")]
    WindowEmpty,
}
