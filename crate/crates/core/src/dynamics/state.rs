use crate::fields::{angular_moment, FaceField, Grid};
use crate::setup::{InertiaModel, SystemSetup};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Nonlinear,
    /// Perturbation of the permanent rotation `omega0`: `omega` and `m` hold
    /// the perturbation of the angular velocity and of the total momentum.
    Linearized,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Nonlinear => "nonlinear",
            Mode::Linearized => "linearized",
        })
    }
}

/// Coupled state: relative liquid velocity, body angular velocity and total
/// angular momentum, all in the body frame.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub v: FaceField,
    pub omega: Vec3,
    pub omega_prev: Vec3,
    pub m: Vec3,
    pub t: f64,
    pub step: u64,
    pub mode: Mode,
}

impl State {
    /// State with the given velocity and angular velocity; `m` is made
    /// consistent and `omega_prev = omega`.
    pub fn new(v: FaceField, omega: Vec3, inertia: &InertiaModel, mode: Mode) -> Self {
        let m = inertia.apply(&omega) + angular_moment(&v);
        Self { v, omega, omega_prev: omega, m, t: 0.0, step: 0, mode }
    }

    /// Rigid rotation with `omega0`, or the zero perturbation in linearized mode.
    pub fn permanent(setup: &SystemSetup, mode: Mode) -> Self {
        let grid = Grid::new(&setup.cavity);
        let omega = match mode {
            Mode::Nonlinear => setup.omega0,
            Mode::Linearized => Vec3::zeros(),
        };
        Self::new(FaceField::zeros(grid), omega, &setup.inertia, mode)
    }

    /// Total angular velocity.
    pub fn omega_total(&self, setup: &SystemSetup) -> Vec3 {
        match self.mode {
            Mode::Nonlinear => self.omega,
            Mode::Linearized => setup.omega0 + self.omega,
        }
    }

    /// Total angular momentum.
    pub fn m_total(&self, setup: &SystemSetup) -> Vec3 {
        match self.mode {
            Mode::Nonlinear => self.m,
            Mode::Linearized => setup.inertia.apply(&setup.omega0) + self.m,
        }
    }

    /// Perturbation of the angular velocity relative to `omega0`.
    pub fn omega_perturbation(&self, setup: &SystemSetup) -> Vec3 {
        match self.mode {
            Mode::Nonlinear => self.omega - setup.omega0,
            Mode::Linearized => self.omega,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite()
            && self.omega.iter().all(|x| x.is_finite())
            && self.m.iter().all(|x| x.is_finite())
    }
}
