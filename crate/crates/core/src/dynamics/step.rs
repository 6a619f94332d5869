//! One coupled time step.
//!
//! The total angular momentum is rotated exactly, the liquid is advanced by
//! a projected two-stage (Heun) scheme, and the Euler force is applied as an
//! impulse `-P((w_new - w) x x)` whose size is fixed implicitly by requiring
//! `M = I.w + integral of x cross v` at the new time. The first stage carries
//! the lagged impulse `-P((w - w_prev) x x)`, which keeps the scheme second
//! order. The midpoint angular velocity used by the rotation and the second
//! stage is refined by a few fixed-point sweeps.

use nalgebra::Matrix3;

use super::state::{Mode, State};
use crate::error::{Error, Result};
use crate::fields::{advect, angular_moment, coriolis, inner, laplacian, rigid_field, FaceField, Grid, Projector};
use crate::setup::{InertiaModel, SystemSetup};
use crate::Vec3;

/// Rotate `m` by the flow of `dM/dt = -w x M` over `dt` (Rodrigues formula).
pub fn rotate_m(m: &Vec3, w: &Vec3, dt: f64) -> Vec3 {
    let speed = w.norm();
    if speed == 0.0 {
        return *m;
    }
    let k = w / speed;
    let (s, c) = (-speed * dt).sin_cos();
    m * c + k.cross(m) * s + k * (k.dot(m) * (1.0 - c))
}

/// `w = I^-1 (M - integral of x cross v)`.
pub fn recover_omega(m: &Vec3, v: &FaceField, inertia: &InertiaModel) -> Vec3 {
    inertia.solve(&(m - angular_moment(v)))
}

/// Largest stable step: `min(0.2 h^2 / (6 nu), 0.5 h / (|v|_inf + |w| L_max))`.
pub fn dt_limit(grid: &Grid, nu: f64, vmax: f64, omega: f64) -> f64 {
    let h = grid.min_spacing();
    let diffusive = 0.2 * h * h / (6.0 * nu);
    let speed = vmax + omega * grid.max_len();
    if speed > 0.0 {
        diffusive.min(0.5 * h / speed)
    } else {
        diffusive
    }
}

/// Step size for a whole run started from a state with `vmax` and `omega`:
/// 90% of the diffusive limit, and 60% of the advective one to leave room
/// for the liquid velocity to grow.
pub fn auto_dt(grid: &Grid, nu: f64, vmax: f64, omega: f64) -> f64 {
    let h = grid.min_spacing();
    let diffusive = 0.9 * 0.2 * h * h / (6.0 * nu);
    let speed = vmax + omega * grid.max_len();
    if speed > 0.0 {
        diffusive.min(0.6 * 0.5 * h / speed)
    } else {
        diffusive
    }
}

/// Default number of fixed-point sweeps on the implicit coupling.
pub const DEFAULT_SWEEPS: usize = 2;

/// Precomputed operators for stepping one setup.
#[derive(Debug, Clone)]
pub struct Stepper {
    pub setup: SystemSetup,
    pub grid: Grid,
    projector: Projector,
    /// `R_j = P(e_j x x)`.
    rigid: [FaceField; 3],
    /// `K_ij = <R_i, R_j>`, the liquid's rigid-rotation inertia as seen by solenoidal fields.
    k: Matrix3<f64>,
    coupling_inv: Matrix3<f64>,
    pub sweeps: usize,
}

impl Stepper {
    pub fn new(setup: &SystemSetup) -> Result<Self> {
        let grid = Grid::new(&setup.cavity);
        let projector = Projector::new(grid);
        let mut rigid = Vec::with_capacity(3);
        for j in 0..3 {
            let mut e = Vec3::zeros();
            e[j] = 1.0;
            rigid.push(projector.apply(&rigid_field(&e, grid))?);
        }
        let rigid: [FaceField; 3] = rigid.try_into().expect("three rigid fields");
        let k = Matrix3::from_fn(|i, j| inner(&rigid[i], &rigid[j]));
        let k = (k + k.transpose()) * 0.5;
        let inertia = Matrix3::from_diagonal(&Vec3::from(setup.inertia.moments()));
        let coupling_inv = (inertia - k)
            .try_inverse()
            .ok_or_else(|| Error::InvalidParameter("coupled inertia is singular".into()))?;
        Ok(Self { setup: setup.clone(), grid, projector, rigid, k, coupling_inv, sweeps: DEFAULT_SWEEPS })
    }

    pub fn with_sweeps(mut self, sweeps: usize) -> Self {
        self.sweeps = sweeps.max(1);
        self
    }

    pub fn projector(&self) -> &Projector {
        &self.projector
    }

    /// Gram matrix of the projected rigid fields.
    pub fn rigid_gram(&self) -> Matrix3<f64> {
        self.k
    }

    /// Sharp constant in `c0 ||v||^2 <= 2E` over solenoidal fields:
    /// `1 - lambda_max(I^-1/2 K I^-1/2)`.
    pub fn c0(&self) -> f64 {
        let m = self.setup.inertia.moments();
        let s = Matrix3::from_fn(|i, j| self.k[(i, j)] / (m[i] * m[j]).sqrt());
        let top = s.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        1.0 - top
    }

    /// [`auto_dt`] for a run starting at `s`.
    pub fn auto_dt(&self, s: &State) -> f64 {
        auto_dt(&self.grid, self.setup.nu, s.v.max_abs(), s.omega_total(&self.setup).norm())
    }

    /// Stable step bound for `s`.
    pub fn dt_limit(&self, s: &State) -> f64 {
        dt_limit(&self.grid, self.setup.nu, s.v.max_abs(), s.omega_total(&self.setup).norm())
    }

    pub fn step(&self, s: &State, dt: f64) -> Result<State> {
        let limit = self.dt_limit(s);
        if !(dt > 0.0 && dt <= limit) {
            return Err(Error::CflViolation { dt, limit });
        }
        let next = match s.mode {
            Mode::Nonlinear => self.step_nonlinear(s, dt)?,
            Mode::Linearized => self.step_linearized(s, dt)?,
        };
        if !next.is_finite() {
            return Err(Error::NonFinite { step: next.step, t: next.t });
        }
        Ok(next)
    }

    /// Euler force over one step with the lagged rate `w - w_prev`, applied
    /// to the first stage so the second stage sees the liquid's response.
    fn lagged_impulse(&self, v: &mut FaceField, s: &State) {
        let delta = s.omega - s.omega_prev;
        for j in 0..3 {
            v.axpy(-delta[j], &self.rigid[j]);
        }
    }

    /// Solve for the new angular velocity and apply the Euler impulse to `v_star`.
    fn couple(&self, m_new: &Vec3, v_star: &FaceField, omega: &Vec3) -> (FaceField, Vec3) {
        let rhs = m_new - angular_moment(v_star) - self.k * omega;
        let w_new = self.coupling_inv * rhs;
        let delta = w_new - omega;
        let mut v = v_star.clone();
        for j in 0..3 {
            v.axpy(-delta[j], &self.rigid[j]);
        }
        (v, w_new)
    }

    fn step_nonlinear(&self, s: &State, dt: f64) -> Result<State> {
        let nu = self.setup.nu;
        // Stage 1 and the angular-velocity-independent part of stage 2.
        let mut f1 = laplacian(&s.v);
        f1.scale(nu);
        f1.axpy(-1.0, &advect(&s.v));
        f1.axpy(-2.0, &coriolis(&s.omega, &s.v));
        let mut v1 = s.v.clone();
        v1.axpy(dt, &f1);
        self.lagged_impulse(&mut v1, s);
        let v1 = self.projector.apply(&v1)?;
        let mut base = laplacian(&v1);
        base.scale(nu);
        base.axpy(-1.0, &advect(&v1));
        base.axpy(1.0, &f1);
        base.scale(0.5 * dt);
        base.axpy(1.0, &s.v);

        let mut guess = s.omega * 2.0 - s.omega_prev;
        let mut out = None;
        for _ in 0..self.sweeps {
            let mid = (s.omega + guess) * 0.5;
            let m_new = rotate_m(&s.m, &mid, dt);
            let mut v_star = base.clone();
            v_star.axpy(-dt, &coriolis(&guess, &v1));
            let v_star = self.projector.apply(&v_star)?;
            let (v_new, w_new) = self.couple(&m_new, &v_star, &s.omega);
            guess = w_new;
            out = Some((v_new, m_new));
        }
        let (v, m) = out.expect("at least one sweep");
        let omega = recover_omega(&m, &v, &self.setup.inertia);
        Ok(State { v, omega, omega_prev: s.omega, m, t: s.t + dt, step: s.step + 1, mode: s.mode })
    }

    fn step_linearized(&self, s: &State, dt: f64) -> Result<State> {
        let nu = self.setup.nu;
        let w0 = self.setup.omega0;
        let lambda = self.setup.lambda().unwrap_or(0.0);
        let rhs = |v: &FaceField| {
            let mut f = laplacian(v);
            f.scale(nu);
            f.axpy(-2.0, &coriolis(&w0, v));
            f
        };
        let f1 = rhs(&s.v);
        let mut v1 = s.v.clone();
        v1.axpy(dt, &f1);
        self.lagged_impulse(&mut v1, s);
        let v1 = self.projector.apply(&v1)?;
        let mut v_star = rhs(&v1);
        v_star.axpy(1.0, &f1);
        v_star.scale(0.5 * dt);
        v_star.axpy(1.0, &s.v);
        let v_star = self.projector.apply(&v_star)?;

        // dM/dt = -w0 x M + lambda w0 x w, the second term integrated at the midpoint.
        let rotated = rotate_m(&s.m, &w0, dt);
        let mut guess = s.omega * 2.0 - s.omega_prev;
        let mut out = None;
        for _ in 0..self.sweeps {
            let mid = (s.omega + guess) * 0.5;
            let forcing = rotate_m(&(w0.cross(&mid) * lambda), &w0, 0.5 * dt);
            let m_new = rotated + forcing * dt;
            let (v_new, w_new) = self.couple(&m_new, &v_star, &s.omega);
            guess = w_new;
            out = Some((v_new, m_new));
        }
        let (v, m) = out.expect("at least one sweep");
        let omega = recover_omega(&m, &v, &self.setup.inertia);
        Ok(State { v, omega, omega_prev: s.omega, m, t: s.t + dt, step: s.step + 1, mode: s.mode })
    }
}
