use super::state::{Mode, State};
use crate::fields::{angular_moment, h1_seminorm, l2_norm, FaceField};
use crate::setup::SystemSetup;
use crate::Vec3;

/// Per-sample scalars of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub step: u64,
    /// Angular velocity as stored in the state (the perturbation in linearized mode).
    pub omega: Vec3,
    /// `|M|` of the total angular momentum.
    pub m_norm: f64,
    /// `a = -I^-1 integral of x cross v`.
    pub a: Vec3,
    pub omega_inf: Vec3,
    pub omega_par: Vec3,
    pub omega_perp: Vec3,
    pub omega_star: Vec3,
    pub e: f64,
    pub script_e: f64,
    /// NaN when the setup has no permanent axis.
    pub g: f64,
    pub v_lyap: f64,
    pub l2v: f64,
    pub h1v: f64,
    /// NaN when no previous state is available.
    pub e1: f64,
    pub energy_residual: f64,
}

/// `G = w.I.w - |I w|^2 / lambda`.
pub fn g_functional(setup: &SystemSetup, omega_star: &Vec3) -> f64 {
    match setup.lambda() {
        Some(lambda) => {
            let iw = setup.inertia.apply(omega_star);
            omega_star.dot(&iw) - iw.norm_squared() / lambda
        }
        None => f64::NAN,
    }
}

fn split(setup: &SystemSetup, w: &Vec3) -> (Vec3, Vec3) {
    if setup.axis.is_some() {
        setup.split(w)
    } else {
        (Vec3::zeros(), *w)
    }
}

/// `E = (|v|^2 - a.I.a) / 2` and `a` for one field.
fn relative_energy(setup: &SystemSetup, v: &FaceField) -> (f64, Vec3, f64) {
    let j = angular_moment(v);
    let a = -setup.inertia.solve(&j);
    let l2 = l2_norm(v);
    (0.5 * (l2 * l2 - a.dot(&setup.inertia.apply(&a))), a, l2)
}

/// Lyapunov functional `V = 2E + G` of the state.
pub fn lyapunov(s: &State, setup: &SystemSetup) -> f64 {
    let row = diagnostics(s, setup, None);
    row.v_lyap
}

/// Conserved-up-to-dissipation energy: `script_E` in nonlinear mode, `V` in linearized mode.
pub fn audited_energy(row: &DiagnosticsRow, mode: Mode) -> f64 {
    match mode {
        Mode::Nonlinear => row.script_e,
        Mode::Linearized => row.v_lyap,
    }
}

/// Evaluate all diagnostics. `prev` is the velocity and angular momentum
/// split one step of size `dt` earlier, for the backward-difference `E1`.
pub fn diagnostics(s: &State, setup: &SystemSetup, prev: Option<(&FaceField, f64)>) -> DiagnosticsRow {
    let (e, a, l2v) = relative_energy(setup, &s.v);
    let iw = setup.inertia.apply(&s.omega);
    let script_e = 0.5 * (l2v * l2v + s.omega.dot(&iw) - 2.0 * a.dot(&iw));
    let pert = s.omega_perturbation(setup);
    let (omega_par, omega_perp) = split(setup, &pert);
    let (_, a_perp) = split(setup, &a);
    let omega_star = omega_perp - a_perp;
    let g = g_functional(setup, &omega_star);
    let e1 = match prev {
        Some((v_prev, dt)) if dt > 0.0 => {
            let mut vt = s.v.clone();
            vt.axpy(-1.0, v_prev);
            vt.scale(1.0 / dt);
            relative_energy(setup, &vt).0
        }
        _ => f64::NAN,
    };
    DiagnosticsRow {
        t: s.t,
        step: s.step,
        omega: s.omega,
        m_norm: s.m_total(setup).norm(),
        a,
        omega_inf: s.omega - a,
        omega_par,
        omega_perp,
        omega_star,
        e,
        script_e,
        g,
        v_lyap: 2.0 * e + g,
        l2v,
        h1v: h1_seminorm(&s.v),
        e1,
        energy_residual: 0.0,
    }
}
