//! Bilinear forms of the linearized operator on a reduced basis.
//!
//! Coordinates are `(c_1..c_N, w_1, w_2, w_3)`: the fluid part is
//! `sum c_k phi_k` and the rigid part is `w`. The evolution is
//! `M du/dt + (A + B) u = 0`.

use nalgebra::DMatrix;

use super::stokes::ReducedBasis;
use crate::fields::{angular_moment, coriolis, inner, laplacian};
use crate::setup::SystemSetup;
use crate::Vec3;

#[derive(Debug, Clone)]
pub struct Pencil {
    pub mass: DMatrix<f64>,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub n_fluid: usize,
    /// Smallest Stokes eigenvalue of the basis.
    pub mu1: f64,
}

impl Pencil {
    pub fn dim(&self) -> usize {
        self.mass.nrows()
    }

    /// `A + B`.
    pub fn operator(&self) -> DMatrix<f64> {
        &self.a + &self.b
    }

    /// `||M - M^T|| / ||M||`.
    pub fn mass_asymmetry(&self) -> f64 {
        (&self.mass - self.mass.transpose()).norm() / self.mass.norm()
    }
}

/// Evaluate the forms on all basis pairs, with base rotation `omega0`
/// (zero is allowed and gives the non-rotating pencil).
pub fn assemble_pencil(basis: &ReducedBasis, setup: &SystemSetup, omega0: &Vec3) -> Pencil {
    let n = basis.len();
    let dim = n + 3;
    let moments = setup.inertia.moments();
    let nu = basis.nu;
    let j: Vec<Vec3> = basis.modes.iter().map(angular_moment).collect();
    let lap: Vec<_> = basis.modes.iter().map(laplacian).collect();
    let cor: Vec<_> = basis.modes.iter().map(|phi| coriolis(omega0, phi)).collect();

    let mut mass = DMatrix::zeros(dim, dim);
    let mut a = DMatrix::zeros(dim, dim);
    let mut b = DMatrix::zeros(dim, dim);
    for k in 0..n {
        for l in 0..n {
            mass[(k, l)] = inner(&basis.modes[k], &basis.modes[l]);
            a[(k, l)] = -nu * inner(&basis.modes[k], &lap[l]);
            b[(k, l)] = 2.0 * inner(&basis.modes[k], &cor[l]);
        }
    }
    // The viscous form is symmetric; remove roundoff asymmetry.
    let a_sym = (&a + a.transpose()) * 0.5;
    a.copy_from(&a_sym);

    for k in 0..n {
        for i in 0..3 {
            mass[(k, n + i)] = j[k][i];
            mass[(n + i, k)] = j[k][i];
        }
        let w = omega0.cross(&j[k]);
        for i in 0..3 {
            b[(n + i, k)] = w[i];
        }
    }
    let iw0 = Vec3::new(moments[0] * omega0.x, moments[1] * omega0.y, moments[2] * omega0.z);
    for jj in 0..3 {
        let mut e = Vec3::zeros();
        e[jj] = 1.0;
        let ie = e * moments[jj];
        let col = omega0.cross(&ie) + e.cross(&iw0) - e;
        for i in 0..3 {
            b[(n + i, n + jj)] = col[i];
        }
        mass[(n + jj, n + jj)] = moments[jj];
        a[(n + jj, n + jj)] = 1.0;
    }
    Pencil { mass, a, b, n_fluid: n, mu1: basis.mu.first().copied().unwrap_or(f64::NAN) }
}
