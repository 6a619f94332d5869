//! Physical setup: cavity geometry, inertia of the coupled system and the
//! eigenspace structure of the (diagonal) inertia tensor.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::scalar::{norm_sq3, rel_close, Scalar};

/// Default relative tolerance for detecting equal moments of inertia.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// Maximum allowed ratio between the largest and the smallest cell spacing.
pub const MAX_ASPECT: f64 = 4.0;

/// Rectangular cavity centred at the centre of mass, axis-aligned with the
/// central axes of inertia, discretised by `grid` cells per direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cavity {
    dims: [f64; 3],
    grid: [usize; 3],
}

impl Cavity {
    pub fn new(dims: [f64; 3], grid: [usize; 3]) -> Result<Self> {
        for (axis, &l) in dims.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidCavity(format!("length on axis {axis} must be positive and finite, got {l}")));
            }
        }
        for (axis, &n) in grid.iter().enumerate() {
            if n < 8 || n % 2 != 0 {
                return Err(Error::InvalidCavity(format!("cell count on axis {axis} must be even and >= 8, got {n}")));
            }
        }
        let h: Vec<f64> = (0..3).map(|i| dims[i] / grid[i] as f64).collect();
        let hmax = h.iter().cloned().fold(f64::MIN, f64::max);
        let hmin = h.iter().cloned().fold(f64::MAX, f64::min);
        if hmax / hmin > MAX_ASPECT {
            return Err(Error::InvalidCavity(format!(
                "cell aspect ratio {:.3} exceeds {MAX_ASPECT}",
                hmax / hmin
            )));
        }
        Ok(Self { dims, grid })
    }

    pub fn dims(&self) -> [f64; 3] {
        self.dims
    }

    pub fn grid(&self) -> [usize; 3] {
        self.grid
    }

    pub fn spacing(&self) -> [f64; 3] {
        [
            self.dims[0] / self.grid[0] as f64,
            self.dims[1] / self.grid[1] as f64,
            self.dims[2] / self.grid[2] as f64,
        ]
    }

    pub fn volume(&self) -> f64 {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    /// Same box, different resolution.
    pub fn with_grid(&self, grid: [usize; 3]) -> Result<Self> {
        Self::new(self.dims, grid)
    }
}

/// Principal moments of a unit-density liquid filling the box, about its centre.
pub fn liquid_inertia(cavity: &Cavity) -> [f64; 3] {
    let [lx, ly, lz] = cavity.dims;
    let mass = lx * ly * lz;
    [
        mass * (ly * ly + lz * lz) / 12.0,
        mass * (lx * lx + lz * lz) / 12.0,
        mass * (lx * lx + ly * ly) / 12.0,
    ]
}

/// An eigenspace S(lambda) of a diagonal inertia tensor: the coordinate axes
/// whose moment equals `lambda` within the degeneracy tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspace<T> {
    pub lambda: T,
    pub axes: Vec<usize>,
}

impl<T: Scalar> Eigenspace<T> {
    pub fn multiplicity(&self) -> usize {
        self.axes.len()
    }

    /// Orthonormal basis (coordinate unit vectors).
    pub fn basis(&self) -> Vec<[T; 3]> {
        self.axes
            .iter()
            .map(|&i| {
                let mut e = [T::zero(); 3];
                e[i] = T::one();
                e
            })
            .collect()
    }

    /// `true` when the components of `w` outside the eigenspace are negligible
    /// relative to `|w|` (squared comparison, so exact for rationals).
    pub fn contains(&self, w: [T; 3], tol: T) -> bool {
        let outside = (0..3)
            .filter(|i| !self.axes.contains(i))
            .fold(T::zero(), |acc, i| acc + w[i] * w[i]);
        outside <= tol * tol * norm_sq3(w)
    }
}

/// Partition the axes of `diag(a, b, c)` into eigenspaces. Neighbouring
/// moments are merged when they agree to the relative tolerance `tol`.
pub fn degeneracy_groups<T: Scalar>(moments: [T; 3], tol: T) -> Vec<Eigenspace<T>> {
    let mut groups: Vec<Eigenspace<T>> = Vec::with_capacity(3);
    for (i, &m) in moments.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if rel_close(moments[*g.axes.last().unwrap()], m, tol) => g.axes.push(i),
            _ => groups.push(Eigenspace { lambda: m, axes: vec![i] }),
        }
    }
    groups
}

/// The eigenspace of `diag(moments)` belonging to `lambda`.
pub fn eigenspace_of<T: Scalar>(lambda: T, moments: [T; 3], tol: T) -> Option<Eigenspace<T>> {
    degeneracy_groups(moments, tol)
        .into_iter()
        .find(|g| g.axes.iter().any(|&i| rel_close(moments[i], lambda, tol)))
}

/// The eigenspace that contains the direction `w`, if any.
pub fn eigenspace_containing<T: Scalar>(w: [T; 3], moments: [T; 3], tol: T) -> Option<Eigenspace<T>> {
    if norm_sq3(w) == T::zero() {
        return None;
    }
    degeneracy_groups(moments, tol).into_iter().find(|g| g.contains(w, tol))
}

/// Total inertia of the coupled system together with the liquid part.
#[derive(Debug, Clone, PartialEq)]
pub struct InertiaModel {
    moments: [f64; 3],
    liquid: [f64; 3],
    degeneracy_tol: f64,
    groups: Vec<Eigenspace<f64>>,
}

impl InertiaModel {
    pub fn new(moments: [f64; 3], cavity: &Cavity, degeneracy_tol: f64) -> Result<Self> {
        let [a, b, c] = moments;
        if !moments.iter().all(|m| m.is_finite() && *m > 0.0) {
            return Err(Error::InvalidParameter(format!("moments must be positive, got {moments:?}")));
        }
        if !(degeneracy_tol >= 0.0 && degeneracy_tol < 1.0) {
            return Err(Error::InvalidParameter(format!("degeneracy tolerance {degeneracy_tol} out of range")));
        }
        // A slightly out-of-order pair that is degenerate under the tolerance is accepted.
        let ordered = |x: f64, y: f64| x <= y || rel_close(x, y, degeneracy_tol);
        if !(ordered(a, b) && ordered(b, c)) {
            return Err(Error::OrderViolation { a, b, c });
        }
        let liquid = liquid_inertia(cavity);
        for axis in 0..3 {
            if moments[axis] - liquid[axis] <= 0.0 {
                return Err(Error::SolidInertiaNonpositive { axis, total: moments[axis], liquid: liquid[axis] });
            }
        }
        Ok(Self { moments, liquid, degeneracy_tol, groups: degeneracy_groups(moments, degeneracy_tol) })
    }

    pub fn moments(&self) -> [f64; 3] {
        self.moments
    }

    pub fn liquid_moments(&self) -> [f64; 3] {
        self.liquid
    }

    pub fn degeneracy_tol(&self) -> f64 {
        self.degeneracy_tol
    }

    pub fn groups(&self) -> &[Eigenspace<f64>] {
        &self.groups
    }

    pub fn eigenspace_of(&self, lambda: f64) -> Result<Eigenspace<f64>> {
        eigenspace_of(lambda, self.moments, self.degeneracy_tol).ok_or(Error::UnknownEigenvalue(lambda))
    }

    pub fn eigenspace_containing(&self, w: &Vector3<f64>) -> Option<Eigenspace<f64>> {
        eigenspace_containing([w.x, w.y, w.z], self.moments, self.degeneracy_tol)
    }

    /// `I . w`
    pub fn apply(&self, w: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(self.moments[0] * w.x, self.moments[1] * w.y, self.moments[2] * w.z)
    }

    /// `I^{-1} . w`
    pub fn solve(&self, w: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(w.x / self.moments[0], w.y / self.moments[1], w.z / self.moments[2])
    }
}

/// Validated physical setup shared by the simulator and the analysis tools.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSetup {
    pub cavity: Cavity,
    pub inertia: InertiaModel,
    pub nu: f64,
    pub omega0: Vector3<f64>,
    /// Eigenspace hosting `omega0`; `None` only for `omega0 = 0`.
    pub axis: Option<Eigenspace<f64>>,
}

impl SystemSetup {
    /// The moment lambda of the permanent rotation, if any.
    pub fn lambda(&self) -> Option<f64> {
        self.axis.as_ref().map(|s| s.lambda)
    }

    /// Split `w` into its component in S(lambda) and the orthogonal rest.
    /// Without a base rotation everything is treated as parallel.
    pub fn split(&self, w: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
        match &self.axis {
            Some(s) => {
                let mut par = Vector3::zeros();
                for &i in &s.axes {
                    par[i] = w[i];
                }
                (par, w - par)
            }
            None => (*w, Vector3::zeros()),
        }
    }
}

/// Raw values from which a [`SystemSetup`] is built.
#[derive(Debug, Clone, PartialEq)]
pub struct SetupParams {
    pub dims: [f64; 3],
    pub grid: [usize; 3],
    pub nu: f64,
    pub moments: [f64; 3],
    pub degeneracy_tol: f64,
    pub omega0: [f64; 3],
}

/// Validate raw parameters. A zero `omega0` is accepted (spectral sanity
/// mode); any other `omega0` must be a permanent-rotation axis.
pub fn build_system(p: &SetupParams) -> Result<SystemSetup> {
    let cavity = Cavity::new(p.dims, p.grid)?;
    if !(p.nu.is_finite() && p.nu > 0.0) {
        return Err(Error::InvalidParameter(format!("viscosity must be positive, got {}", p.nu)));
    }
    if !p.omega0.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidParameter("omega0 must be finite".into()));
    }
    let inertia = InertiaModel::new(p.moments, &cavity, p.degeneracy_tol)?;
    let omega0 = Vector3::from(p.omega0);
    let axis = if omega0.norm_squared() == 0.0 {
        None
    } else {
        Some(inertia.eigenspace_containing(&omega0).ok_or(Error::NotPermanentAxis(p.omega0))?)
    };
    Ok(SystemSetup { cavity, inertia, nu: p.nu, omega0, axis })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(moments: [f64; 3], omega0: [f64; 3]) -> SetupParams {
        SetupParams {
            dims: [0.5; 3],
            grid: [8; 3],
            nu: 0.1,
            moments,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
            omega0,
        }
    }

    /// Midpoint quadrature of the inertia integral; independent of the closed form.
    fn quadrature_inertia(dims: [f64; 3], n: usize) -> [f64; 3] {
        let h = [dims[0] / n as f64, dims[1] / n as f64, dims[2] / n as f64];
        let mut out = [0.0; 3];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = [
                        -dims[0] / 2.0 + (i as f64 + 0.5) * h[0],
                        -dims[1] / 2.0 + (j as f64 + 0.5) * h[1],
                        -dims[2] / 2.0 + (k as f64 + 0.5) * h[2],
                    ];
                    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                    for a in 0..3 {
                        out[a] += (r2 - x[a] * x[a]) * h[0] * h[1] * h[2];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn unit_cube_liquid_inertia() {
        let cav = Cavity::new([1.0; 3], [8; 3]).unwrap();
        let got = liquid_inertia(&cav);
        let quad = quadrature_inertia([1.0; 3], 64);
        for a in 0..3 {
            assert!((got[a] - 1.0 / 6.0).abs() < 1e-15);
            assert!((got[a] - quad[a]).abs() / got[a] < 2.0 * (1.0f64 / 64.0).powi(2));
        }
    }

    #[test]
    fn elongated_box_inertia() {
        let cav = Cavity::new([2.0, 1.0, 1.0], [16, 8, 8]).unwrap();
        let got = liquid_inertia(&cav);
        assert!((got[0] - 1.0 / 3.0).abs() < 1e-15);
        let quad = quadrature_inertia([2.0, 1.0, 1.0], 64);
        for a in 0..3 {
            assert!((got[a] - quad[a]).abs() / got[a] < 2.0 * (1.0f64 / 64.0).powi(2));
        }
    }

    #[test]
    fn inertia_scales_with_fifth_power() {
        let s: f64 = 1.7;
        let a = liquid_inertia(&Cavity::new([1.0, 0.8, 1.2], [8; 3]).unwrap());
        let b = liquid_inertia(&Cavity::new([s, 0.8 * s, 1.2 * s], [8; 3]).unwrap());
        for i in 0..3 {
            assert!((b[i] / a[i] - s.powi(5)).abs() < 1e-12);
        }
    }

    #[test]
    fn cavity_validation() {
        assert!(matches!(Cavity::new([1.0, 1.0, -1.0], [8; 3]), Err(Error::InvalidCavity(_))));
        assert!(matches!(Cavity::new([1.0; 3], [8, 9, 8]), Err(Error::InvalidCavity(_))));
        assert!(matches!(Cavity::new([1.0; 3], [6, 8, 8]), Err(Error::InvalidCavity(_))));
        assert!(matches!(Cavity::new([5.0, 1.0, 1.0], [8; 3]), Err(Error::InvalidCavity(_))));
        assert!(Cavity::new([4.0, 1.0, 1.0], [8; 3]).is_ok());
    }

    #[test]
    fn build_distinct_moments_about_e3() {
        let s = build_system(&params([1.0, 2.0, 3.0], [0.0, 0.0, 1.0])).unwrap();
        let ax = s.axis.unwrap();
        assert_eq!(ax.lambda, 3.0);
        assert_eq!(ax.multiplicity(), 1);
    }

    #[test]
    fn build_degenerate_plane() {
        let r = 1.0 / 2f64.sqrt();
        let s = build_system(&params([1.0, 1.0, 3.0], [r, r, 0.0])).unwrap();
        let ax = s.axis.unwrap();
        assert_eq!(ax.lambda, 1.0);
        assert_eq!(ax.multiplicity(), 2);
    }

    #[test]
    fn build_rejects_off_axis_rotation() {
        let r = 1.0 / 2f64.sqrt();
        assert!(matches!(
            build_system(&params([1.0, 2.0, 3.0], [r, r, 0.0])),
            Err(Error::NotPermanentAxis(_))
        ));
    }

    #[test]
    fn build_rejects_bad_order_and_light_solid() {
        assert!(matches!(
            build_system(&params([3.0, 2.0, 1.0], [0.0, 0.0, 1.0])),
            Err(Error::OrderViolation { .. })
        ));
        let mut p = params([1.0, 2.0, 3.0], [0.0, 0.0, 1.0]);
        p.dims = [1.5; 3]; // liquid moment 1.27 > A
        assert!(matches!(build_system(&p), Err(Error::SolidInertiaNonpositive { axis: 0, .. })));
    }

    #[test]
    fn zero_omega_is_sanity_mode() {
        let s = build_system(&params([2.0, 2.0, 2.0], [0.0; 3])).unwrap();
        assert!(s.axis.is_none());
    }

    #[test]
    fn eigenspaces_of_diagonal_tensors() {
        let tol = DEFAULT_DEGENERACY_TOL;
        let s = eigenspace_of(3.0, [1.0, 2.0, 3.0], tol).unwrap();
        assert_eq!(s.basis(), vec![[0.0, 0.0, 1.0]]);
        let s = eigenspace_of(1.0, [1.0, 1.0, 3.0], tol).unwrap();
        assert_eq!(s.basis(), vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
        let s = eigenspace_of(2.0, [2.0, 2.0, 2.0], tol).unwrap();
        assert_eq!(s.multiplicity(), 3);
        assert!(eigenspace_of(2.5, [1.0, 2.0, 3.0], tol).is_none());
    }

    #[test]
    fn multiplicities_sum_to_three() {
        for m in [[1.0, 2.0, 3.0], [1.0, 1.0, 3.0], [1.0, 3.0, 3.0], [2.0, 2.0, 2.0], [1.0, 1.0 + 1e-12, 2.0]] {
            let total: usize = degeneracy_groups(m, DEFAULT_DEGENERACY_TOL).iter().map(|g| g.multiplicity()).sum();
            assert_eq!(total, 3);
        }
        assert_eq!(degeneracy_groups([1.0, 1.0 + 1e-12, 2.0], DEFAULT_DEGENERACY_TOL).len(), 2);
    }

    #[test]
    fn inertia_apply_and_solve_are_inverse() {
        let cav = Cavity::new([0.5; 3], [8; 3]).unwrap();
        let m = InertiaModel::new([1.0, 2.0, 3.0], &cav, DEFAULT_DEGENERACY_TOL).unwrap();
        let w = Vector3::new(0.3, -1.2, 2.5);
        assert!((m.solve(&m.apply(&w)) - w).norm() < 1e-15);
    }
}
