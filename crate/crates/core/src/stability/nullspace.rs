use nalgebra::{DMatrix, Matrix3};

use crate::Vec3;

fn skew(w: &Vec3) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// Matrix of `w -> w0 x (I.w) + w x (I.w0)`.
pub fn steady_coupling_matrix(moments: [f64; 3], omega0: &Vec3) -> Matrix3<f64> {
    let inertia = Matrix3::from_diagonal(&Vec3::from(moments));
    skew(omega0) * inertia - skew(&(inertia * omega0))
}

/// Orthonormal basis of the null space of [`steady_coupling_matrix`],
/// from the right singular vectors with singular value below
/// `1e-10 * C * |w0|`.
pub fn steady_coupling_nullspace(moments: [f64; 3], omega0: &Vec3) -> Vec<Vec3> {
    let k = steady_coupling_matrix(moments, omega0);
    let scale = moments[2].max(moments[0]).max(moments[1]) * omega0.norm();
    let svd = k.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= 1e-10 * scale)
        .map(|(i, _)| vt.row(i).transpose().normalize())
        .collect()
}

/// Largest principal angle (radians) between the spans of two orthonormal
/// families of equal size.
pub fn principal_angle(a: &[Vec3], b: &[Vec3]) -> f64 {
    assert_eq!(a.len(), b.len(), "subspaces of different dimension");
    if a.is_empty() {
        return 0.0;
    }
    // sin of the largest angle = ||(I - P_a) B||_2; avoids acos near 1.
    let rest = DMatrix::from_fn(3, b.len(), |i, j| {
        let r = b[j] - a.iter().map(|q| q * q.dot(&b[j])).sum::<Vec3>();
        r[i]
    });
    let smax = rest.singular_values().iter().cloned().fold(0.0, f64::max);
    smax.min(1.0).asin()
}
