use super::{for_each_index, FaceField, Grid};
use crate::reduce;
use crate::Vec3;

/// Moment sums `sum w * x_d * v_c` over the `c`-faces, for each axis `d`.
/// Wall faces carry half weight: this is the midpoint rule applied to the
/// cell-centre average of the two faces bounding each cell.
fn moments(g: &Grid, v: &FaceField, c: usize) -> [f64; 3] {
    let dims = g.face_dims(c);
    let a = &v.comp[c];
    let mut out = [0.0; 3];
    let mut buf = vec![0.0; a.len()];
    for (d, o) in out.iter_mut().enumerate() {
        if d == c {
            continue;
        }
        let x: Vec<f64> = (0..dims[d]).map(|i| g.center(d, i)).collect();
        for_each_index(dims, |idx, p| {
            let w = if p[c] == 0 || p[c] == g.n[c] { 0.5 } else { 1.0 };
            buf[idx] = w * x[p[d]] * a[idx];
        });
        *o = reduce::sum(&buf);
    }
    out
}

/// `integral of x cross v` over the cavity.
///
/// For fields with zero wall-normal faces this equals `(<e_j x x, v>)_j`
/// with the rigid field sampled at face centres, so it is exactly adjoint to
/// [`super::rigid_field`].
pub fn angular_moment(v: &FaceField) -> Vec3 {
    let g = v.grid;
    let [su, sv, sw] = [0, 1, 2].map(|c| moments(&g, v, c));
    let dv = g.cell_volume();
    Vec3::new(sw[1] - sv[2], su[2] - sw[0], sv[0] - su[1]) * dv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::ops::{inner, rigid_field};
    use crate::setup::Cavity;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize, l: [f64; 3]) -> Grid {
        Grid::new(&Cavity::new(l, [n; 3]).unwrap())
    }

    #[test]
    fn zero_and_constant_fields_have_no_moment() {
        let g = grid(8, [1.0, 0.8, 1.2]);
        assert_eq!(angular_moment(&FaceField::zeros(g)), Vec3::zeros());
        let c = FaceField::sample(g, |_| [0.4, -1.0, 2.0]);
        assert!(angular_moment(&c).norm() < 1e-14);
    }

    #[test]
    fn rigid_rotation_on_unit_cube() {
        // integral of x cross (e3 cross x) = (integral |x|^2) e3 - integral x3 x = (0, 0, 1/4 - 1/12).
        for n in [8usize, 16, 32] {
            let g = grid(n, [1.0; 3]);
            let h = 1.0 / n as f64;
            let v = FaceField::sample(g, |x| [-x[1], x[0], 0.0]);
            let m = angular_moment(&v);
            let err = (m - Vec3::new(0.0, 0.0, 1.0 / 6.0)).norm();
            assert!(err <= 2.0 * h * h, "n={n} err={err}");
        }
    }

    #[test]
    fn adjoint_to_rigid_fields() {
        let g = grid(8, [1.0, 1.2, 0.9]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut v = FaceField::zeros(g);
        for a in &mut v.comp {
            a.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
        }
        v.enforce_walls();
        let m = angular_moment(&v);
        for j in 0..3 {
            let mut e = Vec3::zeros();
            e[j] = 1.0;
            let r = inner(&rigid_field(&e, g), &v);
            assert!((r - m[j]).abs() < 1e-13, "{r} vs {}", m[j]);
        }
    }

    #[test]
    fn linear_in_the_field() {
        let g = grid(8, [1.0; 3]);
        let a = FaceField::sample(g, |x| [x[1] * x[2], x[0], -x[1]]);
        let b = FaceField::sample(g, |x| [x[2], x[0] * x[0], x[1]]);
        let mut c = a.scaled(2.0);
        c.axpy(-3.0, &b);
        let lhs = angular_moment(&c);
        let rhs = angular_moment(&a) * 2.0 - angular_moment(&b) * 3.0;
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
