use super::{for_each_index, index, strides, CellScalar, FaceField, Grid};
use crate::reduce;
use crate::Vec3;

fn face_geometry(g: &Grid) -> ([[usize; 3]; 3], [[usize; 3]; 3]) {
    let dims = [0, 1, 2].map(|c| g.face_dims(c));
    (dims, dims.map(strides))
}

/// Second-order MAC divergence.
pub fn divergence(v: &FaceField) -> CellScalar {
    let g = v.grid;
    let (dims, st) = face_geometry(&g);
    let inv_h = g.h.map(|h| 1.0 / h);
    let mut out = CellScalar::zeros(g);
    for_each_index(g.n, |idx, p| {
        let mut s = 0.0;
        for c in 0..3 {
            let f = index(dims[c], p);
            s += (v.comp[c][f + st[c][c]] - v.comp[c][f]) * inv_h[c];
        }
        out.data[idx] = s;
    });
    out
}

/// Face gradient of a cell scalar; wall-normal faces are zero, so this is
/// exactly the negative adjoint of [`divergence`].
pub fn gradient(p: &CellScalar) -> FaceField {
    let g = p.grid;
    let cst = strides(g.n);
    let mut out = FaceField::zeros(g);
    for c in 0..3 {
        let inv_h = 1.0 / g.h[c];
        let a = &mut out.comp[c];
        for_each_index(g.face_dims(c), |idx, q| {
            if q[c] == 0 || q[c] == g.n[c] {
                return;
            }
            let cell = index(g.n, q);
            a[idx] = (p.data[cell] - p.data[cell - cst[c]]) * inv_h;
        });
    }
    out
}

/// Vector Laplacian with no-slip walls: wall-normal faces are Dirichlet
/// nodes, tangential neighbours across a wall are reflected with a sign flip.
pub fn laplacian(v: &FaceField) -> FaceField {
    let g = v.grid;
    let (dims, st) = face_geometry(&g);
    let inv_h2 = g.h.map(|h| 1.0 / (h * h));
    let mut out = FaceField::zeros(g);
    for c in 0..3 {
        let f = &v.comp[c];
        let a = &mut out.comp[c];
        let s = st[c];
        for_each_index(dims[c], |idx, p| {
            if p[c] == 0 || p[c] == g.n[c] {
                return;
            }
            let x = f[idx];
            let mut acc = 0.0;
            for d in 0..3 {
                let (lo, hi) = if d == c {
                    (f[idx - s[d]], f[idx + s[d]])
                } else {
                    let lo = if p[d] == 0 { -x } else { f[idx - s[d]] };
                    let hi = if p[d] + 1 == g.n[d] { -x } else { f[idx + s[d]] };
                    (lo, hi)
                };
                acc += (hi - 2.0 * x + lo) * inv_h2[d];
            }
            a[idx] = acc;
        });
    }
    out
}

/// `<a, b>`: face sum weighted by the cell volume.
pub fn inner(a: &FaceField, b: &FaceField) -> f64 {
    let parts = [0, 1, 2].map(|c| reduce::dot(&a.comp[c], &b.comp[c]));
    a.grid.cell_volume() * (parts[0] + parts[1] + parts[2])
}

pub fn l2_norm(v: &FaceField) -> f64 {
    inner(v, v).sqrt()
}

/// `||grad v||`, assembled from stencil differences so that
/// `h1_seminorm(v)^2 == -<v, laplacian(v)>` for fields with zero wall-normal faces.
pub fn h1_seminorm(v: &FaceField) -> f64 {
    let g = v.grid;
    let (dims, st) = face_geometry(&g);
    let inv_h2 = g.h.map(|h| 1.0 / (h * h));
    let mut total = 0.0;
    for c in 0..3 {
        let f = &v.comp[c];
        let s = st[c];
        let mut buf = vec![0.0; f.len()];
        for_each_index(dims[c], |idx, p| {
            let x = f[idx];
            let mut acc = 0.0;
            if p[c] < g.n[c] {
                let d = f[idx + s[c]] - x;
                acc += d * d * inv_h2[c];
            }
            if p[c] == 0 || p[c] == g.n[c] {
                buf[idx] = acc;
                return;
            }
            for d in 0..3 {
                if d == c {
                    continue;
                }
                if p[d] + 1 < g.n[d] {
                    let diff = f[idx + s[d]] - x;
                    acc += diff * diff * inv_h2[d];
                }
                if p[d] == 0 {
                    acc += 2.0 * x * x * inv_h2[d];
                }
                if p[d] + 1 == g.n[d] {
                    acc += 2.0 * x * x * inv_h2[d];
                }
            }
            buf[idx] = acc;
        });
        total += reduce::sum(&buf);
    }
    (total * g.cell_volume()).sqrt()
}

/// `(v . grad) v` in conservative form with centred averages. For a discretely
/// solenoidal field with zero wall-normal faces, `<v, advect(v)> = 0` up to roundoff.
pub fn advect(v: &FaceField) -> FaceField {
    let g = v.grid;
    let (dims, st) = face_geometry(&g);
    let mut out = FaceField::zeros(g);
    for c in 0..3 {
        let fc = &v.comp[c];
        let a = &mut out.comp[c];
        let sc = st[c];
        for_each_index(dims[c], |idx, p| {
            if p[c] == 0 || p[c] == g.n[c] {
                return;
            }
            let lo = fc[idx - sc[c]];
            let mid = fc[idx];
            let hi = fc[idx + sc[c]];
            let mut acc = ((mid + hi) * (mid + hi) - (lo + mid) * (lo + mid)) / (4.0 * g.h[c]);
            for d in 0..3 {
                if d == c {
                    continue;
                }
                let fd = &v.comp[d];
                let sd = st[d];
                // Flux through the edge at d-face position `e`, centred on this c-face.
                let bd = p[0] * sd[0] + p[1] * sd[1] + p[2] * sd[2];
                let lower = if p[d] == 0 {
                    0.0
                } else {
                    0.25 * (fd[bd - sd[c]] + fd[bd]) * (fc[idx - sc[d]] + mid)
                };
                let upper = if p[d] + 1 == g.n[d] {
                    0.0
                } else {
                    let r = bd + sd[d];
                    0.25 * (fd[r - sd[c]] + fd[r]) * (mid + fc[idx + sc[d]])
                };
                acc += (upper - lower) / g.h[d];
            }
            a[idx] = acc;
        });
    }
    out
}

/// `w x v` at the faces, the transverse components averaged from their four
/// neighbouring faces. The averaging pairs are symmetric, so `<v, w x v> = 0`.
pub fn coriolis(w: &Vec3, v: &FaceField) -> FaceField {
    let g = v.grid;
    let (dims, st) = face_geometry(&g);
    let mut out = FaceField::zeros(g);
    for c in 0..3 {
        let d = (c + 1) % 3;
        let e = (c + 2) % 3;
        let (wd, we) = (w[d], w[e]);
        let a = &mut out.comp[c];
        for_each_index(dims[c], |idx, p| {
            if p[c] == 0 || p[c] == g.n[c] {
                return;
            }
            // Average of component `t` onto this c-face.
            let avg = |t: usize| -> f64 {
                let ft = &v.comp[t];
                let s = st[t];
                let base = p[0] * s[0] + p[1] * s[1] + p[2] * s[2] - s[c];
                0.25 * (ft[base] + ft[base + s[c]] + ft[base + s[t]] + ft[base + s[c] + s[t]])
            };
            a[idx] = wd * avg(e) - we * avg(d);
        });
    }
    out
}

/// Rigid velocity `w x x` sampled at face centres, wall-normal faces zeroed.
pub fn rigid_field(w: &Vec3, g: Grid) -> FaceField {
    let mut out = FaceField::sample(g, |x| {
        [w[1] * x[2] - w[2] * x[1], w[2] * x[0] - w[0] * x[2], w[0] * x[1] - w[1] * x[0]]
    });
    out.enforce_walls();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::project;
    use crate::setup::Cavity;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid(n: usize, l: [f64; 3]) -> Grid {
        Grid::new(&Cavity::new(l, [n; 3]).unwrap())
    }

    fn random_field(g: Grid, seed: u64) -> FaceField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = FaceField::zeros(g);
        for a in &mut v.comp {
            a.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
        }
        v.enforce_walls();
        v
    }

    fn random_cells(g: Grid, seed: u64) -> CellScalar {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = CellScalar::zeros(g);
        p.data.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
        p
    }

    fn cell_inner(a: &CellScalar, b: &CellScalar) -> f64 {
        a.grid.cell_volume() * reduce::dot(&a.data, &b.data)
    }

    /// Max error over interior faces at least `margin` faces from every wall.
    fn interior_error(g: Grid, a: &FaceField, exact: &FaceField, margin: usize) -> f64 {
        let mut m = 0.0f64;
        for c in 0..3 {
            for_each_index(g.face_dims(c), |idx, p| {
                let inside = (0..3).all(|d| {
                    let top = if d == c { g.n[d] } else { g.n[d] - 1 };
                    p[d] >= margin && p[d] + margin <= top
                });
                if inside {
                    m = m.max((a.comp[c][idx] - exact.comp[c][idx]).abs());
                }
            });
        }
        m
    }

    #[test]
    fn divergence_of_linear_field() {
        let g = grid(8, [1.0; 3]);
        let mut v = FaceField::sample(g, |x| [x[0], 0.0, 0.0]);
        assert!(divergence(&FaceField::zeros(g)).max_abs() == 0.0);
        let d = divergence(&v);
        assert!(d.data.iter().all(|x| (x - 1.0).abs() < 1e-12));
        v.enforce_walls();
        // Interior cells away from the x-walls keep the exact value.
        for_each_index(g.n, |idx, p| {
            if p[0] > 0 && p[0] < g.n[0] - 1 {
                assert!((divergence(&v).data[idx] - 1.0).abs() < 1e-12);
            }
        });
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let g = grid(8, [1.0, 0.8, 1.2]);
        let mut p = CellScalar::zeros(g);
        p.data.iter_mut().for_each(|x| *x = 3.7);
        assert_eq!(gradient(&p).max_abs(), 0.0);
    }

    #[test]
    fn gradient_is_negative_adjoint_of_divergence() {
        let g = grid(10, [1.0, 0.9, 1.3]);
        for seed in 0..3 {
            let v = random_field(g, seed);
            let p = random_cells(g, 100 + seed);
            let lhs = inner(&gradient(&p), &v);
            let rhs = -cell_inner(&p, &divergence(&v));
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()));
        }
    }

    #[test]
    fn laplacian_manufactured_solution() {
        // u = sin(2 pi s_x) sin(pi s_y) sin(pi s_z) with s = x/L + 1/2 vanishes on every wall
        // together with its second normal derivative, so reflection stays second order.
        let errors: Vec<f64> = [16usize, 32]
            .iter()
            .map(|&n| {
                let g = grid(n, [1.0; 3]);
                let s = |x: f64| x + 0.5;
                let f = |x: [f64; 3]| (2.0 * PI * s(x[0])).sin() * (PI * s(x[1])).sin() * (PI * s(x[2])).sin();
                let v = FaceField::sample(g, |x| [f(x), 0.0, 0.0]);
                let exact = FaceField::sample(g, |x| [-6.0 * PI * PI * f(x), 0.0, 0.0]);
                interior_error(g, &laplacian(&v), &exact, 1) / (6.0 * PI * PI)
            })
            .collect();
        assert!(errors[0] < 0.01, "{errors:?}");
        assert!(errors[0] / errors[1] > 3.5, "{errors:?}");
    }

    #[test]
    fn laplacian_is_symmetric_negative_and_matches_h1() {
        let g = grid(8, [1.0, 1.1, 0.9]);
        let a = random_field(g, 1);
        let b = random_field(g, 2);
        let ab = inner(&a, &laplacian(&b));
        let ba = inner(&b, &laplacian(&a));
        assert!((ab - ba).abs() < 1e-12 * ab.abs());
        let h1 = h1_seminorm(&a);
        let q = -inner(&a, &laplacian(&a));
        assert!(q > 0.0);
        assert!((h1 * h1 - q).abs() < 1e-12 * q);
    }

    #[test]
    fn norms_of_zero_and_scaling() {
        let g = grid(8, [1.0; 3]);
        let z = FaceField::zeros(g);
        assert_eq!(l2_norm(&z), 0.0);
        assert_eq!(h1_seminorm(&z), 0.0);
        let v = random_field(g, 5);
        let s = -2.5;
        let w = v.scaled(s);
        assert!((l2_norm(&w) - s.abs() * l2_norm(&v)).abs() < 1e-12 * l2_norm(&w));
        assert!((h1_seminorm(&w) - s.abs() * h1_seminorm(&v)).abs() < 1e-12 * h1_seminorm(&w));
    }

    #[test]
    fn norms_manufactured_solution() {
        // u = sin(pi s_x) sin(pi s_y) sin(pi s_z) e_x on the unit cube:
        // ||u||^2 = 1/8, ||grad u||^2 = 3 pi^2 / 8.
        let mut errs = vec![];
        for n in [16usize, 32] {
            let g = grid(n, [1.0; 3]);
            let f = |x: [f64; 3]| ((x[0] + 0.5) * PI).sin() * ((x[1] + 0.5) * PI).sin() * ((x[2] + 0.5) * PI).sin();
            let v = FaceField::sample(g, |x| [f(x), 0.0, 0.0]);
            let e2 = (l2_norm(&v).powi(2) - 0.125).abs() / 0.125;
            let e1 = (h1_seminorm(&v).powi(2) - 3.0 * PI * PI / 8.0).abs() / (3.0 * PI * PI / 8.0);
            errs.push((e2, e1));
        }
        // The midpoint rule integrates sin^2 exactly, so only the gradient shows an O(h^2) error.
        assert!(errs[0].0 < 1e-12 && errs[1].0 < 1e-12, "{errs:?}");
        assert!(errs[0].1 < 0.02, "{errs:?}");
        assert!(errs[0].1 / errs[1].1 > 3.5, "{errs:?}");
    }

    #[test]
    fn advection_of_zero_and_constant() {
        let g = grid(8, [1.0; 3]);
        assert_eq!(advect(&FaceField::zeros(g)).max_abs(), 0.0);
        let v = FaceField::sample(g, |_| [0.3, -0.2, 0.5]);
        let a = advect(&v);
        // Constant field: only faces next to walls see the zero wall fluxes.
        assert!(interior_error(g, &a, &FaceField::zeros(g), 2) < 1e-14);
    }

    #[test]
    fn advection_manufactured_solution() {
        // v = (sin y, sin z, sin x): div-free, (v.grad)v = (sin z cos y, sin x cos z, sin y cos x).
        let errs: Vec<f64> = [32usize, 64]
            .iter()
            .map(|&n| {
                let g = grid(n, [1.0; 3]);
                let v = FaceField::sample(g, |x| [x[1].sin(), x[2].sin(), x[0].sin()]);
                let exact = FaceField::sample(g, |x| {
                    [x[2].sin() * x[1].cos(), x[0].sin() * x[2].cos(), x[1].sin() * x[0].cos()]
                });
                interior_error(g, &advect(&v), &exact, 2)
            })
            .collect();
        assert!(errs[0] < 1e-3, "{errs:?}");
        assert!(errs[0] / errs[1] > 3.5, "{errs:?}");
    }

    #[test]
    fn advection_conserves_energy_for_solenoidal_fields() {
        let g = grid(10, [1.0, 1.2, 0.8]);
        let (v, _) = project(&random_field(g, 9)).unwrap();
        let e = inner(&v, &advect(&v));
        let scale = l2_norm(&v) * l2_norm(&advect(&v));
        assert!(e.abs() < 1e-12 * scale, "{e} vs {scale}");
    }

    #[test]
    fn coriolis_is_skew() {
        let g = grid(8, [1.0, 1.3, 0.9]);
        let v = random_field(g, 3);
        let u = random_field(g, 4);
        let w = Vec3::new(0.3, -1.1, 0.7);
        assert!(inner(&v, &coriolis(&w, &v)).abs() < 1e-13 * l2_norm(&v).powi(2));
        let a = inner(&u, &coriolis(&w, &v));
        let b = inner(&v, &coriolis(&w, &u));
        assert!((a + b).abs() < 1e-13 * a.abs().max(1.0));
    }

    #[test]
    fn coriolis_of_uniform_flow() {
        let g = grid(8, [1.0; 3]);
        let v = FaceField::sample(g, |_| [1.0, 0.0, 0.0]);
        let w = Vec3::new(0.0, 0.0, 2.0);
        let c = coriolis(&w, &v);
        let exact = FaceField::sample(g, |_| [0.0, 2.0, 0.0]);
        assert!(interior_error(g, &c, &exact, 1) < 1e-14);
    }
}
