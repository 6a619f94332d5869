use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ops::h1_seminorm;
use super::{for_each_index, index, FaceField, Grid, Projector};
use crate::error::{Error, Result};

const MODES: [usize; 2] = [1, 2];

/// Random vector potential component evaluated at `x`.
fn potential(g: &Grid, coef: &[f64; 8], x: [f64; 3]) -> f64 {
    let s = [0, 1, 2].map(|d| x[d] / g.len[d] + 0.5);
    let pi = std::f64::consts::PI;
    let envelope: f64 = s.iter().map(|&si| (pi * si).sin().powi(2)).product();
    let mut acc = 0.0;
    let mut m = 0;
    for &p in &MODES {
        for &q in &MODES {
            for &r in &MODES {
                acc += coef[m] * (p as f64 * pi * s[0]).sin() * (q as f64 * pi * s[1]).sin() * (r as f64 * pi * s[2]).sin();
                m += 1;
            }
        }
    }
    envelope * acc
}

/// Seeded solenoidal velocity with `h1_seminorm = amplitude`.
///
/// The field is the discrete curl of an edge-centred vector potential whose
/// components all carry the envelope `prod sin^2(pi s_i)`, `s_i = x_i / L_i + 1/2`,
/// so the potential and its gradient vanish on the walls.
pub fn synth_solenoidal_ic(grid: Grid, seed: u64, amplitude: f64) -> Result<FaceField> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidParameter(format!("amplitude must be >= 0, got {amplitude}")));
    }
    if amplitude == 0.0 {
        return Ok(FaceField::zeros(grid));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefs: [[f64; 8]; 3] = [0, 1, 2].map(|_| {
        let mut c = [0.0; 8];
        c.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
        c
    });

    // psi_c sits on edges parallel to axis c: cell-centred along c, on faces along the others.
    let edge_dims = |c: usize| {
        let mut d = grid.n;
        for (a, e) in d.iter_mut().enumerate() {
            if a != c {
                *e += 1;
            }
        }
        d
    };
    let psi: Vec<Vec<f64>> = (0..3)
        .map(|c| {
            let dims = edge_dims(c);
            let mut a = vec![0.0; dims[0] * dims[1] * dims[2]];
            for_each_index(dims, |idx, p| {
                let x = [0, 1, 2].map(|d| if d == c { grid.center(d, p[d]) } else { grid.face(d, p[d]) });
                a[idx] = potential(&grid, &coefs[c], x);
            });
            a
        })
        .collect();

    let mut v = FaceField::zeros(grid);
    for c in 0..3 {
        let d = (c + 1) % 3;
        let e = (c + 2) % 3;
        let (dd, de) = (edge_dims(d), edge_dims(e));
        let out = &mut v.comp[c];
        for_each_index(grid.face_dims(c), |idx, p| {
            let mut q = p;
            q[d] = p[d] + 1;
            let de_hi = psi[e][index(de, q)];
            let de_lo = psi[e][index(de, p)];
            let mut q = p;
            q[e] = p[e] + 1;
            let dd_hi = psi[d][index(dd, q)];
            let dd_lo = psi[d][index(dd, p)];
            out[idx] = (de_hi - de_lo) / grid.h[d] - (dd_hi - dd_lo) / grid.h[e];
        });
    }
    let mut v = Projector::new(grid).apply(&v)?;
    let h1 = h1_seminorm(&v);
    v.scale(amplitude / h1);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::divergence;
    use crate::setup::Cavity;

    fn grid() -> Grid {
        Grid::new(&Cavity::new([1.0, 1.2, 0.8], [8, 10, 8]).unwrap())
    }

    #[test]
    fn zero_amplitude_gives_zero_field() {
        assert_eq!(synth_solenoidal_ic(grid(), 3, 0.0).unwrap(), FaceField::zeros(grid()));
        assert!(synth_solenoidal_ic(grid(), 3, -1.0).is_err());
    }

    #[test]
    fn solenoidal_with_no_slip_walls() {
        for seed in 0..4 {
            let v = synth_solenoidal_ic(grid(), seed, 1.5).unwrap();
            let vmax = v.max_abs();
            assert!(v.wall_normal_max() <= 1e-12 * vmax);
            assert!(divergence(&v).max_abs() <= 1e-10);
            assert!((h1_seminorm(&v) - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = synth_solenoidal_ic(grid(), 42, 1.0).unwrap();
        let b = synth_solenoidal_ic(grid(), 42, 1.0).unwrap();
        let c = synth_solenoidal_ic(grid(), 43, 1.0).unwrap();
        assert!(a.comp.iter().zip(&b.comp).all(|(x, y)| x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits())));
        assert_ne!(a, c);
    }
}
