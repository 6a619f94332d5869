//! Discrete vector calculus on a staggered (MAC) grid.
//!
//! Cell `(i, j, k)` has centre `x = -L/2 + (i + 1/2) h`. The `c`-component of
//! a velocity lives on the faces normal to axis `c`: index `f` along `c`
//! runs over `0..=n_c` and the other two indices are cell indices. Faces
//! `f = 0` and `f = n_c` lie on the walls.

mod ops;
mod poisson;
mod quadrature;
mod sine;
mod synth;

pub use ops::{advect, coriolis, divergence, gradient, h1_seminorm, inner, l2_norm, laplacian, rigid_field};
pub use poisson::{project, Projector};
pub use quadrature::angular_moment;
pub use sine::SinePreconditioner;
pub use synth::synth_solenoidal_ic;

use crate::setup::Cavity;

/// Grid metadata shared by every field on a given cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n: [usize; 3],
    pub h: [f64; 3],
    pub len: [f64; 3],
}

impl Grid {
    pub fn new(cavity: &Cavity) -> Self {
        Self { n: cavity.grid(), h: cavity.spacing(), len: cavity.dims() }
    }

    /// Array extents of the `c`-component.
    pub fn face_dims(&self, c: usize) -> [usize; 3] {
        let mut d = self.n;
        d[c] += 1;
        d
    }

    pub fn face_len(&self, c: usize) -> usize {
        let d = self.face_dims(c);
        d[0] * d[1] * d[2]
    }

    pub fn cell_len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn cell_volume(&self) -> f64 {
        self.h[0] * self.h[1] * self.h[2]
    }

    pub fn min_spacing(&self) -> f64 {
        self.h[0].min(self.h[1]).min(self.h[2])
    }

    pub fn max_len(&self) -> f64 {
        self.len[0].max(self.len[1]).max(self.len[2])
    }

    /// Cell-centre coordinate along axis `d`.
    #[inline]
    pub fn center(&self, d: usize, i: usize) -> f64 {
        -0.5 * self.len[d] + (i as f64 + 0.5) * self.h[d]
    }

    /// Face coordinate along axis `d`.
    #[inline]
    pub fn face(&self, d: usize, f: usize) -> f64 {
        -0.5 * self.len[d] + f as f64 * self.h[d]
    }

    /// Position of the centre of `c`-face `p`.
    #[inline]
    pub fn face_position(&self, c: usize, p: [usize; 3]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for d in 0..3 {
            x[d] = if d == c { self.face(d, p[d]) } else { self.center(d, p[d]) };
        }
        x
    }
}

#[inline]
pub(crate) fn strides(dims: [usize; 3]) -> [usize; 3] {
    [1, dims[0], dims[0] * dims[1]]
}

#[inline]
pub(crate) fn index(dims: [usize; 3], p: [usize; 3]) -> usize {
    p[0] + dims[0] * (p[1] + dims[1] * p[2])
}

/// Visit every index of a box in storage order.
#[inline]
pub(crate) fn for_each_index(dims: [usize; 3], mut f: impl FnMut(usize, [usize; 3])) {
    let mut idx = 0;
    for k in 0..dims[2] {
        for j in 0..dims[1] {
            for i in 0..dims[0] {
                f(idx, [i, j, k]);
                idx += 1;
            }
        }
    }
}

/// Face-normal velocity components on the MAC grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceField {
    pub grid: Grid,
    pub comp: [Vec<f64>; 3],
}

impl FaceField {
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, comp: [0, 1, 2].map(|c| vec![0.0; grid.face_len(c)]) }
    }

    /// Sample `f(x)` at every face centre, walls included. The result only
    /// satisfies the no-penetration condition if `f` does.
    pub fn sample(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut out = Self::zeros(grid);
        for c in 0..3 {
            let dims = grid.face_dims(c);
            let a = &mut out.comp[c];
            for_each_index(dims, |idx, p| a[idx] = f(grid.face_position(c, p))[c]);
        }
        out
    }

    /// Zero all wall-normal faces.
    pub fn enforce_walls(&mut self) {
        for c in 0..3 {
            let dims = self.grid.face_dims(c);
            let n = self.grid.n[c];
            let a = &mut self.comp[c];
            for_each_index(dims, |idx, p| {
                if p[c] == 0 || p[c] == n {
                    a[idx] = 0.0;
                }
            });
        }
    }

    /// Largest absolute value on the wall-normal faces.
    pub fn wall_normal_max(&self) -> f64 {
        let mut m = 0.0f64;
        for c in 0..3 {
            let n = self.grid.n[c];
            for_each_index(self.grid.face_dims(c), |idx, p| {
                if p[c] == 0 || p[c] == n {
                    m = m.max(self.comp[c][idx].abs());
                }
            });
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.comp.iter().map(|a| crate::reduce::max_abs(a)).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.comp.iter().all(|a| a.iter().all(|x| x.is_finite()))
    }

    pub fn scale(&mut self, s: f64) {
        for a in &mut self.comp {
            a.iter_mut().for_each(|x| *x *= s);
        }
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &FaceField) {
        for c in 0..3 {
            for (x, y) in self.comp[c].iter_mut().zip(&other.comp[c]) {
                *x += s * y;
            }
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale(s);
        out
    }

    pub fn len(&self) -> usize {
        self.comp.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Copy all components into one flat vector (x, then y, then z).
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for a in &self.comp {
            out.extend_from_slice(a);
        }
        out
    }

    pub fn from_flat(grid: Grid, flat: &[f64]) -> Self {
        let mut out = Self::zeros(grid);
        let mut off = 0;
        for c in 0..3 {
            let n = out.comp[c].len();
            out.comp[c].copy_from_slice(&flat[off..off + n]);
            off += n;
        }
        assert_eq!(off, flat.len(), "flat length does not match grid");
        out
    }
}

/// Scalar values at cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct CellScalar {
    pub grid: Grid,
    pub data: Vec<f64>,
}

impl CellScalar {
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, data: vec![0.0; grid.cell_len()] }
    }

    pub fn sample(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let mut out = Self::zeros(grid);
        for_each_index(grid.n, |idx, p| {
            out.data[idx] = f([grid.center(0, p[0]), grid.center(1, p[1]), grid.center(2, p[2])]);
        });
        out
    }

    pub fn mean(&self) -> f64 {
        crate::reduce::sum(&self.data) / self.data.len() as f64
    }

    pub fn remove_mean(&mut self) {
        let m = self.mean();
        self.data.iter_mut().for_each(|x| *x -= m);
    }

    pub fn max_abs(&self) -> f64 {
        crate::reduce::max_abs(&self.data)
    }
}
