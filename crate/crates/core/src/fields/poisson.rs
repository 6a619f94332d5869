use std::sync::Arc;

use rustdct::{DctPlanner, TransformType2And3};

use super::ops::{divergence, gradient};
use super::{CellScalar, FaceField, Grid};
use crate::error::{Error, Result};

/// Relative divergence tolerance of a projected field, measured against `|V|_inf / h_min`.
pub const PROJECTION_TOL: f64 = 1e-10;

/// Apply `f` to every line of `data` along `axis`.
pub(crate) fn along_axis(data: &mut [f64], dims: [usize; 3], axis: usize, mut f: impl FnMut(&mut [f64])) {
    let n = dims[axis];
    if axis == 0 {
        data.chunks_exact_mut(n).for_each(f);
        return;
    }
    let stride = if axis == 1 { dims[0] } else { dims[0] * dims[1] };
    let (outer, inner) = if axis == 1 { (dims[2], dims[0]) } else { (1, dims[0] * dims[1]) };
    let block = stride * n;
    let mut line = vec![0.0; n];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * block + i;
            for (m, x) in line.iter_mut().enumerate() {
                *x = data[base + m * stride];
            }
            f(&mut line);
            for (m, x) in line.iter().enumerate() {
                data[base + m * stride] = *x;
            }
        }
    }
}

/// Fast solver for the pressure Poisson problem with homogeneous Neumann
/// walls, and the Helmholtz projection built on it.
///
/// The cell-centred operator `div(grad(.))` is diagonalised by a DCT-II in each
/// direction with symbols `-(4/h^2) sin^2(pi k / 2n)`.
#[derive(Clone)]
pub struct Projector {
    grid: Grid,
    plans: [Arc<dyn TransformType2And3<f64>>; 3],
    symbols: [Vec<f64>; 3],
}

impl std::fmt::Debug for Projector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Projector").field("grid", &self.grid).finish()
    }
}

impl Projector {
    pub fn new(grid: Grid) -> Self {
        let mut planner = DctPlanner::new();
        let plans = [0, 1, 2].map(|d| planner.plan_dct2(grid.n[d]));
        let symbols = [0, 1, 2].map(|d| {
            let n = grid.n[d];
            let h = grid.h[d];
            (0..n)
                .map(|k| {
                    let s = (std::f64::consts::PI * k as f64 / (2.0 * n as f64)).sin();
                    -4.0 * s * s / (h * h)
                })
                .collect()
        });
        Self { grid, plans, symbols }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn transform(&self, data: &mut [f64], inverse: bool) {
        let n = self.grid.n;
        for axis in 0..3 {
            let plan = &self.plans[axis];
            let mut scratch = vec![0.0; plan.get_scratch_len()];
            let scale = 2.0 / n[axis] as f64;
            along_axis(data, n, axis, |line| {
                if inverse {
                    plan.process_dct3_with_scratch(line, &mut scratch);
                    line.iter_mut().for_each(|x| *x *= scale);
                } else {
                    plan.process_dct2_with_scratch(line, &mut scratch);
                }
            });
        }
    }

    /// Mean-zero solution of `div(grad(phi)) = rhs - mean(rhs)`.
    pub fn solve(&self, rhs: &CellScalar) -> CellScalar {
        let mut data = rhs.data.clone();
        self.transform(&mut data, false);
        let [nx, ny, _] = self.grid.n;
        let [sx, sy, sz] = &self.symbols;
        super::for_each_index(self.grid.n, |idx, p| {
            let lam = sx[p[0]] + sy[p[1]] + sz[p[2]];
            data[idx] = if idx == 0 { 0.0 } else { data[idx] / lam };
        });
        debug_assert_eq!(nx * ny * sz.len(), data.len());
        self.transform(&mut data, true);
        CellScalar { grid: self.grid, data }
    }

    /// Split `v` (after zeroing its wall-normal faces) into a discretely
    /// solenoidal part and a gradient: returns `(v - grad(phi), phi)`.
    pub fn project(&self, v: &FaceField) -> Result<(FaceField, CellScalar)> {
        let mut sol = v.clone();
        sol.enforce_walls();
        let scale = sol.max_abs() / self.grid.min_spacing();
        let mut phi = CellScalar::zeros(self.grid);
        for _ in 0..2 {
            let div = divergence(&sol);
            let residual = div.max_abs();
            if residual <= PROJECTION_TOL * scale || scale == 0.0 {
                return Ok((sol, phi));
            }
            let corr = self.solve(&div);
            sol.axpy(-1.0, &gradient(&corr));
            phi.data.iter_mut().zip(&corr.data).for_each(|(a, b)| *a += b);
        }
        let residual = divergence(&sol).max_abs();
        if residual <= PROJECTION_TOL * scale {
            Ok((sol, phi))
        } else {
            Err(Error::SolverFailure { residual: residual / scale })
        }
    }

    /// Projection without the potential.
    pub fn apply(&self, v: &FaceField) -> Result<FaceField> {
        self.project(v).map(|(s, _)| s)
    }
}

/// One-off Helmholtz projection; repeated callers should keep a [`Projector`].
pub fn project(v: &FaceField) -> Result<(FaceField, CellScalar)> {
    Projector::new(v.grid).project(v)
}
