use std::sync::Arc;

use rustdct::{DctPlanner, Dst1, TransformType2And3};

use super::poisson::along_axis;
use super::{FaceField, Grid};

/// Exact inverse of `-laplacian` on the interior faces.
///
/// Each velocity component is separable: Dirichlet nodes along its own axis
/// (diagonalised by a DST-I on the `n - 1` interior faces) and odd
/// reflection across the tangential walls (diagonalised by a DST-II).
pub struct SinePreconditioner {
    grid: Grid,
    normal: [Arc<dyn Dst1<f64>>; 3],
    tangential: [Arc<dyn TransformType2And3<f64>>; 3],
}

impl std::fmt::Debug for SinePreconditioner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SinePreconditioner").field("grid", &self.grid).finish()
    }
}

fn symbol(k: usize, n: usize, h: f64) -> f64 {
    let s = (std::f64::consts::PI * k as f64 / (2.0 * n as f64)).sin();
    4.0 * s * s / (h * h)
}

impl SinePreconditioner {
    pub fn new(grid: Grid) -> Self {
        let mut planner = DctPlanner::new();
        let normal = [0, 1, 2].map(|d| planner.plan_dst1(grid.n[d] - 1));
        let tangential = [0, 1, 2].map(|d| planner.plan_dst2(grid.n[d]));
        Self { grid, normal, tangential }
    }

    /// Solve `-laplacian(u) = r`; wall-normal entries of `r` are ignored.
    pub fn apply(&self, r: &FaceField) -> FaceField {
        let g = self.grid;
        let mut out = r.clone();
        out.enforce_walls();
        for c in 0..3 {
            let dims = g.face_dims(c);
            let data = &mut out.comp[c];
            for axis in 0..3 {
                self.forward(data, dims, c, axis);
            }
            super::for_each_index(dims, |idx, p| {
                if p[c] == 0 || p[c] == g.n[c] {
                    return;
                }
                let mut lam = 0.0;
                for d in 0..3 {
                    // Normal direction: interior index f maps to DST-I mode f; tangential: DST-II mode j + 1.
                    let k = if d == c { p[d] } else { p[d] + 1 };
                    lam += symbol(k, g.n[d], g.h[d]);
                }
                data[idx] /= lam;
            });
            for axis in 0..3 {
                self.inverse(data, dims, c, axis);
            }
        }
        out
    }

    fn forward(&self, data: &mut [f64], dims: [usize; 3], c: usize, axis: usize) {
        if axis == c {
            let plan = &self.normal[axis];
            let mut scratch = vec![0.0; plan.get_scratch_len()];
            let n = self.grid.n[axis];
            along_axis(data, dims, axis, |line| plan.process_dst1_with_scratch(&mut line[1..n], &mut scratch));
        } else {
            let plan = &self.tangential[axis];
            let mut scratch = vec![0.0; plan.get_scratch_len()];
            along_axis(data, dims, axis, |line| plan.process_dst2_with_scratch(line, &mut scratch));
        }
    }

    fn inverse(&self, data: &mut [f64], dims: [usize; 3], c: usize, axis: usize) {
        let n = self.grid.n[axis];
        if axis == c {
            let plan = &self.normal[axis];
            let mut scratch = vec![0.0; plan.get_scratch_len()];
            let scale = 2.0 / n as f64;
            along_axis(data, dims, axis, |line| {
                plan.process_dst1_with_scratch(&mut line[1..n], &mut scratch);
                line[1..n].iter_mut().for_each(|x| *x *= scale);
            });
        } else {
            let plan = &self.tangential[axis];
            let mut scratch = vec![0.0; plan.get_scratch_len()];
            let scale = 2.0 / n as f64;
            along_axis(data, dims, axis, |line| {
                plan.process_dst3_with_scratch(line, &mut scratch);
                line.iter_mut().for_each(|x| *x *= scale);
            });
        }
    }
}
