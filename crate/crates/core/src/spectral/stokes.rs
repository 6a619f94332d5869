//! Lowest discrete Stokes modes by preconditioned LOBPCG.
//!
//! The operator is `P (-laplacian) P` on flattened face vectors; it is
//! symmetric for the Euclidean product, which differs from the field inner
//! product only by the cell volume. The preconditioner is the exact inverse
//! of the vector Laplacian (fast sine transforms) followed by projection.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{inner, l2_norm, laplacian, rigid_field, FaceField, Grid, Projector, SinePreconditioner};
use crate::Vec3;

/// L2-orthonormal solenoidal fields: `N` Stokes modes with eigenvalues
/// `mu_k` (viscosity included), optionally followed by enrichment fields.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    pub grid: Grid,
    pub nu: f64,
    pub modes: Vec<FaceField>,
    pub mu: Vec<f64>,
    /// Relative eigen-residuals `||S phi - mu phi|| / mu`.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    /// Number of trailing modes that are not Stokes eigenmodes.
    pub enrichment: usize,
}

impl ReducedBasis {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Number of Stokes eigenmodes.
    pub fn stokes_len(&self) -> usize {
        self.mu.len()
    }

    /// The first `n` Stokes modes, keeping any enrichment.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.stokes_len());
        let mut out = Self {
            grid: self.grid,
            nu: self.nu,
            modes: self.modes[..n].to_vec(),
            mu: self.mu[..n].to_vec(),
            residuals: self.residuals[..n].to_vec(),
            iterations: self.iterations,
            enrichment: 0,
        };
        // The enrichment is re-orthogonalized against the shorter Stokes block.
        for f in &self.modes[self.stokes_len()..] {
            out.push_orthogonal(f.clone());
        }
        out
    }

    /// Append the projected rigid-rotation fields `P(e_j x x)` and their
    /// viscous images `P(laplacian P(e_j x x))`.
    ///
    /// Stokes modes vanish on the walls, so they represent the near-rigid
    /// interior motion of the slow coupled modes poorly; these six fields fix that.
    pub fn enriched(&self) -> Result<Self> {
        let projector = Projector::new(self.grid);
        let mut out = self.clone();
        let mut rigid = Vec::with_capacity(3);
        for j in 0..3 {
            let mut e = Vec3::zeros();
            e[j] = 1.0;
            rigid.push(projector.apply(&rigid_field(&e, self.grid))?);
        }
        let mut images = Vec::with_capacity(3);
        for r in &rigid {
            images.push(projector.apply(&laplacian(r))?);
        }
        for f in rigid.into_iter().chain(images) {
            out.push_orthogonal(f);
        }
        Ok(out)
    }

    fn push_orthogonal(&mut self, mut f: FaceField) {
        let start = l2_norm(&f);
        for _ in 0..2 {
            for m in &self.modes {
                let c = inner(m, &f);
                f.axpy(-c, m);
            }
        }
        let norm = l2_norm(&f);
        if norm > 1e-8 * start {
            f.scale(1.0 / norm);
            self.modes.push(f);
            self.enrichment += 1;
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StokesOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for StokesOptions {
    fn default() -> Self {
        Self { max_iter: 300, tol: 1e-6, seed: 0x5eed }
    }
}

/// Largest basis handled by default.
pub const MAX_MODES: usize = 64;

struct Ops {
    grid: Grid,
    projector: Projector,
    precond: SinePreconditioner,
}

impl Ops {
    fn stokes(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.map_columns(x, |f| {
            let mut l = laplacian(f);
            l.scale(-1.0);
            self.projector.apply(&l)
        })
    }

    fn precondition(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.map_columns(x, |f| self.projector.apply(&self.precond.apply(f)))
    }

    fn project(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.map_columns(x, |f| self.projector.apply(f))
    }

    fn map_columns(&self, x: &DMatrix<f64>, f: impl Fn(&FaceField) -> Result<FaceField>) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(x.nrows(), x.ncols());
        for j in 0..x.ncols() {
            let field = FaceField::from_flat(self.grid, x.column(j).as_slice());
            out.set_column(j, &DVector::from_vec(f(&field)?.to_flat()));
        }
        Ok(out)
    }
}

/// Transform `T` such that `S T` has orthonormal columns, dropping
/// directions that are numerically dependent. Two passes of SVQB.
fn orthonormalizer(s: &DMatrix<f64>) -> DMatrix<f64> {
    let t1 = svqb(s);
    let s1 = s * &t1;
    let t2 = svqb(&s1);
    t1 * t2
}

fn svqb(s: &DMatrix<f64>) -> DMatrix<f64> {
    let g = s.tr_mul(s);
    let k = g.nrows();
    let d: Vec<f64> = (0..k).map(|i| if g[(i, i)] > 0.0 { 1.0 / g[(i, i)].sqrt() } else { 0.0 }).collect();
    let scaled = DMatrix::from_fn(k, k, |i, j| d[i] * g[(i, j)] * d[j]);
    let eig = SymmetricEigen::new(scaled);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..k).filter(|&i| eig.eigenvalues[i] > 1e-13 * top).collect();
    DMatrix::from_fn(k, keep.len(), |i, j| d[i] * eig.eigenvectors[(i, keep[j])] / eig.eigenvalues[keep[j]].sqrt())
}

/// Rayleigh-Ritz on an orthonormal basis `s` with images `as_`: the `m`
/// lowest Ritz values and their coefficient vectors.
fn rayleigh_ritz(s: &DMatrix<f64>, as_: &DMatrix<f64>, m: usize) -> (Vec<f64>, DMatrix<f64>) {
    let h = s.tr_mul(as_);
    let h = (&h + h.transpose()) * 0.5;
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let m = m.min(order.len());
    let vals = order[..m].iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(eig.eigenvectors.nrows(), m, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

fn hcat(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let rows = blocks[0].nrows();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        out.columns_mut(off, b.ncols()).copy_from(b);
        off += b.ncols();
    }
    out
}

/// Remove the `x`-components of `w` (x orthonormal), twice for stability.
fn deflate(w: &mut DMatrix<f64>, x: &DMatrix<f64>) {
    for _ in 0..2 {
        let c = x.tr_mul(w);
        *w -= x * c;
    }
}

pub fn stokes_modes(grid: Grid, nu: f64, n: usize) -> Result<ReducedBasis> {
    stokes_modes_with(grid, nu, n, StokesOptions::default())
}

pub fn stokes_modes_with(grid: Grid, nu: f64, n: usize, opts: StokesOptions) -> Result<ReducedBasis> {
    if n == 0 || !(nu > 0.0) {
        return Err(Error::InvalidParameter(format!("need n > 0 and nu > 0, got n={n}, nu={nu}")));
    }
    let ops = Ops { grid, projector: Projector::new(grid), precond: SinePreconditioner::new(grid) };
    let dof = FaceField::zeros(grid).len();
    let m = n + (n / 4).max(8);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let x0 = DMatrix::from_fn(dof, m, |_, _| rng.gen_range(-1.0..1.0));
    // Smooth the random start with one preconditioner pass.
    let x0 = ops.precondition(&ops.project(&x0)?)?;
    let t = orthonormalizer(&x0);
    let mut x = &x0 * t;
    let mut ax = ops.stokes(&x)?;
    let (mut lam, c) = rayleigh_ritz(&x, &ax, m);
    x = &x * &c;
    ax = &ax * &c;
    let mut p: Option<(DMatrix<f64>, DMatrix<f64>)> = None;

    let mut iterations = 0;
    let mut res = vec![f64::INFINITY; m];
    for it in 0..opts.max_iter {
        iterations = it + 1;
        let mut r = ax.clone();
        for j in 0..x.ncols() {
            let col = x.column(j) * lam[j];
            let mut rc = r.column_mut(j);
            rc -= col;
        }
        for j in 0..x.ncols() {
            res[j] = r.column(j).norm() / lam[j].abs().max(f64::MIN_POSITIVE);
        }
        if res[..n].iter().all(|&e| e <= opts.tol) {
            break;
        }
        let active: Vec<usize> = (0..x.ncols()).filter(|&j| res[j] > opts.tol).collect();
        let r_active = r.select_columns(&active);
        let mut w = ops.precondition(&r_active)?;
        deflate(&mut w, &x);
        let mut blocks = vec![w];
        if let Some((pp, _)) = &p {
            let mut pp = pp.clone();
            deflate(&mut pp, &x);
            blocks.push(pp);
        }
        let wp = hcat(&blocks.iter().collect::<Vec<_>>());
        let t = orthonormalizer(&wp);
        let wp = &wp * &t;
        let awp = ops.stokes(&wp)?;
        let s = hcat(&[&x, &wp]);
        let as_ = hcat(&[&ax, &awp]);
        let (vals, c) = rayleigh_ritz(&s, &as_, m);
        let nx = x.ncols();
        let c_rest = c.rows(nx, c.nrows() - nx).into_owned();
        p = Some((&wp * &c_rest, &awp * &c_rest));
        x = &s * &c;
        ax = &as_ * &c;
        lam = vals;
    }

    // Fresh residuals on the returned vectors.
    let xn = x.columns(0, n).into_owned();
    let axn = ops.stokes(&xn)?;
    let mut residuals = Vec::with_capacity(n);
    for j in 0..n {
        let r = axn.column(j) - xn.column(j) * lam[j];
        residuals.push(r.norm() / (lam[j] * xn.column(j).norm()));
    }
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    if worst > opts.tol || !worst.is_finite() {
        return Err(Error::NoConvergence { iterations, residual: worst });
    }
    let scale = 1.0 / grid.cell_volume().sqrt();
    let modes = (0..n).map(|j| FaceField::from_flat(grid, &(xn.column(j) * scale).as_slice().to_vec())).collect();
    let mu = lam[..n].iter().map(|l| nu * l).collect();
    Ok(ReducedBasis { grid, nu, modes, mu, residuals, iterations, enrichment: 0 })
}

/// `N` Stokes modes followed by the rigid-rotation enrichment.
pub fn reduced_basis(grid: Grid, nu: f64, n: usize) -> Result<ReducedBasis> {
    stokes_modes(grid, nu, n)?.enriched()
}
