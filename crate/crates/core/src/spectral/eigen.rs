//! Dense eigenanalysis of the pencil `(A + B) x = sigma M x`.

use nalgebra::{DMatrix, DVector};

use super::pencil::Pencil;
use crate::error::{Error, Result};

pub type Complex64 = nalgebra::Complex<f64>;

/// Default zero-cluster radius relative to the smallest Stokes eigenvalue.
pub const CLUSTER_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumVerdict {
    AllPositive,
    SomeNegative,
}

impl std::fmt::Display for SpectrumVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpectrumVerdict::AllPositive => "AllPositive",
            SpectrumVerdict::SomeNegative => "SomeNegative",
        })
    }
}

#[derive(Debug, Clone)]
pub struct EigReport {
    /// All eigenvalues, sorted by real part then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub zero_indices: Vec<usize>,
    /// Number of eigenvalues inside the cluster radius.
    pub zero_multiplicity: usize,
    /// Dimension of the numerical null space of `A + B`.
    pub geometric_multiplicity: usize,
    pub semisimple: bool,
    pub expected_multiplicity: Option<usize>,
    pub min_abs_re_nonzero: f64,
    pub min_re_nonzero: f64,
    pub verdict: SpectrumVerdict,
    pub cluster_radius: f64,
    pub mu1: f64,
    /// Right null vectors of `A + B` (columns).
    pub right: DMatrix<f64>,
    /// `M z` for the left null vectors `z` of `A + B` (columns).
    pub left: DMatrix<f64>,
}

impl EigReport {
    /// Nonzero eigenvalue with the smallest real part.
    pub fn least_stable(&self) -> Option<Complex64> {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.zero_indices.contains(i))
            .map(|(_, z)| *z)
            .min_by(|a, b| a.re.partial_cmp(&b.re).unwrap())
    }

    /// `true` when the spectrum contains the conjugate of every eigenvalue.
    pub fn conjugate_closed(&self, tol: f64) -> bool {
        let scale = self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        self.eigenvalues.iter().all(|z| self.eigenvalues.iter().any(|w| (w - z.conj()).norm() <= tol * scale))
    }

    /// Oblique projector onto the null space along the range of `A + B`.
    pub fn projector(&self) -> Result<DMatrix<f64>> {
        let g = self.left.tr_mul(&self.right);
        let inv = g.clone().try_inverse().ok_or(Error::InvalidParameter("zero cluster is not semisimple".into()))?;
        Ok(&self.right * inv * self.left.transpose())
    }
}

fn null_vectors(k: &DMatrix<f64>, threshold: f64) -> DMatrix<f64> {
    let svd = k.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let idx: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= threshold).collect();
    DMatrix::from_fn(k.ncols(), idx.len(), |r, c| vt[(idx[c], r)])
}

pub fn eigenspectrum(pencil: &Pencil, expected: Option<usize>) -> Result<EigReport> {
    eigenspectrum_with(pencil, expected, CLUSTER_RADIUS)
}

pub fn eigenspectrum_with(pencil: &Pencil, expected: Option<usize>, radius_factor: f64) -> Result<EigReport> {
    let chol = pencil
        .mass
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidParameter("mass form is not positive definite".into()))?;
    let l = chol.l();
    let k = pencil.operator();
    // C = L^-1 K L^-T is similar to M^-1 K.
    let lk = l.solve_lower_triangular(&k).expect("cholesky factor is invertible");
    let c = l.solve_lower_triangular(&lk.transpose()).expect("cholesky factor is invertible").transpose();
    let mut eigenvalues: Vec<Complex64> = c.complex_eigenvalues().iter().cloned().collect();
    eigenvalues.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));

    let radius = radius_factor * pencil.mu1;
    for z in &eigenvalues {
        let r = z.norm();
        if r > radius / 10.0 && r <= 10.0 * radius {
            return Err(Error::ClusterAmbiguous { value: r, radius });
        }
    }
    let zero_indices: Vec<usize> = (0..eigenvalues.len()).filter(|&i| eigenvalues[i].norm() <= radius).collect();
    let nonzero = eigenvalues.iter().enumerate().filter(|(i, _)| !zero_indices.contains(i)).map(|(_, z)| *z);
    let min_re_nonzero = nonzero.clone().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let min_abs_re_nonzero = nonzero.map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);

    let mass_scale = pencil.mass.norm();
    let threshold = radius * mass_scale;
    let right = null_vectors(&k, threshold);
    let z = null_vectors(&k.transpose(), threshold);
    let left = &pencil.mass * z;
    let g = right.ncols();
    let semisimple = g == zero_indices.len() && left.ncols() == g && {
        let sv = left.tr_mul(&right).singular_values();
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        g == 0 || smin > 1e-8 * smax
    };

    Ok(EigReport {
        eigenvalues,
        zero_multiplicity: zero_indices.len(),
        zero_indices,
        geometric_multiplicity: g,
        semisimple,
        expected_multiplicity: expected,
        min_abs_re_nonzero,
        min_re_nonzero,
        verdict: if min_re_nonzero > 0.0 { SpectrumVerdict::AllPositive } else { SpectrumVerdict::SomeNegative },
        cluster_radius: radius,
        mu1: pencil.mu1,
        right,
        left,
    })
}

/// Split reduced coordinates `u` into its null-space component `Q u` and the rest.
pub fn spectral_projection(u: &DVector<f64>, report: &EigReport) -> Result<(DVector<f64>, DVector<f64>)> {
    let q = report.projector()?;
    let u0 = &q * u;
    let u1 = u - &u0;
    Ok((u0, u1))
}
