//! Reduced-basis spectra of the linearized operator.

pub mod eigen;
pub mod pencil;
pub mod stokes;

pub use eigen::{eigenspectrum, eigenspectrum_with, spectral_projection, Complex64, EigReport, SpectrumVerdict, CLUSTER_RADIUS};
pub use pencil::{assemble_pencil, Pencil};
pub use stokes::{reduced_basis, stokes_modes, stokes_modes_with, ReducedBasis, StokesOptions, MAX_MODES};
