//! Linearized spectrum of a scenario and its JSON report.

use std::path::Path;

use gyrostat_core::fields::Grid;
use gyrostat_core::spectral::{assemble_pencil, eigenspectrum, reduced_basis, EigReport};
use gyrostat_core::stability::{classify_f64, Verdict};
use gyrostat_core::{build_system, SystemSetup};
use serde_json::{json, Value};

use crate::error::{ShellError, ShellResult};
use crate::scenario::Scenario;

/// Spectrum together with the setup it was computed on.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub setup: SystemSetup,
    pub modes: usize,
    pub report: EigReport,
    /// Closed-form classification; `None` without a base rotation.
    pub classified: Option<(String, Verdict)>,
}

/// Compute the spectrum for the scenario's setup on its `[spectrum]` grid.
pub fn spectrum_of(scenario: &Scenario) -> ShellResult<SpectrumResult> {
    let mut params = scenario.params();
    if let Some(g) = scenario.spectrum.grid {
        params.grid = g;
    }
    let setup = build_system(&params)?;
    let basis = reduced_basis(Grid::new(&setup.cavity), setup.nu, scenario.spectrum.modes)?;
    let pencil = assemble_pencil(&basis, &setup, &setup.omega0);
    let expected = setup.axis.as_ref().map(|s| s.multiplicity());
    let report = eigenspectrum(&pencil, expected)?;
    let classified = if setup.axis.is_some() {
        let e = setup.omega0.normalize();
        let v = classify_f64(setup.inertia.moments(), e.into(), setup.inertia.degeneracy_tol())?;
        Some((v.case_id.to_string(), v.verdict))
    } else {
        None
    };
    Ok(SpectrumResult { setup, modes: basis.len(), report, classified })
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn eigreport_json(res: &SpectrumResult) -> Value {
    let r = &res.report;
    let su = &res.setup;
    json!({
        "verdict": r.verdict.to_string(),
        "zero_multiplicity": r.zero_multiplicity,
        "geometric_multiplicity": r.geometric_multiplicity,
        "expected_multiplicity": r.expected_multiplicity,
        "semisimple": r.semisimple,
        "min_re_nonzero": finite(r.min_re_nonzero),
        "min_abs_re_nonzero": finite(r.min_abs_re_nonzero),
        "least_stable": r.least_stable().map(|z| [z.re, z.im]),
        "cluster_radius": r.cluster_radius,
        "mu1": r.mu1,
        "classification": res.classified.as_ref().map(|(case, v)| json!({"case": case, "verdict": v.to_string()})),
        "setup": {
            "dims": su.cavity.dims(),
            "grid": su.cavity.grid(),
            "nu": su.nu,
            "moments": su.inertia.moments(),
            "omega0": [su.omega0.x, su.omega0.y, su.omega0.z],
            "basis_size": res.modes,
        },
        "eigenvalues": r.eigenvalues.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    })
}

pub fn write_eigreport(path: &Path, res: &SpectrumResult) -> ShellResult<()> {
    let text = serde_json::to_string_pretty(&eigreport_json(res)).expect("report serializes") + "\n";
    std::fs::write(path, text).map_err(|e| ShellError::io(path, e))
}
