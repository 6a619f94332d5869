//! Named experiments: scenario, run, fits and a summary verdict.
//!
//! All presets use a cube of side 1.3 and viscosity 0.01.
//!
//! | name | moments | spin | initial data |
//! |---|---|---|---|
//! | `kelvin-stable` | 1, 2, 3 | e3 | 1e-2 perturbation, 16^3, t <= 80 |
//! | `kelvin-unstable` | 1, 2, 3 | e1 | 1e-4 perturbation, 16^3, t <= 200 |
//! | `soda-can` | 1, 1, 3 | e1 | 1e-4 perturbation, 16^3, t <= 200 |
//! | `zhukovsky-longrun` | 1, 2, 3 | e3 | omega(0) = (0.6, -0.8, 1.3), unit velocity, 32^3, t <= 45 |

use std::path::{Path, PathBuf};

use gyrostat_core::dynamics::DiagnosticsRow;
use gyrostat_core::stability::{attainability, classify_f64, fit_decay, fit_growth, Attainability, DecayFit, DecayPolicy, Verdict};
use gyrostat_core::Vec3;
use serde_json::{json, Value};

use crate::error::{ShellError, ShellResult};
use crate::scenario::{
    CavitySection, DtSpec, Format, IcSection, InertiaSection, ModeSpec, OutputSection, Scenario, SimSection, SpectrumSection,
};
use crate::simulate::{finite, simulate, write_json, Simulation};

pub const PRESETS: [&str; 4] = ["kelvin-stable", "kelvin-unstable", "soda-can", "zhukovsky-longrun"];

/// Deviation growth required before an instability counts as detected.
pub const GROWTH_FACTOR: f64 = 10.0;

const SIDE: f64 = 1.3;
const NU: f64 = 0.01;
const PERTURBATION_DIRECTION: [f64; 3] = [0.6, -0.8, 0.3];

/// Resolution and horizon overrides, mainly for quick runs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub t_end: Option<f64>,
}

fn scenario(moments: [f64; 3], omega0: [f64; 3], n: usize, t_end: f64, ic: IcSection, dir: PathBuf) -> Scenario {
    Scenario {
        cavity: CavitySection { dims: [SIDE; 3], grid: [n; 3] },
        inertia: InertiaSection { moments, degeneracy_tol: gyrostat_core::setup::DEFAULT_DEGENERACY_TOL },
        sim: SimSection {
            nu: NU,
            omega0,
            mode: ModeSpec::Nonlinear,
            dt: DtSpec::default(),
            t_end,
            sample_every: 10,
            checkpoint_every: 0,
            sweeps: gyrostat_core::dynamics::DEFAULT_SWEEPS,
        },
        ic,
        output: OutputSection { dir, formats: vec![Format::Csv, Format::Json, Format::Plot, Format::Checkpoint] },
        spectrum: SpectrumSection::default(),
    }
}

fn perturbation(amp: f64) -> IcSection {
    IcSection { seed: 7, v_amplitude: amp, omega_delta: PERTURBATION_DIRECTION.map(|x| x * amp), ..IcSection::default() }
}

/// Scenario for a preset, writing into `dir`.
pub fn preset_scenario(name: &str, dir: &Path, ov: Overrides) -> ShellResult<Scenario> {
    let dir = dir.to_path_buf();
    let mut s = match name {
        "kelvin-stable" => scenario([1.0, 2.0, 3.0], [0.0, 0.0, 1.0], 16, 80.0, perturbation(1e-2), dir),
        "kelvin-unstable" => scenario([1.0, 2.0, 3.0], [1.0, 0.0, 0.0], 16, 200.0, perturbation(1e-4), dir),
        "soda-can" => scenario([1.0, 1.0, 3.0], [1.0, 0.0, 0.0], 16, 200.0, perturbation(1e-4), dir),
        "zhukovsky-longrun" => {
            let ic = IcSection { seed: 1, v_amplitude: 1.0, omega: Some([0.6, -0.8, 1.3]), ..IcSection::default() };
            let mut s = scenario([1.0, 2.0, 3.0], [0.0, 0.0, 1.0], 32, 45.0, ic, dir);
            s.sim.sample_every = 20;
            s
        }
        _ => {
            return Err(ShellError::UnknownPreset {
                name: name.to_string(),
                available: PRESETS.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    if let Some(n) = ov.grid {
        s.cavity.grid = [n; 3];
    }
    if let Some(t) = ov.t_end {
        s.sim.t_end = t;
    }
    s.validate()?;
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Growth {
    /// `max y / y(0)` over the run.
    pub factor: f64,
    pub detected: bool,
    /// Growth rate between 3x and 100x the initial value.
    pub fit: Option<DecayFit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Terminal {
    /// Angle between the final angular velocity and e3, radians.
    pub angle_to_e3: f64,
    /// `| |omega| C / |M(0)| - 1 |`.
    pub speed_error: f64,
    /// `l2v(t_end) / l2v(0)`.
    pub l2v_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct PresetReport {
    pub name: String,
    pub scenario: Scenario,
    pub sim: Simulation,
    pub case_id: String,
    pub verdict: Verdict,
    /// Relative energy at t = 0.
    pub e0: f64,
    pub omega_initial: Vec3,
    pub attainability: Attainability,
    /// Exponential fits, keyed by series name; `Err` holds the reason a fit failed.
    pub fits: Vec<(String, Result<DecayFit, String>)>,
    pub growth: Option<Growth>,
    pub terminal: Option<Terminal>,
}

impl PresetReport {
    pub fn fit(&self, name: &str) -> Option<&DecayFit> {
        self.fits.iter().find(|(n, _)| n == name).and_then(|(_, f)| f.as_ref().ok())
    }
}

fn series(rows: &[DiagnosticsRow], f: impl Fn(&DiagnosticsRow) -> f64) -> Vec<f64> {
    rows.iter().map(f).collect()
}

/// Run a preset and write its artifacts plus `summary.json` and `summary.txt`.
pub fn run_preset(name: &str, dir: &Path, ov: Overrides) -> ShellResult<PresetReport> {
    let scenario = preset_scenario(name, dir, ov)?;
    let sim = simulate(&scenario)?;
    let report = analyze(name, scenario, sim)?;
    write_json(&dir.join("summary.json"), &summary_json(&report))?;
    let path = dir.join("summary.txt");
    std::fs::write(&path, summary_text(&report)).map_err(|e| ShellError::io(&path, e))?;
    Ok(report)
}

fn analyze(name: &str, scenario: Scenario, sim: Simulation) -> ShellResult<PresetReport> {
    let setup = &sim.setup;
    let moments = setup.inertia.moments();
    let tol = setup.inertia.degeneracy_tol();
    let cls = classify_f64(moments, setup.omega0.normalize().into(), tol)?;
    let rows = &sim.result.rows;
    let first = rows[0];
    let omega_initial = first.omega;
    let att = attainability(first.e, omega_initial.into(), moments, tol);
    let t = series(rows, |r| r.t);
    let l2v = series(rows, |r| r.l2v);
    let mut fits = Vec::new();
    let mut growth = None;
    let mut terminal = None;
    let fit_err = |r: gyrostat_core::Result<DecayFit>| r.map_err(|e| e.to_string());
    let m0 = first.m_norm;
    let c = moments[2];
    match cls.verdict {
        Verdict::Stable => {
            fits.push(("l2v".to_string(), fit_err(fit_decay(&t, &l2v, DecayPolicy::default(), "l2v"))));
            // Deviation from the terminal rotation carrying the same |M| about e3.
            let wbar = Vec3::new(0.0, 0.0, m0 / c);
            let dw = series(rows, |r| (r.omega - wbar).norm());
            fits.push(("omega_deviation".to_string(), fit_err(fit_decay(&t, &dw, DecayPolicy::default(), "omega_deviation"))));
            if name == "zhukovsky-longrun" {
                let last = rows.last().expect("rows hold the initial state");
                let w = last.omega;
                terminal = Some(Terminal {
                    angle_to_e3: w.xy().norm().atan2(w.z.abs()),
                    speed_error: (w.norm() * c / m0 - 1.0).abs(),
                    l2v_ratio: last.l2v / first.l2v,
                });
            }
        }
        Verdict::Unstable => {
            let peak = l2v.iter().cloned().fold(0.0, f64::max);
            let factor = peak / l2v[0];
            let fit = fit_growth(&t, &l2v, 3.0, 100.0, "l2v");
            growth = Some(Growth { factor, detected: factor >= GROWTH_FACTOR, fit: fit.as_ref().ok().cloned() });
            fits.push(("l2v_growth".to_string(), fit_err(fit)));
        }
    }
    Ok(PresetReport {
        name: name.to_string(),
        scenario,
        sim,
        case_id: cls.case_id.to_string(),
        verdict: cls.verdict,
        e0: first.e,
        omega_initial,
        attainability: att,
        fits,
        growth,
        terminal,
    })
}

pub fn fit_json(f: &DecayFit) -> Value {
    json!({
        "quantity": f.quantity,
        "rate": finite(f.rate),
        "r_squared": finite(f.r_squared),
        "window": [f.window.0, f.window.1],
        "points": f.points,
    })
}

pub fn summary_json(r: &PresetReport) -> Value {
    let fits: serde_json::Map<String, Value> = r
        .fits
        .iter()
        .map(|(n, f)| {
            let v = match f {
                Ok(f) => fit_json(f),
                Err(e) => json!({ "error": e }),
            };
            (n.clone(), v)
        })
        .collect();
    json!({
        "preset": r.name,
        "case": r.case_id,
        "verdict": r.verdict.to_string(),
        "attainability": r.attainability.to_string(),
        "E0": r.e0,
        "omega_initial": [r.omega_initial.x, r.omega_initial.y, r.omega_initial.z],
        "fits": fits,
        "growth": r.growth.as_ref().map(|g| json!({
            "factor": finite(g.factor),
            "detected": g.detected,
            "rate": g.fit.as_ref().map(|f| finite(f.rate)),
        })),
        "terminal": r.terminal.as_ref().map(|t| json!({
            "angle_to_e3": t.angle_to_e3,
            "speed_error": t.speed_error,
            "l2v_ratio": t.l2v_ratio,
        })),
        "run": crate::simulate::run_summary(&r.scenario, &r.sim),
    })
}

pub fn summary_text(r: &PresetReport) -> String {
    let mut s = format!("preset {}\ncase {}: {}\nattainability {}\n", r.name, r.case_id, r.verdict, r.attainability);
    for (n, f) in &r.fits {
        match f {
            Ok(f) => s.push_str(&format!(
                "fit {n}: rate {:.6} r2 {:.6} window [{:.3}, {:.3}] points {}\n",
                f.rate, f.r_squared, f.window.0, f.window.1, f.points
            )),
            Err(e) => s.push_str(&format!("fit {n}: {e}\n")),
        }
    }
    if let Some(g) = &r.growth {
        s.push_str(&format!("growth factor {:.3e} detected {}\n", g.factor, g.detected));
    }
    if let Some(t) = &r.terminal {
        s.push_str(&format!(
            "terminal angle to e3 {:.3e} rad, speed error {:.3e}, l2v ratio {:.3e}\n",
            t.angle_to_e3, t.speed_error, t.l2v_ratio
        ));
    }
    let res = &r.sim.result;
    s.push_str(&format!("steps {} dt {:.6e} residual budget {:.3e}\n", res.final_state.step, r.sim.dt, res.residual_budget));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_preset_lists_available() {
        let err = preset_scenario("spinning-top", Path::new("x"), Overrides::default()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        let msg = err.to_string();
        for p in PRESETS {
            assert!(msg.contains(p), "{msg}");
        }
    }

    #[test]
    fn presets_are_valid_scenarios() {
        for p in PRESETS {
            let s = preset_scenario(p, Path::new("out"), Overrides::default()).unwrap();
            assert_eq!(crate::scenario::parse_scenario(&s.to_toml()).unwrap(), s);
        }
    }

    #[test]
    fn short_stable_run_summary() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_preset("kelvin-stable", dir.path(), Overrides { grid: Some(8), t_end: Some(1.0) }).unwrap();
        assert_eq!(r.verdict, Verdict::Stable);
        assert_eq!(r.case_id, "ii");
        let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert_eq!(v["verdict"], "Stable");
        assert!(std::fs::read_to_string(dir.path().join("summary.txt")).unwrap().contains("case ii: Stable"));
        assert!(dir.path().join("plot/l2v.dat").exists());
    }
}
