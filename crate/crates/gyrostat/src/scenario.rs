//! Scenario files: TOML with the sections `[cavity]`, `[inertia]`, `[sim]`,
//! `[ic]`, `[output]` and an optional `[spectrum]`.
//!
//! ```toml
//! [cavity]
//! dims = [1.3, 1.3, 1.3]
//! grid = [16, 16, 16]
//!
//! [inertia]
//! moments = [1.0, 2.0, 3.0]
//!
//! [sim]
//! nu = 0.01
//! omega0 = [0.0, 0.0, 1.0]
//! ```
//!
//! Defaults: `degeneracy_tol = 1e-9`, `mode = "nonlinear"`, `dt = "auto"`,
//! `t_end = 10`, `sample_every = 1`, `checkpoint_every = 0`, `sweeps = 2`;
//! `[ic]` seed 0, zero velocity, `omega = omega0 + omega_delta` with zero
//! delta; `[output]` dir `"out"`, formats csv, json and checkpoint;
//! `[spectrum]` 32 modes on the cavity grid.

use std::path::{Path, PathBuf};

use gyrostat_core::dynamics::{Mode, State, Stepper};
use gyrostat_core::fields::{synth_solenoidal_ic, Grid};
use gyrostat_core::{build_system, SetupParams, SystemSetup, Vec3};
use serde::{Deserialize, Serialize};

use crate::checkpoint::Checkpoint;
use crate::error::{ShellError, ShellResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub cavity: CavitySection,
    pub inertia: InertiaSection,
    pub sim: SimSection,
    #[serde(default)]
    pub ic: IcSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    pub dims: [f64; 3],
    pub grid: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InertiaSection {
    pub moments: [f64; 3],
    #[serde(default = "default_tol")]
    pub degeneracy_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    #[default]
    Nonlinear,
    Linearized,
}

impl From<ModeSpec> for Mode {
    fn from(m: ModeSpec) -> Self {
        match m {
            ModeSpec::Nonlinear => Mode::Nonlinear,
            ModeSpec::Linearized => Mode::Linearized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DtKeyword {
    Auto,
}

/// `"auto"` or a fixed step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DtSpec {
    Fixed(f64),
    Keyword(DtKeyword),
}

impl Default for DtSpec {
    fn default() -> Self {
        DtSpec::Keyword(DtKeyword::Auto)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub nu: f64,
    pub omega0: [f64; 3],
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(default)]
    pub dt: DtSpec,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_one")]
    pub sample_every: u64,
    #[serde(default)]
    pub checkpoint_every: u64,
    #[serde(default = "default_sweeps")]
    pub sweeps: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcSection {
    #[serde(default)]
    pub seed: u64,
    /// `||grad v||` of the initial relative velocity.
    #[serde(default)]
    pub v_amplitude: f64,
    /// Absolute initial angular velocity; overrides `omega_delta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<[f64; 3]>,
    /// Initial angular velocity as `omega0 + omega_delta`.
    #[serde(default)]
    pub omega_delta: [f64; 3],
    /// Resume from a checkpoint instead of building the state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restart: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Plot,
    Checkpoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: default_dir(), formats: default_formats() }
    }
}

impl OutputSection {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    #[serde(default = "default_modes")]
    pub modes: usize,
    /// Grid for the reduced basis; the cavity grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<[usize; 3]>,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self { modes: default_modes(), grid: None }
    }
}

fn default_tol() -> f64 {
    gyrostat_core::setup::DEFAULT_DEGENERACY_TOL
}
fn default_t_end() -> f64 {
    10.0
}
fn default_one() -> u64 {
    1
}
fn default_sweeps() -> usize {
    gyrostat_core::dynamics::DEFAULT_SWEEPS
}
fn default_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json, Format::Checkpoint]
}
fn default_modes() -> usize {
    32
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parse and validate a scenario.
pub fn parse_scenario(text: &str) -> ShellResult<Scenario> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        ShellError::Parse { line, column, message: e.message().to_string() }
    })?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario(path: &Path) -> ShellResult<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| ShellError::io(path, e))?;
    let mut scenario = parse_scenario(&text)?;
    // Relative paths inside the file are relative to the file.
    if let Some(base) = path.parent() {
        if let Some(r) = &scenario.ic.restart {
            if r.is_relative() {
                scenario.ic.restart = Some(base.join(r));
            }
        }
    }
    Ok(scenario)
}

impl Scenario {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn params(&self) -> SetupParams {
        SetupParams {
            dims: self.cavity.dims,
            grid: self.cavity.grid,
            nu: self.sim.nu,
            moments: self.inertia.moments,
            degeneracy_tol: self.inertia.degeneracy_tol,
            omega0: self.sim.omega0,
        }
    }

    pub fn setup(&self) -> ShellResult<SystemSetup> {
        Ok(build_system(&self.params())?)
    }

    pub fn mode(&self) -> Mode {
        self.sim.mode.into()
    }

    pub fn validate(&self) -> ShellResult<()> {
        self.setup()?;
        let sim = &self.sim;
        if !(sim.t_end > 0.0 && sim.t_end.is_finite()) {
            return Err(ShellError::Validation(format!("t_end must be > 0, got {}", sim.t_end)));
        }
        if sim.sample_every == 0 {
            return Err(ShellError::Validation("sample_every must be > 0".into()));
        }
        if sim.sweeps == 0 {
            return Err(ShellError::Validation("sweeps must be > 0".into()));
        }
        if let DtSpec::Fixed(dt) = sim.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(ShellError::Validation(format!("dt must be > 0 or \"auto\", got {dt}")));
            }
        }
        if !(self.ic.v_amplitude >= 0.0 && self.ic.v_amplitude.is_finite()) {
            return Err(ShellError::Validation(format!("v_amplitude must be >= 0, got {}", self.ic.v_amplitude)));
        }
        if self.spectrum.modes == 0 {
            return Err(ShellError::Validation("spectrum modes must be > 0".into()));
        }
        Ok(())
    }

    /// Initial angular velocity as stored in the state (the perturbation in linearized mode).
    pub fn initial_omega(&self) -> Vec3 {
        let w0 = Vec3::from(self.sim.omega0);
        let total = match self.ic.omega {
            Some(w) => Vec3::from(w),
            None => w0 + Vec3::from(self.ic.omega_delta),
        };
        match self.mode() {
            Mode::Nonlinear => total,
            Mode::Linearized => total - w0,
        }
    }

    /// Build the initial state, or read it from the restart checkpoint.
    pub fn initial_state(&self, setup: &SystemSetup) -> ShellResult<State> {
        if let Some(path) = &self.ic.restart {
            let ck = Checkpoint::read(path)?;
            ck.check_setup(setup).map_err(|m| ShellError::Validation(format!("{}: {m}", path.display())))?;
            return Ok(ck.to_state(self.mode()));
        }
        let v = synth_solenoidal_ic(Grid::new(&setup.cavity), self.ic.seed, self.ic.v_amplitude)?;
        Ok(State::new(v, self.initial_omega(), &setup.inertia, self.mode()))
    }

    pub fn resolve_dt(&self, stepper: &Stepper, initial: &State) -> f64 {
        match self.sim.dt {
            DtSpec::Fixed(dt) => dt,
            DtSpec::Keyword(DtKeyword::Auto) => stepper.auto_dt(initial),
        }
    }
}
