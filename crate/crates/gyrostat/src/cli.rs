use std::path::PathBuf;

use clap::{Parser, Subcommand};
use gyrostat_core::stability::{attainability, classify_f64, fit_decay, DecayPolicy};
use gyrostat_core::Vec3;

use crate::checkpoint::Checkpoint;
use crate::eigreport::{spectrum_of, write_eigreport};
use crate::error::{ShellError, ShellResult};
use crate::presets::{run_preset, summary_text, Overrides};
use crate::scenario::load_scenario;
use crate::simulate::simulate;
use crate::timeseries::read_table;

#[derive(Debug, Parser)]
#[command(name = "gyrostat", version, about = "Rigid body with a liquid-filled cavity: simulation and stability analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a scenario file and write its time series, checkpoints and summary.
    Simulate {
        scenario: PathBuf,
        /// Output directory, overriding the scenario's.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Linearized spectrum about the scenario's permanent rotation, as JSON.
    Spectrum {
        scenario: PathBuf,
        /// Report path; defaults to eigreport.json in the scenario's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the permanent rotation about an axis.
    Classify {
        /// Central moments A,B,C.
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        abc: [f64; 3],
        /// Rotation axis x,y,z (normalized internally).
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        axis: [f64; 3],
        #[arg(long, default_value_t = gyrostat_core::setup::DEFAULT_DEGENERACY_TOL)]
        tol: f64,
    },
    /// Which permanent rotation given initial data are guaranteed to reach.
    Attain {
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        abc: [f64; 3],
        /// Initial angular velocity.
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        omega0: [f64; 3],
        /// Initial relative kinetic energy of the liquid.
        #[arg(long = "E0")]
        e0: f64,
        #[arg(long, default_value_t = gyrostat_core::setup::DEFAULT_DEGENERACY_TOL)]
        tol: f64,
    },
    /// Fit an exponential decay rate to one column of a CSV file.
    FitDecay {
        csv: PathBuf,
        #[arg(long)]
        column: String,
        #[arg(long, default_value = "t")]
        time_column: String,
        /// Lower edge of the amplitude window, relative to the maximum.
        #[arg(long, default_value_t = DecayPolicy::default().lo)]
        lo: f64,
        /// Upper edge of the amplitude window, relative to the maximum.
        #[arg(long, default_value_t = DecayPolicy::default().hi)]
        hi: f64,
    },
    /// Run a named experiment.
    #[command(after_help = "Presets: kelvin-stable, kelvin-unstable, soda-can, zhukovsky-longrun")]
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cells per side, overriding the preset's resolution.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Print the header of a checkpoint file.
    CheckpointInfo { file: PathBuf },
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0f64; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| format!("not a number: {p:?}"))?;
        if !o.is_finite() {
            return Err(format!("not finite: {p:?}"));
        }
    }
    Ok(out)
}

pub fn execute(cli: Cli) -> ShellResult<()> {
    match cli.command {
        Command::Simulate { scenario, out } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(dir) = out {
                s.output.dir = dir;
            }
            let sim = simulate(&s)?;
            let r = &sim.result;
            let last = r.rows.last().expect("rows hold the initial state");
            println!("{} steps of {:.6e} to t = {}", r.final_state.step, sim.dt, r.final_state.t);
            if let gyrostat_core::dynamics::Outcome::Diverged { step, t } = r.outcome {
                println!("diverged at step {step} (t = {t})");
            }
            println!("l2v {:.6e} |M| {:.12} energy residual {:.3e}", last.l2v, last.m_norm, last.energy_residual);
            println!("wrote {}", s.output.dir.display());
        }
        Command::Spectrum { scenario, out } => {
            let s = load_scenario(&scenario)?;
            let res = spectrum_of(&s)?;
            let path = match out {
                Some(p) => p,
                None => {
                    std::fs::create_dir_all(&s.output.dir).map_err(|e| ShellError::io(&s.output.dir, e))?;
                    s.output.dir.join("eigreport.json")
                }
            };
            write_eigreport(&path, &res)?;
            let r = &res.report;
            println!("verdict {}", r.verdict);
            println!("zero multiplicity {} (semisimple {})", r.zero_multiplicity, r.semisimple);
            if let Some(z) = r.least_stable() {
                println!("least stable {:.6e} {:+.6e}i", z.re, z.im);
            }
            if let Some((case, v)) = &res.classified {
                println!("case {case}: {v}");
            }
            println!("wrote {}", path.display());
        }
        Command::Classify { abc, axis, tol } => {
            let n = Vec3::from(axis).norm();
            if n == 0.0 {
                return Err(ShellError::Validation("axis must be nonzero".into()));
            }
            let v = classify_f64(abc, axis.map(|x| x / n), tol)?;
            println!("{v}");
        }
        Command::Attain { abc, omega0, e0, tol } => {
            if !(e0 >= 0.0) {
                return Err(ShellError::Validation(format!("E0 must be >= 0, got {e0}")));
            }
            if !(abc[0] <= abc[1] && abc[1] <= abc[2]) {
                return Err(gyrostat_core::Error::OrderViolation { a: abc[0], b: abc[1], c: abc[2] }.into());
            }
            println!("{}", attainability(e0, omega0, abc, tol));
        }
        Command::FitDecay { csv, column, time_column, lo, hi } => {
            let table = read_table(&csv)?;
            let missing = |c: &str| ShellError::Validation(format!("{}: no column {c:?}; have {}", csv.display(), table.header.join(", ")));
            let t = table.column(&time_column).ok_or_else(|| missing(&time_column))?;
            let y = table.column(&column).ok_or_else(|| missing(&column))?;
            let f = fit_decay(&t, &y, DecayPolicy { lo, hi }, &column)?;
            println!("rate {:.6} r2 {:.6} window [{}, {}] points {}", f.rate, f.r_squared, f.window.0, f.window.1, f.points);
        }
        Command::Preset { name, out, grid, t_end } => {
            let dir = out.unwrap_or_else(|| PathBuf::from("out").join(&name));
            let r = run_preset(&name, &dir, Overrides { grid, t_end })?;
            print!("{}", summary_text(&r));
            println!("wrote {}", dir.display());
        }
        Command::CheckpointInfo { file } => {
            print!("{}", Checkpoint::read(&file)?.describe());
        }
    }
    Ok(())
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
