//! Scenario files, persistence, presets and the command-line front end for
//! `gyrostat-core`.

pub mod checkpoint;
pub mod cli;
pub mod eigreport;
pub mod error;
pub mod presets;
pub mod scenario;
pub mod simulate;
pub mod timeseries;

pub use error::{ShellError, ShellResult};
