//! Time-series CSV and two-column plot files.

use std::io::Write;
use std::path::Path;

use gyrostat_core::dynamics::DiagnosticsRow;

use crate::error::{ShellError, ShellResult};

pub const COLUMNS: [&str; 16] = [
    "t",
    "om_x",
    "om_y",
    "om_z",
    "M_norm",
    "a_x",
    "a_y",
    "a_z",
    "E",
    "scriptE",
    "G",
    "V",
    "l2v",
    "h1v",
    "E1",
    "energy_residual",
];

pub fn row_values(r: &DiagnosticsRow) -> [f64; 16] {
    [
        r.t,
        r.omega.x,
        r.omega.y,
        r.omega.z,
        r.m_norm,
        r.a.x,
        r.a.y,
        r.a.z,
        r.e,
        r.script_e,
        r.g,
        r.v_lyap,
        r.l2v,
        r.h1v,
        r.e1,
        r.energy_residual,
    ]
}

/// Shortest representation that parses back to the same value.
fn fmt(x: f64) -> String {
    format!("{x:e}")
}

pub fn write_timeseries_to<W: Write>(out: W, rows: &[DiagnosticsRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record(row_values(r).map(fmt))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_timeseries(path: &Path, rows: &[DiagnosticsRow]) -> ShellResult<()> {
    let file = std::fs::File::create(path).map_err(|e| ShellError::io(path, e))?;
    write_timeseries_to(std::io::BufWriter::new(file), rows).map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> ShellError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => ShellError::io(path, io),
            _ => unreachable!(),
        }
    } else {
        ShellError::Format { path: path.to_path_buf(), message: e.to_string() }
    }
}

/// A numeric CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_table(path: &Path) -> ShellResult<Table> {
    let file = std::fs::File::open(path).map_err(|e| ShellError::io(path, e))?;
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header: Vec<String> = rd.headers().map_err(|e| csv_error(path, e))?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(j, s)| {
                s.parse::<f64>().map_err(|_| ShellError::Format {
                    path: path.to_path_buf(),
                    message: format!("row {}, column {:?}: not a number: {s:?}", k + 2, header.get(j).map_or("?", |h| h)),
                })
            })
            .collect::<ShellResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

/// One `<name>.dat` file per diagnostic column, `t value` per line.
pub fn write_plot_data(dir: &Path, rows: &[DiagnosticsRow]) -> ShellResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| ShellError::io(dir, e))?;
    let values: Vec<[f64; 16]> = rows.iter().map(row_values).collect();
    for (j, name) in COLUMNS.iter().enumerate().skip(1) {
        let path = dir.join(format!("{name}.dat"));
        let mut text = format!("# t {name}\n");
        for v in &values {
            text.push_str(&format!("{} {}\n", fmt(v[0]), fmt(v[j])));
        }
        std::fs::write(&path, text).map_err(|e| ShellError::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use gyrostat_core::Vec3;

    fn row(t: f64) -> DiagnosticsRow {
        DiagnosticsRow {
            t,
            step: 0,
            omega: Vec3::new(0.1, 0.2, 1.0 / 3.0),
            m_norm: 3.0,
            a: Vec3::new(-1e-300, 0.0, 5e-17),
            omega_inf: Vec3::zeros(),
            omega_par: Vec3::zeros(),
            omega_perp: Vec3::zeros(),
            omega_star: Vec3::zeros(),
            e: 0.25,
            script_e: 1.5,
            g: f64::NAN,
            v_lyap: 0.5,
            l2v: 0.7,
            h1v: 2.0,
            e1: f64::NAN,
            energy_residual: -1e-12,
        }
    }

    #[test]
    fn header_and_values_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ts.csv");
        write_timeseries(&path, &[row(0.0), row(0.1)]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
        let t = read_table(&path).unwrap();
        assert_eq!(t.rows.len(), 2);
        for (a, b) in t.rows[1].iter().zip(row_values(&row(0.1))) {
            assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
        }
        assert_eq!(t.column("om_z").unwrap(), vec![1.0 / 3.0; 2]);
        assert!(t.column("nope").is_none());
    }

    #[test]
    fn plot_files_have_two_columns() {
        let dir = tempfile::tempdir().unwrap();
        write_plot_data(dir.path(), &[row(0.0), row(0.5)]).unwrap();
        let text = std::fs::read_to_string(dir.path().join("l2v.dat")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["# t l2v", "0e0 7e-1", "5e-1 7e-1"]);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 15);
    }

    #[test]
    fn non_numeric_cell_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "t,y\n0,1\n1,x\n").unwrap();
        let err = read_table(&path).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("row 3"), "{err}");
    }
}
