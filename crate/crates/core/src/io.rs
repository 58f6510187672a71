//! File formats: trajectory CSV with a JSON config sidecar, estimate JSON,
//! and experiment report directories.
//!
//! Reals are written as `{:.16e}` (17 significant digits), which
//! round-trips every finite `f64`. All files are written to a temporary file
//! in the destination directory and renamed into place.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::estimator::Estimate;
use crate::experiments::ExperimentReport;
use crate::sim::TrajectorySet;

/// Formats a real with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

/// Writes `path` through a sibling temporary file and an atomic rename.
pub fn write_atomic(
    path: &Path,
    write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(&dir, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        write(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Sidecar path of a trajectory CSV: `<csv>.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    let mut os = csv_path.as_os_str().to_owned();
    os.push(".json");
    PathBuf::from(os)
}

pub fn trajectory_header(n_modes: usize, with_dw: bool) -> Vec<String> {
    let mut header = vec!["t".to_string()];
    header.extend((1..=n_modes).map(|k| format!("u_{k}")));
    header.extend((1..=n_modes).map(|k| format!("v_{k}")));
    if with_dw {
        header.extend((1..=n_modes).map(|k| format!("dw_{k}")));
    }
    header
}

/// Writes the trajectory CSV and its config sidecar.
pub fn write_trajectory(path: &Path, traj: &TrajectorySet) -> Result<()> {
    let n = traj.n_modes();
    write_atomic(path, |w| {
        writeln!(w, "{}", trajectory_header(n, traj.dw.is_some()).join(","))?;
        let mut line = String::new();
        for (i, &t) in traj.grid.iter().enumerate() {
            line.clear();
            line.push_str(&fmt_real(t));
            for row in traj.u.iter().chain(&traj.v) {
                line.push(',');
                line.push_str(&fmt_real(row[i]));
            }
            if let Some(dw) = &traj.dw {
                for row in dw {
                    line.push(',');
                    if i > 0 {
                        line.push_str(&fmt_real(row[i - 1]));
                    }
                }
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    })?;
    let json = serde_json::to_string_pretty(&traj.config)?;
    write_atomic(&sidecar_path(path), |w| writeln!(w, "{json}"))
}

pub fn read_config(path: &Path) -> Result<SimConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))
}

/// Reads a trajectory CSV and its sidecar, checking the header, the shape
/// against the config, the time column against the uniform grid, and the
/// trajectory invariants.
pub fn read_trajectory(path: &Path) -> Result<TrajectorySet> {
    let config = read_config(&sidecar_path(path))?;
    config.validate()?;
    let n = config.n_modes;
    let m = config.m_steps;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::format(path, e.to_string()))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::format(path, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let with_dw = if header == trajectory_header(n, false) {
        false
    } else if header == trajectory_header(n, true) {
        true
    } else {
        return Err(Error::format(
            path,
            format!("header does not match {n} modes"),
        ));
    };
    let grid = config.grid();
    let mut u = vec![Vec::with_capacity(m + 1); n];
    let mut v = vec![Vec::with_capacity(m + 1); n];
    let mut dw = vec![Vec::with_capacity(m); if with_dw { n } else { 0 }];
    let parse = |s: &str, row: usize| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::format(path, format!("row {row}: `{s}`: {e}")))
    };
    let mut rows = 0;
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::format(path, e.to_string()))?;
        if i > m {
            return Err(Error::format(
                path,
                format!("more than {} data rows", m + 1),
            ));
        }
        let t = parse(&rec[0], i)?;
        if (t - grid[i]).abs() > 1e-12 * config.t_final.max(1.0) {
            return Err(Error::format(
                path,
                format!("row {i}: time {t} is off the uniform grid ({})", grid[i]),
            ));
        }
        for k in 0..n {
            u[k].push(parse(&rec[1 + k], i)?);
            v[k].push(parse(&rec[1 + n + k], i)?);
        }
        if with_dw {
            for (k, row) in dw.iter_mut().enumerate() {
                let cell = &rec[1 + 2 * n + k];
                if i == 0 {
                    if !cell.trim().is_empty() {
                        return Err(Error::format(path, "dw cells must be empty on row 0"));
                    }
                } else {
                    row.push(parse(cell, i)?);
                }
            }
        }
        rows += 1;
    }
    if rows != m + 1 {
        return Err(Error::format(
            path,
            format!("expected {} data rows, found {rows}", m + 1),
        ));
    }
    TrajectorySet::from_parts(config, u, v, with_dw.then_some(dw)).map_err(|e| match e {
        Error::Data(msg) => Error::format(path, msg),
        other => other,
    })
}

/// JSON document emitted by the `estimate` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateOutput {
    pub lambda_hat: f64,
    pub j_stat: f64,
    pub b_stat: f64,
    pub xi: Option<f64>,
    pub z_canonical: Option<f64>,
    pub z_paper: Option<f64>,
}

impl From<&Estimate> for EstimateOutput {
    fn from(e: &Estimate) -> Self {
        Self {
            lambda_hat: e.lambda_hat,
            j_stat: e.stats.j_stat,
            b_stat: e.stats.b_stat,
            xi: e.stats.xi,
            z_canonical: e.z_canonical,
            z_paper: e.z_paper,
        }
    }
}

/// Writes `report.json`, `records.csv` and, where present, `histogram.csv`
/// and `rates.csv` into `dir`.
pub fn write_report(dir: &Path, report: &ExperimentReport) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let json = serde_json::to_string_pretty(report)?;
    write_atomic(&dir.join("report.json"), |w| writeln!(w, "{json}"))?;
    write_atomic(&dir.join("records.csv"), |w| {
        writeln!(w, "replication,seed,n,lambda_hat,z_canonical,z_paper")?;
        for r in &report.records {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.replication,
                r.seed,
                r.n,
                fmt_opt(r.lambda_hat),
                fmt_opt(r.z_canonical),
                fmt_opt(r.z_paper)
            )?;
        }
        Ok(())
    })?;
    if let Some(h) = &report.histogram {
        write_atomic(&dir.join("histogram.csv"), |w| {
            writeln!(w, "bin_lo,bin_hi,count")?;
            for (j, count) in h.counts.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{count}",
                    fmt_real(h.edges[j]),
                    fmt_real(h.edges[j + 1])
                )?;
            }
            Ok(())
        })?;
    }
    if !report.rates.is_empty() {
        write_atomic(&dir.join("rates.csv"), |w| {
            writeln!(w, "m,mse_xi,mse_j")?;
            for row in &report.rates {
                writeln!(
                    w,
                    "{},{},{}",
                    row.m,
                    fmt_opt(row.mse_xi),
                    fmt_real(row.mse_j)
                )?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

pub fn read_report(dir: &Path) -> Result<ExperimentReport> {
    let path = dir.join("report.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::format(&path, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::simulate_euler;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn real_format_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = fmt_real(x);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn trajectory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        let cfg = SimConfig::new(3.0, 0.5, 3, 7, 0.9).with_seed(4);
        let traj = simulate_euler(&cfg, 0).unwrap();
        write_trajectory(&path, &traj).unwrap();
        assert!(sidecar_path(&path).exists());
        let back = read_trajectory(&path).unwrap();
        assert_eq!(back.u, traj.u);
        assert_eq!(back.v, traj.v);
        assert_eq!(back.dw, traj.dw);
        assert_eq!(back.config, traj.config);

        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,u_1,u_2,u_3,v_1,v_2,v_3,dw_1,dw_2,dw_3"
        );
        assert!(lines.next().unwrap().ends_with(",,,"));
        assert_eq!(text.lines().count(), 9);
    }

    #[test]
    fn rejects_truncated_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        let cfg = SimConfig::new(1.0, 1.0, 2, 4, 1.0);
        let traj = simulate_euler(&cfg, 0).unwrap();
        write_trajectory(&path, &traj).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let cut: Vec<&str> = text.lines().take(3).collect();
        fs::write(&path, cut.join("\n")).unwrap();
        assert!(matches!(read_trajectory(&path), Err(Error::Format { .. })));
    }

    #[test]
    fn missing_sidecar_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nothing.csv");
        assert!(matches!(read_trajectory(&path), Err(Error::Io { .. })));
    }
}
