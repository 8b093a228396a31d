//! CSV and JSON emission with atomic writes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::experiments::{ConvergenceRecord, CriterionResult};
use crate::tensor::DgrConvention;

pub const CSV_HEADER: &str = "model,param_name,param_value,observable,quantum,classical,abs_error";

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub ball: Option<DgrConvention>,
    pub sphere: Option<DgrConvention>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub config_hash: String,
    /// RFC 3339 UTC; absent unless `[output] timestamp = true`.
    pub timestamp: Option<String>,
    pub convention: Conventions,
    pub criteria: Vec<CriterionResult>,
    pub tables: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(command: &str, config_hash: &str, timestamp: Option<String>, convention: Conventions) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_hash: config_hash.to_string(),
            timestamp,
            convention,
            criteria: Vec::new(),
            tables: BTreeMap::new(),
        }
    }

    /// Adds a serializable table; non-finite numbers become `null`.
    pub fn table<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), EmitError> {
        self.tables.insert(name.to_string(), serde_json::to_value(value)?);
        Ok(())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Records as CSV, sorted by `(observable, param_value)`. The first line is a
/// `#` comment carrying the config hash.
pub fn records_csv(records: &[ConvergenceRecord], config_hash: &str) -> String {
    let mut rows: Vec<&ConvergenceRecord> = records.iter().collect();
    rows.sort_by(|a, b| {
        a.observable
            .cmp(&b.observable)
            .then(a.param_value.total_cmp(&b.param_value))
    });
    let mut out = format!("# ssblab {} config_hash={config_hash}\n{CSV_HEADER}\n", env!("CARGO_PKG_VERSION"));
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(&r.model),
            csv_field(&r.param_name),
            format_float(r.param_value),
            csv_field(&r.observable),
            format_float(r.quantum),
            format_float(r.classical),
            format_float(r.abs_error)
        );
    }
    out
}

pub fn report_json(report: &Report) -> Result<String, EmitError> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), EmitError> {
    let io = |source| EmitError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_criterion, AcceptanceConfig};

    fn record(obs: &str, n: f64, q: f64) -> ConvergenceRecord {
        ConvergenceRecord::new("curie_weiss", "N", n, obs, q, 0.5)
    }

    #[test]
    fn one_record_one_row() {
        let csv = records_csv(&[record("x", 50.0, 0.49)], "abc");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], format!("# ssblab {} config_hash=abc", env!("CARGO_PKG_VERSION")));
        assert_eq!(lines[1], CSV_HEADER);
        let fields: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(fields.len(), 7);
        assert_eq!(fields[2], "5.0000000000000000e1");
        assert_eq!(fields[4].parse::<f64>().unwrap(), 0.49);
    }

    #[test]
    fn rows_are_sorted_regardless_of_input_order() {
        let a = vec![record("z", 100.0, 0.0), record("x", 100.0, 0.4), record("x", 50.0, 0.3)];
        let mut b = a.clone();
        b.reverse();
        let csv = records_csv(&a, "h");
        assert_eq!(csv, records_csv(&b, "h"));
        let obs: Vec<&str> = csv.lines().skip(2).map(|l| l.split(',').nth(3).unwrap()).collect();
        assert_eq!(obs, ["x", "x", "z"]);
        assert!(csv.lines().nth(2).unwrap().contains("5.0000000000000000e1"));
    }

    #[test]
    fn floats_round_trip_through_csv() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, f64::MAX, 0.7499999999999999] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn report_round_trips() {
        let conv = Conventions {
            ball: Some(DgrConvention { sign: -1.0, scale: 2.0 }),
            sphere: Some(DgrConvention { sign: 1.0, scale: 2.0 }),
        };
        let mut r = Report::new("accept", "deadbeef", None, conv);
        r.criteria.push(run_criterion(1, &AcceptanceConfig::default()));
        r.table("records", &vec![record("x", 50.0, 0.1 + 0.2), record("z", 50.0, 1e-300 / 3.0)])
            .unwrap();
        let text = report_json(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(report_json(&back).unwrap(), text);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("out.csv");
        write_atomic(&path, "one").unwrap();
        write_atomic(&path, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        let names: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().collect();
        assert_eq!(names.len(), 1);
    }
}
