//! Declarative Monte Carlo scenarios, report serialization, and dataset I/O.

mod runner;

pub use runner::{
    builtin, run_scenario, DataGenerator, LocalRule, Measure, ParametricId, ScenarioSpec,
    TestChoice, BUILTIN_IDS,
};

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// One aggregated result row. `kind` is one of "rate", "mean", "variance",
/// "count", "w_n"; rates carry the binomial Monte Carlo standard error
/// sqrt(v (1 - v) / N).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub n: usize,
    pub kind: String,
    pub value: f64,
    pub mc_se: f64,
}

/// Per-replication values retained when a scenario asks for them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub n: usize,
    pub replication: u64,
    pub field: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub rows: Vec<ReportRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub raw: Option<Vec<RawRecord>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl Report {
    /// CSV rendering with the fixed column set. Labels never contain commas.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scenario,label,n,kind,value,mc_se\n");
        for row in &self.rows {
            debug_assert!(!row.label.contains(','), "labels must stay comma-free");
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.scenario, row.label, row.n, row.kind, row.value, row.mc_se
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }
}

/// Write a report as CSV or JSON (UTF-8, LF line endings).
pub fn write_report(report: &Report, path: &Path, format: ReportFormat) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(report.render(format).as_bytes())?;
    Ok(())
}

/// Parse a headerless CSV of `obs_dim` decimal columns into a dataset.
/// Ragged rows and non-numeric cells report their 1-based row index.
pub fn read_dataset(path: &Path, obs_dim: usize) -> Result<Dataset> {
    if obs_dim == 0 {
        return Err(Error::domain("obs_dim must be positive"));
    }
    let text = std::fs::read_to_string(path)?;
    parse_dataset(&text, obs_dim)
}

pub fn parse_dataset(text: &str, obs_dim: usize) -> Result<Dataset> {
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let row = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let cells: Vec<&str> = trimmed.split(',').collect();
        if cells.len() != obs_dim {
            return Err(Error::Parse {
                row,
                msg: format!("expected {obs_dim} columns, found {}", cells.len()),
            });
        }
        for cell in cells {
            let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                row,
                msg: format!("'{}' is not a decimal number", cell.trim()),
            })?;
            values.push(v);
        }
    }
    if values.is_empty() {
        return Err(Error::domain("dataset is empty"));
    }
    Dataset::new(obs_dim, values)
}

/// Equal-width binning starting at `left`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinSpec {
    pub left: f64,
    pub width: f64,
    pub bins: usize,
}

impl BinSpec {
    /// Bins covering the observed range of `values` (padded when degenerate).
    pub fn covering(values: &[f64], bins: usize) -> Result<BinSpec> {
        if values.is_empty() {
            return Err(Error::domain("histogram needs at least one value"));
        }
        if bins == 0 {
            return Err(Error::domain("histogram needs at least one bin"));
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::domain("histogram values must be finite"));
        }
        if lo == hi {
            return Ok(BinSpec {
                left: lo - 0.5,
                width: 1.0 / bins as f64,
                bins,
            });
        }
        Ok(BinSpec {
            left: lo,
            width: (hi - lo) / bins as f64,
            bins,
        })
    }
}

/// Bin counts for `values` under `spec`; bins are right-open except the last,
/// which includes its right edge. Counts sum to the number of values.
pub fn emit_histogram(values: &[f64], spec: &BinSpec) -> Result<Vec<(f64, f64, usize)>> {
    if values.is_empty() {
        return Err(Error::domain("histogram needs at least one value"));
    }
    if !(spec.width > 0.0) {
        return Err(Error::domain(format!(
            "bin width must be positive (got {})",
            spec.width
        )));
    }
    if spec.bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    let right = spec.left + spec.width * spec.bins as f64;
    let mut counts = vec![0usize; spec.bins];
    for &v in values {
        if v < spec.left || v > right {
            return Err(Error::domain(format!(
                "value {v} outside histogram range [{}, {right}]",
                spec.left
            )));
        }
        let mut idx = ((v - spec.left) / spec.width).floor() as usize;
        if idx >= spec.bins {
            idx = spec.bins - 1; // right edge of the last bin
        }
        counts[idx] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            (
                spec.left + i as f64 * spec.width,
                spec.left + (i + 1) as f64 * spec.width,
                c,
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_single_value_one_bin() {
        let spec = BinSpec::covering(&[2.0], 1).unwrap();
        let h = emit_histogram(&[2.0], &spec).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].2, 1);
    }

    #[test]
    fn histogram_hand_count() {
        let spec = BinSpec {
            left: 0.0,
            width: 2.0,
            bins: 2,
        };
        let h = emit_histogram(&[0.0, 1.0, 2.0, 3.0], &spec).unwrap();
        assert_eq!(h[0], (0.0, 2.0, 2));
        assert_eq!(h[1], (2.0, 4.0, 2));
    }

    #[test]
    fn histogram_counts_sum_to_n() {
        let vals: Vec<f64> = (0..97).map(|i| (i as f64 * 0.37).sin()).collect();
        let spec = BinSpec::covering(&vals, 8).unwrap();
        let h = emit_histogram(&vals, &spec).unwrap();
        assert_eq!(h.iter().map(|b| b.2).sum::<usize>(), 97);
    }

    #[test]
    fn histogram_zero_width_rejected() {
        let spec = BinSpec {
            left: 0.0,
            width: 0.0,
            bins: 3,
        };
        assert!(emit_histogram(&[0.5], &spec).is_err());
    }

    #[test]
    fn dataset_parsing() {
        let d = parse_dataset("1.0\n2.0\n", 1).unwrap();
        assert_eq!(d.n(), 2);
        let d = parse_dataset("1,2\n3,4\n", 2).unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.row(1), &[3.0, 4.0]);
        match parse_dataset("1,x\n", 2) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_dataset("1,2\n3\n", 2) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 2),
            other => panic!("expected ragged-row error, got {other:?}"),
        }
    }

    #[test]
    fn csv_rendering() {
        let empty = Report {
            scenario: "s".into(),
            rows: vec![],
            raw: None,
        };
        assert_eq!(empty.to_csv(), "scenario,label,n,kind,value,mc_se\n");
        let r = Report {
            scenario: "s".into(),
            rows: vec![ReportRow {
                label: "rate".into(),
                n: 10,
                kind: "rate".into(),
                value: 0.25,
                mc_se: 0.01,
            }],
            raw: None,
        };
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.ends_with("s,rate,10,rate,0.25,0.01\n"));
    }

    #[test]
    fn json_round_trip() {
        let r = Report {
            scenario: "x".into(),
            rows: vec![ReportRow {
                label: "mele_mean".into(),
                n: 50,
                kind: "mean".into(),
                value: -0.003,
                mc_se: 0.004,
            }],
            raw: Some(vec![RawRecord {
                n: 50,
                replication: 0,
                field: "mele".into(),
                value: 0.1,
            }]),
        };
        let parsed: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(parsed, r);
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let r = Report {
            scenario: "s".into(),
            rows: vec![],
            raw: None,
        };
        let path = std::path::Path::new("/nonexistent-dir-elkit/report.csv");
        assert!(matches!(
            write_report(&r, path, ReportFormat::Csv),
            Err(Error::Io(_))
        ));
    }
}
