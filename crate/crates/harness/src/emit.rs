use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::experiments::{Outcome, SweepPoint, TrialRecord, RECORD_FIELDS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EmitFormat {
    Csv,
    Json,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> HarnessError + '_ {
    move |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// CSV rows for `records`, header always present.
pub fn records_csv<W: Write>(out: W, records: &[TrialRecord], path: &Path) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(RECORD_FIELDS).map_err(csv_err(path))?;
    for r in records {
        w.serialize(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes the outcome: CSV carries the records only, JSON carries the spec,
/// the summary and the records.
pub fn emit(outcome: &Outcome, format: EmitFormat, path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(io_err(path))?;
    match format {
        EmitFormat::Csv => records_csv(file, &outcome.records, path),
        EmitFormat::Json => {
            serde_json::to_writer_pretty(file, outcome).map_err(|source| HarnessError::Json {
                path: path.to_path_buf(),
                source,
            })
        }
    }
}

pub fn read_json(path: &Path) -> Result<Outcome, HarnessError> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(file).map_err(|source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Plot data for a sweep: one `(p, success fraction)` row per point.
pub fn emit_sweep(points: &[SweepPoint], path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(file);
    for pt in points {
        w.serialize(pt).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}
