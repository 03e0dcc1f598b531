//! Run persistence: line-delimited JSON records plus an error quarantine.
//!
//! One JSON object per line keeps writes append-only, so a crashed matrix
//! leaves a valid prefix behind. Records carry the best hypercomplex
//! solution itself, which lets the refinement phase be re-run later
//! against stored results.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypernum::Quaternion;

/// Bumped whenever the record layout changes incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

/// One persisted run of the two-phase pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub function: String,
    pub n: usize,
    pub seed: u64,
    /// Fitness under the Euclidean projection.
    pub baseline_fitness: f64,
    /// Fitness under the refined projection exponent.
    pub refined_fitness: f64,
    pub p_star: f64,
    pub qpso_time_s: f64,
    pub lio_time_s: f64,
    pub iterations_used: usize,
    pub stopped_early: bool,
    pub timestamp_unix_s: u64,
    pub config_hash: String,
    /// Best hypercomplex solution, one quaternion per decision variable.
    pub q_star: Vec<Quaternion>,
}

/// A failed run, quarantined next to the results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub function: String,
    pub n: usize,
    pub seed: u64,
    pub error: String,
}

/// Path of the quarantine file derived from a results path.
pub fn errors_path(results: &Path) -> PathBuf {
    let mut name = results.as_os_str().to_os_string();
    name.push(".errors");
    PathBuf::from(name)
}

/// Incremental, flush-per-record writer.
#[derive(Debug)]
pub struct RecordWriter {
    records: BufWriter<File>,
    errors_path: PathBuf,
    errors: Option<BufWriter<File>>,
}

impl RecordWriter {
    /// Creates (truncates) the results file. The quarantine file is only
    /// created once the first failure arrives.
    pub fn create(path: &Path) -> Result<Self> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let file = File::create(path)?;
        Ok(Self {
            records: BufWriter::new(file),
            errors_path: errors_path(path),
            errors: None,
        })
    }

    pub fn append(&mut self, record: &RunRecord) -> Result<()> {
        let line = serde_json::to_string(record)?;
        self.records.write_all(line.as_bytes())?;
        self.records.write_all(b"\n")?;
        self.records.flush()?;
        Ok(())
    }

    pub fn quarantine(&mut self, failure: &FailureRecord) -> Result<()> {
        if self.errors.is_none() {
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(&self.errors_path)?;
            self.errors = Some(BufWriter::new(file));
        }
        let sink = self.errors.as_mut().expect("just created");
        let line = serde_json::to_string(failure)?;
        sink.write_all(line.as_bytes())?;
        sink.write_all(b"\n")?;
        sink.flush()?;
        Ok(())
    }
}

/// Writes a whole record set at once.
pub fn write_records(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut writer = RecordWriter::create(path)?;
    for record in records {
        writer.append(record)?;
    }
    Ok(())
}

/// Reads every record of a results file, rejecting unknown schemas.
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RunRecord =
            serde_json::from_str(&line).map_err(|source| Error::MalformedRecord {
                path: path.to_path_buf(),
                line: index + 1,
                source,
            })?;
        if record.schema_version != SCHEMA_VERSION {
            return Err(Error::UnsupportedSchema {
                found: record.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_record(seed: u64) -> RunRecord {
        RunRecord {
            schema_version: SCHEMA_VERSION,
            function: "sphere".into(),
            n: 2,
            seed,
            baseline_fitness: 0.125 + seed as f64,
            refined_fitness: 0.0625,
            p_star: 1.75,
            qpso_time_s: 1.5,
            lio_time_s: 0.125,
            iterations_used: 321,
            stopped_early: true,
            timestamp_unix_s: 1_700_000_000,
            config_hash: "deadbeef".into(),
            q_star: vec![
                Quaternion::new(0.1, 0.2, 0.3, 0.4).unwrap(),
                Quaternion::new(1.0, 0.0, 0.5, 0.25).unwrap(),
            ],
        }
    }

    #[test]
    fn round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.ndjson");
        let records: Vec<RunRecord> = (0..10).map(sample_record).collect();
        write_records(&path, &records).unwrap();
        let parsed = read_records(&path).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn appends_survive_partial_writes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.ndjson");
        let mut writer = RecordWriter::create(&path).unwrap();
        writer.append(&sample_record(1)).unwrap();
        writer.append(&sample_record(2)).unwrap();
        // Reading while the writer is still alive sees the flushed prefix.
        let parsed = read_records(&path).unwrap();
        assert_eq!(parsed.len(), 2);
    }

    #[test]
    fn malformed_lines_are_reported_with_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.ndjson");
        std::fs::write(&path, "{\"not\": \"a record\"}\n").unwrap();
        let err = read_records(&path).unwrap_err();
        assert!(matches!(err, Error::MalformedRecord { line: 1, .. }));
    }

    #[test]
    fn unknown_schema_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.ndjson");
        let mut record = sample_record(0);
        record.schema_version = 99;
        write_records(&path, std::slice::from_ref(&record)).unwrap();
        assert!(matches!(
            read_records(&path),
            Err(Error::UnsupportedSchema { found: 99, .. })
        ));
    }

    #[test]
    fn quarantine_file_only_appears_on_failure() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.ndjson");
        let mut writer = RecordWriter::create(&path).unwrap();
        writer.append(&sample_record(0)).unwrap();
        assert!(!errors_path(&path).exists());
        writer
            .quarantine(&FailureRecord {
                function: "sphere".into(),
                n: 2,
                seed: 7,
                error: "boom".into(),
            })
            .unwrap();
        let quarantined = std::fs::read_to_string(errors_path(&path)).unwrap();
        assert!(quarantined.contains("boom"));
    }

    #[test]
    fn non_finite_solutions_cannot_be_smuggled_in() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.ndjson");
        let line = r#"{"schema_version":1,"function":"sphere","n":1,"seed":0,"baseline_fitness":1.0,"refined_fitness":1.0,"p_star":2.0,"qpso_time_s":1.0,"lio_time_s":0.1,"iterations_used":1,"stopped_early":false,"timestamp_unix_s":0,"config_hash":"x","q_star":[[null,0.0,0.0,0.0]]}"#;
        std::fs::write(&path, line).unwrap();
        assert!(matches!(
            read_records(&path),
            Err(Error::MalformedRecord { .. })
        ));
    }
}
