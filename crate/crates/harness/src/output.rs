//! Tabular artifacts: CSV with a header row and JSON lines.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use mstar_core::estimator::Estimate;
use serde::{Deserialize, Serialize};

use crate::RunError;

/// One point of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub seq_id: String,
    pub n: u64,
    pub value: f64,
    pub ci: f64,
    pub samples: u64,
    pub seed: u64,
    pub mode: String,
}

impl Record {
    pub fn new(seq_id: &str, n: u64, e: &Estimate) -> Self {
        Record {
            seq_id: seq_id.to_string(),
            n,
            value: e.value(),
            ci: e.ci_halfwidth,
            samples: e.samples,
            seed: e.seed,
            mode: e.mode.to_string(),
        }
    }
}

/// A truncated-limit estimate for one sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PStarRecord {
    pub sentence: String,
    pub value: f64,
    pub ci: f64,
    pub samples: u64,
    pub seed: u64,
    pub undecided: u64,
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), RunError> {
    let mut w = BufWriter::new(File::create(path)?);
    for row in rows {
        serde_json::to_writer(&mut w, row)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_jsonl_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![
            Record {
                seq_id: "constant:a0, \"quoted\"".into(),
                n: 1,
                value: 0.25,
                ci: 0.01,
                samples: 4,
                seed: 9,
                mode: "exact".into(),
            },
            Record { seq_id: "atom_chain".into(), n: 2, value: 1.0, ci: 0.0, samples: 4, seed: 9, mode: "monte_carlo".into() },
        ];
        let csv_path = dir.path().join("t.csv");
        write_csv(&csv_path, &rows).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        assert!(text.starts_with("seq_id,n,value,ci,samples,seed,mode\n"));
        assert!(text.contains("\"constant:a0, \"\"quoted\"\"\""));
        let back: Vec<Record> = csv::Reader::from_path(&csv_path).unwrap().deserialize().map(|r| r.unwrap()).collect();
        assert_eq!(back, rows);
        let jl = dir.path().join("t.jsonl");
        write_jsonl(&jl, &rows).unwrap();
        let back: Vec<Record> = std::fs::read_to_string(&jl).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(back, rows);
    }
}
