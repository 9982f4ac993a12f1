use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// One row of a solver trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub psi: f64,
    pub phi: f64,
    pub snr_db: Option<f64>,
    pub rel_change: f64,
    pub time_s: f64,
}

/// Per-iteration history of a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverTrace {
    pub records: Vec<TraceRecord>,
}

pub const TRACE_HEADER: [&str; 6] = ["iter", "psi", "phi", "snr_db", "rel_change", "time_s"];

impl SolverTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn psi(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.psi).collect()
    }

    pub fn snr(&self) -> Vec<Option<f64>> {
        self.records.iter().map(|r| r.snr_db).collect()
    }

    /// Writes `iter,psi,phi,snr_db,rel_change,time_s`; `snr_db` is empty when
    /// no reference was available.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(TRACE_HEADER)?;
        for r in &self.records {
            w.write_record([
                r.k.to_string(),
                format!("{:e}", r.psi),
                format!("{:e}", r.phi),
                r.snr_db.map(|s| format!("{s:.6}")).unwrap_or_default(),
                format!("{:e}", r.rel_change),
                format!("{:.6}", r.time_s),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let trace = SolverTrace {
            records: vec![
                TraceRecord {
                    k: 1,
                    psi: 2.5,
                    phi: 3.0,
                    snr_db: Some(10.0),
                    rel_change: 0.5,
                    time_s: 0.001,
                },
                TraceRecord {
                    k: 2,
                    psi: 2.0,
                    phi: 2.5,
                    snr_db: None,
                    rel_change: 0.25,
                    time_s: 0.002,
                },
            ],
        };
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "iter,psi,phi,snr_db,rel_change,time_s");
        assert_eq!(lines[1], "1,2.5e0,3e0,10.000000,5e-1,0.001000");
        assert_eq!(lines[2], "2,2e0,2.5e0,,2.5e-1,0.002000");
    }
}
