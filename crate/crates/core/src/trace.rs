//! Best-error-versus-NFC records of a single run.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub nfc: u64,
    pub best_error: f64,
}

/// Right-continuous step function of best error over NFC.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    points: Vec<TracePoint>,
}

pub const TRACE_CSV_HEADER: &str = "nfc,best_error";

impl ConvergenceTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_points(points: Vec<TracePoint>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<&TracePoint> {
        self.points.last()
    }

    pub fn push(&mut self, nfc: u64, best_error: f64) {
        self.points.push(TracePoint { nfc, best_error });
    }

    /// Error in force at `nfc`: the latest record with `record.nfc <= nfc`,
    /// or the first record when `nfc` precedes every record.
    pub fn value_at(&self, nfc: u64) -> Option<f64> {
        let first = self.points.first()?;
        let after = self.points.partition_point(|p| p.nfc <= nfc);
        Some(if after == 0 {
            first.best_error
        } else {
            self.points[after - 1].best_error
        })
    }

    pub fn is_non_increasing(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].best_error <= w[0].best_error && w[1].nfc >= w[0].nfc)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(16 * (self.points.len() + 1));
        out.push_str(TRACE_CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(out, "{},{:e}", p.nfc, p.best_error);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == TRACE_CSV_HEADER => {}
            other => {
                return Err(Error::Lookup(format!(
                    "trace header should be {TRACE_CSV_HEADER:?}, found {other:?}"
                )))
            }
        }
        let mut points = Vec::new();
        for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = || Error::Lookup(format!("trace line {}: cannot parse {line:?}", n + 2));
            let (nfc, err) = line.split_once(',').ok_or_else(bad)?;
            points.push(TracePoint {
                nfc: nfc.trim().parse().map_err(|_| bad())?,
                best_error: err.trim().parse().map_err(|_| bad())?,
            });
        }
        Ok(Self { points })
    }
}
