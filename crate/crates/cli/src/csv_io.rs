//! CSV schemas (version 1).
//!
//! | file       | columns                              |
//! |------------|--------------------------------------|
//! | 1-D scan   | `delta, x1_sample, x2_sample, period` |
//! | 2-D scan   | `p1, p2, period, diverged`           |
//! | orbit      | `step, x1, x2`                       |
//!
//! Reals are written in shortest round-trip scientific notation, so reading a file
//! back gives the same doubles. `period` is an integer, `aperiodic` or `diverged`. A
//! 1-D cell without samples (a diverged orbit) has one row with empty sample fields.

use std::io::{Read, Write};

use duopoly_core::dynamics::ScanResult;
use duopoly_core::model::State;

pub const SCAN1D_HEADER: [&str; 4] = ["delta", "x1_sample", "x2_sample", "period"];
pub const SCAN2D_HEADER: [&str; 4] = ["p1", "p2", "period", "diverged"];
pub const ORBIT_HEADER: [&str; 3] = ["step", "x1", "x2"];

#[derive(Debug, Clone, PartialEq)]
pub struct Scan1dRow {
    pub delta: f64,
    pub sample: Option<State>,
    pub period: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scan2dRow {
    pub p1: f64,
    pub p2: f64,
    pub period: String,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRow {
    pub step: usize,
    pub point: State,
}

#[derive(Debug)]
pub enum CsvError {
    Csv(csv::Error),
    Schema(String),
}

impl std::fmt::Display for CsvError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CsvError::Csv(e) => write!(f, "{e}"),
            CsvError::Schema(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for CsvError {}

impl From<csv::Error> for CsvError {
    fn from(e: csv::Error) -> Self {
        CsvError::Csv(e)
    }
}

pub fn real(v: f64) -> String {
    format!("{v:e}")
}

fn parse_real(s: &str, line: u64) -> Result<f64, CsvError> {
    s.parse().map_err(|_| CsvError::Schema(format!("record {line}: '{s}' is not a number")))
}

pub fn scan1d_rows(r: &ScanResult) -> Vec<Scan1dRow> {
    let mut rows = Vec::new();
    for c in &r.cells {
        let period = c.verdict.token();
        if c.samples.is_empty() {
            rows.push(Scan1dRow { delta: c.p1, sample: None, period });
        } else {
            rows.extend(c.samples.iter().map(|s| Scan1dRow {
                delta: c.p1,
                sample: Some(*s),
                period: period.clone(),
            }));
        }
    }
    rows
}

pub fn scan2d_rows(r: &ScanResult) -> Vec<Scan2dRow> {
    r.cells
        .iter()
        .map(|c| Scan2dRow {
            p1: c.p1,
            p2: c.p2.unwrap_or(f64::NAN),
            period: c.verdict.token(),
            diverged: c.verdict.kind == duopoly_core::dynamics::PeriodKind::Diverged,
        })
        .collect()
}

/// Rows for recorded states numbered from `first_step`.
pub fn orbit_rows(points: &[State], first_step: usize) -> Vec<OrbitRow> {
    points.iter().enumerate().map(|(i, p)| OrbitRow { step: first_step + i, point: *p }).collect()
}

pub fn write_scan1d<W: Write>(w: W, rows: &[Scan1dRow]) -> Result<(), CsvError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SCAN1D_HEADER)?;
    for r in rows {
        let (a, b) = match r.sample {
            Some(s) => (real(s.x1), real(s.x2)),
            None => (String::new(), String::new()),
        };
        out.write_record([real(r.delta), a, b, r.period.clone()])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_scan2d<W: Write>(w: W, rows: &[Scan2dRow]) -> Result<(), CsvError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SCAN2D_HEADER)?;
    for r in rows {
        out.write_record([real(r.p1), real(r.p2), r.period.clone(), r.diverged.to_string()])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_orbit<W: Write>(w: W, rows: &[OrbitRow]) -> Result<(), CsvError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(ORBIT_HEADER)?;
    for r in rows {
        out.write_record([r.step.to_string(), real(r.point.x1), real(r.point.x2)])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn records<R: Read>(r: R, header: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>, CsvError> {
    let mut rd = csv::Reader::from_reader(r);
    let h = rd.headers()?.clone();
    if h.iter().ne(header.iter().copied()) {
        return Err(CsvError::Schema(format!("header {:?} does not match {header:?}", h.iter().collect::<Vec<_>>())));
    }
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        out.push((i as u64 + 1, rec?));
    }
    Ok(out)
}

pub fn read_scan1d<R: Read>(r: R) -> Result<Vec<Scan1dRow>, CsvError> {
    records(r, &SCAN1D_HEADER)?
        .into_iter()
        .map(|(n, rec)| {
            let sample = match (&rec[1], &rec[2]) {
                ("", "") => None,
                (a, b) => Some(State::new(parse_real(a, n)?, parse_real(b, n)?)),
            };
            Ok(Scan1dRow {
                delta: parse_real(&rec[0], n)?,
                sample,
                period: rec[3].to_string(),
            })
        })
        .collect()
}

pub fn read_scan2d<R: Read>(r: R) -> Result<Vec<Scan2dRow>, CsvError> {
    records(r, &SCAN2D_HEADER)?
        .into_iter()
        .map(|(n, rec)| {
            let diverged = rec[3].parse().map_err(|_| CsvError::Schema(format!("record {n}: '{}' is not a boolean", &rec[3])))?;
            Ok(Scan2dRow {
                p1: parse_real(&rec[0], n)?,
                p2: parse_real(&rec[1], n)?,
                period: rec[2].to_string(),
                diverged,
            })
        })
        .collect()
}

pub fn read_orbit<R: Read>(r: R) -> Result<Vec<OrbitRow>, CsvError> {
    records(r, &ORBIT_HEADER)?
        .into_iter()
        .map(|(n, rec)| {
            let step = rec[0].parse().map_err(|_| CsvError::Schema(format!("record {n}: '{}' is not a step", &rec[0])))?;
            Ok(OrbitRow {
                step,
                point: State::new(parse_real(&rec[1], n)?, parse_real(&rec[2], n)?),
            })
        })
        .collect()
}
