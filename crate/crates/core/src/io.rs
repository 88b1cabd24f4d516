//! JSON input schemas and CSV output.
//!
//! System file:
//!
//! ```json
//! {"alpha": 1.5, "A": [[-1.0]], "f": [[{"c": 1.0, "e": [2]}]]}
//! ```
//!
//! `f` lists the terms of every output component; it may be omitted for a
//! linear system. Initial data: `{"x0": [...], "x1": [...]}`.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fde_solver::{InitialData, SystemSpec, Trajectory};
use crate::flaw_audit::AuditCase;
use crate::polynomial::{PolynomialMap, Term};
use crate::spectral_stability::FractionalOrder;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub alpha: f64,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(default)]
    pub f: Option<Vec<Vec<Term>>>,
}

impl SystemFile {
    pub fn into_spec(self) -> Result<SystemSpec> {
        let d = self.a.len();
        if d == 0 || self.a.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput("A must be a non-empty square array".into()));
        }
        let a = DMatrix::from_row_iterator(d, d, self.a.into_iter().flatten());
        let f = match self.f {
            Some(c) => PolynomialMap::new(d, c)?,
            None => PolynomialMap::zero(d),
        };
        SystemSpec::new(a, f, FractionalOrder::new(self.alpha)?)
    }

    pub fn from_spec(s: &SystemSpec) -> Self {
        SystemFile {
            alpha: s.alpha(),
            a: s.a.row_iter().map(|r| r.iter().copied().collect()).collect(),
            f: Some(s.f.components().to_vec()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitFile {
    pub x0: Vec<f64>,
    pub x1: Vec<f64>,
}

impl InitFile {
    pub fn into_init(self) -> Result<InitialData> {
        InitialData::new(self.x0, self.x1)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn parse_system(text: &str) -> Result<SystemSpec> {
    serde_json::from_str::<SystemFile>(text)
        .map_err(|e| Error::InvalidInput(e.to_string()))?
        .into_spec()
}

pub fn read_system(path: &Path) -> Result<SystemSpec> {
    read_json::<SystemFile>(path)?.into_spec()
}

pub fn read_init(path: &Path) -> Result<InitialData> {
    read_json::<InitFile>(path)?.into_init()
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("CSV output failed: {e}"))
}

/// Header `t,x1,...,xd`, one row per grid point.
pub fn write_trajectory_csv<W: Write>(tr: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let d = tr.states.first().map_or(0, |x| x.len());
    let header: Vec<String> =
        std::iter::once("t".to_string()).chain((1..=d).map(|i| format!("x{i}"))).collect();
    w.write_record(&header).map_err(csv_err)?;
    for (t, x) in tr.times.iter().zip(&tr.states) {
        let row: Vec<String> =
            std::iter::once(t.to_string()).chain(x.iter().map(|v| v.to_string())).collect();
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

/// Header `t,absE,comparator`.
pub fn write_margin_csv<W: Write>(case: &AuditCase, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "absE", "comparator"]).map_err(csv_err)?;
    for m in &case.margin_curve {
        w.write_record([m.t.to_string(), m.abs_e.to_string(), m.comparator.to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}
