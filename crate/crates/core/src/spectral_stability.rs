//! Sector test for the linearization of a Caputo system of order α ∈ (1, 2).
//!
//! The trivial solution is asymptotically stable when every eigenvalue of `A`
//! lies in Λ_α = {λ ≠ 0 : |arg λ| > απ/2}. The converse is not claimed: an
//! eigenvalue outside the sector only means the hypothesis fails.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ml_matrix::{decompose, SpectralDecomposition, DEFAULT_COND_CAP};

/// Thickness of the sector boundary, in radians.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Eigenvalues below `ZERO_TOL · ‖A‖` in modulus count as zero.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder {
    alpha: f64,
}

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 1.0 && alpha < 2.0 {
            Ok(FractionalOrder { alpha })
        } else {
            Err(Error::InvalidInput(format!(
                "order must satisfy 1 < alpha < 2, got {alpha}"
            )))
        }
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn half_angle(self) -> f64 {
        self.alpha * PI / 2.0
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;
    fn try_from(a: f64) -> Result<Self> {
        FractionalOrder::new(a)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(o: FractionalOrder) -> f64 {
        o.alpha
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    AsymptoticallyStable,
    Inconclusive,
    /// Some eigenvalue lies outside the sector. The theorem's hypothesis
    /// fails; instability is not proven.
    HasUnstableMode,
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityClass::AsymptoticallyStable => "asymptotically_stable",
            StabilityClass::Inconclusive => "inconclusive",
            StabilityClass::HasUnstableMode => "has_unstable_mode",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenVerdict {
    pub lambda: ComplexJson,
    pub arg_abs: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorReport {
    pub alpha: f64,
    pub half_angle: f64,
    pub per_eigenvalue: Vec<EigenVerdict>,
    pub overall: StabilityClass,
    pub note: String,
}

fn verdict_for(margin: f64) -> Verdict {
    if margin > BOUNDARY_TOL {
        Verdict::Inside
    } else if margin < -BOUNDARY_TOL {
        Verdict::Outside
    } else {
        Verdict::Boundary
    }
}

/// `|arg λ| − απ/2` and its verdict. λ = 0 is always on the boundary.
pub fn sector_test(lambda: Complex64, order: FractionalOrder) -> (f64, Verdict) {
    let margin = lambda.arg().abs() - order.half_angle();
    if lambda == Complex64::new(0.0, 0.0) {
        return (margin, Verdict::Boundary);
    }
    (margin, verdict_for(margin))
}

/// Aggregate per-eigenvalue verdicts.
pub fn overall(verdicts: &[Verdict]) -> StabilityClass {
    if verdicts.contains(&Verdict::Outside) {
        StabilityClass::HasUnstableMode
    } else if verdicts.iter().all(|v| *v == Verdict::Inside) {
        StabilityClass::AsymptoticallyStable
    } else {
        StabilityClass::Inconclusive
    }
}

pub fn report_from_decomposition(
    dec: &SpectralDecomposition,
    order: FractionalOrder,
) -> SectorReport {
    let zero = ZERO_TOL * dec.a_norm;
    let per_eigenvalue: Vec<EigenVerdict> = dec
        .eigenvalues
        .iter()
        .map(|&lambda| {
            let (margin, mut verdict) = sector_test(lambda, order);
            if lambda.norm() <= zero {
                verdict = Verdict::Boundary;
            }
            EigenVerdict {
                lambda: lambda.into(),
                arg_abs: lambda.arg().abs(),
                margin,
                verdict,
            }
        })
        .collect();
    let verdicts: Vec<Verdict> = per_eigenvalue.iter().map(|e| e.verdict).collect();
    let overall = overall(&verdicts);
    let note = match overall {
        StabilityClass::AsymptoticallyStable => {
            "spectrum strictly inside |arg λ| > απ/2: trivial solution asymptotically stable"
        }
        StabilityClass::Inconclusive => {
            "an eigenvalue lies on the sector boundary within tolerance: no conclusion"
        }
        StabilityClass::HasUnstableMode => {
            "an eigenvalue lies outside the sector: stability hypothesis fails, instability not proven"
        }
    };
    SectorReport {
        alpha: order.alpha(),
        half_angle: order.half_angle(),
        per_eigenvalue,
        overall,
        note: note.to_string(),
    }
}

pub fn classify(a: &DMatrix<f64>, order: FractionalOrder) -> Result<SectorReport> {
    let dec = decompose(a, DEFAULT_COND_CAP)?;
    Ok(report_from_decomposition(&dec, order))
}
