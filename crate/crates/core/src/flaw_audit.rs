//! Numerical check that Mittag-Leffler functions decay algebraically, not
//! exponentially, along the negative real axis.
//!
//! For λ > 0 and 1 < α < 2,
//!
//!   E_{α,β}(−λt^α) ≈ 1 / (Γ(β−α) λ t^α)               for β ∈ {1, 2},
//!   E_{α,α}(−λt^α) ≈ −1 / (Γ(−α) λ² t^{2α})           (Γ(0) kills the t^{−α} term),
//!
//! so `|E| t^p` settles to a positive constant with p = α resp. 2α. Any bound
//! of the form `|E_{α,β}(−λt^α)| ≤ exp(−λt)` fails for large t.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ml_scalar::{eval, eval_series, MlParams};

pub const POINTS_PER_DECADE: usize = 512;
pub const DEFAULT_T_MAX: f64 = 1e3;
/// Allowed relative change of the decade mean of `|E| t^p`.
pub const STABILIZATION_TOL: f64 = 0.5;
const ML_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Dispatch,
    /// Power series only; usable where it converges.
    SeriesOnly,
}

/// `|E_{α,β}(−λt^α)|`
pub fn abs_ml(alpha: f64, beta: f64, lambda: f64, t: f64, mode: EvalMode) -> Result<f64> {
    let p = MlParams::new(alpha, beta)?;
    let z = num_complex::Complex64::new(-lambda * t.powf(alpha), 0.0);
    let r = match mode {
        EvalMode::Dispatch => eval(p, z, ML_TOL)?,
        EvalMode::SeriesOnly => eval_series(p, z, ML_TOL)?,
    };
    Ok(r.value.re.abs())
}

/// Exponent p in the lower bound `N / t^p`.
pub fn decay_exponent(alpha: f64, beta: f64) -> f64 {
    if beta == alpha {
        2.0 * alpha
    } else {
        alpha
    }
}

fn check_case(alpha: f64, lambda: f64, beta: f64, t_max: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::InvalidInput(format!("alpha must lie in (1, 2), got {alpha}")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("lambda must be positive, got {lambda}")));
    }
    if !(beta == 1.0 || beta == 2.0 || beta == alpha) {
        return Err(Error::InvalidInput(format!(
            "beta must be 1, 2 or alpha, got {beta}"
        )));
    }
    if !(t_max >= 100.0 && t_max.is_finite()) {
        return Err(Error::InvalidInput(format!("t_max must be at least 100, got {t_max}")));
    }
    Ok(())
}

/// `POINTS_PER_DECADE` log-spaced points per decade on `[1, t_max]`.
pub fn audit_grid(t_max: f64) -> Vec<f64> {
    let decades = t_max.log10();
    let n = (decades * POINTS_PER_DECADE as f64).round() as usize;
    (0..=n)
        .map(|i| 10f64.powf(decades * i as f64 / n as f64))
        .collect()
}

struct Samples {
    t: Vec<f64>,
    abs_e: Vec<f64>,
}

fn sample(alpha: f64, beta: f64, lambda: f64, t_max: f64, mode: EvalMode) -> Result<Samples> {
    let t = audit_grid(t_max);
    let abs_e = t
        .iter()
        .map(|&ti| abs_ml(alpha, beta, lambda, ti, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(Samples { t, abs_e })
}

/// First index of the final run on which `holds` is true.
fn final_run_start(n: usize, holds: impl Fn(usize) -> bool) -> Option<usize> {
    let mut start = None;
    for i in (0..n).rev() {
        if holds(i) {
            start = Some(i);
        } else {
            break;
        }
    }
    start
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicLower {
    pub p: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub t_star: f64,
    /// `|E| t^p` at the last grid point.
    pub product_at_t_max: f64,
    pub relative_change: f64,
}

fn algebraic_lower(beta: f64, alpha: f64, s: &Samples) -> Result<AlgebraicLower> {
    let p = decay_exponent(alpha, beta);
    let prod: Vec<f64> = s.t.iter().zip(&s.abs_e).map(|(t, e)| e * t.powf(p)).collect();
    let len = prod.len();
    let decade = POINTS_PER_DECADE.min(len - 1);
    let last = &prod[len - 1 - decade..];
    let prev = &prod[len.saturating_sub(1 + 2 * decade)..len - decade];
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m_last, m_prev) = (mean(last), mean(prev));
    let relative_change = ((m_last - m_prev) / m_last).abs();
    let floor = last.iter().copied().fold(f64::INFINITY, f64::min);
    if !(relative_change <= STABILIZATION_TOL) || !(floor > 0.0) {
        return Err(Error::Unstabilized { beta, relative_change });
    }
    let n = 0.5 * floor;
    let start = final_run_start(len, |i| prod[i] > n)
        .ok_or(Error::Unstabilized { beta, relative_change })?;
    Ok(AlgebraicLower {
        p,
        n,
        t_star: s.t[start],
        product_at_t_max: prod[len - 1],
        relative_change,
    })
}

/// `N = ½ min_{last decade} |E| t^p` and the first grid time from which
/// `|E| > N/t^p` holds up to `t_max`.
pub fn audit_algebraic_lower(
    alpha: f64,
    lambda: f64,
    beta: f64,
    t_max: f64,
) -> Result<AlgebraicLower> {
    audit_algebraic_lower_with(alpha, lambda, beta, t_max, EvalMode::Dispatch)
}

pub fn audit_algebraic_lower_with(
    alpha: f64,
    lambda: f64,
    beta: f64,
    t_max: f64,
    mode: EvalMode,
) -> Result<AlgebraicLower> {
    check_case(alpha, lambda, beta, t_max)?;
    let s = sample(alpha, beta, lambda, t_max, mode)?;
    algebraic_lower(beta, alpha, &s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpComparison {
    pub t_cross: f64,
    /// `log10(|E| / exp(−λt))` at `t_cross` and at `t_max`.
    pub log10_margin_at_cross: f64,
    pub log10_margin_at_t_max: f64,
}

fn exp_comparison(beta: f64, lambda: f64, s: &Samples) -> Result<ExpComparison> {
    // compare logarithms: exp(−λt) underflows long before t_max
    let log_ratio: Vec<f64> =
        s.t.iter().zip(&s.abs_e).map(|(t, e)| e.ln() + lambda * t).collect();
    let len = log_ratio.len();
    let decade = POINTS_PER_DECADE.min(len - 1);
    let tail = &log_ratio[len - 1 - decade..];
    if let Some(w) = tail.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::Unstabilized { beta, relative_change: (w[1] - w[0]) / w[0].abs() });
    }
    let start = final_run_start(len, |i| log_ratio[i] > 0.0)
        .ok_or(Error::Unstabilized { beta, relative_change: f64::NAN })?;
    let ln10 = std::f64::consts::LN_10;
    Ok(ExpComparison {
        t_cross: s.t[start],
        log10_margin_at_cross: log_ratio[start] / ln10,
        log10_margin_at_t_max: log_ratio[len - 1] / ln10,
    })
}

/// First grid time after which `|E_{α,β}(−λt^α)| > exp(−λt)` up to `t_max`.
/// The log-ratio must increase over the final decade.
pub fn audit_exp_comparison(
    alpha: f64,
    lambda: f64,
    beta: f64,
    t_max: f64,
) -> Result<ExpComparison> {
    check_case(alpha, lambda, beta, t_max)?;
    let s = sample(alpha, beta, lambda, t_max, EvalMode::Dispatch)?;
    exp_comparison(beta, lambda, &s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginPoint {
    pub t: f64,
    #[serde(rename = "absE")]
    pub abs_e: f64,
    /// `N / t^p`
    pub comparator: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditCase {
    pub beta: f64,
    pub algebraic: AlgebraicLower,
    pub exponential: ExpComparison,
    pub verdict: bool,
    pub margin_curve: Vec<MarginPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub alpha: f64,
    pub lambda: f64,
    pub t_max: f64,
    pub beta_cases: Vec<AuditCase>,
}

impl AuditReport {
    pub fn verdict(&self) -> bool {
        self.beta_cases.iter().all(|c| c.verdict)
    }
}

pub fn audit_case(alpha: f64, lambda: f64, beta: f64, t_max: f64) -> Result<AuditCase> {
    check_case(alpha, lambda, beta, t_max)?;
    let s = sample(alpha, beta, lambda, t_max, EvalMode::Dispatch)?;
    let algebraic = algebraic_lower(beta, alpha, &s)?;
    let exponential = exp_comparison(beta, lambda, &s)?;
    let margin_curve: Vec<MarginPoint> = s
        .t
        .iter()
        .zip(&s.abs_e)
        .map(|(&t, &abs_e)| MarginPoint { t, abs_e, comparator: algebraic.n / t.powf(algebraic.p) })
        .collect();
    // the lower bound is checked on the samples directly, not taken from the fit
    let verdict = margin_curve
        .iter()
        .filter(|m| m.t >= algebraic.t_star)
        .all(|m| m.abs_e > m.comparator)
        && exponential.t_cross.is_finite();
    Ok(AuditCase { beta, algebraic, exponential, verdict, margin_curve })
}

/// All three cases β ∈ {1, α, 2}.
pub fn run_audit(alpha: f64, lambda: f64, t_max: f64) -> Result<AuditReport> {
    let beta_cases = [1.0, alpha, 2.0]
        .iter()
        .map(|&b| audit_case(alpha, lambda, b, t_max))
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditReport { alpha, lambda, t_max, beta_cases })
}
