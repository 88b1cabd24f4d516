//! Two-parameter Mittag-Leffler function
//!
//! E_{α,β}(z) = Σ_{k≥0} z^k / Γ(αk + β)
//!
//! Two evaluation regimes are combined:
//!
//! - the power series, summed in double-double arithmetic so that the
//!   alternating cancellation on the negative real axis (which costs about
//!   |z|^{1/α} / ln 10 digits) does not destroy the result;
//! - the large-|z| expansion
//!
//!   E_{α,β}(z) ≈ (1/α) Σ_m ζ_m^{1-β} exp(ζ_m) − Σ_{k=1}^{n} z^{-k} / Γ(β − αk),
//!
//!   with ζ_m = |z|^{1/α} exp(i (arg z + 2πm)/α) over the branches with
//!   |arg z + 2πm| ≤ απ. Inside the sector |arg z| > απ/2 the exponential
//!   terms decay and the algebraic sum dominates; outside it the m = 0 term
//!   grows.
//!
//! The algebraic remainder is written O(|z|^{-n-1}). In particular along
//! z = −λt^α the remainder after the leading term decays like t^{-2α}; it
//! does not grow.
//!
//! Reciprocal Gamma is used throughout, so a coefficient whose Gamma argument
//! sits on a pole is exactly zero. For β = α this removes the leading
//! algebraic term of E_{α,α}.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::gamma::{ln_abs_rgamma, ln_gamma_dd, rgamma};

/// Below this modulus the dispatcher always sums the power series.
pub const R_SWITCH: f64 = 12.0;
pub const DEFAULT_ASYMPTOTIC_TERMS: usize = 5;
pub const SERIES_TERM_CAP: usize = 10_000;
pub const ASYMPTOTIC_TERM_CAP: usize = 500;

/// Relative accuracy of a series term computed in double-double, with margin
/// for the log-magnitude route (|ln term| can reach a few hundred).
const DD_TERM_REL: f64 = 1e-29;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MlParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MlParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must lie in (0, 2], got {alpha}"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidInput(format!("beta must be finite, got {beta}")));
        }
        Ok(MlParams { alpha, beta })
    }

    /// Same α with a different β (used by the derivative recurrences).
    pub fn with_beta(self, beta: f64) -> Self {
        MlParams { beta, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Series,
    Asymptotic,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Series => "series",
            Regime::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MlResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub regime: Regime,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")))
    }
}

/// Gamma argument αk + β in double-double (exact for double α, β).
fn gamma_arg(alpha: f64, k: usize, beta: f64) -> Dd {
    Dd::prod(alpha, k as f64) + Dd::from_f64(beta)
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|j| j as f64).product()
}

/// Σ_{k≥m} k!/(k−m)! z^{k−m} / Γ(αk+β): the m-th derivative of the series.
fn series_sum(p: MlParams, z: Complex64, order: usize, tol: f64) -> Result<MlResult> {
    let MlParams { alpha, beta } = p;
    if z == Complex64::new(0.0, 0.0) {
        let value = factorial(order) * rgamma(gamma_arg(alpha, order, beta).to_f64());
        return Ok(MlResult {
            value: Complex64::new(value, 0.0),
            abs_error_estimate: f64::EPSILON * value.abs(),
            regime: Regime::Series,
        });
    }

    let zdd = CDd::from_c64(z);
    let r2 = zdd.norm_sqr();
    let ln_r = r2.ln().mul_f64(0.5);
    let unit = zdd.scale(r2.sqrt().recip());

    let mut sum = CDd::ZERO;
    let mut abs_sum = 0.0f64;
    let mut unit_pow = CDd::ONE;
    // k!/(k-m)!, starting at k = m
    let mut falling = Dd::from_f64(factorial(order));
    let mut prev_mag = 0.0f64;

    for k in order..order + SERIES_TERM_CAP {
        let x = gamma_arg(alpha, k, beta);
        let power = ln_r.mul_f64((k - order) as f64);
        let coef = if x.hi > 0.0 {
            let lmag = power - ln_gamma_dd(x);
            if lmag.hi > 709.0 {
                return Err(Error::Overflow { modulus: z.norm() });
            }
            lmag.exp() * falling
        } else if x.is_integer() {
            Dd::ZERO
        } else {
            let (l, s) = ln_abs_rgamma(x.to_f64());
            (power + Dd::from_f64(l)).exp().mul_f64(s) * falling
        };
        let mag = coef.to_f64().abs();
        sum = sum + unit_pow.scale(coef);
        abs_sum += mag;

        if k > order + 1 && x.hi > 0.0 && prev_mag > 0.0 {
            let ratio = mag / prev_mag;
            if ratio < 0.5 {
                // past the peak the term ratio decreases monotonically
                let tail = mag * ratio / (1.0 - ratio);
                let target = (1e-3 * tol).max(DD_TERM_REL * abs_sum);
                if tail <= target {
                    let value = sum.to_c64();
                    let err = tail + DD_TERM_REL * abs_sum + f64::EPSILON * value.norm();
                    return Ok(MlResult {
                        value,
                        abs_error_estimate: err,
                        regime: Regime::Series,
                    });
                }
            }
        }
        prev_mag = mag;
        unit_pow = unit_pow * unit;
        let next = (k + 1) as f64;
        falling = falling.mul_f64(next) / Dd::from_f64(next - order as f64);
    }
    Err(Error::NonConvergence {
        terms: SERIES_TERM_CAP,
        modulus: z.norm(),
    })
}

/// Truncated power series. `tol` bounds the tail; the reported estimate also
/// carries the rounding of the double-double accumulation.
pub fn eval_series(p: MlParams, z: Complex64, tol: f64) -> Result<MlResult> {
    check_tol(tol)?;
    series_sum(p, z, 0, tol)
}

struct Expansion {
    value: Complex64,
    err: f64,
}

/// Exponential contributions (1/α) ζ^{1−β} e^{ζ}. Branches within an angular
/// window of the Stokes lines arg ζ = ±π are only approximately weighted; their
/// full magnitude goes into the error estimate.
fn exponential_branches(p: MlParams, z: Complex64) -> Result<(Complex64, f64, f64)> {
    let MlParams { alpha, beta } = p;
    let r = z.norm();
    let theta = z.arg();
    let ln_r = r.ln();
    let modulus = r.powf(1.0 / alpha);
    let window = 3.0 / modulus.sqrt();

    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut abs = 0.0;
    for m in -3i32..=3 {
        let phi = (theta + 2.0 * PI * m as f64) / alpha;
        let near_stokes = (phi.abs() - PI).abs() < window;
        let weight = if phi.abs() < PI {
            1.0
        } else if phi.abs() == PI {
            0.5
        } else {
            0.0
        };
        if weight == 0.0 && !near_stokes {
            continue;
        }
        let ln_zeta = Complex64::new(ln_r / alpha, phi);
        let zeta = ln_zeta.exp();
        let expo = ln_zeta * (1.0 - beta) + zeta;
        if expo.re > 709.0 {
            return Err(Error::Overflow { modulus: r });
        }
        let mag = expo.re.exp() / alpha;
        if near_stokes {
            err += mag;
        }
        if weight > 0.0 {
            value += expo.exp() * (weight / alpha);
            abs += weight * mag;
        }
    }
    Ok((value, err, abs))
}

/// −z^{−k} / Γ(β − αk), zero when β − αk is a pole.
fn algebraic_term(p: MlParams, ln_r: f64, theta: f64, k: usize) -> Complex64 {
    let x = Dd::from_f64(p.beta) - Dd::prod(p.alpha, k as f64);
    if x.hi <= 0.0 && x.is_integer() {
        return Complex64::new(0.0, 0.0);
    }
    let (l, s) = ln_abs_rgamma(x.to_f64());
    let mag = (l - k as f64 * ln_r).exp();
    -Complex64::from_polar(s * mag, -(k as f64) * theta)
}

enum Truncation {
    Fixed(usize),
    /// Stop at the smallest term, or once terms drop below the tolerance.
    Optimal { tol: f64 },
}

fn expansion(p: MlParams, z: Complex64, truncation: Truncation) -> Result<Expansion> {
    let (branches, branch_err, branch_abs) = exponential_branches(p, z)?;
    let ln_r = z.norm().ln();
    let theta = z.arg();

    let mut value = branches;
    let mut abs_sum = branch_abs;
    let omitted;
    match truncation {
        Truncation::Fixed(n) => {
            for k in 1..=n {
                let t = algebraic_term(p, ln_r, theta, k);
                value += t;
                abs_sum += t.norm();
            }
            omitted = (n + 1..n + 64)
                .map(|k| algebraic_term(p, ln_r, theta, k).norm())
                .find(|&m| m > 0.0)
                .unwrap_or(0.0);
        }
        Truncation::Optimal { tol } => {
            let mut last = f64::INFINITY;
            let mut zero_run = 0;
            let mut first_omitted = 0.0;
            for k in 1..=ASYMPTOTIC_TERM_CAP {
                let t = algebraic_term(p, ln_r, theta, k);
                let mag = t.norm();
                if mag == 0.0 {
                    zero_run += 1;
                    if zero_run > 64 {
                        break;
                    }
                    continue;
                }
                zero_run = 0;
                if mag > last || mag < 1e-3 * tol {
                    first_omitted = mag;
                    break;
                }
                value += t;
                abs_sum += mag;
                last = mag;
            }
            omitted = first_omitted;
        }
    }
    let err = 2.0 * omitted + branch_err + 4.0 * f64::EPSILON * (abs_sum + value.norm());
    Ok(Expansion { value, err })
}

fn sector_check(p: MlParams, z: Complex64) -> Result<()> {
    let arg = z.arg().abs();
    let half_angle = p.alpha * PI / 2.0;
    if z == Complex64::new(0.0, 0.0) || arg <= half_angle {
        return Err(Error::OutsideSector { arg, half_angle });
    }
    Ok(())
}

/// Large-|z| expansion with exactly `num_terms` algebraic terms.
///
/// The estimate is twice the first omitted non-zero algebraic term, plus the
/// magnitude of any exponential branch close to a Stokes line, plus rounding.
pub fn eval_asymptotic(p: MlParams, z: Complex64, num_terms: usize) -> Result<MlResult> {
    if num_terms == 0 || num_terms > ASYMPTOTIC_TERM_CAP {
        return Err(Error::InvalidInput(format!(
            "num_terms must be in 1..={ASYMPTOTIC_TERM_CAP}, got {num_terms}"
        )));
    }
    sector_check(p, z)?;
    let e = expansion(p, z, Truncation::Fixed(num_terms))?;
    Ok(MlResult {
        value: e.value,
        abs_error_estimate: e.err,
        regime: Regime::Asymptotic,
    })
}

/// The algebraic part −Σ_{k=1}^{n} z^{−k}/Γ(β−αk) on its own.
pub fn algebraic_expansion(p: MlParams, z: Complex64, num_terms: usize) -> Complex64 {
    let ln_r = z.norm().ln();
    let theta = z.arg();
    (1..=num_terms)
        .map(|k| algebraic_term(p, ln_r, theta, k))
        .sum()
}

/// Regime dispatcher.
///
/// |z| ≤ [`R_SWITCH`]: power series. Beyond it the expansion is tried with
/// optimal truncation; if its estimate misses `tol` and the series is still
/// numerically viable (its double-double rounding, ~1e-29·exp(|z|^{1/α}), is
/// smaller than the expansion error), the series is summed too and the result
/// with the smaller estimate wins. The returned estimate may exceed `tol` when
/// neither route reaches it.
pub fn eval(p: MlParams, z: Complex64, tol: f64) -> Result<MlResult> {
    check_tol(tol)?;
    if z.norm() <= R_SWITCH {
        return series_sum(p, z, 0, tol);
    }
    let e = expansion(p, z, Truncation::Optimal { tol })?;
    let asym = MlResult {
        value: e.value,
        abs_error_estimate: e.err,
        regime: Regime::Asymptotic,
    };
    if asym.abs_error_estimate <= tol {
        return Ok(asym);
    }
    let predicted = DD_TERM_REL * z.norm().powf(1.0 / p.alpha).min(700.0).exp();
    if predicted < asym.abs_error_estimate {
        match series_sum(p, z, 0, tol) {
            Ok(s) if s.abs_error_estimate < asym.abs_error_estimate => return Ok(s),
            Ok(_) | Err(Error::NonConvergence { .. }) | Err(Error::Overflow { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(asym)
}

/// m-th derivative in z.
///
/// Small |z| differentiates the series term by term. Large |z| uses
///
///   α z E^{(m)}_{α,β} = E^{(m−1)}_{α,β−1} − (β − 1 + α(m−1)) E^{(m−1)}_{α,β},
///
/// so only function values at β, β−1, …, β−m are needed.
pub fn ml_derivative(p: MlParams, z: Complex64, order: usize, tol: f64) -> Result<MlResult> {
    check_tol(tol)?;
    if order == 0 {
        return eval(p, z, tol);
    }
    if order > 63 {
        return Err(Error::InvalidInput(format!(
            "derivative order {order} exceeds the block-size limit"
        )));
    }
    if z.norm() <= R_SWITCH {
        return series_sum(p, z, order, tol);
    }
    // level[j] holds E^{(i)}_{α, β−j}
    let mut level = (0..=order)
        .map(|j| eval(p.with_beta(p.beta - j as f64), z, tol))
        .collect::<Result<Vec<_>>>()?;
    let az = z * p.alpha;
    for i in 1..=order {
        level = (0..=order - i)
            .map(|j| {
                let c = p.beta - j as f64 - 1.0 + p.alpha * (i - 1) as f64;
                let (hi, lo) = (level[j + 1], level[j]);
                MlResult {
                    value: (hi.value - lo.value * c) / az,
                    abs_error_estimate: (hi.abs_error_estimate + c.abs() * lo.abs_error_estimate)
                        / az.norm(),
                    regime: if hi.regime == Regime::Asymptotic || lo.regime == Regime::Asymptotic {
                        Regime::Asymptotic
                    } else {
                        Regime::Series
                    },
                }
            })
            .collect();
    }
    Ok(level[0])
}

/// Real-argument convenience wrapper used throughout the crate.
pub fn eval_real(alpha: f64, beta: f64, x: f64, tol: f64) -> Result<MlResult> {
    eval(MlParams::new(alpha, beta)?, Complex64::new(x, 0.0), tol)
}
