//! Solvers for `D^α x = A x + f(x)`, `x(0) = x0`, `x'(0) = x1`, 1 < α < 2.
//!
//! Two independent discretizations:
//!
//! - [`solve_pc`]: fractional Adams–Bashforth–Moulton on the Volterra form
//!   `x(t) = x0 + t x1 + (1/Γ(α)) ∫_0^t (t−τ)^{α−1} (A x + f(x))(τ) dτ`;
//! - [`solve_voc`]: the variation-of-constants formula, where `A` is absorbed
//!   into matrix Mittag-Leffler functions and only `f` sits under the
//!   integral, discretized by product trapezoidal quadrature with exact
//!   weights.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::ml_matrix::{decompose, ml_apply, SpectralDecomposition, DEFAULT_COND_CAP};
use crate::ml_scalar::MlParams;
use crate::polynomial::PolynomialMap;
use crate::spectral_stability::FractionalOrder;

pub const BLOWUP_THRESHOLD: f64 = 1e12;
pub const CORRECTOR_SANITY: f64 = 1e6;
pub const MAX_STEPS: f64 = 1e7;
const ML_TOL: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub a: DMatrix<f64>,
    pub f: PolynomialMap,
    pub order: FractionalOrder,
}

impl SystemSpec {
    pub fn new(a: DMatrix<f64>, f: PolynomialMap, order: FractionalOrder) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(Error::InvalidInput("A must be square and non-empty".into()));
        }
        if f.dim() != a.nrows() {
            return Err(Error::InvalidInput(format!(
                "nonlinearity dimension {} does not match A ({})",
                f.dim(),
                a.nrows()
            )));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("A has non-finite entries".into()));
        }
        Ok(SystemSpec { a, f, order })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn alpha(&self) -> f64 {
        self.order.alpha()
    }

    pub fn rhs(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x + self.f.eval(x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialData {
    pub x0: DVector<f64>,
    pub x1: DVector<f64>,
}

impl InitialData {
    pub fn new(x0: Vec<f64>, x1: Vec<f64>) -> Result<Self> {
        if x0.len() != x1.len() {
            return Err(Error::InvalidInput("x0 and x1 differ in length".into()));
        }
        if x0.iter().chain(&x1).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("initial data must be finite".into()));
        }
        Ok(InitialData { x0: DVector::from_vec(x0), x1: DVector::from_vec(x1) })
    }

    pub fn zeros(d: usize) -> Self {
        InitialData { x0: DVector::zeros(d), x1: DVector::zeros(d) }
    }

    /// max(‖x0‖∞, ‖x1‖∞)
    pub fn norm(&self) -> f64 {
        self.x0.amax().max(self.x1.amax())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    PredictorCorrector,
    VocQuadrature,
    PerronIteration,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::PredictorCorrector => "predictor_corrector",
            Method::VocQuadrature => "voc_quadrature",
            Method::PerronIteration => "perron_iteration",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
    pub method: Method,
    pub step: f64,
}

impl Trajectory {
    /// Sup over common grid points of the max-norm difference.
    pub fn sup_distance(&self, other: &Trajectory) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| (a - b).amax())
            .fold(0.0, f64::max)
    }

    /// Largest state norm over grid times in `[t0, t1]`.
    pub fn max_norm_between(&self, t0: f64, t1: f64) -> f64 {
        self.times
            .iter()
            .zip(&self.states)
            .filter(|(t, _)| **t >= t0 && **t <= t1)
            .map(|(_, x)| x.amax())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.states.iter().map(|x| x.amax()).fold(0.0, f64::max)
    }

    pub fn last(&self) -> &DVector<f64> {
        self.states.last().expect("trajectory is never empty")
    }

    /// State at the grid point nearest to `t`.
    pub fn at(&self, t: f64) -> &DVector<f64> {
        let i = ((t / self.step).round() as usize).min(self.states.len() - 1);
        &self.states[i]
    }
}

/// Number of steps of the uniform grid covering `[0, t_end]`.
pub(crate) fn grid_steps(h: f64, t_end: f64) -> Result<usize> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!("t_end must be non-negative, got {t_end}")));
    }
    if t_end == 0.0 {
        return Ok(0);
    }
    if !(h > 0.0 && h <= t_end) {
        return Err(Error::InvalidInput(format!(
            "step must satisfy 0 < h <= t_end, got h = {h}, t_end = {t_end}"
        )));
    }
    let n = t_end / h;
    if n > MAX_STEPS {
        return Err(Error::InvalidInput(format!("t_end/h = {n} exceeds {MAX_STEPS}")));
    }
    Ok((n - 1e-9).ceil() as usize)
}

fn check_init(s: &SystemSpec, init: &InitialData) -> Result<()> {
    if init.x0.len() != s.dim() || init.x1.len() != s.dim() {
        return Err(Error::InvalidInput(format!(
            "initial data has dimension {} but the system has {}",
            init.x0.len(),
            s.dim()
        )));
    }
    Ok(())
}

fn check_blowup(x: &DVector<f64>, t: f64) -> Result<()> {
    let n = x.amax();
    if !(n <= BLOWUP_THRESHOLD) {
        return Err(Error::Blowup { time: t, threshold: BLOWUP_THRESHOLD });
    }
    Ok(())
}

fn check_corrector(pred: &DVector<f64>, corr: &DVector<f64>, t: f64) -> Result<()> {
    let residual = (corr - pred).amax();
    if residual > CORRECTOR_SANITY * (1.0 + corr.amax()) {
        return Err(Error::StepTooLarge { time: t, residual });
    }
    Ok(())
}

/// Fractional Adams–Bashforth–Moulton predictor-corrector with one corrector
/// pass per step. Product-rectangle predictor, product-trapezoid corrector.
pub fn solve_pc(s: &SystemSpec, init: &InitialData, h: f64, t_end: f64) -> Result<Trajectory> {
    check_init(s, init)?;
    let n_steps = grid_steps(h, t_end)?;
    let alpha = s.alpha();
    let c_pred = h.powf(alpha) / gamma(alpha + 1.0);
    let c_corr = h.powf(alpha) / gamma(alpha + 2.0);

    // b_m = (m+1)^α − m^α;  a_m = (m+2)^{α+1} − 2(m+1)^{α+1} + m^{α+1}
    let pw = |m: usize, e: f64| (m as f64).powf(e);
    let b: Vec<f64> = (0..n_steps.max(1)).map(|m| pw(m + 1, alpha) - pw(m, alpha)).collect();
    let a: Vec<f64> = (0..n_steps.max(1))
        .map(|m| pw(m + 2, alpha + 1.0) - 2.0 * pw(m + 1, alpha + 1.0) + pw(m, alpha + 1.0))
        .collect();

    let d = s.dim();
    let mut times = vec![0.0];
    let mut states = vec![init.x0.clone()];
    let mut rhs = vec![s.rhs(&init.x0)];

    for n in 0..n_steps {
        let t = (n + 1) as f64 * h;
        let free = &init.x0 + &init.x1 * t;

        let mut pred_sum = DVector::zeros(d);
        for j in 0..=n {
            pred_sum.axpy(b[n - j], &rhs[j], 1.0);
        }
        let pred = &free + pred_sum * c_pred;
        check_blowup(&pred, t)?;

        let nf = n as f64;
        let a0 = nf.powf(alpha + 1.0) - (nf - alpha) * (nf + 1.0).powf(alpha);
        let mut corr_sum = s.rhs(&pred) + &rhs[0] * a0;
        for j in 1..=n {
            corr_sum.axpy(a[n - j], &rhs[j], 1.0);
        }
        let x = &free + corr_sum * c_corr;
        check_blowup(&x, t)?;
        check_corrector(&pred, &x, t)?;

        rhs.push(s.rhs(&x));
        states.push(x);
        times.push(t);
    }
    Ok(Trajectory { times, states, method: Method::PredictorCorrector, step: h })
}

/// Product-quadrature weights for `∫_0^{t_n} K(t_n − τ) g(τ) dτ` with `g`
/// piecewise linear, `K(u) = u^{α−1} E_{α,α}(u^α A)`.
///
/// With `G1(u) = u^α E_{α,α+1}(u^α A)` (so `G1' = K`) and
/// `G2(u) = u^{α+1} E_{α,α+2}(u^α A)` (so `G2' = G1`), the subinterval
/// `u ∈ [mh, (m+1)h]` contributes `P_m g(t_n − (m+1)h) + Q_m g(t_n − mh)`.
pub(crate) struct VocWeights {
    pub p: Vec<DMatrix<f64>>,
    pub q: Vec<DMatrix<f64>>,
}

pub(crate) fn voc_weights(
    dec: &SpectralDecomposition,
    alpha: f64,
    h: f64,
    n_steps: usize,
) -> Result<VocWeights> {
    let p1 = MlParams::new(alpha, alpha + 1.0)?;
    let p2 = MlParams::new(alpha, alpha + 2.0)?;
    let mut g1 = Vec::with_capacity(n_steps + 1);
    let mut g2 = Vec::with_capacity(n_steps + 1);
    for m in 0..=n_steps {
        let u = m as f64 * h;
        g1.push(ml_apply(dec, p1, u, ML_TOL)? * u.powf(alpha));
        g2.push(ml_apply(dec, p2, u, ML_TOL)? * u.powf(alpha + 1.0));
    }
    let mut p = Vec::with_capacity(n_steps);
    let mut q = Vec::with_capacity(n_steps);
    for m in 0..n_steps {
        let i_m = &g1[m + 1] - &g1[m];
        let p_m = (&g1[m + 1] * h - (&g2[m + 1] - &g2[m])) / h;
        q.push(i_m - &p_m);
        p.push(p_m);
    }
    Ok(VocWeights { p, q })
}

/// `E_{α,1}(t^α A)` and `t E_{α,2}(t^α A)`.
pub(crate) fn free_propagators(
    dec: &SpectralDecomposition,
    alpha: f64,
    t: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let phi1 = ml_apply(dec, MlParams::new(alpha, 1.0)?, t, ML_TOL)?;
    let phi2 = ml_apply(dec, MlParams::new(alpha, 2.0)?, t, ML_TOL)? * t;
    Ok((phi1, phi2))
}

/// Variation-of-constants quadrature. The implicit endpoint term is resolved
/// by one predictor (using `f(x_{n−1})`) and one corrector substitution.
pub fn solve_voc(s: &SystemSpec, init: &InitialData, h: f64, t_end: f64) -> Result<Trajectory> {
    check_init(s, init)?;
    let n_steps = grid_steps(h, t_end)?;
    let alpha = s.alpha();
    let dec = decompose(&s.a, DEFAULT_COND_CAP)?;
    let w = voc_weights(&dec, alpha, h, n_steps)?;
    let nonlinear = !s.f.is_zero();

    let d = s.dim();
    let mut times = vec![0.0];
    let mut states = vec![init.x0.clone()];
    let mut g = vec![s.f.eval(&init.x0)];

    for n in 1..=n_steps {
        let t = n as f64 * h;
        let (phi1, phi2) = free_propagators(&dec, alpha, t)?;
        let mut x = &phi1 * &init.x0 + &phi2 * &init.x1;
        if nonlinear {
            for (i, gi) in g.iter().enumerate().take(n) {
                x += &w.p[n - 1 - i] * gi;
            }
            for (i, gi) in g.iter().enumerate().take(n).skip(1) {
                x += &w.q[n - i] * gi;
            }
            let explicit = x.clone();
            let pred = &explicit + &w.q[0] * &g[n - 1];
            check_blowup(&pred, t)?;
            x = &explicit + &w.q[0] * s.f.eval(&pred);
            check_corrector(&pred, &x, t)?;
        }
        check_blowup(&x, t)?;
        g.push(if nonlinear { s.f.eval(&x) } else { DVector::zeros(d) });
        states.push(x);
        times.push(t);
    }
    Ok(Trajectory { times, states, method: Method::VocQuadrature, step: h })
}
