//! Constants of the Lyapunov–Perron contraction argument, and the operator
//! iteration itself as a third solution method.
//!
//! In the coordinates `y = (TP)⁻¹ x`, where `T` brings `A` to block form and
//! `P` scales each nilpotent part down to `γ`, the system reads
//! `D^α y = diag(λ_i) y + h(y)` with
//!
//!   h(y) = γN y + (TP)⁻¹ f(TP y),
//!
//! and the operator is, per component,
//!
//!   (Tξ)^i(t) = E_{α,1}(λ_i t^α) y0^i + t E_{α,2}(λ_i t^α) y1^i
//!             + ∫_0^t (t−τ)^{α−1} E_{α,α}(λ_i (t−τ)^α) h^i(ξ(τ)) dτ.
//!
//! With `C = max_i ∫_0^∞ |u^{α−1} E_{α,α}(λ_i u^α)| du` the operator is a
//! contraction with factor `q = C ℓ_h(ε)` on the ε-ball.

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fde_solver::{grid_steps, InitialData, Method, SystemSpec, Trajectory};
use crate::gamma::rgamma;
use crate::ml_matrix::{decompose, gamma_scale, inf_norm_c, SpectralDecomposition, DEFAULT_COND_CAP};
use crate::ml_scalar::{eval, MlParams};
use crate::spectral_stability::{
    report_from_decomposition, sector_test, FractionalOrder, StabilityClass, Verdict,
};

const ML_TOL: f64 = 1e-13;
const GAUSS_POINTS: usize = 8;
/// Dyadic refinements of the first panel towards u = 0.
const FIRST_PANEL_LEVELS: i32 = 20;
pub const Q_TARGET: f64 = 0.9;
pub const GAMMA_FACTOR: f64 = 0.4;
pub const SUP_SAFETY: f64 = 1.05;
pub const TAIL_SAFETY: f64 = 1.25;
const SUP_GRID_POINTS: usize = 2048;
const SUP_T_MAX: f64 = 1e3;
const MIN_EPSILON: f64 = 1e-12;
/// Kernel integration horizon and panel width, in units of |λ|^{-1/α}.
const KERNEL_T_MAX: f64 = 400.0;
const KERNEL_PANEL: f64 = 0.05;

fn in_sector(order: FractionalOrder, lambda: Complex64) -> Result<()> {
    let (margin, verdict) = sector_test(lambda, order);
    if verdict != Verdict::Inside {
        return Err(Error::SectorViolation { re: lambda.re, im: lambda.im, margin });
    }
    Ok(())
}

/// `u^{α−1} E_{α,α}(λ u^α)`
fn kernel(alpha: f64, lambda: Complex64, u: f64) -> Result<Complex64> {
    if u == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let p = MlParams::new(alpha, alpha)?;
    Ok(eval(p, lambda * u.powf(alpha), ML_TOL)?.value * u.powf(alpha - 1.0))
}

/// Panels `[a, b]` covering `[0, t_max]`: width `h`, with the first panel
/// split dyadically towards the `u^{α−1}` endpoint.
fn panels(t_max: f64, h: f64) -> Vec<(f64, f64)> {
    let h = h.min(t_max);
    let mut out = Vec::new();
    let mut a = 0.0;
    for j in (0..FIRST_PANEL_LEVELS).rev() {
        let b = h * 2f64.powi(-j);
        out.push((a, b));
        a = b;
    }
    let n = ((t_max - h) / h).ceil().max(0.0) as usize;
    for k in 0..n {
        let b = (h * (k + 2) as f64).min(t_max);
        out.push((a, b));
        a = b;
    }
    out
}

fn gauss_rule() -> Vec<(f64, f64)> {
    GaussLegendre::new(GAUSS_POINTS)
        .expect("rule of degree >= 2")
        .into_node_weight_pairs()
}

fn gauss_panel<F: FnMut(f64) -> Result<f64>>(
    rule: &[(f64, f64)],
    a: f64,
    b: f64,
    f: &mut F,
) -> Result<f64> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for &(x, w) in rule {
        s += w * f(mid + half * x)?;
    }
    Ok(s * half)
}

/// Root of the real kernel on `[a, b]` (sign change assumed), by bisection.
fn kernel_root(alpha: f64, lambda: Complex64, mut a: f64, mut b: f64, fa: f64) -> Result<f64> {
    let sa = fa.signum();
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        let fm = kernel(alpha, lambda, m)?.re;
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
        if b - a <= 1e-15 * b {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Composite Gauss quadrature of `|kernel|` (or its real part, `signed`).
/// For real λ the panels are split at sign changes so the integrand is
/// smooth on every piece.
fn kernel_quadrature(
    order: FractionalOrder,
    lambda: Complex64,
    t_max: f64,
    h: f64,
    signed: bool,
) -> Result<f64> {
    let alpha = order.alpha();
    let rule = gauss_rule();
    let real = lambda.im == 0.0;
    let mut value = |u: f64| -> Result<f64> {
        let k = kernel(alpha, lambda, u)?;
        Ok(if signed { k.re } else { k.norm() })
    };
    let mut total = 0.0;
    let mut fa = 0.0;
    for (a, b) in panels(t_max, h) {
        let fb = kernel(alpha, lambda, b)?.re;
        if real && !signed && a > 0.0 && fa * fb < 0.0 {
            let r = kernel_root(alpha, lambda, a, b, fa)?;
            total += gauss_panel(&rule, a, r, &mut value)?;
            total += gauss_panel(&rule, r, b, &mut value)?;
        } else {
            total += gauss_panel(&rule, a, b, &mut value)?;
        }
        fa = fb;
    }
    Ok(total)
}

/// `∫_{t}^∞ u^{α−1} E_{α,α}(λ u^α) du` from the algebraic expansion of the
/// kernel, integrated term by term (the k = 1 term vanishes).
fn signed_tail(alpha: f64, lambda: Complex64, t: f64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for k in 2..12 {
        let c = rgamma(alpha - alpha * k as f64);
        let lam_pow = lambda.powi(-k);
        s -= lam_pow * c * t.powf(alpha * (1.0 - k as f64)) / (alpha * (k - 1) as f64);
    }
    s
}

/// Signed `∫_0^∞ u^{α−1} E_{α,α}(λ u^α) du` by quadrature on `[0, t_max]`
/// plus the algebraic tail. Equals `−1/λ`, which makes it a calibration for
/// the quadrature.
pub fn signed_kernel_integral(
    order: FractionalOrder,
    lambda: Complex64,
    t_max: f64,
    h: f64,
) -> Result<Complex64> {
    in_sector(order, lambda)?;
    check_grid(t_max, h)?;
    let re = kernel_quadrature(order, lambda, t_max, h, true)?;
    let im = if lambda.im == 0.0 {
        0.0
    } else {
        // imaginary part through the rotated integrand
        let alpha = order.alpha();
        let rule = gauss_rule();
        let mut f = |u: f64| kernel(alpha, lambda, u).map(|k| k.im);
        panels(t_max, h)
            .into_iter()
            .map(|(a, b)| gauss_panel(&rule, a, b, &mut f))
            .sum::<Result<f64>>()?
    };
    Ok(Complex64::new(re, im) + signed_tail(order.alpha(), lambda, t_max))
}

fn check_grid(t_max: f64, h: f64) -> Result<()> {
    if !(t_max > 0.0 && h > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "t_max and h must be positive, got {t_max}, {h}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelIntegral {
    /// Quadrature of |kernel| on [0, t_max].
    pub quadrature: f64,
    /// `M / (α t_max^α)`.
    pub tail_bound: f64,
    pub m: f64,
    pub t0: f64,
}

impl KernelIntegral {
    pub fn total(&self) -> f64 {
        self.quadrature + self.tail_bound
    }
}

/// Log-spaced grid of `n` points on `[a, b]`.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

pub fn kernel_integral(
    order: FractionalOrder,
    lambda: Complex64,
    t_max: f64,
    h: f64,
) -> Result<KernelIntegral> {
    in_sector(order, lambda)?;
    check_grid(t_max, h)?;
    let quadrature = kernel_quadrature(order, lambda, t_max, h, false)?;
    let grid = log_grid(t_max.max(1.0), 100.0 * t_max.max(1.0), 400);
    let (m, t0) = algebraic_tail_fit(order, lambda, &grid)?;
    let tail_bound = m / (order.alpha() * t_max.powf(order.alpha()));
    Ok(KernelIntegral { quadrature, tail_bound, m, t0 })
}

/// `∫_0^{t_max} |u^{α−1} E_{α,α}(λu^α)| du` plus the bound `M/(α t_max^α)` on
/// the rest of the half-line.
pub fn kernel_integral_sup(
    order: FractionalOrder,
    lambda: Complex64,
    t_max: f64,
    h: f64,
) -> Result<f64> {
    Ok(kernel_integral(order, lambda, t_max, h)?.total())
}

/// `M = 1.25 · max_grid |t^{α−1} E_{α,α}(λt^α)| t^{α+1}` and `t0 = min grid`.
pub fn algebraic_tail_fit(
    order: FractionalOrder,
    lambda: Complex64,
    t_grid: &[f64],
) -> Result<(f64, f64)> {
    in_sector(order, lambda)?;
    if t_grid.is_empty() || t_grid[0] < 1.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "tail grid must be increasing and start at t >= 1".into(),
        ));
    }
    let alpha = order.alpha();
    let mut m = 0.0f64;
    for &t in t_grid {
        m = m.max(kernel(alpha, lambda, t)?.norm() * t.powf(alpha + 1.0));
    }
    Ok((TAIL_SAFETY * m, t_grid[0]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronConstants {
    pub alpha: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub t0: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub q: f64,
    pub delta: f64,
    #[serde(rename = "E1_sup")]
    pub e1_sup: f64,
    #[serde(rename = "tE2_sup")]
    pub te2_sup: f64,
    /// Nilpotent contribution to ℓ_h (γ for Jordan blocks, 0 if diagonal).
    pub linear_part: f64,
    /// ‖TP‖∞ and ‖(TP)⁻¹‖∞ of the scaled transform.
    pub transform_norm: f64,
    pub transform_inv_norm: f64,
    pub eigenvalues: Vec<crate::spectral_stability::ComplexJson>,
}

impl PerronConstants {
    /// Radius in the original coordinates that maps into the δ-ball.
    pub fn delta_x(&self) -> f64 {
        self.delta / self.transform_inv_norm
    }

    /// Radius in the original coordinates containing the image of the ε-ball.
    pub fn epsilon_x(&self) -> f64 {
        self.epsilon * self.transform_norm
    }
}

/// `ℓ_h(ε) ≤ ‖γN‖ + ‖(TP)⁻¹‖ ℓ_f(‖TP‖ ε) ‖TP‖`.
pub fn lipschitz_h(
    s: &SystemSpec,
    linear_part: f64,
    tp_norm: f64,
    tp_inv_norm: f64,
    eps: f64,
) -> f64 {
    linear_part + tp_inv_norm * s.f.lipschitz_bound(tp_norm * eps) * tp_norm
}

/// Sup over t ≥ 0 of |E_{α,1}(λt^α)| and t|E_{α,2}(λt^α)|: a log grid up to
/// 10³ plus the leading algebraic decay beyond it.
pub fn free_term_sups(order: FractionalOrder, lambda: Complex64) -> Result<(f64, f64)> {
    let alpha = order.alpha();
    let p1 = MlParams::new(alpha, 1.0)?;
    let p2 = MlParams::new(alpha, 2.0)?;
    let scale = lambda.norm().powf(-1.0 / alpha);
    let mut e1 = 1.0f64;
    let mut te2 = 0.0f64;
    for t in log_grid(1e-4 * scale, SUP_T_MAX * scale, SUP_GRID_POINTS) {
        let z = lambda * t.powf(alpha);
        e1 = e1.max(eval(p1, z, ML_TOL)?.value.norm());
        te2 = te2.max(t * eval(p2, z, ML_TOL)?.value.norm());
    }
    // beyond the grid both decay like t^{-α} resp. t^{1-α}; twice the leading
    // term at the end of the grid covers the remainder there
    let t_end = SUP_T_MAX * scale;
    let z = lambda * t_end.powf(alpha);
    let lead1 = (rgamma(1.0 - alpha) / z).norm();
    let lead2 = t_end * (rgamma(2.0 - alpha) / z).norm();
    Ok((SUP_SAFETY * e1.max(2.0 * lead1), SUP_SAFETY * te2.max(2.0 * lead2)))
}

fn scaled_transform(s: &SystemSpec, gamma: f64) -> Result<SpectralDecomposition> {
    gamma_scale(&decompose(&s.a, DEFAULT_COND_CAP)?, gamma)
}

fn linear_part(dec: &SpectralDecomposition) -> f64 {
    dec.blocks
        .iter()
        .filter(|b| b.defective)
        .map(|b| inf_norm_c(&b.nilpotent))
        .fold(0.0, f64::max)
}

pub fn build_constants(s: &SystemSpec) -> Result<PerronConstants> {
    let order = s.order;
    let alpha = order.alpha();
    let dec = decompose(&s.a, DEFAULT_COND_CAP)?;
    let report = report_from_decomposition(&dec, order);
    if report.overall != StabilityClass::AsymptoticallyStable {
        return Err(Error::HypothesisFailed(report.overall));
    }

    let mut c = 0.0f64;
    let mut m = 0.0f64;
    let mut t0 = 0.0f64;
    let mut e1_sup = 0.0f64;
    let mut te2_sup = 0.0f64;
    for &lambda in &dec.distinct {
        let scale = lambda.norm().powf(-1.0 / alpha);
        let k = kernel_integral(order, lambda, (KERNEL_T_MAX * scale).max(1.0), KERNEL_PANEL * scale)?;
        log::debug!("kernel integral at {lambda}: {k:?}");
        c = c.max(k.total());
        m = m.max(k.m);
        t0 = t0.max(k.t0);
        let (e1, te2) = free_term_sups(order, lambda)?;
        e1_sup = e1_sup.max(e1);
        te2_sup = te2_sup.max(te2);
    }

    let gamma = (GAMMA_FACTOR / c).min(1.0);
    let scaled = gamma_scale(&dec, gamma)?;
    let lin = linear_part(&scaled);
    let tp_norm = inf_norm_c(&scaled.transform);
    let tp_inv_norm = inf_norm_c(&scaled.transform_inv);
    let q_of = |eps: f64| c * lipschitz_h(s, lin, tp_norm, tp_inv_norm, eps);

    let epsilon = if q_of(1.0) <= Q_TARGET {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if q_of(mid) <= Q_TARGET {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    if epsilon <= MIN_EPSILON {
        return Err(Error::ContractionFailed(format!(
            "C = {c:.6}, nilpotent part {lin:.3e}, cond(TP) = {:.3e}: q stays above {Q_TARGET}",
            tp_norm * tp_inv_norm
        )));
    }
    let q = q_of(epsilon);
    let delta = epsilon * (1.0 - q) / (e1_sup + te2_sup);
    Ok(PerronConstants {
        alpha,
        c,
        m,
        t0,
        gamma,
        epsilon,
        q,
        delta,
        e1_sup,
        te2_sup,
        linear_part: lin,
        transform_norm: tp_norm,
        transform_inv_norm: tp_inv_norm,
        eigenvalues: dec.distinct.iter().map(|&z| z.into()).collect(),
    })
}

type Grid = Vec<DVector<Complex64>>;

/// The discretized Lyapunov–Perron operator on a uniform grid, with product
/// trapezoidal weights for the scalar kernels.
pub struct PerronOperator<'a> {
    spec: &'a SystemSpec,
    dec: SpectralDecomposition,
    /// Per distinct eigenvalue: P_m, Q_m weights and free-term factors.
    p: Vec<Vec<Complex64>>,
    q: Vec<Vec<Complex64>>,
    e1: Vec<Vec<Complex64>>,
    e2: Vec<Vec<Complex64>>,
    /// Eigenvalue index of every coordinate.
    index: Vec<usize>,
    nilpotent: DMatrix<Complex64>,
    pub times: Vec<f64>,
    pub step: f64,
}

impl<'a> PerronOperator<'a> {
    pub fn new(s: &'a SystemSpec, gamma: f64, h: f64, t_end: f64) -> Result<Self> {
        let n_steps = grid_steps(h, t_end)?;
        let alpha = s.alpha();
        let dec = scaled_transform(s, gamma)?;
        let pa = MlParams::new(alpha, alpha + 1.0)?;
        let pb = MlParams::new(alpha, alpha + 2.0)?;
        let p1 = MlParams::new(alpha, 1.0)?;
        let p2 = MlParams::new(alpha, 2.0)?;

        let (mut pw, mut qw, mut e1, mut e2) = (vec![], vec![], vec![], vec![]);
        for &lambda in &dec.distinct {
            let mut g1 = Vec::with_capacity(n_steps + 1);
            let mut g2 = Vec::with_capacity(n_steps + 1);
            let mut f1 = Vec::with_capacity(n_steps + 1);
            let mut f2 = Vec::with_capacity(n_steps + 1);
            for k in 0..=n_steps {
                let u = k as f64 * h;
                let z = lambda * u.powf(alpha);
                g1.push(eval(pa, z, ML_TOL)?.value * u.powf(alpha));
                g2.push(eval(pb, z, ML_TOL)?.value * u.powf(alpha + 1.0));
                f1.push(eval(p1, z, ML_TOL)?.value);
                f2.push(eval(p2, z, ML_TOL)?.value * u);
            }
            let mut pm = Vec::with_capacity(n_steps);
            let mut qm = Vec::with_capacity(n_steps);
            for k in 0..n_steps {
                let i_m = g1[k + 1] - g1[k];
                let p_m = (g1[k + 1] * h - (g2[k + 1] - g2[k])) / h;
                pm.push(p_m);
                qm.push(i_m - p_m);
            }
            pw.push(pm);
            qw.push(qm);
            e1.push(f1);
            e2.push(f2);
        }

        let d = s.dim();
        let mut index = vec![0; d];
        let mut nilpotent = DMatrix::zeros(d, d);
        for b in &dec.blocks {
            for r in 0..b.size {
                index[b.start + r] = b.eigen_index;
                for c in 0..b.size {
                    nilpotent[(b.start + r, b.start + c)] = b.nilpotent[(r, c)];
                }
            }
        }
        Ok(PerronOperator {
            spec: s,
            dec,
            p: pw,
            q: qw,
            e1,
            e2,
            index,
            nilpotent,
            times: (0..=n_steps).map(|k| k as f64 * h).collect(),
            step: h,
        })
    }

    pub fn to_y(&self, x: &DVector<f64>) -> DVector<Complex64> {
        &self.dec.transform_inv * x.map(|v| Complex64::new(v, 0.0))
    }

    pub fn to_x(&self, y: &DVector<Complex64>) -> DVector<f64> {
        (&self.dec.transform * y).map(|z| z.re)
    }

    /// `E_{α,1}(λ_i t^α) y0^i + t E_{α,2}(λ_i t^α) y1^i` on the grid.
    pub fn free_term(&self, init: &InitialData) -> Grid {
        let y0 = self.to_y(&init.x0);
        let y1 = self.to_y(&init.x1);
        (0..self.times.len())
            .map(|n| {
                DVector::from_iterator(
                    y0.len(),
                    (0..y0.len()).map(|j| {
                        let e = self.index[j];
                        self.e1[e][n] * y0[j] + self.e2[e][n] * y1[j]
                    }),
                )
            })
            .collect()
    }

    /// `h(y) = γN y + (TP)⁻¹ f(Re TP y)`
    pub fn h(&self, y: &DVector<Complex64>) -> DVector<Complex64> {
        let x = self.to_x(y);
        let fx = self.spec.f.eval(&x).map(|v| Complex64::new(v, 0.0));
        &self.nilpotent * y + &self.dec.transform_inv * fx
    }

    /// `T_{x,x̄} ξ` given the precomputed free term.
    pub fn apply(&self, free: &Grid, xi: &Grid) -> Grid {
        let hs: Vec<DVector<Complex64>> = xi.iter().map(|y| self.h(y)).collect();
        let d = self.index.len();
        (0..self.times.len())
            .map(|n| {
                let mut out = free[n].clone();
                for j in 0..d {
                    let e = self.index[j];
                    let (p, q) = (&self.p[e], &self.q[e]);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        acc += p[n - 1 - i] * hs[i][j];
                    }
                    for i in 1..=n {
                        acc += q[n - i] * hs[i][j];
                    }
                    out[j] += acc;
                }
                out
            })
            .collect()
    }

    pub fn to_trajectory(&self, xi: &Grid) -> Trajectory {
        Trajectory {
            times: self.times.clone(),
            states: xi.iter().map(|y| self.to_x(y)).collect(),
            method: Method::PerronIteration,
            step: self.step,
        }
    }
}

pub fn grid_sup(xi: &Grid) -> f64 {
    xi.iter()
        .map(|y| y.iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

pub fn grid_distance(a: &Grid, b: &Grid) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct PerronRun {
    pub trajectory: Trajectory,
    /// `sup ‖ξ_{k+1} − ξ_k‖` for every application of the operator.
    pub increments: Vec<f64>,
    /// Whether `max(‖y0‖, ‖y1‖) ≤ δ` in the transformed coordinates.
    pub init_within_delta: bool,
    pub init_norm_y: f64,
}

impl PerronRun {
    /// Ratios of successive increments.
    pub fn ratios(&self) -> Vec<f64> {
        self.increments
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }

    pub fn residual(&self) -> f64 {
        self.increments.last().copied().unwrap_or(0.0)
    }
}

/// Picard iteration of the operator, starting from the free term.
///
/// Initial data outside the δ-ball are accepted and flagged: δ is only a
/// sufficient radius. A sup norm above 2ε aborts with `DivergedIterate`.
pub fn iterate_perron(
    s: &SystemSpec,
    init: &InitialData,
    pc: &PerronConstants,
    h: f64,
    t_end: f64,
    iters: usize,
) -> Result<PerronRun> {
    if iters == 0 {
        return Err(Error::InvalidInput("at least one iteration is required".into()));
    }
    if init.x0.len() != s.dim() || init.x1.len() != s.dim() {
        return Err(Error::InvalidInput("initial data dimension mismatch".into()));
    }
    let op = PerronOperator::new(s, pc.gamma, h, t_end)?;
    let y0 = op.to_y(&init.x0);
    let y1 = op.to_y(&init.x1);
    let init_norm_y = y0.iter().chain(y1.iter()).map(|z| z.norm()).fold(0.0, f64::max);
    let init_within_delta = init_norm_y <= pc.delta;
    if !init_within_delta {
        log::warn!(
            "initial data norm {init_norm_y:e} exceeds delta = {:e}; contraction not guaranteed",
            pc.delta
        );
    }
    let bound = 2.0 * pc.epsilon;
    let free = op.free_term(init);
    let mut xi = free.clone();
    let mut increments = Vec::with_capacity(iters);
    for k in 0..iters {
        let next = op.apply(&free, &xi);
        let sup = grid_sup(&next);
        if !(sup <= bound) {
            return Err(Error::DivergedIterate { iteration: k + 1, sup_norm: sup, bound });
        }
        increments.push(grid_distance(&next, &xi));
        xi = next;
    }
    Ok(PerronRun {
        trajectory: op.to_trajectory(&xi),
        increments,
        init_within_delta,
        init_norm_y,
    })
}

