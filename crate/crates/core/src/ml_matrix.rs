//! Matrix Mittag-Leffler functions through a block decomposition.
//!
//! A real matrix is reduced to complex Schur form, its eigenvalues are grouped
//! into clusters (eigenvalues closer than `1e-7 ‖A‖` are treated as equal), the
//! Schur form is reordered so clusters are contiguous, and the clusters are
//! decoupled by triangular Sylvester solves. Each cluster then becomes
//! `λI + N` with `N` strictly upper triangular; when `N` has a single Jordan
//! chain it is brought to the standard Jordan form with ones on the
//! superdiagonal.
//!
//! On a block `λI + N` an entire function is evaluated exactly by its finite
//! Taylor expansion
//!
//!   E(t^α(λI + N)) = Σ_{m<size} (t^α N)^m / m! · E^{(m)}(λ t^α).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ml_scalar::{ml_derivative, MlParams};

pub const DEFAULT_COND_CAP: f64 = 1e8;
pub const MAX_DIM: usize = 64;
/// Relative distance below which two eigenvalues are merged into one block.
pub const CLUSTER_TOL: f64 = 1e-7;
const RECONSTRUCTION_TOL: f64 = 1e-8;
const REAL_OUTPUT_TOL: f64 = 1e-9;

type CMat = DMatrix<Complex64>;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub(crate) fn inf_norm_c(m: &CMat) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn inf_norm(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct Block {
    /// First row/column of the block in the block-diagonal form.
    pub start: usize,
    pub size: usize,
    /// Index into [`SpectralDecomposition::distinct`].
    pub eigen_index: usize,
    /// Strictly upper triangular part of the block (already γ-scaled).
    pub nilpotent: CMat,
    /// True when the block carries a non-zero nilpotent part.
    pub defective: bool,
}

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    /// Eigenvalue of every diagonal position, in block order.
    pub eigenvalues: Vec<Complex64>,
    /// One representative per eigenvalue cluster.
    pub distinct: Vec<Complex64>,
    /// `T` with `T⁻¹ A T = blockdiag(λ_i I + N_i)`.
    pub transform: CMat,
    pub transform_inv: CMat,
    pub blocks: Vec<Block>,
    /// Product of all γ factors applied by [`gamma_scale`].
    pub gamma: f64,
    pub condition: f64,
    pub a_norm: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `blockdiag(λ_i I + N_i)`.
    pub fn block_form(&self) -> CMat {
        let d = self.dim();
        let mut j = CMat::zeros(d, d);
        for b in &self.blocks {
            let lam = self.distinct[b.eigen_index];
            for r in 0..b.size {
                for c in 0..b.size {
                    j[(b.start + r, b.start + c)] = b.nilpotent[(r, c)];
                }
                j[(b.start + r, b.start + r)] = lam;
            }
        }
        j
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| !b.defective)
    }
}

fn validate(a: &DMatrix<f64>) -> Result<()> {
    let d = a.nrows();
    if d == 0 || d != a.ncols() {
        return Err(Error::InvalidInput(format!(
            "matrix must be square and non-empty, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if d > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "dimension {d} exceeds the limit of {MAX_DIM}"
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Single-linkage clusters of the diagonal, labelled by first appearance.
fn cluster_labels(diag: &[Complex64], tol: f64) -> Vec<usize> {
    let n = diag.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (diag[i] - diag[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut root_label = vec![usize::MAX; n];
    for i in 0..n {
        let r = roots[i];
        if root_label[r] == usize::MAX {
            root_label[r] = next;
            next += 1;
        }
        label[i] = root_label[r];
    }
    label
}

/// Swap the adjacent diagonal entries k, k+1 of the triangular `u`.
fn swap_adjacent(u: &mut CMat, q: &mut CMat, k: usize) {
    let n = u.nrows();
    let a = u[(k, k)];
    let b = u[(k + 1, k + 1)];
    let c = u[(k, k + 1)];
    // eigenvector of b in the 2x2 block
    let v0 = c;
    let v1 = b - a;
    let nv = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    if nv == 0.0 {
        return;
    }
    let (z00, z10) = (v0 / nv, v1 / nv);
    let (z01, z11) = (-z10.conj(), z00.conj());
    // u <- Z^H u on rows k, k+1
    for j in 0..n {
        let (x, y) = (u[(k, j)], u[(k + 1, j)]);
        u[(k, j)] = z00.conj() * x + z10.conj() * y;
        u[(k + 1, j)] = z01.conj() * x + z11.conj() * y;
    }
    // u <- u Z and q <- q Z on columns k, k+1
    for m in [&mut *u, &mut *q] {
        for i in 0..n {
            let (x, y) = (m[(i, k)], m[(i, k + 1)]);
            m[(i, k)] = x * z00 + y * z10;
            m[(i, k + 1)] = x * z01 + y * z11;
        }
    }
    u[(k + 1, k)] = czero();
}

/// Solve `U11 X − X U22 = C` for upper triangular `U11`, `U22`.
fn triangular_sylvester(u11: &CMat, u22: &CMat, c: &CMat) -> CMat {
    let (p, q) = (u11.nrows(), u22.nrows());
    let mut x = CMat::zeros(p, q);
    for j in 0..q {
        let mut rhs: DVector<Complex64> = c.column(j).into_owned();
        for l in 0..j {
            let s = u22[(l, j)];
            for i in 0..p {
                rhs[i] += x[(i, l)] * s;
            }
        }
        let shift = u22[(j, j)];
        for i in (0..p).rev() {
            let mut acc = rhs[i];
            for m in i + 1..p {
                acc -= u11[(i, m)] * x[(m, j)];
            }
            x[(i, j)] = acc / (u11[(i, i)] - shift);
        }
    }
    x
}

/// Block decomposition `T⁻¹ A T = blockdiag(λ_i I + N_i)`.
pub fn decompose(a: &DMatrix<f64>, cond_cap: f64) -> Result<SpectralDecomposition> {
    validate(a)?;
    if !(cond_cap > 1.0) {
        return Err(Error::InvalidInput(format!("cond_cap must exceed 1, got {cond_cap}")));
    }
    let d = a.nrows();
    let a_norm = inf_norm(a);
    let ac: CMat = a.map(|x| Complex64::new(x, 0.0));

    let (mut q, mut u) = if d == 1 {
        (CMat::identity(1, 1), ac.clone())
    } else {
        nalgebra::linalg::Schur::try_new(ac.clone(), f64::EPSILON, 0)
            .ok_or_else(|| Error::InvalidInput("Schur iteration did not converge".into()))?
            .unpack()
    };
    for i in 0..d {
        for j in 0..i {
            u[(i, j)] = czero();
        }
    }

    let tol = CLUSTER_TOL * a_norm;
    let diag: Vec<Complex64> = (0..d).map(|i| u[(i, i)]).collect();
    let mut labels = cluster_labels(&diag, tol);

    // bubble clusters into contiguous runs with adjacent swaps
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 0..d.saturating_sub(1) {
            if labels[k] > labels[k + 1] {
                swap_adjacent(&mut u, &mut q, k);
                labels.swap(k, k + 1);
                swapped = true;
            }
        }
    }

    let mut ranges = Vec::new();
    let mut s = 0;
    while s < d {
        let mut e = s + 1;
        while e < d && labels[e] == labels[s] {
            e += 1;
        }
        ranges.push((s, e));
        s = e;
    }

    let mut t = q.clone();
    let mut tinv = q.adjoint();

    // decouple each cluster from everything after it
    for &(s, e) in &ranges {
        if e == d {
            break;
        }
        let u11 = u.view((s, s), (e - s, e - s)).into_owned();
        let u22 = u.view((e, e), (d - e, d - e)).into_owned();
        let c = -u.view((s, e), (e - s, d - e)).into_owned();
        let x = triangular_sylvester(&u11, &u22, &c);
        let t_add = t.columns(s, e - s) * &x;
        let mut t_rest = t.columns_mut(e, d - e);
        t_rest += t_add;
        let tinv_sub = &x * tinv.rows(e, d - e);
        let mut tinv_top = tinv.rows_mut(s, e - s);
        tinv_top -= tinv_sub;
        u.view_mut((s, e), (e - s, d - e)).fill(czero());
    }

    let mut eigenvalues = vec![czero(); d];
    let mut distinct = Vec::new();
    let mut blocks = Vec::new();
    let mut spread_max = 0.0f64;
    for &(s, e) in &ranges {
        let p = e - s;
        let mean = (s..e).map(|i| u[(i, i)]).sum::<Complex64>() / p as f64;
        let spread = (s..e).map(|i| (u[(i, i)] - mean).norm()).fold(0.0, f64::max);
        let eigen_index = distinct.len();
        distinct.push(mean);
        let mut r = CMat::zeros(p, p);
        for i in 0..p {
            for j in i + 1..p {
                r[(i, j)] = u[(s + i, s + j)];
            }
        }
        let r_norm = inf_norm_c(&r);
        if p == 1 || r_norm <= tol {
            spread_max = spread_max.max(spread + r_norm);
            for i in 0..p {
                eigenvalues[s + i] = mean;
                blocks.push(Block {
                    start: s + i,
                    size: 1,
                    eigen_index,
                    nilpotent: CMat::zeros(1, 1),
                    defective: false,
                });
            }
            continue;
        }
        spread_max = spread_max.max(spread);
        let single_chain = (0..p - 1).all(|i| r[(i, i + 1)].norm() > tol);
        let nilpotent = if single_chain {
            // Krylov basis [R^{p-1} e_p, ..., R e_p, e_p] puts R in Jordan form
            let mut k = CMat::zeros(p, p);
            let mut v = DVector::from_element(p, czero());
            v[p - 1] = Complex64::new(1.0, 0.0);
            for col in (0..p).rev() {
                k.set_column(col, &v);
                v = &r * v;
            }
            let kinv = k
                .clone()
                .try_inverse()
                .ok_or(Error::IllConditioned { condition: f64::INFINITY, cap: cond_cap })?;
            let t_new = t.columns(s, p) * &k;
            t.columns_mut(s, p).copy_from(&t_new);
            let tinv_new = &kinv * tinv.rows(s, p);
            tinv.rows_mut(s, p).copy_from(&tinv_new);
            let mut n = CMat::zeros(p, p);
            for i in 0..p - 1 {
                n[(i, i + 1)] = Complex64::new(1.0, 0.0);
            }
            n
        } else {
            r
        };
        for i in 0..p {
            eigenvalues[s + i] = mean;
        }
        blocks.push(Block { start: s, size: p, eigen_index, nilpotent, defective: true });
    }

    let condition = inf_norm_c(&t) * inf_norm_c(&tinv);
    if !(condition <= cond_cap) {
        return Err(Error::IllConditioned { condition, cap: cond_cap });
    }
    let decomposition = SpectralDecomposition {
        eigenvalues,
        distinct,
        transform: t,
        transform_inv: tinv,
        blocks,
        gamma: 1.0,
        condition,
        a_norm,
    };
    let residual = &decomposition.transform_inv * &ac * &decomposition.transform
        - decomposition.block_form();
    let allowed = (RECONSTRUCTION_TOL * a_norm).max(spread_max * condition);
    if inf_norm_c(&residual) > allowed {
        return Err(Error::IllConditioned { condition, cap: cond_cap });
    }
    Ok(decomposition)
}

/// Compose every block transform with `P_i = diag(1, γ, …, γ^{size−1})`.
///
/// A Jordan block `λI + N` becomes `λI + γN`; eigenvalues are copied.
pub fn gamma_scale(dec: &SpectralDecomposition, gamma: f64) -> Result<SpectralDecomposition> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    let mut out = dec.clone();
    for b in &mut out.blocks {
        if !b.defective {
            continue;
        }
        for j in 0..b.size {
            let pj = gamma.powi(j as i32);
            out.transform.column_mut(b.start + j).scale_mut(pj);
            out.transform_inv.row_mut(b.start + j).scale_mut(1.0 / pj);
            for i in 0..j {
                b.nilpotent[(i, j)] *= gamma.powi((j - i) as i32);
            }
        }
    }
    out.gamma *= gamma;
    out.condition = inf_norm_c(&out.transform) * inf_norm_c(&out.transform_inv);
    Ok(out)
}

/// Block-diagonal matrix of `E^{(·)}` values: the function in the decomposed
/// coordinates, before conjugation by `T`.
pub fn ml_blocks(dec: &SpectralDecomposition, p: MlParams, t: f64, tol: f64) -> Result<CMat> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("t must be non-negative, got {t}")));
    }
    let d = dec.dim();
    let ta = t.powf(p.alpha);
    let mut out = CMat::zeros(d, d);
    for b in &dec.blocks {
        let z = dec.distinct[b.eigen_index] * ta;
        let mut f = CMat::zeros(b.size, b.size);
        let scaled = b.nilpotent.map(|x| x * ta);
        let mut power = CMat::identity(b.size, b.size);
        let mut fact = 1.0;
        for m in 0..b.size {
            if m > 0 {
                power = &power * &scaled;
                fact *= m as f64;
                if power.iter().all(|x| *x == czero()) {
                    break;
                }
            }
            let e = ml_derivative(p, z, m, tol)?.value;
            f += &power * (e / fact);
        }
        out.view_mut((b.start, b.start), (b.size, b.size)).copy_from(&f);
    }
    Ok(out)
}

/// `T · E_{α,β}(t^α J) · T⁻¹` in complex arithmetic.
pub fn ml_apply_complex(
    dec: &SpectralDecomposition,
    p: MlParams,
    t: f64,
    tol: f64,
) -> Result<CMat> {
    let f = ml_blocks(dec, p, t, tol)?;
    Ok(&dec.transform * f * &dec.transform_inv)
}

/// `E_{α,β}(t^α A)` for the real matrix behind `dec`.
pub fn ml_apply(
    dec: &SpectralDecomposition,
    p: MlParams,
    t: f64,
    tol: f64,
) -> Result<DMatrix<f64>> {
    let c = ml_apply_complex(dec, p, t, tol)?;
    let re = c.map(|z| z.re);
    let im = c.map(|z| z.im);
    let residue = inf_norm(&im);
    if residue > REAL_OUTPUT_TOL * (1.0 + inf_norm(&re)) {
        log::warn!("matrix ML result has imaginary residue {residue:e}");
    }
    Ok(re)
}

/// Direct power series Σ (t^α A)^k / Γ(αk + β); an independent check for
/// small `t^α ρ(A)`.
pub fn ml_series_direct(a: &DMatrix<f64>, p: MlParams, t: f64, terms: usize) -> DMatrix<f64> {
    let d = a.nrows();
    let x = a * t.powf(p.alpha);
    let mut power = DMatrix::<f64>::identity(d, d);
    let mut sum = DMatrix::<f64>::zeros(d, d);
    for k in 0..terms {
        sum += &power * crate::gamma::rgamma(p.alpha * k as f64 + p.beta);
        power = &power * &x;
    }
    sum
}
