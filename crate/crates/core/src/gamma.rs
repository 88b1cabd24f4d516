//! Gamma function helpers.
//!
//! `ln_gamma_dd` is the workhorse: a Stirling series evaluated in
//! double-double after shifting the argument above 30. The `f64` entry points
//! are derived from it, with the reciprocal form returning an exact zero at
//! the poles `0, -1, -2, ...`.

use crate::dd::{Dd, PI};

const HALF_LN_2PI: Dd = Dd {
    hi: 0.918_938_533_204_672_8,
    lo: -3.878_294_158_067_241_4e-17,
};

const STIRLING_SHIFT: f64 = 30.0;

/// B_{2j} / (2j (2j - 1)) as exact numerator/denominator pairs.
const STIRLING_COEFFS: [(f64, f64); 13] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360_360.0),
    (1.0, 156.0),
    (-3617.0, 122_400.0),
    (43867.0, 244_188.0),
    (-174_611.0, 125_400.0),
    (854_513.0, 63_756.0),
    (-236_364_091.0, 1_506_960.0),
    (8_553_103.0, 3900.0),
];

fn stirling(y: Dd) -> Dd {
    let w = y.recip();
    let w2 = w.sqr();
    let mut acc = Dd::ZERO;
    for &(num, den) in STIRLING_COEFFS.iter().rev() {
        acc = acc * w2 + Dd::from_f64(num) / Dd::from_f64(den);
    }
    (y - Dd::from_f64(0.5)) * y.ln() - y + HALF_LN_2PI + acc * w
}

/// ln Γ(x) in double-double for x > 0.
pub(crate) fn ln_gamma_dd(x: Dd) -> Dd {
    debug_assert!(x.hi > 0.0);
    if x.hi >= STIRLING_SHIFT {
        return stirling(x);
    }
    let n = (STIRLING_SHIFT - x.hi).ceil() as usize;
    let mut prod = x;
    for j in 1..n {
        prod = prod * (x + Dd::from_f64(j as f64));
    }
    stirling(x + Dd::from_f64(n as f64)) - prod.ln()
}

/// sin(πx) with the argument reduced before scaling by π.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    let r = if r.abs() > 0.5 { r.signum() - r } else { r };
    (std::f64::consts::PI * r).sin()
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// `(ln |1/Γ(x)|, sign of 1/Γ(x))`; the sign is `0.0` at the poles.
pub fn ln_abs_rgamma(x: f64) -> (f64, f64) {
    if is_pole(x) {
        return (f64::NEG_INFINITY, 0.0);
    }
    if x > 0.0 {
        return (-ln_gamma_dd(Dd::from_f64(x)).to_f64(), 1.0);
    }
    // reflection: 1/Γ(x) = sin(πx) Γ(1-x) / π
    let s = sin_pi(x);
    let lg = ln_gamma_dd(Dd::from_f64(1.0) - Dd::from_f64(x));
    ((lg - PI.ln()).to_f64() + s.abs().ln(), s.signum())
}

/// Reciprocal Gamma function, exactly zero at non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    let (l, s) = ln_abs_rgamma(x);
    if s == 0.0 {
        0.0
    } else {
        s * l.exp()
    }
}

pub fn gamma(x: f64) -> f64 {
    if is_pole(x) {
        return f64::NAN;
    }
    if x > 0.0 {
        return ln_gamma_dd(Dd::from_f64(x)).exp().to_f64();
    }
    1.0 / rgamma(x)
}
