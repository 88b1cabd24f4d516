//! Reference values from an 80-digit mpmath series evaluation
//! (tests/oracle/ml_oracle.py).
#![allow(clippy::excessive_precision, clippy::type_complexity)]

use fracstab::ml_scalar::{eval, eval_asymptotic, ml_derivative, MlParams};
use num_complex::Complex64;

// (alpha, beta, z, derivative order, value)
const TABLE: &[(f64, f64, (f64, f64), usize, (f64, f64))] = &[
    (1.5, 1.0, (-353.55339059327376, 0.0), 0, (-0.00079780087584332395, 0.0)),
    (1.5, 1.0, (28.284271247461901, 28.284271247461901), 0, (15150.730580604583, -7043.1052540196844)),
    (1.5, 1.0, (-1.0, 0.0), 0, (0.39662936531808808, 0.0)),
    (1.5, 1.0, (-3.0, 0.0), 0, (-0.17556537379997824, 0.0)),
    (1.5, 1.0, (-40.0, 0.0), 0, (-0.0099309654786934346, 0.0)),
    (1.5, 1.5, (-12.5, 0.0), 0, (-0.03690761117248129, 0.0)),
    (1.9, 2.0, (-60.0, 0.0), 0, (0.048913630509340326, 0.0)),
    (1.1, 1.1, (-24.0, 0.0), 0, (-0.00022077055356446149, 0.0)),
    (1.25, 1.25, (-24.034308466408011, 17.954164323118695), 0, (0.00046852229942495045, 0.00018409239250829492)),
    (1.75, 1.0, (-200.0, 0.0), 0, (0.0022963536057223818, 0.0)),
    (1.5, 2.0, (-1000.0, 0.0), 0, (0.00056418852578388594, 0.0)),
    (1.5, 1.0, (-161.8033988749895, 117.5570504584946), 0, (-0.017111854471285438, 0.0088611369018938571)),
    (1.5, 1.0, (-2.0, 0.0), 1, (0.2756064393699388, 0.0)),
    (1.5, 1.0, (-30.0, 0.0), 1, (0.0008750398254091119, 0.0)),
    (1.5, 1.5, (-30.0, 0.0), 2, (9.9477156343523492e-5, 0.0)),
    (1.75, 2.0, (-20.0, 15.0), 3, (-0.00046406032496190028, 0.00040537707933598232)),
];

#[test]
fn matches_high_precision_oracle() {
    for &(alpha, beta, (re, im), order, (vr, vi)) in TABLE {
        let p = MlParams::new(alpha, beta).unwrap();
        let z = Complex64::new(re, im);
        let exact = Complex64::new(vr, vi);
        let r = ml_derivative(p, z, order, 1e-13).unwrap();
        let err = (r.value - exact).norm();
        let scale = exact.norm().max(1.0);
        assert!(
            err <= 1e-10 * scale,
            "E^({order})_{{{alpha},{beta}}}({z}) = {} vs {exact}: err {err:e}",
            r.value
        );
        assert!(
            err <= r.abs_error_estimate.max(1e-15 * scale) * 1.0001,
            "estimate {:e} below actual error {err:e} at {z}",
            r.abs_error_estimate
        );
    }
}

#[test]
fn leading_term_at_t_50() {
    // t^1.5 E_{1.5,1}(-t^1.5) -> 1/Γ(-0.5) = -1/(2√π)
    let p = MlParams::new(1.5, 1.0).unwrap();
    let t: f64 = 50.0;
    let z = Complex64::new(-t.powf(1.5), 0.0);
    let r = eval_asymptotic(p, z, 3).unwrap();
    let limit = -1.0 / (2.0 * std::f64::consts::PI.sqrt());
    assert!((t.powf(1.5) * r.value.re - limit).abs() < 1e-3);
    let oracle = -0.00079780087584332395;
    assert!((r.value.re - oracle).abs() <= r.abs_error_estimate);
}

#[test]
fn growth_sector_value_is_finite() {
    let p = MlParams::new(1.5, 1.0).unwrap();
    let z = Complex64::from_polar(40.0, std::f64::consts::FRAC_PI_4);
    let r = eval(p, z, 1e-10).unwrap();
    assert!(r.value.norm().is_finite());
    let modulus = 40f64.powf(1.0 / 1.5);
    let growth = (modulus * (std::f64::consts::FRAC_PI_4 / 1.5).cos()).exp();
    assert!(r.value.norm() > 0.1 * growth && r.value.norm() < 10.0 * growth);
}
