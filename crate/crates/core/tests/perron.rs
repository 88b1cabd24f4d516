use fracstab::error::Error;
use fracstab::fde_solver::{solve_pc, InitialData, SystemSpec};
use fracstab::perron::*;
use fracstab::polynomial::{PolynomialMap, Term};
use fracstab::spectral_stability::{FractionalOrder, StabilityClass};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn o(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

fn square_map() -> PolynomialMap {
    PolynomialMap::new(1, vec![vec![Term { c: 1.0, e: vec![2] }]]).unwrap()
}

// mpmath, 30 digits (tests/oracle/kernel_oracle.py)
const C_ORACLE: f64 = 1.68287339299131;

#[test]
fn signed_integral_is_minus_inverse_lambda() {
    let s = signed_kernel_integral(o(1.5), Complex64::new(-1.0, 0.0), 400.0, 0.05).unwrap();
    assert!((s.re - 1.0).abs() < 1e-6, "{s}");
    assert!(s.im.abs() < 1e-12);

    let lam = Complex64::from_polar(1.0, 0.8 * std::f64::consts::PI);
    let s = signed_kernel_integral(o(1.5), lam, 400.0, 0.05).unwrap();
    assert!((s + 1.0 / lam).norm() < 1e-5, "{s} vs {}", -1.0 / lam);
}

#[test]
fn absolute_integral_matches_oracle() {
    let lam = Complex64::new(-1.0, 0.0);
    let k2 = kernel_integral(o(1.5), lam, 200.0, 0.05).unwrap();
    let k4 = kernel_integral(o(1.5), lam, 400.0, 0.05).unwrap();
    // the tail bound is an upper bound, so the total sits just above the oracle
    for k in [k2, k4] {
        assert!(k.total() >= C_ORACLE - 1e-6, "{k:?}");
        assert!(k.total() - C_ORACLE <= 2.0 * k.tail_bound + 1e-6, "{k:?}");
    }
    assert!(k4.tail_bound < k2.tail_bound);
}

#[test]
fn kernel_scales_with_modulus() {
    // the substitution u = s·|λ|^{-1/α} leaves the integral of |kernel| times |λ| unchanged
    let a = o(1.5);
    let lam = Complex64::new(-4.0, 0.0);
    let scale = 4f64.powf(-1.0 / 1.5);
    let k = kernel_integral_sup(a, lam, 400.0 * scale, 0.05 * scale).unwrap();
    assert!((4.0 * k - C_ORACLE).abs() < 1e-3, "{}", 4.0 * k);
}

#[test]
fn outside_sector_is_rejected() {
    let r = kernel_integral(o(1.5), Complex64::new(1.0, 0.0), 100.0, 0.05);
    assert!(r.is_err());
}

#[test]
fn tail_fit_rejects_bad_grid() {
    let lam = Complex64::new(-1.0, 0.0);
    assert!(algebraic_tail_fit(o(1.5), lam, &[]).is_err());
    assert!(algebraic_tail_fit(o(1.5), lam, &[0.5, 2.0]).is_err());
    assert!(algebraic_tail_fit(o(1.5), lam, &[3.0, 2.0]).is_err());
    let (m, t0) = algebraic_tail_fit(o(1.5), lam, &log_grid(10.0, 1000.0, 50)).unwrap();
    assert!(m > 0.0 && (t0 - 10.0).abs() < 1e-12);
}

#[test]
fn scalar_constants_and_contraction() {
    let s = SystemSpec::new(DMatrix::from_element(1, 1, -1.0), square_map(), o(1.5)).unwrap();
    let pc = build_constants(&s).unwrap();
    assert!((pc.c - C_ORACLE).abs() < 1e-3, "{pc:?}");
    assert!(pc.q <= Q_TARGET + 1e-12);
    assert!(pc.delta > 0.0 && pc.delta < pc.epsilon);
    assert!((pc.gamma - (GAMMA_FACTOR / pc.c).min(1.0)).abs() < 1e-15);
    assert_eq!(pc.linear_part, 0.0);
    assert!(pc.e1_sup >= 1.0);

    let init = InitialData::new(vec![0.05], vec![0.0]).unwrap();
    let h = 2f64.powi(-6);
    let run = iterate_perron(&s, &init, &pc, h, 20.0, 12).unwrap();
    assert!(!run.init_within_delta);
    for r in run.ratios() {
        assert!(r <= pc.q + 0.05, "{:?}", run.ratios());
    }
    assert!(run.residual() < 1e-12);
    let reference = solve_pc(&s, &init, h, 20.0).unwrap();
    assert!(run.trajectory.sup_distance(&reference) < 5e-3);
}

#[test]
fn linear_system_has_q_zero() {
    let s = SystemSpec::new(DMatrix::from_element(1, 1, -2.0), PolynomialMap::zero(1), o(1.3))
        .unwrap();
    let pc = build_constants(&s).unwrap();
    assert_eq!(pc.q, 0.0);
    assert_eq!(pc.epsilon, 1.0);
}

#[test]
fn hypothesis_failure_carries_class() {
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let s = SystemSpec::new(a, PolynomialMap::zero(2), o(1.5)).unwrap();
    match build_constants(&s) {
        Err(Error::HypothesisFailed(c)) => assert_eq!(c, StabilityClass::HasUnstableMode),
        other => panic!("{other:?}"),
    }
}

#[test]
fn operator_coordinates_round_trip() {
    let a = DMatrix::from_row_slice(2, 2, &[-1.0, 1.0, 0.0, -1.0]);
    let s = SystemSpec::new(a, PolynomialMap::zero(2), o(1.5)).unwrap();
    let op = PerronOperator::new(&s, 0.2, 0.05, 1.0).unwrap();
    let x = DVector::from_vec(vec![0.3, -0.7]);
    let back = op.to_x(&op.to_y(&x));
    assert!((back - x).amax() < 1e-12);
}

#[test]
fn zero_iterations_rejected() {
    let s = SystemSpec::new(DMatrix::from_element(1, 1, -1.0), square_map(), o(1.5)).unwrap();
    let pc = build_constants(&s).unwrap();
    let init = InitialData::zeros(1);
    assert!(iterate_perron(&s, &init, &pc, 0.1, 1.0, 0).is_err());
    let run = iterate_perron(&s, &init, &pc, 0.1, 1.0, 3).unwrap();
    assert_eq!(run.trajectory.max_norm(), 0.0);
}
