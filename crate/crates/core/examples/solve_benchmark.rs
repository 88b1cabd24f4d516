//! Predictor-corrector versus variation of constants on a damped
//! nonlinear system, with the observed order of the corrector. The linear
//! part has eigenvalues with |arg λ| ≈ 1.93, inside the sector for α = 1.2.

use fracstab::fde_solver::{solve_pc, solve_voc, InitialData, SystemSpec};
use fracstab::polynomial::{PolynomialMap, Term};
use fracstab::spectral_stability::FractionalOrder;
use nalgebra::DMatrix;

fn main() -> fracstab::Result<()> {
    let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -2.0, -1.0]);
    let f = PolynomialMap::new(
        2,
        vec![vec![], vec![Term { c: -1.0, e: vec![3, 0] }]],
    )?;
    let s = SystemSpec::new(a, f, FractionalOrder::new(1.2)?)?;
    let init = InitialData::new(vec![0.3, 0.0], vec![0.0, 0.1])?;
    let t_end = 10.0;

    let fine = solve_pc(&s, &init, 2f64.powi(-10), t_end)?;
    let mut prev = None;
    for k in 4..9 {
        let h = 2f64.powi(-k);
        let pc = solve_pc(&s, &init, h, t_end)?;
        let voc = solve_voc(&s, &init, h, t_end)?;
        let err = (pc.last() - fine.last()).amax();
        let order = prev.map(|e: f64| (e / err).log2());
        println!(
            "h = 2^-{k}: |pc - ref| = {err:.3e}  order {}  |pc - voc| = {:.3e}",
            order.map_or("-".into(), |o| format!("{o:.2}")),
            pc.sup_distance(&voc)
        );
        prev = Some(err);
    }
    println!("x(10) = {:?}", fine.last().as_slice());
    Ok(())
}
