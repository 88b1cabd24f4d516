//! Constants of the contraction argument for a scalar quadratic system and
//! the Picard iteration they control.

use fracstab::fde_solver::{solve_pc, InitialData, SystemSpec};
use fracstab::perron::{build_constants, iterate_perron};
use fracstab::polynomial::{PolynomialMap, Term};
use fracstab::spectral_stability::FractionalOrder;
use nalgebra::DMatrix;

fn main() -> fracstab::Result<()> {
    let f = PolynomialMap::new(1, vec![vec![Term { c: 1.0, e: vec![2] }]])?;
    let s = SystemSpec::new(DMatrix::from_element(1, 1, -1.0), f, FractionalOrder::new(1.5)?)?;
    let pc = build_constants(&s)?;
    println!("{}", serde_json::to_string_pretty(&pc).expect("serializable"));

    let init = InitialData::new(vec![0.5 * pc.delta_x()], vec![0.0])?;
    let h = 2f64.powi(-6);
    let run = iterate_perron(&s, &init, &pc, h, 20.0, 15)?;
    for (k, d) in run.increments.iter().enumerate() {
        println!("iteration {:>2}: increment {d:.3e}", k + 1);
    }
    let pcs = solve_pc(&s, &init, h, 20.0)?;
    println!("distance to predictor-corrector: {:.3e}", run.trajectory.sup_distance(&pcs));
    Ok(())
}
