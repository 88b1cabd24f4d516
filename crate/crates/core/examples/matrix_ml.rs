//! E_{α,β}(t^α A) for a matrix with a Jordan block, checked against the
//! plain power series.

use fracstab::ml_matrix::{decompose, ml_apply, ml_series_direct, DEFAULT_COND_CAP};
use fracstab::ml_scalar::MlParams;
use nalgebra::DMatrix;

fn main() -> fracstab::Result<()> {
    let a = DMatrix::from_row_slice(3, 3, &[-1.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -3.0]);
    let dec = decompose(&a, DEFAULT_COND_CAP)?;
    println!("distinct eigenvalues: {:?}", dec.distinct);
    println!("condition of T: {:.3e}", dec.condition);
    let p = MlParams::new(1.5, 1.0)?;
    for t in [0.5, 1.0, 2.0] {
        let e = ml_apply(&dec, p, t, 1e-13)?;
        let s = ml_series_direct(&a, p, t, 200);
        println!("t = {t}: max |decomposed - series| = {:.2e}", (&e - &s).amax());
    }
    println!("E_{{1.5,1}}(10^1.5 A) =\n{:.6e}", ml_apply(&dec, p, 10.0, 1e-13)?);
    Ok(())
}
