//! Scalar Mittag-Leffler values along the negative real axis.

use fracstab::ml_scalar::{eval, MlParams};
use num_complex::Complex64;

fn main() -> fracstab::Result<()> {
    let p = MlParams::new(1.5, 1.0)?;
    println!("{:>8} {:>24} {:>12} {:>10}", "z", "E_{1.5,1}(z)", "err", "regime");
    for x in [0.0, -1.0, -5.0, -12.0, -40.0, -200.0, -1e4] {
        let r = eval(p, Complex64::new(x, 0.0), 1e-12)?;
        println!(
            "{x:>8} {:>24.16e} {:>12.2e} {:>10}",
            r.value.re,
            r.abs_error_estimate,
            r.regime.as_str()
        );
    }
    Ok(())
}
