//! Sector test for a few linear parts.

use fracstab::spectral_stability::{classify, FractionalOrder};
use nalgebra::DMatrix;

fn main() -> fracstab::Result<()> {
    let order = FractionalOrder::new(1.5)?;
    let cases = [
        ("damped", DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -2.0])),
        // eigenvalues ±2i lie inside |arg λ| > 3π/4 only for α < 1
        ("rotation", DMatrix::from_row_slice(2, 2, &[0.0, 2.0, -2.0, 0.0])),
        // arg = ±(π - atan 1) = ±3π/4 exactly
        ("boundary", DMatrix::from_row_slice(2, 2, &[-1.0, 1.0, -1.0, -1.0])),
        ("spiral", DMatrix::from_row_slice(2, 2, &[-1.0, 0.3, -0.3, -1.0])),
        ("singular", DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, -1.0])),
    ];
    for (name, a) in cases {
        let r = classify(&a, order)?;
        let margins: Vec<String> =
            r.per_eigenvalue.iter().map(|e| format!("{:+.3e}", e.margin)).collect();
        println!("{name:>9}: {} (margins {})", r.overall, margins.join(", "));
    }
    Ok(())
}
