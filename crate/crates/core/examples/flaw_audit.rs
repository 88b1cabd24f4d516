//! |E_{α,β}(-t^α)| against an algebraic lower bound and against exp(-t).

use fracstab::flaw_audit::run_audit;

fn main() -> fracstab::Result<()> {
    // near α = 2 the oscillating part decays like exp(cos(π/α) t), so the
    // product needs a longer range to settle
    for (alpha, t_max) in [(1.2, 1e3), (1.5, 1e3), (1.8, 1e4)] {
        let report = run_audit(alpha, 1.0, t_max)?;
        println!("alpha = {alpha}");
        for c in &report.beta_cases {
            println!(
                "  beta = {:<4} p = {:<4} N = {:.4e}  |E| t^p at t_max = {:.4e}  exceeds exp(-t) from t = {:.2}",
                c.beta, c.algebraic.p, c.algebraic.n, c.algebraic.product_at_t_max, c.exponential.t_cross
            );
        }
    }
    Ok(())
}
