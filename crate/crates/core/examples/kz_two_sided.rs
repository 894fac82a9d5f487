//! Finite-difference check that G = e^{t̂ log z₁₃} A e^{−t̂ log z₄₂} solves
//! the KZ equation in z₁ and its dual in z₂.
//!
//! cargo run --release --example kz_two_sided

use knotforge::algebra::{SquareMatrixC, C64};
use knotforge::kz::{two_sided_convergence, TwoSidedPoints, TWO_SIDED_STEPS};

fn main() -> knotforge::Result<()> {
    let a = SquareMatrixC::from_fn(4, |i, j| C64::new(1.0 + i as f64 * 0.3, j as f64 * 0.2 - 0.1));
    for k in 1..=2 {
        let s = two_sided_convergence(k, &a, &TwoSidedPoints::default(), &TWO_SIDED_STEPS)?;
        println!("k={k}: order {:.3} (KZ), {:.3} (dual)", s.kz_order, s.dual_order);
        for r in &s.residuals {
            println!(
                "  h={:.0e}: kz {:.2e}, dual {:.2e}, z3 {:.2e}",
                r.step, r.kz, r.dual, r.kz_z3
            );
        }
    }
    Ok(())
}
