//! Path-ordered exponentials along a sampled curve and the chiral gauge
//! covariance study.
//!
//! cargo run --release --example wilson_line

use knotforge::holonomy::{chiral_convergence, refinement_study, wilson_line, FieldConfig, RandomField, CHIRAL_STEPS};

fn main() -> knotforge::Result<()> {
    let cfg = FieldConfig::default();
    let (field, curve) = RandomField::new(7, &cfg)?.sample(200)?;
    let w = wilson_line(&field, &curve)?;
    println!("Tr W = {:.6}, det W = {:.6}", w.trace(), w.det());

    let r = refinement_study(7, &cfg, &[100, 200, 400])?;
    println!("refinement order {:.3} {:?}", r.order, r.differences);

    let s = chiral_convergence(7, &cfg, &CHIRAL_STEPS)?;
    for (n, (a, b)) in s.steps.iter().zip(s.residuals.iter().zip(&s.covariant_residuals)) {
        println!("  {n:>4} steps: printed law {a:.3e}, covariant law {b:.3e}");
    }
    println!("order: printed {:.3}, covariant {:.3}", s.order, s.covariant_order);
    Ok(())
}
