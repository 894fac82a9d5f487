//! The braiding matrix R = exp(iπ t̂) on C²⊗C² and its spectrum.
//!
//! cargo run --example r_matrix

use knotforge::algebra::SquareMatrixC;
use knotforge::kz::r_matrix;

fn main() -> knotforge::Result<()> {
    for k in 1..=4 {
        let r = r_matrix(k)?;
        let unitarity = (&r.adjoint() * &r).dist(&SquareMatrixC::identity(4));
        let eig: Vec<String> = r
            .eigenvalues()
            .iter()
            .map(|z| format!("{:.6}∠{:.4}", z.norm(), z.arg()))
            .collect();
        println!("k={k}: ‖R†R − I‖ = {unitarity:.1e}, eigenvalues [{}]", eig.join(", "));
    }
    Ok(())
}
