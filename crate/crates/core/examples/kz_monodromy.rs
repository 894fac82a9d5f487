//! Conformal data of the SU(N) level-k WZW model and monodromy of the
//! four-point KZ system around z = 0 and z = 1.
//!
//! cargo run --release --example kz_monodromy

use knotforge::kz::{conformal_data, monodromy_report, p_eigenvalues, Center, KZParams, DEFAULT_RADIUS};

fn main() -> knotforge::Result<()> {
    for k in 1..=3 {
        let p = KZParams::new(2, k)?;
        let cd = conformal_data(p);
        let [l0, l1] = p_eigenvalues(p);
        println!(
            "N=2 k={k}: Δ = {}, c = {}, spectrum of P = {{{l0}, {l1}}}",
            cd.delta, cd.c
        );
        for center in [Center::Zero, Center::One] {
            let r = monodromy_report(p, center, DEFAULT_RADIUS)?;
            println!(
                "  around {:?}: eig err {:.2e}, det err {:.2e}, refinement {:.2e}",
                center, r.eigenvalue_error, r.det_error, r.refinement_diff
            );
        }
    }
    Ok(())
}
