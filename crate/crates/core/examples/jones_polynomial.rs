//! Jones polynomials of braid closures and PD codes, with the skein check
//! at every crossing.
//!
//! cargo run --example jones_polynomial

use knotforge::diagram::moves::mirror;
use knotforge::diagram::{braid_closure, parse_braid, render_pd};
use knotforge::jones::{jones, make_skein_triple, skein_residual};

fn main() -> knotforge::Result<()> {
    let trefoil = braid_closure(&parse_braid("B2 1 1 1")?);
    println!("trefoil PD: {}", render_pd(&trefoil));
    println!("V(trefoil) = {}", jones(&trefoil)?);
    println!("V(mirror)  = {}", jones(&mirror(&trefoil)?)?);

    let hopf = braid_closure(&parse_braid("B2 1 1")?);
    println!("V(hopf)    = {}", jones(&hopf)?);

    let eight = braid_closure(&parse_braid("B3 1 -2 1 -2")?);
    println!("V(4_1)     = {}", jones(&eight)?);
    for c in 0..eight.crossing_count() {
        let triple = make_skein_triple(&eight, c)?;
        println!("skein residual at crossing {c}: {}", skein_residual(&triple)?);
    }
    Ok(())
}
