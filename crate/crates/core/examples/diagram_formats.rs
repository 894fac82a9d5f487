//! Converting between braid words, PD codes and traversal codes, and
//! applying Reidemeister moves.
//!
//! cargo run --example diagram_formats

use knotforge::diagram::moves::{r1_add_kink, r2_sites, r3_sites};
use knotforge::diagram::{braid_closure, parse_braid, parse_traversal, render_pd, render_traversal, traversal, Sign};
use knotforge::jones::jones;

fn main() -> knotforge::Result<()> {
    let b = parse_braid("B3 1 -2 1 -2")?;
    let d = braid_closure(&b);
    println!("{b} -> {}", render_pd(&d));
    println!("components {}, writhe {}", d.component_count(), d.writhe()?);
    println!("R2 sites {}, R3 sites {}", r2_sites(&d).len(), r3_sites(&d).len());

    let t = traversal(&d, None)?;
    print!("{}", render_traversal(&t));
    let back = parse_traversal(&render_traversal(&t))?;
    assert!(back.same_shape(&t));

    let kinked = r1_add_kink(&d, 1, Sign::Pos, true)?;
    println!("after R1: {} crossings", kinked.crossing_count());
    println!("jones unchanged: {}", jones(&kinked)? == jones(&d)?);
    Ok(())
}
