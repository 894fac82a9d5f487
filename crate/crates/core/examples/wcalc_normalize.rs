//! Encoding a traversal as a W-word, searching for its normal form
//! Tr⟨Rⁿ W(z,z)⟩ and replaying the rewrite trace.
//!
//! cargo run --release --example wcalc_normalize

use knotforge::diagram::parse_traversal;
use knotforge::wcalc::{encode, invariant_value, normalize, open_reduce, SearchOptions, WWord};

const KINK: &str = "\
basepoint z1
visit z1 w over +1
visit z2 w under +1
end z3
";

fn main() -> knotforge::Result<()> {
    let opts = SearchOptions::default();

    let closed = WWord::parse("Tr[ W(z2,w) W(w,z2) W(z1,w) W(w,z1) ]", None)?;
    let norm = normalize(&closed, &opts)?;
    println!("{closed}\n  -> {} (n = {})", norm.word, norm.normal_form.n);
    for s in &norm.trace.steps {
        println!("  {:>16} @{}: {}", s.rule.to_string(), s.position, s.after);
    }
    assert_eq!(norm.trace.replay(&closed)?, norm.word);
    for k in 1..=3 {
        println!("  Tr R^n at k={k}: {}", invariant_value(&norm.normal_form, k)?);
    }

    let open = encode(&parse_traversal(KINK)?)?;
    let red = open_reduce(&open, &opts)?;
    println!("{open}\n  -> {} after {} steps", red.word, red.trace.len());
    Ok(())
}
