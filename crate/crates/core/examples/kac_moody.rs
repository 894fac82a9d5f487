//! Exact brackets in the affine su(2) Kac–Moody algebra and a Jacobi check.
//!
//! cargo run --example kac_moody

use knotforge::algebra::kac_moody::{cq, jacobiator};
use knotforge::algebra::{km_bracket, KMElement};

fn main() {
    let (j1, j2, j3) = (KMElement::j(1, 1), KMElement::j(2, -1), KMElement::j(3, 0));
    println!("[J1_1, J1_-1] = {}", km_bracket(&j1, &KMElement::j(1, -1)));
    println!("[J1_1, J2_-1] = {}", km_bracket(&j1, &j2));
    println!("[K, J3_0]     = {}", km_bracket(&KMElement::k(), &j3));

    let mut x = KMElement::j(1, 2);
    x.add_term(3, -1, cq(0, 2));
    let jac = jacobiator(&x, &j2, &j3);
    println!("Jacobiator vanishes: {}", jac.is_zero());
}
