//! Affine su(2) Kac-Moody algebra with exact complex-rational coefficients.
//!
//! Basis: `J^a_m` (a = 1, 2, 3, m ∈ ℤ) and a central element. The level is
//! kept formal: the central basis element is written `k`, so
//! `[J^a_m, J^b_n] = i ε_abc J^c_{m+n} + m δ_ab δ_{m+n,0} · k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Zero};

/// Exact complex rational.
pub type CQ = Complex<Rational64>;

pub fn cq(re: i64, im: i64) -> CQ {
    Complex::new(Rational64::from_integer(re), Rational64::from_integer(im))
}

/// Levi-Civita symbol on indices 1..=3.
pub fn epsilon(a: u8, b: u8, c: u8) -> i64 {
    match (a, b, c) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KMElement {
    terms: BTreeMap<(u8, i64), CQ>,
    central: CQ,
}

impl KMElement {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
            central: CQ::zero(),
        }
    }

    /// The basis element `J^a_m`.
    pub fn j(a: u8, m: i64) -> Self {
        assert!((1..=3).contains(&a), "adjoint index must be 1, 2 or 3");
        let mut x = Self::zero();
        x.add_term(a, m, CQ::one());
        x
    }

    /// The central element.
    pub fn k() -> Self {
        Self {
            terms: BTreeMap::new(),
            central: CQ::one(),
        }
    }

    pub fn add_term(&mut self, a: u8, m: i64, c: CQ) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, m)).or_insert_with(CQ::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, m));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u8, i64, &CQ)> {
        self.terms.iter().map(|(&(a, m), c)| (a, m, c))
    }

    pub fn central(&self) -> &CQ {
        &self.central
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn scale(&self, s: &CQ) -> Self {
        let mut out = Self::zero();
        for (a, m, c) in self.terms() {
            out.add_term(a, m, c * s);
        }
        out.central = self.central * s;
        out
    }
}

/// Bracket of two basis elements `[J^a_m, J^b_n]`.
pub fn basis_bracket(a: u8, m: i64, b: u8, n: i64) -> KMElement {
    let mut out = KMElement::zero();
    for c in 1..=3 {
        let e = epsilon(a, b, c);
        if e != 0 {
            out.add_term(c, m + n, cq(0, e));
        }
    }
    if a == b && m + n == 0 {
        out.central = cq(m, 0);
    }
    out
}

/// Bilinear bracket; the central element brackets to zero with everything.
pub fn km_bracket(x: &KMElement, y: &KMElement) -> KMElement {
    let mut out = KMElement::zero();
    for (a, m, cx) in x.terms() {
        for (b, n, cy) in y.terms() {
            let coeff = cx * cy;
            out = &out + &basis_bracket(a, m, b, n).scale(&coeff);
        }
    }
    out
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`, zero for a Lie algebra.
pub fn jacobiator(x: &KMElement, y: &KMElement, z: &KMElement) -> KMElement {
    let a = km_bracket(x, &km_bracket(y, z));
    let b = km_bracket(y, &km_bracket(z, x));
    let c = km_bracket(z, &km_bracket(x, y));
    &(&a + &b) + &c
}

impl Add for &KMElement {
    type Output = KMElement;
    fn add(self, rhs: &KMElement) -> KMElement {
        let mut out = self.clone();
        for (a, m, c) in rhs.terms() {
            out.add_term(a, m, *c);
        }
        out.central += rhs.central;
        out
    }
}

impl Neg for &KMElement {
    type Output = KMElement;
    fn neg(self) -> KMElement {
        self.scale(&cq(-1, 0))
    }
}

impl Sub for &KMElement {
    type Output = KMElement;
    fn sub(self, rhs: &KMElement) -> KMElement {
        self + &(-rhs)
    }
}

impl Mul<&KMElement> for &CQ {
    type Output = KMElement;
    fn mul(self, rhs: &KMElement) -> KMElement {
        rhs.scale(self)
    }
}

fn fmt_cq(c: &CQ) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => c.re.to_string(),
        (true, false) => format!("{}i", c.im),
        _ => format!("({}+{}i)", c.re, c.im),
    }
}

impl fmt::Display for KMElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = self
            .terms()
            .map(|(a, m, c)| format!("{}*J^{a}_{m}", fmt_cq(c)))
            .collect();
        if !self.central.is_zero() {
            parts.push(format!("{}*k", fmt_cq(&self.central)));
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_brackets() {
        let lhs = km_bracket(&KMElement::j(1, 0), &KMElement::j(2, 0));
        assert_eq!(lhs, KMElement::j(3, 0).scale(&cq(0, 1)));

        for m in -4..=4 {
            let z = km_bracket(&KMElement::j(1, m), &KMElement::j(1, -m));
            assert_eq!(z, KMElement::k().scale(&cq(m, 0)));
        }
        assert!(km_bracket(&KMElement::k(), &KMElement::j(2, 3)).is_zero());
        assert_eq!(
            km_bracket(&KMElement::j(1, 0), &KMElement::j(2, 0)).to_string(),
            "1i*J^3_0"
        );
    }

    #[test]
    fn bracket_shape_on_basis() {
        for a in 1..=3 {
            for b in 1..=3 {
                for m in -3..=3 {
                    for n in -3..=3 {
                        let r = basis_bracket(a, m, b, n);
                        assert!(r.terms().count() <= 1);
                    }
                }
            }
        }
    }

    fn element() -> impl Strategy<Value = KMElement> {
        prop::collection::vec((1u8..=3, -5i64..=5, -6i64..=6, -6i64..=6, 1i64..=4), 1..=4).prop_map(|ts| {
            let mut x = KMElement::zero();
            for (a, m, re, im, den) in ts {
                x.add_term(a, m, Complex::new(Rational64::new(re, den), Rational64::new(im, den)));
            }
            x
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn jacobi_and_antisymmetry_random(x in element(), y in element(), z in element()) {
            prop_assert!(jacobiator(&x, &y, &z).is_zero());
            prop_assert!((&km_bracket(&x, &y) + &km_bracket(&y, &x)).is_zero());
            prop_assert!(km_bracket(&x, &x).is_zero());
        }
    }
}
