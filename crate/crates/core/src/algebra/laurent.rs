//! Exact Laurent polynomials with half-integer exponents.
//!
//! Exponents are stored as integer counts of half-steps, so `t^(3/2)` is the
//! key `3` and `t^-4` is the key `-8`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff * x^(half / 2)`.
    pub fn monomial(coeff: i64, half: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(half, coeff);
        p
    }

    /// `coeff * x^e` for an integer exponent `e`.
    pub fn int_monomial(coeff: i64, e: i32) -> Self {
        Self::monomial(coeff, 2 * e)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (h, c) in terms {
            p.add_term(h, c);
        }
        p
    }

    pub fn add_term(&mut self, half: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(half).or_insert(0);
        *e = e.checked_add(coeff).expect("Laurent coefficient overflow");
        if *e == 0 {
            self.terms.remove(&half);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, half: i32) -> i64 {
        self.terms.get(&half).copied().unwrap_or(0)
    }

    /// Terms in increasing exponent order as `(half_steps, coeff)`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&h, &c)| (h, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_terms(self.terms().map(|(h, k)| (h, k * c)))
    }

    /// Multiply by `x^(half / 2)`.
    pub fn shift(&self, half: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&h, &c)| (h + half, c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `x -> y^(num/den)` where the result is again stored in
    /// half-steps of `y`. Fails when an exponent does not land on a half-step.
    pub fn substitute_power(&self, num: i32, den: i32) -> Result<Self> {
        let mut out = Self::zero();
        for (h, c) in self.terms() {
            let scaled = h * num;
            if scaled % den != 0 {
                return Err(Error::Numerical(format!(
                    "exponent {h}/2 does not map to a half-integer under x -> y^({num}/{den})"
                )));
            }
            out.add_term(scaled / den, c);
        }
        Ok(out)
    }

    /// `x -> x^-1`.
    pub fn invert_variable(&self) -> Self {
        Self::from_terms(self.terms().map(|(h, c)| (-h, c)))
    }

    /// Numerical value at a positive real point.
    pub fn eval(&self, x: f64) -> f64 {
        self.terms().map(|(h, c)| c as f64 * x.powf(h as f64 / 2.0)).sum()
    }

    /// Sorted term list `coeff*t^(p/2)`, the JSON polynomial format.
    pub fn to_term_strings(&self, var: &str) -> Vec<String> {
        self.terms().map(|(h, c)| format!("{c}*{var}^({h}/2)")).collect()
    }

    pub fn from_term_strings(terms: &[String]) -> Result<Self> {
        let mut p = Self::zero();
        for t in terms {
            let (c, rest) = t
                .split_once('*')
                .ok_or_else(|| Error::Input(format!("bad term {t:?}")))?;
            let inner = rest
                .split_once("^(")
                .and_then(|(_, r)| r.strip_suffix("/2)"))
                .ok_or_else(|| Error::Input(format!("bad term {t:?}")))?;
            let c: i64 = c
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("bad coefficient in {t:?}")))?;
            let h: i32 = inner
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("bad exponent in {t:?}")))?;
            p.add_term(h, c);
        }
        Ok(p)
    }

    /// Human readable rendering in the given variable.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (h, c)) in self.terms().enumerate() {
            let neg = c < 0;
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let exp = if h % 2 == 0 {
                format!("{}", h / 2)
            } else {
                format!("{h}/2")
            };
            match (h, a) {
                (0, _) => s.push_str(&a.to_string()),
                (_, 1) => s.push_str(&format!("{var}^{exp}")),
                _ => s.push_str(&format!("{a}*{var}^{exp}")),
            }
        }
        s
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (h, c) in rhs.terms() {
            self.add_term(h, c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (h1, c1) in self.terms() {
            for (h2, c2) in rhs.terms() {
                out.add_term(h1 + h2, c1.checked_mul(c2).expect("Laurent overflow"));
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-12i32..12, -20i64..20), 0..6).prop_map(LaurentPoly::from_terms)
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = LaurentPoly::monomial(3, 2);
        p.add_term(2, -3);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn display_and_terms() {
        let v = LaurentPoly::from_terms([(-8, -1), (-6, 1), (-2, 1)]);
        assert_eq!(v.to_string(), "-t^-4 + t^-3 + t^-1");
        assert_eq!(v.to_term_strings("t"), vec!["-1*t^(-8/2)", "1*t^(-6/2)", "1*t^(-2/2)"]);
        let back = LaurentPoly::from_term_strings(&v.to_term_strings("t")).unwrap();
        assert_eq!(back, v);
        assert_eq!(LaurentPoly::monomial(2, 1).to_string(), "2*t^1/2");
    }

    #[test]
    fn substitution_a_to_t() {
        // A^-4 with A stored in half-steps is key -8; under A = t^(-1/4) it is t^1.
        let p = LaurentPoly::monomial(1, -8);
        assert_eq!(p.substitute_power(-1, 4).unwrap(), LaurentPoly::monomial(1, 2));
        assert!(LaurentPoly::monomial(1, 2).substitute_power(-1, 4).is_err());
    }

    proptest! {
        #[test]
        fn ring_axioms(p in poly(), q in poly(), r in poly()) {
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert!((&p - &p).is_zero());
        }

        #[test]
        fn evaluation_is_a_homomorphism(p in poly(), q in poly()) {
            let lhs = (&p * &q).eval(2.0);
            let rhs = p.eval(2.0) * q.eval(2.0);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }
    }
}
