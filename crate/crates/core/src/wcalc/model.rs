//! Numerical evaluation of W-words: the invariant Tr Rⁿ of a normal form and
//! the path-product matrix model used to test rule soundness.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::rules::{successors, Rule, RuleSet};
use super::search::NormalForm;
use super::word::{Factor, WWord};
use crate::algebra::matrix::{SquareMatrixC, C64};
use crate::error::{Error, Result};
use crate::kz::r_matrix;

/// Tr Rⁿ with R = exp(iπ t̂) at level k.
pub fn invariant_value(nf: &NormalForm, k: i64) -> Result<C64> {
    if !nf.is_normalized() {
        return Err(Error::NotNormalized);
    }
    Ok(r_matrix(k)?.powi(nf.n)?.trace())
}

/// W(a,b) = g_a g_b⁻¹ for random invertible 4×4 matrices g, and R from kz.
pub struct MatrixModel {
    g: Vec<SquareMatrixC>,
    g_inv: Vec<SquareMatrixC>,
    r: SquareMatrixC,
    r_inv: SquareMatrixC,
}

impl MatrixModel {
    pub fn random(labels: usize, k: i64, rng: &mut impl Rng) -> Result<Self> {
        let mut g = vec![];
        let mut g_inv = vec![];
        for _ in 0..labels {
            let m = SquareMatrixC::from_fn(4, |i, j| {
                let diag = if i == j { 2.0 } else { 0.0 };
                C64::new(diag + rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            g_inv.push(m.inverse()?);
            g.push(m);
        }
        let r = r_matrix(k)?;
        let r_inv = r.adjoint();
        Ok(Self { g, g_inv, r, r_inv })
    }

    fn factor(&self, f: Factor) -> Result<SquareMatrixC> {
        match f {
            Factor::W(a, b) => Ok(&self.g[a as usize] * &self.g_inv[b as usize]),
            Factor::R(p) if p >= 0 => self.r.powi(p as i64),
            Factor::R(p) => self.r_inv.powi(-(p as i64)),
        }
    }

    /// Trace of the ordered product of the word's factors.
    pub fn trace(&self, w: &WWord) -> Result<C64> {
        if w.labels().len() > self.g.len() {
            return Err(Error::InvalidParameter("word has more labels than the model".into()));
        }
        let mut acc = SquareMatrixC::identity(4);
        for &f in w.factors() {
            acc = &acc * &self.factor(f)?;
        }
        Ok(acc.trace())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleSoundness {
    pub rule: Rule,
    pub applications: usize,
    /// Largest |Tr(before) − Tr(after)| / max(1, |Tr(before)|).
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub applications: usize,
    pub rules: Vec<RuleSoundness>,
}

impl SoundnessReport {
    pub fn sound(&self, tol: f64) -> bool {
        self.rules.iter().all(|r| r.max_error <= tol)
    }
}

/// Random walk of `applications` rule applications starting from `starts`
/// (restarting every `walk_len` steps), comparing word traces before and
/// after each step under a fresh random matrix model.
pub fn soundness_report(starts: &[WWord], k: i64, applications: usize, seed: u64) -> Result<SoundnessReport> {
    const WALK_LEN: usize = 8;
    if starts.is_empty() {
        return Err(Error::InvalidParameter("no start words".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_rule: BTreeMap<Rule, (usize, f64)> = BTreeMap::new();
    let mut done = 0;
    let mut walk = 0;
    let mut w = starts[0].clone();
    while done < applications {
        if walk == WALK_LEN {
            w = starts[rng.random_range(0..starts.len())].clone();
            walk = 0;
        }
        let next = successors(&w, RuleSet::default());
        if next.is_empty() {
            walk = WALK_LEN;
            if starts.iter().all(|s| successors(s, RuleSet::default()).is_empty()) {
                return Err(Error::InvalidParameter("no rule applies to any start word".into()));
            }
            continue;
        }
        let (app, after) = next[rng.random_range(0..next.len())].clone();
        let model = MatrixModel::random(w.labels().len(), k, &mut rng)?;
        let (t0, t1) = (model.trace(&w)?, model.trace(&after)?);
        let err = (t0 - t1).norm() / t0.norm().max(1.0);
        let e = per_rule.entry(app.rule).or_insert((0, 0.0));
        e.0 += 1;
        e.1 = e.1.max(err);
        done += 1;
        walk += 1;
        w = after;
    }
    Ok(SoundnessReport {
        applications: done,
        rules: per_rule
            .into_iter()
            .map(|(rule, (applications, max_error))| RuleSoundness {
                rule,
                applications,
                max_error,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn nf(n: i64) -> NormalForm {
        NormalForm { n, residual: None }
    }

    #[test]
    fn invariant_examples() {
        assert!((invariant_value(&nf(0), 3).unwrap() - C64::new(4.0, 0.0)).norm() < 1e-12);
        let e = |x: f64| C64::new(0.0, x).exp();
        let want = e(PI / 12.0) * 3.0 + e(-PI / 4.0);
        assert!((invariant_value(&nf(1), 1).unwrap() - want).norm() < 1e-10);
        for n in 1..4 {
            let a = invariant_value(&nf(n), 2).unwrap();
            let b = invariant_value(&nf(-n), 2).unwrap();
            assert!((a - b.conj()).norm() < 1e-10);
        }
        let res = NormalForm {
            n: 1,
            residual: Some("Tr[ W(a,b) ]".into()),
        };
        assert_eq!(invariant_value(&res, 1), Err(Error::NotNormalized));
    }

    #[test]
    fn concat_is_sound_and_braiding_is_not() {
        let w = WWord::parse("Tr[ W(z2,w) W(w,z2) W(z1,w) W(w,z1) ]", None).unwrap();
        let r = soundness_report(&[w], 1, 200, 11).unwrap();
        assert_eq!(r.applications, 200);
        let get = |rule| r.rules.iter().find(|x| x.rule == rule);
        assert!(get(Rule::Concat).unwrap().max_error < 1e-10);
        assert!(get(Rule::ConcatRev).unwrap().max_error < 1e-10);
        let braid = [
            Rule::BraidLeft,
            Rule::BraidRight,
            Rule::Conjugate,
            Rule::BraidLeftRev,
            Rule::BraidRightRev,
            Rule::ConjugateRev,
        ];
        assert!(braid.iter().filter_map(|&b| get(b)).any(|x| x.max_error > 1e-3));
        assert!(!r.sound(1e-8));
    }
}
