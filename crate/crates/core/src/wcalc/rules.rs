use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::word::{normalize_factors, Factor, Label, WWord};
use crate::error::{Error, Result};

/// Rewrite rules. Each relation is available in both directions; the `Rev`
/// variants read it right to left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// W(a,b) W(b,c) → W(a,c)
    Concat,
    /// W(a,c) → W(a,b) W(b,c), b an existing label
    ConcatRev,
    /// W(z3,z2) W(z1,z4) → R W(z1,z2) W(z3,z4), z1 before z3
    BraidLeft,
    /// W(z1,z2) W(z3,z4) → R⁻¹ W(z3,z2) W(z1,z4): the same relation
    /// multiplied by R⁻¹ on the left; adjacent R-powers then merge.
    BraidLeftRev,
    /// W(z1,z4) W(z3,z2) → W(z1,z2) W(z3,z4) R⁻¹, z2 before z4
    BraidRight,
    /// W(z1,z2) W(z3,z4) → W(z1,z4) W(z3,z2) R
    BraidRightRev,
    /// W(z3,z4) W(z1,z2) → R W(z1,z2) W(z3,z4) R⁻¹, z1 before z3 and z2 before z4
    Conjugate,
    /// W(z1,z2) W(z3,z4) → R⁻¹ W(z3,z4) W(z1,z2) R
    ConjugateRev,
    /// Cyclic shift of an open fragment read under the trace; only used
    /// when rotation is enabled for fragments.
    Rotate,
}

pub const ALL_RULES: [Rule; 9] = [
    Rule::Concat,
    Rule::ConcatRev,
    Rule::BraidLeft,
    Rule::BraidLeftRev,
    Rule::BraidRight,
    Rule::BraidRightRev,
    Rule::Conjugate,
    Rule::ConjugateRev,
    Rule::Rotate,
];

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Concat => "concat",
            Rule::ConcatRev => "concat_rev",
            Rule::BraidLeft => "braid_left",
            Rule::BraidLeftRev => "braid_left_rev",
            Rule::BraidRight => "braid_right",
            Rule::BraidRightRev => "braid_right_rev",
            Rule::Conjugate => "conjugate",
            Rule::ConjugateRev => "conjugate_rev",
            Rule::Rotate => "rotate",
        }
    }

    pub fn inverse(self) -> Rule {
        match self {
            Rule::Concat => Rule::ConcatRev,
            Rule::ConcatRev => Rule::Concat,
            Rule::BraidLeft => Rule::BraidLeftRev,
            Rule::BraidLeftRev => Rule::BraidLeft,
            Rule::BraidRight => Rule::BraidRightRev,
            Rule::BraidRightRev => Rule::BraidRight,
            Rule::Conjugate => Rule::ConjugateRev,
            Rule::ConjugateRev => Rule::Conjugate,
            Rule::Rotate => Rule::Rotate,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Rule> {
        ALL_RULES
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown rule {s:?}")))
    }
}

/// One rule application: the rule, the factor index where its pattern
/// starts, and the inserted label for `concat_rev`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleApp {
    pub rule: Rule,
    pub position: usize,
    pub label: Option<Label>,
}

fn not_applicable(rule: Rule, position: usize, reason: impl Into<String>) -> Error {
    Error::RuleNotApplicable {
        rule: rule.name().to_string(),
        position,
        reason: reason.into(),
    }
}

/// Rewrite the pattern starting at `app.position`; returns the replacement
/// and the number of factors it consumes.
fn rewrite(f: &[Factor], closed: bool, app: RuleApp) -> Result<(Vec<Factor>, usize)> {
    use Factor::{R, W};
    let n = f.len();
    let rule = app.rule;
    let i = app.position;
    if i >= n {
        return Err(not_applicable(
            rule,
            i,
            format!("position outside a word of {n} factors"),
        ));
    }
    let at = |k: usize| -> Option<Factor> {
        if closed {
            (k < n).then(|| f[(i + k) % n])
        } else {
            f.get(i + k).copied()
        }
    };
    let fail = |why: &str| Err(not_applicable(rule, i, why));
    match rule {
        Rule::Concat => match (at(0), at(1)) {
            (Some(W(a, b)), Some(W(b2, c))) if b == b2 => Ok((vec![W(a, c)], 2)),
            (Some(W(..)), Some(W(..))) => fail("inner endpoints differ"),
            _ => fail("needs two W-factors"),
        },
        Rule::ConcatRev => {
            let Some(b) = app.label else {
                return fail("needs an inserted label");
            };
            match at(0) {
                Some(W(a, c)) if b != a && b != c => Ok((vec![W(a, b), W(b, c)], 1)),
                Some(W(..)) => fail("inserted label equals an endpoint"),
                _ => fail("needs a W-factor"),
            }
        }
        Rule::BraidLeft => match (at(0), at(1)) {
            (Some(W(z3, z2)), Some(W(z1, z4))) if z1 < z3 => Ok((vec![R(1), W(z1, z2), W(z3, z4)], 2)),
            (Some(W(..)), Some(W(..))) => fail("z1 is not before z3"),
            _ => fail("needs two W-factors"),
        },
        Rule::BraidLeftRev => match (at(0), at(1)) {
            (Some(W(z1, z2)), Some(W(z3, z4))) if z1 < z3 => Ok((vec![R(-1), W(z3, z2), W(z1, z4)], 2)),
            (Some(W(..)), Some(W(..))) => fail("z1 is not before z3"),
            _ => fail("needs two W-factors"),
        },
        Rule::BraidRight => match (at(0), at(1)) {
            (Some(W(z1, z4)), Some(W(z3, z2))) if z2 < z4 => Ok((vec![W(z1, z2), W(z3, z4), R(-1)], 2)),
            (Some(W(..)), Some(W(..))) => fail("z2 is not before z4"),
            _ => fail("needs two W-factors"),
        },
        Rule::BraidRightRev => match (at(0), at(1)) {
            (Some(W(z1, z2)), Some(W(z3, z4))) if z2 < z4 => Ok((vec![W(z1, z4), W(z3, z2), R(1)], 2)),
            (Some(W(..)), Some(W(..))) => fail("z2 is not before z4"),
            _ => fail("needs two W-factors"),
        },
        Rule::Conjugate => match (at(0), at(1)) {
            (Some(W(z3, z4)), Some(W(z1, z2))) if z1 < z3 && z2 < z4 => {
                Ok((vec![R(1), W(z1, z2), W(z3, z4), R(-1)], 2))
            }
            (Some(W(..)), Some(W(..))) => fail("the second curve is not before the first"),
            _ => fail("needs two W-factors"),
        },
        Rule::ConjugateRev => match (at(0), at(1)) {
            (Some(W(z1, z2)), Some(W(z3, z4))) if z1 < z3 && z2 < z4 => {
                Ok((vec![R(-1), W(z3, z4), W(z1, z2), R(1)], 2))
            }
            (Some(W(..)), Some(W(..))) => fail("the first curve is not before the second"),
            _ => fail("needs two W-factors"),
        },
        Rule::Rotate => {
            if closed {
                fail("closed words are already identified up to rotation")
            } else if i == 0 {
                fail("rotation by zero")
            } else {
                let mut v = f.to_vec();
                v.rotate_left(i);
                Ok((v, n))
            }
        }
    }
}

/// Apply one rule; the result is normalized (R-powers merged, canonical
/// rotation for closed words).
pub fn apply_rule(w: &WWord, app: RuleApp) -> Result<WWord> {
    if let Some(b) = app.label {
        if b as usize >= w.labels().len() {
            return Err(not_applicable(
                app.rule,
                app.position,
                "inserted label outside the label order",
            ));
        }
    }
    let f = w.factors();
    let (repl, k) = rewrite(f, w.is_closed(), app)?;
    let i = app.position;
    let out = if app.rule == Rule::Rotate {
        repl
    } else if w.is_closed() {
        let mut rot = f.to_vec();
        rot.rotate_left(i);
        let mut v = repl;
        v.extend_from_slice(&rot[k..]);
        v
    } else {
        let mut v = f[..i].to_vec();
        v.extend(repl);
        v.extend_from_slice(&f[i + k..]);
        v
    };
    Ok(WWord::from_normalized(
        normalize_factors(&out, w.is_closed()),
        w.is_closed(),
        w.labels().clone(),
    ))
}

/// Which rules the search may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub split: bool,
    pub rotate_open: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        Self {
            split: true,
            rotate_open: false,
        }
    }
}

/// Every applicable rule application, in a fixed deterministic order.
pub fn successors(w: &WWord, rules: RuleSet) -> Vec<(RuleApp, WWord)> {
    let n = w.len();
    let mut out = vec![];
    let mut push = |app: RuleApp| {
        if let Ok(x) = apply_rule(w, app) {
            if &x != w {
                out.push((app, x));
            }
        }
    };
    for i in 0..n {
        for rule in [
            Rule::Concat,
            Rule::BraidLeft,
            Rule::BraidRight,
            Rule::Conjugate,
            Rule::BraidLeftRev,
            Rule::BraidRightRev,
            Rule::ConjugateRev,
        ] {
            push(RuleApp {
                rule,
                position: i,
                label: None,
            });
        }
        if rules.split {
            if let Factor::W(a, c) = w.factors()[i] {
                for b in 0..w.labels().len() as Label {
                    if b != a && b != c {
                        push(RuleApp {
                            rule: Rule::ConcatRev,
                            position: i,
                            label: Some(b),
                        });
                    }
                }
            }
        }
    }
    if rules.rotate_open && !w.is_closed() {
        for i in 1..n {
            push(RuleApp {
                rule: Rule::Rotate,
                position: i,
                label: None,
            });
        }
    }
    out
}
