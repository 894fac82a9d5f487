//! Ordered crossing visits along a knot (or along open strands of a
//! fragment), the input of the W-word encoder.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::pd::{Arc, PDCode, Sign};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn flip(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Visit {
    /// Label of the point just before this crossing visit.
    pub point: String,
    pub crossing: String,
    pub role: Role,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strand {
    pub start: String,
    pub visits: Vec<Visit>,
    /// End label for an open strand; `None` means the strand closes up.
    pub end: Option<String>,
}

impl Strand {
    /// Label of the point after visit `i`.
    pub fn point_after(&self, i: usize) -> &str {
        if i + 1 < self.visits.len() {
            &self.visits[i + 1].point
        } else {
            match &self.end {
                Some(e) => e,
                None => &self.start,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraversalCode {
    strands: Vec<Strand>,
}

impl TraversalCode {
    pub fn new(strands: Vec<Strand>) -> Result<Self> {
        if strands.is_empty() {
            return Err(Error::Input("traversal has no strand".into()));
        }
        let closed = strands.iter().filter(|s| s.end.is_none()).count();
        if closed > 0 && strands.len() > 1 {
            return Err(Error::Input(
                "a closed traversal has exactly one strand (links are not supported)".into(),
            ));
        }
        let mut seen: BTreeMap<&str, Vec<(Role, Sign)>> = BTreeMap::new();
        for s in &strands {
            if let Some(v) = s.visits.first() {
                if v.point != s.start {
                    return Err(Error::Input(format!(
                        "strand starts at {} but its first visit is preceded by {}",
                        s.start, v.point
                    )));
                }
            }
            for v in &s.visits {
                seen.entry(v.crossing.as_str()).or_default().push((v.role, v.sign));
            }
        }
        for (c, vs) in &seen {
            let ok = vs.len() == 2 && vs[0].0 != vs[1].0 && vs[0].1 == vs[1].1;
            if !ok {
                return Err(Error::Input(format!(
                    "crossing {c} must be visited exactly twice, once over and once under, with one sign"
                )));
            }
        }
        Ok(Self { strands })
    }

    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }

    pub fn is_closed(&self) -> bool {
        self.strands.len() == 1 && self.strands[0].end.is_none()
    }

    pub fn basepoint(&self) -> &str {
        &self.strands[0].start
    }

    /// All visits in order, strands concatenated.
    pub fn visits(&self) -> impl Iterator<Item = &Visit> {
        self.strands.iter().flat_map(|s| s.visits.iter())
    }

    pub fn visit_count(&self) -> usize {
        self.strands.iter().map(|s| s.visits.len()).sum()
    }

    /// Restart a closed traversal at visit `k`, keeping all labels.
    pub fn rebased(&self, k: usize) -> Result<Self> {
        if !self.is_closed() {
            return Err(Error::Input("only closed traversals can be rebased".into()));
        }
        let s = &self.strands[0];
        if s.visits.is_empty() {
            return Ok(self.clone());
        }
        let n = s.visits.len();
        let visits: Vec<Visit> = (0..n).map(|i| s.visits[(k + i) % n].clone()).collect();
        Self::new(vec![Strand {
            start: visits[0].point.clone(),
            visits,
            end: None,
        }])
    }

    /// Swap over and under everywhere and negate signs.
    pub fn mirrored(&self) -> Self {
        let strands = self
            .strands
            .iter()
            .map(|s| Strand {
                start: s.start.clone(),
                visits: s
                    .visits
                    .iter()
                    .map(|v| Visit {
                        point: v.point.clone(),
                        crossing: v.crossing.clone(),
                        role: v.role.flip(),
                        sign: v.sign.flip(),
                    })
                    .collect(),
                end: s.end.clone(),
            })
            .collect();
        Self { strands }
    }

    /// Same visit structure up to renaming of crossing labels (point labels
    /// must agree).
    pub fn same_shape(&self, other: &Self) -> bool {
        if self.strands.len() != other.strands.len() {
            return false;
        }
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for (a, b) in self.strands.iter().zip(&other.strands) {
            if a.start != b.start || a.end != b.end || a.visits.len() != b.visits.len() {
                return false;
            }
            for (u, v) in a.visits.iter().zip(&b.visits) {
                if u.point != v.point || u.role != v.role || u.sign != v.sign {
                    return false;
                }
                if *map.entry(&u.crossing).or_insert(&v.crossing) != v.crossing {
                    return false;
                }
            }
        }
        true
    }
}

/// Traverse a single-component diagram from the arc `basepoint` (the lowest
/// arc label when `None`). Points are named `z1, z2, ...` in visit order and
/// crossings `w1, w2, ...` in order of first visit.
pub fn traversal(d: &PDCode, basepoint: Option<Arc>) -> Result<TraversalCode> {
    if d.component_count() != 1 {
        return Err(Error::Input(format!(
            "traversal needs a single-component diagram, got {} components",
            d.component_count()
        )));
    }
    if !d.is_oriented() {
        return Err(Error::Input("traversal needs an oriented diagram".into()));
    }
    if d.crossing_count() == 0 {
        return TraversalCode::new(vec![Strand {
            start: "z1".into(),
            visits: vec![],
            end: None,
        }]);
    }
    let base = basepoint.unwrap_or_else(|| *d.arcs().iter().next().expect("has crossings"));
    let slots = d.walk_from(base)?;
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut visits = vec![];
    for (i, &(c, p)) in slots.iter().enumerate() {
        let next = names.len() + 1;
        let name = names.entry(c).or_insert_with(|| format!("w{next}")).clone();
        visits.push(Visit {
            point: format!("z{}", i + 1),
            crossing: name,
            role: if p % 2 == 0 { Role::Under } else { Role::Over },
            sign: d.sign(c).expect("oriented"),
        });
    }
    TraversalCode::new(vec![Strand {
        start: "z1".into(),
        visits,
        end: None,
    }])
}

/// Parse the traversal text format:
///
/// ```text
/// basepoint z1          # or `strand z1`; starts a strand
/// visit z1 w over +1    # point before, crossing, role, sign
/// visit z2 w under +1
/// end z3                # only for open strands
/// ```
pub fn parse_traversal(text: &str) -> Result<TraversalCode> {
    let mut strands: Vec<Strand> = vec![];
    let mut cur: Option<Strand> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let col = |i: usize| raw.find(toks[i]).map(|p| p + 1).unwrap_or(1);
        match toks[0] {
            "basepoint" | "strand" => {
                if toks.len() != 2 {
                    return Err(Error::parse(line_no, 1, "expected `basepoint <label>`"));
                }
                if let Some(s) = cur.take() {
                    strands.push(s);
                }
                cur = Some(Strand {
                    start: toks[1].to_string(),
                    visits: vec![],
                    end: None,
                });
            }
            "visit" => {
                if toks.len() != 5 {
                    return Err(Error::parse(
                        line_no,
                        1,
                        "expected `visit <point> <crossing> over|under +1|-1`",
                    ));
                }
                let role = match toks[3] {
                    "over" | "o" | "O" => Role::Over,
                    "under" | "u" | "U" => Role::Under,
                    r => return Err(Error::parse(line_no, col(3), format!("bad role {r:?}"))),
                };
                let sign = toks[4]
                    .parse::<i32>()
                    .ok()
                    .and_then(Sign::from_value)
                    .ok_or_else(|| Error::parse(line_no, col(4), format!("bad sign {:?}", toks[4])))?;
                let s = cur.get_or_insert_with(|| Strand {
                    start: toks[1].to_string(),
                    visits: vec![],
                    end: None,
                });
                if s.end.is_some() {
                    return Err(Error::parse(line_no, 1, "visit after `end` without a new `strand`"));
                }
                s.visits.push(Visit {
                    point: toks[1].to_string(),
                    crossing: toks[2].to_string(),
                    role,
                    sign,
                });
            }
            "end" => {
                if toks.len() != 2 {
                    return Err(Error::parse(line_no, 1, "expected `end <label>`"));
                }
                let mut s = cur
                    .take()
                    .ok_or_else(|| Error::parse(line_no, 1, "`end` outside a strand"))?;
                s.end = Some(toks[1].to_string());
                strands.push(s);
            }
            other => return Err(Error::parse(line_no, col(0), format!("unknown record {other:?}"))),
        }
    }
    if let Some(s) = cur.take() {
        strands.push(s);
    }
    TraversalCode::new(strands)
}

pub fn render_traversal(t: &TraversalCode) -> String {
    let mut out = String::new();
    for s in t.strands() {
        let _ = writeln!(out, "basepoint {}", s.start);
        for v in &s.visits {
            let role = match v.role {
                Role::Over => "over",
                Role::Under => "under",
            };
            let _ = writeln!(out, "visit {} {} {} {:+}", v.point, v.crossing, role, v.sign.value());
        }
        if let Some(e) = &s.end {
            let _ = writeln!(out, "end {e}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::braid::{braid_closure, parse_braid};

    #[test]
    fn trefoil_alternates() {
        let d = braid_closure(&parse_braid("B2 1 1 1").unwrap());
        let t = traversal(&d, None).unwrap();
        assert_eq!(t.visit_count(), 6);
        let roles: Vec<Role> = t.visits().map(|v| v.role).collect();
        for w in roles.windows(2) {
            assert_ne!(w[0], w[1]);
        }
        assert!(t.visits().all(|v| v.sign == Sign::Pos));
    }

    #[test]
    fn small_cases() {
        let k = braid_closure(&parse_braid("B2 1").unwrap());
        let t = traversal(&k, None).unwrap();
        assert_eq!(t.visit_count(), 2);
        assert_eq!(t.visits().next().unwrap().crossing, "w1");
        let u = traversal(&PDCode::unknot(), None).unwrap();
        assert_eq!(u.visit_count(), 0);
        let hopf = braid_closure(&parse_braid("B2 1 1").unwrap());
        assert!(traversal(&hopf, None).is_err());
    }

    #[test]
    fn text_round_trip() {
        let text = "basepoint z1\nvisit z1 w over +1\nvisit z2 w under +1\n";
        let t = parse_traversal(text).unwrap();
        assert!(t.is_closed());
        assert_eq!(render_traversal(&t), text);

        let open = "basepoint z1\nvisit z1 w over +1\nvisit z2 w under +1\nend z3\n";
        let t = parse_traversal(open).unwrap();
        assert!(!t.is_closed());
        assert_eq!(t.strands()[0].point_after(1), "z3");
        assert_eq!(render_traversal(&t), open);

        assert!(parse_traversal("visit z1 w over +1\n").is_err());
        assert!(matches!(
            parse_traversal("visit z1 w sideways +1"),
            Err(Error::Parse { col: 12, .. })
        ));
    }
}
