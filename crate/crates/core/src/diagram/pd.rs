//! Planar-diagram codes.
//!
//! `X[a,b,c,d]` lists the four arcs at a crossing counterclockwise, starting
//! with the incoming under-strand; the under-strand runs a → c. The over
//! strand runs d → b for a positive crossing and b → d for a negative one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Arc = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_value(v: i32) -> Option<Sign> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    /// Slot (1 = b, 3 = d) through which the over strand enters.
    pub fn over_in_slot(self) -> usize {
        match self {
            Sign::Pos => 3,
            Sign::Neg => 1,
        }
    }
}

/// A slot is a (crossing index, position 0..4) pair.
pub type Slot = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDCode {
    crossings: Vec<[Arc; 4]>,
    /// Per-crossing sign, `None` while orientation is unknown.
    signs: Vec<Option<Sign>>,
    /// Crossingless unknotted components.
    free_loops: usize,
}

impl PDCode {
    /// Build and validate; orientation is completed by propagation where
    /// possible.
    pub fn from_parts(crossings: Vec<[Arc; 4]>, signs: Vec<Option<Sign>>, free_loops: usize) -> Result<Self> {
        if signs.len() != crossings.len() {
            return Err(Error::Input("sign list length differs from crossing count".into()));
        }
        let mut count: BTreeMap<Arc, usize> = BTreeMap::new();
        for t in &crossings {
            for &a in t {
                *count.entry(a).or_default() += 1;
            }
        }
        if let Some((a, n)) = count.iter().find(|(_, &n)| n != 2) {
            return Err(Error::Input(format!("arc {a} occurs {n} times, expected exactly 2")));
        }
        let mut pd = Self {
            crossings,
            signs,
            free_loops,
        };
        pd.propagate_orientation()?;
        Ok(pd)
    }

    /// Unoriented diagram; orientation is inferred from under-strands.
    pub fn new(crossings: Vec<[Arc; 4]>) -> Result<Self> {
        let n = crossings.len();
        Self::from_parts(crossings, vec![None; n], 0)
    }

    pub fn unknot() -> Self {
        Self {
            crossings: vec![],
            signs: vec![],
            free_loops: 1,
        }
    }

    pub fn unlink(components: usize) -> Self {
        Self {
            crossings: vec![],
            signs: vec![],
            free_loops: components,
        }
    }

    pub fn crossings(&self) -> &[[Arc; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn sign(&self, c: usize) -> Option<Sign> {
        self.signs[c]
    }

    pub fn signs(&self) -> &[Option<Sign>] {
        &self.signs
    }

    pub fn is_oriented(&self) -> bool {
        self.signs.iter().all(|s| s.is_some())
    }

    pub fn arcs(&self) -> BTreeSet<Arc> {
        self.crossings.iter().flatten().copied().collect()
    }

    pub fn max_arc(&self) -> Arc {
        self.arcs().into_iter().max().unwrap_or(0)
    }

    pub fn arc_at(&self, s: Slot) -> Arc {
        self.crossings[s.0][s.1]
    }

    /// The two slots holding an arc.
    pub fn slots_of(&self, a: Arc) -> Vec<Slot> {
        let mut v = Vec::with_capacity(2);
        for (c, t) in self.crossings.iter().enumerate() {
            for (p, &x) in t.iter().enumerate() {
                if x == a {
                    v.push((c, p));
                }
            }
        }
        v
    }

    /// The other slot carrying the same arc.
    pub fn other_end(&self, s: Slot) -> Slot {
        let a = self.arc_at(s);
        self.slots_of(a)
            .into_iter()
            .find(|&t| t != s)
            .expect("validated: every arc occurs twice")
    }

    /// Whether the arc at slot `s` enters the crossing there. Requires the
    /// crossing's sign to be known for over slots.
    pub fn is_incoming(&self, s: Slot) -> Option<bool> {
        match s.1 {
            0 => Some(true),
            2 => Some(false),
            p => self.signs[s.0].map(|sg| sg.over_in_slot() == p),
        }
    }

    fn propagate_orientation(&mut self) -> Result<()> {
        loop {
            let mut changed = false;
            for c in 0..self.crossings.len() {
                if self.signs[c].is_some() {
                    continue;
                }
                for p in [1usize, 3] {
                    let other = self.other_end((c, p));
                    let inc = if other.0 == c && (other.1 == 1 || other.1 == 3) {
                        None
                    } else {
                        self.is_incoming(other)
                    };
                    if let Some(other_in) = inc {
                        // our end is incoming iff the other end is outgoing
                        let ours_in = !other_in;
                        let over_in = if ours_in { p } else { (p + 2) % 4 };
                        self.signs[c] = Some(if over_in == 3 { Sign::Pos } else { Sign::Neg });
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if self.is_oriented() {
            self.check_orientation()?;
        }
        Ok(())
    }

    fn check_orientation(&self) -> Result<()> {
        for a in self.arcs() {
            let s = self.slots_of(a);
            let i0 = self.is_incoming(s[0]);
            let i1 = self.is_incoming(s[1]);
            if let (Some(x), Some(y)) = (i0, i1) {
                if x == y {
                    return Err(Error::Input(format!("arc {a} has inconsistent orientation")));
                }
            }
        }
        Ok(())
    }

    /// Fix the over-strand direction at crossing `c` by naming its incoming
    /// over arc, then re-propagate.
    pub fn orient_crossing(&mut self, c: usize, over_in_arc: Arc) -> Result<()> {
        let t = self
            .crossings
            .get(c)
            .ok_or_else(|| Error::Input(format!("unknown crossing {c}")))?;
        let sign = if t[3] == over_in_arc {
            Sign::Pos
        } else if t[1] == over_in_arc {
            Sign::Neg
        } else {
            return Err(Error::Input(format!(
                "arc {over_in_arc} is not an over arc of crossing {c}"
            )));
        };
        if let Some(s) = self.signs[c] {
            if s != sign && t[1] != t[3] {
                return Err(Error::Input(format!(
                    "orientation of crossing {c} contradicts propagation"
                )));
            }
        }
        self.signs[c] = Some(sign);
        self.propagate_orientation()
    }

    pub fn writhe(&self) -> Result<i32> {
        self.signs
            .iter()
            .enumerate()
            .map(|(c, s)| {
                s.map(Sign::value)
                    .ok_or_else(|| Error::Input(format!("crossing {c} is unoriented")))
            })
            .sum()
    }

    /// Link components: strand cycles through crossings plus free loops.
    pub fn component_count(&self) -> usize {
        self.components().len() + self.free_loops
    }

    /// Arc sets of the crossing-carrying components.
    pub fn components(&self) -> Vec<BTreeSet<Arc>> {
        let arcs: Vec<Arc> = self.arcs().into_iter().collect();
        let idx: BTreeMap<Arc, usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut uf = UnionFind::new(arcs.len());
        for t in &self.crossings {
            uf.union(idx[&t[0]], idx[&t[2]]);
            uf.union(idx[&t[1]], idx[&t[3]]);
        }
        let mut groups: BTreeMap<usize, BTreeSet<Arc>> = BTreeMap::new();
        for (i, &a) in arcs.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().insert(a);
        }
        groups.into_values().collect()
    }

    /// Walk a component along its orientation starting at the slot where
    /// `start` enters a crossing. Returns the incoming slots in order.
    pub fn walk_from(&self, start: Arc) -> Result<Vec<Slot>> {
        let head = self
            .slots_of(start)
            .into_iter()
            .find(|&s| self.is_incoming(s) == Some(true))
            .ok_or_else(|| Error::Input(format!("arc {start} missing or unoriented")))?;
        let mut out = vec![];
        let mut s = head;
        loop {
            out.push(s);
            let exit = (s.0, (s.1 + 2) % 4);
            s = self.other_end(exit);
            if s == head {
                break;
            }
            if out.len() > 4 * self.crossings.len() {
                return Err(Error::Input("orientation walk does not close".into()));
            }
        }
        Ok(out)
    }

    /// Relabel arcs to 1..=m preserving numeric order.
    pub fn compact_labels(&self) -> Self {
        let map: BTreeMap<Arc, Arc> = self
            .arcs()
            .into_iter()
            .enumerate()
            .map(|(i, a)| (a, i as Arc + 1))
            .collect();
        Self {
            crossings: self.crossings.iter().map(|t| t.map(|a| map[&a])).collect(),
            signs: self.signs.clone(),
            free_loops: self.free_loops,
        }
    }

    /// Internal constructor used by the move generators; skips validation.
    pub(crate) fn raw(crossings: Vec<[Arc; 4]>, signs: Vec<Option<Sign>>, free_loops: usize) -> Self {
        Self {
            crossings,
            signs,
            free_loops,
        }
    }

    /// Faces of the planar diagram as cyclic lists of darts. A dart
    /// `(c, p)` leaves crossing `c` through slot `p`; the face lies on its
    /// left.
    pub fn faces(&self) -> Vec<Vec<Slot>> {
        let mut seen = BTreeSet::new();
        let mut faces = vec![];
        for c in 0..self.crossings.len() {
            for p in 0..4 {
                if seen.contains(&(c, p)) {
                    continue;
                }
                let mut face = vec![];
                let mut d = (c, p);
                while seen.insert(d) {
                    face.push(d);
                    let (c2, p2) = self.other_end(d);
                    d = (c2, (p2 + 3) % 4);
                }
                faces.push(face);
            }
        }
        faces
    }
}

/// Parse the PD text format: `X a b c d` lines, optional `O i arc` lines
/// (0-based crossing index, incoming over arc), optional `U n` lines
/// (crossingless unknotted components), `#` comments.
pub fn parse_pd(text: &str) -> Result<PDCode> {
    let mut crossings = vec![];
    let mut orients = vec![];
    let mut free = 0usize;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let col_of = |i: usize| raw.find(toks[i]).map(|p| p + 1).unwrap_or(1);
        let num = |i: usize| -> Result<u32> {
            toks.get(i)
                .ok_or_else(|| Error::parse(line_no, raw.len() + 1, "missing field"))?
                .parse::<u32>()
                .map_err(|_| {
                    Error::parse(
                        line_no,
                        col_of(i),
                        format!("expected a non-negative integer, got {:?}", toks[i]),
                    )
                })
        };
        match toks[0] {
            "X" => {
                if toks.len() != 5 {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!("X line needs 4 arcs, got {}", toks.len() - 1),
                    ));
                }
                crossings.push([num(1)?, num(2)?, num(3)?, num(4)?]);
            }
            "O" => {
                if toks.len() != 3 {
                    return Err(Error::parse(line_no, 1, "O line needs a crossing index and an arc"));
                }
                orients.push((line_no, num(1)? as usize, num(2)?));
            }
            "U" => {
                if toks.len() != 2 {
                    return Err(Error::parse(line_no, 1, "U line needs a count"));
                }
                free += num(1)? as usize;
            }
            other => {
                return Err(Error::parse(line_no, col_of(0), format!("unknown record {other:?}")));
            }
        }
    }
    let n = crossings.len();
    let mut pd = PDCode::from_parts(crossings, vec![None; n], free)?;
    for (line_no, c, a) in orients {
        pd.orient_crossing(c, a)
            .map_err(|e| Error::parse(line_no, 1, e.to_string()))?;
    }
    Ok(pd)
}

/// Render in the PD text format, including an `O` line per crossing.
pub fn render_pd(pd: &PDCode) -> String {
    let mut s = String::new();
    for t in pd.crossings() {
        let _ = writeln!(s, "X {} {} {} {}", t[0], t[1], t[2], t[3]);
    }
    for (c, sg) in pd.signs().iter().enumerate() {
        if let Some(sg) = sg {
            let _ = writeln!(s, "O {} {}", c, pd.crossings()[c][sg.over_in_slot()]);
        }
    }
    if pd.free_loops() > 0 {
        let _ = writeln!(s, "U {}", pd.free_loops());
    }
    s
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::braid::{braid_closure, parse_braid};

    fn closure(s: &str) -> PDCode {
        braid_closure(&parse_braid(s).unwrap())
    }

    #[test]
    fn writhe_examples() {
        assert_eq!(closure("B2 1 1 1").writhe().unwrap(), 3);
        assert_eq!(PDCode::unknot().writhe().unwrap(), 0);
        assert_eq!(closure("B3 1 -2 1 -2").writhe().unwrap(), 0);
    }

    #[test]
    fn orientation_is_inferred_from_under_strands() {
        let t = closure("B2 1 1 1");
        let bare = PDCode::new(t.crossings().to_vec()).unwrap();
        assert_eq!(bare, t);
    }

    #[test]
    fn unoriented_over_only_component_needs_o_line() {
        // Two-component diagram where one component only passes over.
        let text = "X 1 3 2 4\nX 2 4 1 3\n";
        let pd = parse_pd(text).unwrap();
        assert!(!pd.is_oriented());
        assert!(pd.writhe().is_err());
        let pd = parse_pd(&format!("{text}O 0 4\n")).unwrap();
        assert!(pd.is_oriented());
        assert_eq!(pd.component_count(), 2);
    }

    #[test]
    fn parse_render_round_trip() {
        for w in ["B2 1 1 1", "B3 1 -2 1 -2", "B2", "B3 1 1 2 -1"] {
            let pd = closure(w);
            let back = parse_pd(&render_pd(&pd)).unwrap();
            assert_eq!(back, pd, "{w}");
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_pd("X 1 2 3"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_pd("# c\nX 1 2 a 4"),
            Err(Error::Parse { line: 2, col: 7, .. })
        ));
        assert!(matches!(parse_pd("Y 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_pd("X 1 2 3 4"), Err(Error::Input(_))));
    }

    #[test]
    fn euler_characteristic_of_faces() {
        for w in ["B2 1 1 1", "B3 1 -2 1 -2", "B2 1", "B4 1 2 3 -1 2"] {
            let pd = closure(w);
            let n = pd.crossing_count();
            if pd.components().len() == 1 || w == "B2 1 1 1" {
                assert_eq!(pd.faces().len(), n + 2, "{w}");
            }
        }
    }
}
