use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::rules::{apply_rule, successors, Rule, RuleApp, RuleSet};
use super::word::{Factor, WWord};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Maximum number of distinct words visited.
    pub budget: usize,
    /// Words longer than the start word by more than this many factors are
    /// not explored.
    pub max_extra_factors: usize,
    pub rules: RuleSet,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            max_extra_factors: 2,
            rules: RuleSet::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub position: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    fn from_path(start: &WWord, apps: &[RuleApp]) -> Result<(Self, WWord)> {
        let mut cur = start.clone();
        let mut steps = vec![];
        for &app in apps {
            let next = apply_rule(&cur, app)?;
            steps.push(TraceStep {
                rule: app.rule,
                position: app.position,
                label: app.label.map(|l| cur.labels().name(l).to_string()),
                before: cur.to_string(),
                after: next.to_string(),
            });
            cur = next;
        }
        Ok((Self { steps }, cur))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-apply every step from `start`, checking each recorded word.
    pub fn replay(&self, start: &WWord) -> Result<WWord> {
        let mut cur = start.clone();
        for (k, s) in self.steps.iter().enumerate() {
            if cur.to_string() != s.before {
                return Err(Error::Input(format!(
                    "trace step {k}: expected {} but have {cur}",
                    s.before
                )));
            }
            let label = match &s.label {
                Some(name) => Some(
                    cur.labels()
                        .rank(name)
                        .ok_or_else(|| Error::Input(format!("trace step {k}: unknown label {name}")))?,
                ),
                None => None,
            };
            cur = apply_rule(
                &cur,
                RuleApp {
                    rule: s.rule,
                    position: s.position,
                    label,
                },
            )?;
            if cur.to_string() != s.after {
                return Err(Error::Input(format!(
                    "trace step {k}: replay gave {cur}, recorded {}",
                    s.after
                )));
            }
        }
        Ok(cur)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    /// Net R power: of the normal form, or of the residual when the search
    /// did not reach one.
    pub n: i64,
    /// Best word found when normalization failed within budget.
    pub residual: Option<String>,
}

impl NormalForm {
    pub fn is_normalized(&self) -> bool {
        self.residual.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub visited: usize,
    pub depth: usize,
    pub exhausted: bool,
}

#[derive(Clone, Debug)]
pub struct Normalization {
    pub normal_form: NormalForm,
    pub trace: RewriteTrace,
    /// The normal form, or the residual.
    pub word: WWord,
    pub stats: SearchStats,
}

/// Order used to pick a residual: factor count, total |R| power, factors.
fn residual_key(w: &WWord) -> (usize, i64, Vec<Factor>) {
    (w.len(), w.r_weight(), w.factors().to_vec())
}

struct Bfs {
    words: Vec<WWord>,
    parent: Vec<Option<(usize, RuleApp)>>,
    depth: Vec<usize>,
    index: HashMap<Vec<Factor>, usize>,
}

impl Bfs {
    fn new(start: &WWord) -> Self {
        let mut index = HashMap::new();
        index.insert(start.factors().to_vec(), 0);
        Self {
            words: vec![start.clone()],
            parent: vec![None],
            depth: vec![0],
            index,
        }
    }

    fn push(&mut self, w: WWord, from: usize, app: RuleApp) -> Option<usize> {
        if self.index.contains_key(w.factors()) {
            return None;
        }
        let id = self.words.len();
        self.index.insert(w.factors().to_vec(), id);
        self.depth.push(self.depth[from] + 1);
        self.words.push(w);
        self.parent.push(Some((from, app)));
        Some(id)
    }

    fn path(&self, mut id: usize) -> Vec<RuleApp> {
        let mut apps = vec![];
        while let Some((p, app)) = self.parent[id] {
            apps.push(app);
            id = p;
        }
        apps.reverse();
        apps
    }
}

/// Breadth-first search from `start` for the first word satisfying `goal`.
fn search(start: &WWord, opts: &SearchOptions, goal: impl Fn(&WWord) -> bool) -> Normalization {
    let mut bfs = Bfs::new(start);
    let max_len = start.len() + opts.max_extra_factors;
    let mut best = 0usize;
    let mut found = goal(start).then_some(0);
    let mut queue = VecDeque::from([0usize]);
    let mut exhausted = false;
    'outer: while found.is_none() {
        let Some(id) = queue.pop_front() else { break };
        let w = bfs.words[id].clone();
        for (app, x) in successors(&w, opts.rules) {
            if x.len() > max_len {
                continue;
            }
            let Some(nid) = bfs.push(x, id, app) else { continue };
            if residual_key(&bfs.words[nid]) < residual_key(&bfs.words[best]) {
                best = nid;
            }
            if goal(&bfs.words[nid]) {
                found = Some(nid);
                break 'outer;
            }
            if bfs.words.len() >= opts.budget {
                exhausted = true;
                break 'outer;
            }
            queue.push_back(nid);
        }
    }
    let end = found.unwrap_or(best);
    let (trace, word) = RewriteTrace::from_path(start, &bfs.path(end)).expect("recorded steps replay");
    let normal_form = match found {
        Some(_) => NormalForm {
            n: word.r_power(),
            residual: None,
        },
        None => NormalForm {
            n: word.r_power(),
            residual: Some(word.to_string()),
        },
    };
    Normalization {
        normal_form,
        trace,
        word,
        stats: SearchStats {
            visited: bfs.words.len(),
            depth: bfs.depth[end],
            exhausted: exhausted || found.is_none(),
        },
    }
}

/// Search for the normal form Tr⟨Rⁿ W(z,z)⟩. Running out of budget is a
/// reported outcome (residual set), not an error.
pub fn normalize(w: &WWord, opts: &SearchOptions) -> Result<Normalization> {
    if !w.is_closed() {
        return Err(Error::Input("normalize needs a trace-closed word".into()));
    }
    Ok(search(w, opts, |x| x.normal_form_power().is_some()))
}

/// A fragment is reduced when it has no R-factor and no label occurs twice,
/// i.e. it is a product of uncrossed pieces.
pub fn is_reduced_fragment(w: &WWord) -> bool {
    let mut seen = vec![false; w.labels().len()];
    for f in w.factors() {
        match *f {
            Factor::R(_) => return false,
            Factor::W(a, b) => {
                for l in [a, b] {
                    if std::mem::replace(&mut seen[l as usize], true) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Reduce an open fragment towards a product of uncrossed pieces. Rotation
/// is off unless `opts.rules.rotate_open` is set.
pub fn open_reduce(w: &WWord, opts: &SearchOptions) -> Result<Normalization> {
    if w.is_closed() {
        return Err(Error::Input("open_reduce needs an open fragment".into()));
    }
    Ok(search(w, opts, is_reduced_fragment))
}

#[derive(Clone, Debug)]
pub enum Equivalence {
    /// A trace leading from the first word to the second.
    Yes(RewriteTrace),
    Unknown {
        visited: usize,
    },
}

/// Bidirectional search for a rewrite path between two words. Never
/// answers "no": the rule system is not known to be complete.
pub fn equivalent(w1: &WWord, w2: &WWord, opts: &SearchOptions) -> Result<Equivalence> {
    if w1.labels() != w2.labels() || w1.is_closed() != w2.is_closed() {
        return Err(Error::Input("words must share label order and closure".into()));
    }
    if w1 == w2 {
        return Ok(Equivalence::Yes(RewriteTrace::default()));
    }
    let max_len = w1.len().max(w2.len()) + opts.max_extra_factors;
    let mut sides = [Bfs::new(w1), Bfs::new(w2)];
    let mut queues = [VecDeque::from([0usize]), VecDeque::from([0usize])];
    let mut meet: Option<(usize, usize)> = None;
    'outer: while meet.is_none() {
        let s = if queues[0].len() <= queues[1].len() && !queues[0].is_empty() {
            0
        } else {
            1
        };
        let Some(id) = queues[s].pop_front() else { break };
        let w = sides[s].words[id].clone();
        for (app, x) in successors(&w, opts.rules) {
            if x.len() > max_len {
                continue;
            }
            let other = sides[1 - s].index.get(x.factors()).copied();
            let Some(nid) = sides[s].push(x, id, app) else { continue };
            if let Some(oid) = other {
                meet = Some(if s == 0 { (nid, oid) } else { (oid, nid) });
                break 'outer;
            }
            if sides[0].words.len() + sides[1].words.len() >= opts.budget {
                break 'outer;
            }
            queues[s].push_back(nid);
        }
        if queues[0].is_empty() && queues[1].is_empty() {
            break;
        }
    }
    let visited = sides[0].words.len() + sides[1].words.len();
    let Some((a, b)) = meet else {
        return Ok(Equivalence::Unknown { visited });
    };
    let mut apps = sides[0].path(a);
    // walk the second tree back from the meeting word, inverting each edge
    let mut id = b;
    while let Some((p, _)) = sides[1].parent[id] {
        let from = &sides[1].words[id];
        let to = &sides[1].words[p];
        let inv = successors(from, opts.rules)
            .into_iter()
            .find(|(_, y)| y == to)
            .map(|(app, _)| app)
            .ok_or_else(|| Error::Input(format!("no inverse step from {from} to {to}")))?;
        apps.push(inv);
        id = p;
    }
    let (trace, end) = RewriteTrace::from_path(w1, &apps)?;
    debug_assert_eq!(&end, w2);
    Ok(Equivalence::Yes(trace))
}
