use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Total order on the point labels of one problem instance; a label's rank
/// is its index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelOrder {
    names: Vec<String>,
}

impl LabelOrder {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > u8::MAX as usize {
            return Err(Error::ResourceLimit(format!(
                "{} labels exceed the limit of 255",
                names.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::Input(format!("label {n:?} is not an identifier")));
            }
            if names[..i].contains(n) {
                return Err(Error::Input(format!("duplicate label {n:?}")));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, l: Label) -> &str {
        &self.names[l as usize]
    }

    pub fn rank(&self, name: &str) -> Option<Label> {
        self.names.iter().position(|n| n == name).map(|p| p as Label)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Label rank in its [`LabelOrder`]; smaller means earlier along the curve.
pub type Label = u8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    W(Label, Label),
    R(i16),
}

/// A product of W-factors and R-powers. Closed words are read under the
/// trace and stored in canonical rotation; open words are fragments with
/// free endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WWord {
    factors: Vec<Factor>,
    closed: bool,
    labels: Arc<LabelOrder>,
}

/// Merge adjacent R-powers and drop R^0.
fn merge_r(factors: &[Factor]) -> Vec<Factor> {
    let mut out: Vec<Factor> = Vec::with_capacity(factors.len());
    for &f in factors {
        match (f, out.last().copied()) {
            (Factor::R(0), _) => {}
            (Factor::R(p), Some(Factor::R(q))) => {
                out.pop();
                if p + q != 0 {
                    out.push(Factor::R(p + q));
                }
            }
            _ => out.push(f),
        }
    }
    out
}

/// Canonical representative of a closed word: R-powers merged (also across
/// the cyclic seam), then the lexicographically least rotation.
pub(crate) fn canonical_closed(factors: &[Factor]) -> Vec<Factor> {
    let mut w = merge_r(factors);
    while w.len() > 1 {
        match (w[0], w[w.len() - 1]) {
            (Factor::R(p), Factor::R(q)) => {
                w.pop();
                w.remove(0);
                if p + q != 0 {
                    w.push(Factor::R(p + q));
                }
            }
            _ => break,
        }
    }
    let n = w.len();
    if n < 2 {
        return w;
    }
    let best = (0..n)
        .min_by(|&a, &b| (0..n).map(|i| w[(a + i) % n]).cmp((0..n).map(|i| w[(b + i) % n])))
        .unwrap_or(0);
    w.rotate_left(best);
    w
}

pub(crate) fn normalize_factors(factors: &[Factor], closed: bool) -> Vec<Factor> {
    if closed {
        canonical_closed(factors)
    } else {
        merge_r(factors)
    }
}

impl WWord {
    pub fn new(factors: Vec<Factor>, closed: bool, labels: Arc<LabelOrder>) -> Result<Self> {
        for f in &factors {
            if let Factor::W(a, b) = *f {
                if a as usize >= labels.len() || b as usize >= labels.len() {
                    return Err(Error::Input("W-factor label outside the label order".into()));
                }
            }
        }
        Ok(Self::from_normalized(
            normalize_factors(&factors, closed),
            closed,
            labels,
        ))
    }

    pub(crate) fn from_normalized(factors: Vec<Factor>, closed: bool, labels: Arc<LabelOrder>) -> Self {
        Self {
            factors,
            closed,
            labels,
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn labels(&self) -> &Arc<LabelOrder> {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Net exponent of R.
    pub fn r_power(&self) -> i64 {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::R(p) => *p as i64,
                Factor::W(..) => 0,
            })
            .sum()
    }

    /// Sum of |p| over R-factors.
    pub fn r_weight(&self) -> i64 {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::R(p) => (*p as i64).abs(),
                Factor::W(..) => 0,
            })
            .sum()
    }

    /// `Some(n)` when the word has the shape Tr⟨Rⁿ W(z,z)⟩ (the empty
    /// closed word counts as n = 0).
    pub fn normal_form_power(&self) -> Option<i64> {
        if !self.closed {
            return None;
        }
        match self.factors.as_slice() {
            [] => Some(0),
            [Factor::W(a, b)] if a == b => Some(0),
            [Factor::W(a, b), Factor::R(p)] if a == b => Some(*p as i64),
            _ => None,
        }
    }

    /// The same factors read as an open fragment or as a closed word.
    pub fn with_closed(&self, closed: bool) -> Self {
        Self::from_normalized(normalize_factors(&self.factors, closed), closed, self.labels.clone())
    }

    /// Parse `Tr[ W(a,b) R R^-1 ... ]` (closed) or `W(a,b) ...` (open).
    /// Whitespace is ignored. Without an explicit order, labels are ranked
    /// by first appearance.
    pub fn parse(text: &str, order: Option<Arc<LabelOrder>>) -> Result<Self> {
        let toks = tokenize(text)?;
        let mut i = 0;
        let mut closed = false;
        if let Some(Tok {
            kind: TokKind::Ident(s),
            ..
        }) = toks.first()
        {
            if s == "Tr" {
                closed = true;
                expect(&toks, 1, TokKind::Punct('['))?;
                i = 2;
                match toks.last() {
                    Some(Tok {
                        kind: TokKind::Punct(']'),
                        ..
                    }) => {}
                    Some(t) => return Err(Error::parse(t.line, t.col, "expected closing `]`")),
                    None => unreachable!(),
                }
            }
        }
        let end = if closed { toks.len() - 1 } else { toks.len() };
        let mut names: Vec<String> = order.as_ref().map(|o| o.names().to_vec()).unwrap_or_default();
        let mut lookup = |name: &str, t: &Tok| -> Result<Label> {
            if let Some(p) = names.iter().position(|n| n == name) {
                return Ok(p as Label);
            }
            if order.is_some() {
                return Err(Error::parse(
                    t.line,
                    t.col,
                    format!("label {name:?} not in the label order"),
                ));
            }
            names.push(name.to_string());
            if names.len() > u8::MAX as usize {
                return Err(Error::ResourceLimit("more than 255 labels".into()));
            }
            Ok((names.len() - 1) as Label)
        };
        let mut factors = vec![];
        while i < end {
            let t = &toks[i];
            match &t.kind {
                TokKind::Ident(s) if s == "W" => {
                    expect(&toks[..end], i + 1, TokKind::Punct('('))?;
                    let a = ident(&toks[..end], i + 2)?;
                    expect(&toks[..end], i + 3, TokKind::Punct(','))?;
                    let b = ident(&toks[..end], i + 4)?;
                    expect(&toks[..end], i + 5, TokKind::Punct(')'))?;
                    let la = lookup(a, &toks[i + 2])?;
                    let lb = lookup(b, &toks[i + 4])?;
                    factors.push(Factor::W(la, lb));
                    i += 6;
                }
                TokKind::Ident(s) if s == "R" => {
                    if matches!(
                        toks.get(i + 1),
                        Some(Tok {
                            kind: TokKind::Punct('^'),
                            ..
                        })
                    ) && i + 1 < end
                    {
                        match toks.get(i + 2) {
                            Some(Tok {
                                kind: TokKind::Int(p), ..
                            }) if i + 2 < end && *p != 0 => {
                                factors.push(Factor::R(*p));
                                i += 3;
                            }
                            Some(t) => return Err(Error::parse(t.line, t.col, "expected a nonzero integer exponent")),
                            None => return Err(Error::parse(t.line, t.col, "missing exponent")),
                        }
                    } else {
                        factors.push(Factor::R(1));
                        i += 1;
                    }
                }
                _ => return Err(Error::parse(t.line, t.col, "expected `W(a,b)` or `R^p`")),
            }
        }
        let labels = match order {
            Some(o) => o,
            None => Arc::new(LabelOrder::new(names)?),
        };
        Self::new(factors, closed, labels)
    }
}

impl fmt::Display for WWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .factors
            .iter()
            .map(|x| match *x {
                Factor::W(a, b) => format!("W({},{})", self.labels.name(a), self.labels.name(b)),
                Factor::R(1) => "R".to_string(),
                Factor::R(p) => format!("R^{p}"),
            })
            .collect();
        if self.closed {
            if body.is_empty() {
                write!(f, "Tr[ ]")
            } else {
                write!(f, "Tr[ {} ]", body.join(" "))
            }
        } else {
            write!(f, "{}", body.join(" "))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TokKind {
    Ident(String),
    Int(i16),
    Punct(char),
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = vec![];
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let c = chars[j];
            let (line_no, col) = (ln + 1, j + 1);
            if c.is_whitespace() {
                j += 1;
            } else if c.is_alphabetic() || c == '_' {
                let s = j;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push(Tok {
                    kind: TokKind::Ident(chars[s..j].iter().collect()),
                    line: line_no,
                    col,
                });
            } else if c == '-' || c.is_ascii_digit() {
                let s = j;
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let lit: String = chars[s..j].iter().collect();
                let v = lit
                    .parse::<i16>()
                    .map_err(|_| Error::parse(line_no, col, format!("bad integer {lit:?}")))?;
                out.push(Tok {
                    kind: TokKind::Int(v),
                    line: line_no,
                    col,
                });
            } else if "[](),^".contains(c) {
                out.push(Tok {
                    kind: TokKind::Punct(c),
                    line: line_no,
                    col,
                });
                j += 1;
            } else {
                return Err(Error::parse(line_no, col, format!("unexpected character {c:?}")));
            }
        }
    }
    Ok(out)
}

fn expect(toks: &[Tok], i: usize, kind: TokKind) -> Result<()> {
    match toks.get(i) {
        Some(t) if t.kind == kind => Ok(()),
        Some(t) => Err(Error::parse(t.line, t.col, format!("expected {kind:?}"))),
        None => {
            let (l, c) = toks.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));
            Err(Error::parse(l, c, format!("unexpected end of word, expected {kind:?}")))
        }
    }
}

fn ident(toks: &[Tok], i: usize) -> Result<&str> {
    match toks.get(i) {
        Some(Tok {
            kind: TokKind::Ident(s),
            ..
        }) => Ok(s),
        Some(t) => Err(Error::parse(t.line, t.col, "expected a label")),
        None => {
            let (l, c) = toks.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));
            Err(Error::parse(l, c, "unexpected end of word, expected a label"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let w = WWord::parse("Tr[ W(z2,w) W(w,z2) W(z1,w) W(w,z1) ]", None).unwrap();
        assert!(w.is_closed());
        assert_eq!(w.labels().names(), ["z2", "w", "z1"]);
        // canonical rotation starts at the least factor
        assert_eq!(w.to_string(), "Tr[ W(z2,w) W(w,z2) W(z1,w) W(w,z1) ]");
        let again = WWord::parse(&w.to_string(), Some(w.labels().clone())).unwrap();
        assert_eq!(again, w);

        let open = WWord::parse("W(a,b) R R^-1 W(b,c)", None).unwrap();
        assert!(!open.is_closed());
        assert_eq!(open.to_string(), "W(a,b) W(b,c)");

        let sp = WWord::parse("Tr[W( a , b )\n R^2 ]", None).unwrap();
        assert_eq!(sp.to_string(), "Tr[ W(a,b) R^2 ]");
        assert_eq!(WWord::parse("Tr[ ]", None).unwrap().normal_form_power(), Some(0));
    }

    #[test]
    fn rotations_are_identified() {
        let o = Arc::new(LabelOrder::new(["a", "b", "c"]).unwrap());
        let x = WWord::parse("Tr[ W(b,c) R W(a,b) ]", Some(o.clone())).unwrap();
        let y = WWord::parse("Tr[ W(a,b) W(b,c) R ]", Some(o.clone())).unwrap();
        assert_eq!(x, y);
        let z = WWord::parse("Tr[ R W(a,a) R^-2 ]", Some(o)).unwrap();
        assert_eq!(z.to_string(), "Tr[ W(a,a) R^-1 ]");
        assert_eq!(z.normal_form_power(), Some(-1));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(WWord::parse("Tr[ W(a,b) ", None), Err(Error::Parse { .. })));
        assert!(matches!(WWord::parse("W(a b)", None), Err(Error::Parse { col: 5, .. })));
        assert!(matches!(WWord::parse("R^0", None), Err(Error::Parse { .. })));
        let o = Arc::new(LabelOrder::new(["a"]).unwrap());
        assert!(matches!(
            WWord::parse("W(a,q)", Some(o)),
            Err(Error::Parse { col: 5, .. })
        ));
        assert!(LabelOrder::new(["a", "a"]).is_err());
    }
}
