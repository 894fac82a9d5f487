use std::fmt;

use serde::{Deserialize, Serialize};

use super::pd::{PDCode, Sign};
use crate::error::{Error, Result};

/// A braid word on `strands` strands. Letter `i` is σ_i, `-i` is σ_i⁻¹.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: u32,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<i32>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::InvalidParameter(format!("strand count {strands} < 2")));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() >= strands {
                return Err(Error::InvalidParameter(format!("generator index {l} out of range")));
            }
        }
        Ok(Self { strands, letters })
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// The permutation of strand positions (0-based) induced by the word:
    /// `perm[p]` is the top position of the strand that starts at `p`.
    pub fn permutation(&self) -> Vec<usize> {
        let n = self.strands as usize;
        // pos_of[s] = current position of strand s
        let mut pos_of: Vec<usize> = (0..n).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            for p in pos_of.iter_mut() {
                if *p == i {
                    *p = i + 1;
                } else if *p == i + 1 {
                    *p = i;
                }
            }
        }
        pos_of
    }

    /// Number of cycles of [`Self::permutation`], i.e. closure components.
    pub fn cycle_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for s in 0..perm.len() {
            if !seen[s] {
                cycles += 1;
                let mut p = s;
                while !seen[p] {
                    seen[p] = true;
                    p = perm[p];
                }
            }
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Parse `Bn l1 l2 ...`. Whitespace (including newlines) separates tokens;
/// `#` starts a comment running to the end of the line.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let mut tokens = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for piece in line.split_inclusive(char::is_whitespace) {
            let tok = piece.trim_end();
            let lead = tok.len() - tok.trim_start().len();
            if !tok.trim().is_empty() {
                tokens.push((ln + 1, col + lead + 1, tok.trim().to_string()));
            }
            col += piece.len();
        }
    }
    let mut it = tokens.into_iter();
    let (l0, c0, head) = it.next().ok_or_else(|| Error::parse(1, 1, "empty braid"))?;
    let strands: u32 = head
        .strip_prefix('B')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(l0, c0, format!("expected header 'Bn', got {head:?}")))?;
    if strands < 2 {
        return Err(Error::parse(l0, c0, format!("strand count {strands} < 2")));
    }
    let mut letters = Vec::new();
    for (l, c, tok) in it {
        let v: i32 = tok
            .parse()
            .map_err(|_| Error::parse(l, c, format!("malformed token {tok:?}")))?;
        if v == 0 || v.unsigned_abs() >= strands {
            return Err(Error::parse(l, c, format!("generator index {v} out of range")));
        }
        letters.push(v);
    }
    BraidWord::new(strands, letters)
}

pub fn render_braid(b: &BraidWord) -> String {
    b.to_string()
}

/// Trace closure with all strands oriented upward.
pub fn braid_closure(b: &BraidWord) -> PDCode {
    let n = b.strands as usize;
    let mut next = n as u32 + 1;
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    let mut touched = vec![false; n];
    let mut crossings = Vec::with_capacity(b.letters.len());
    let mut signs = Vec::with_capacity(b.letters.len());
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (bl, br) = (cur[i], cur[i + 1]);
        let (tl, tr) = (next, next + 1);
        next += 2;
        if l > 0 {
            // bottom-left strand passes over to the top right
            crossings.push([br, tr, tl, bl]);
            signs.push(Sign::Pos);
        } else {
            crossings.push([bl, br, tr, tl]);
            signs.push(Sign::Neg);
        }
        touched[i] = true;
        touched[i + 1] = true;
        cur[i] = tl;
        cur[i + 1] = tr;
    }
    // close: the top label at position p becomes the bottom label p
    let rename = |x: u32| -> u32 {
        match cur.iter().position(|&c| c == x) {
            Some(p) if x > n as u32 => p as u32 + 1,
            _ => x,
        }
    };
    let crossings: Vec<[u32; 4]> = crossings.iter().map(|t| t.map(rename)).collect();
    let free = touched.iter().filter(|t| !**t).count();
    PDCode::from_parts(crossings, signs.into_iter().map(Some).collect(), free)
        .expect("braid closure is a valid diagram")
        .compact_labels()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let b = parse_braid("B2 1 1 1").unwrap();
        assert_eq!((b.strands(), b.letters()), (2, &[1, 1, 1][..]));
        let b = parse_braid("B3 1 -2 1 -2").unwrap();
        assert_eq!(b.letters(), &[1, -2, 1, -2]);
        let e = parse_braid("B2 5").unwrap_err();
        assert_eq!(e, Error::parse(1, 4, "generator index 5 out of range"));
        assert!(matches!(parse_braid("B1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_braid("B3 1 x"), Err(Error::Parse { col: 6, .. })));
        assert!(matches!(parse_braid("3 1"), Err(Error::Parse { .. })));
        let b = parse_braid("# trefoil\nB2\n  1 1 1\n").unwrap();
        assert_eq!(b.to_string(), "B2 1 1 1");
    }

    #[test]
    fn closure_shapes() {
        let t = braid_closure(&parse_braid("B2 1 1 1").unwrap());
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.component_count(), 1);

        let u = braid_closure(&parse_braid("B2").unwrap());
        assert_eq!((u.crossing_count(), u.component_count()), (0, 2));

        let k = braid_closure(&parse_braid("B2 1").unwrap());
        assert_eq!((k.crossing_count(), k.component_count()), (1, 1));
        assert_eq!(k.crossings(), &[[2, 2, 1, 1]]);
    }

    #[test]
    fn permutation_cycles() {
        assert_eq!(parse_braid("B3 1 2").unwrap().cycle_count(), 1);
        assert_eq!(parse_braid("B3 1 1").unwrap().cycle_count(), 3);
        assert_eq!(parse_braid("B2 1 1").unwrap().cycle_count(), 2);
        assert_eq!(parse_braid("B4").unwrap().cycle_count(), 4);
    }
}
