use std::collections::BTreeMap;
use std::sync::Arc;

use super::word::{Factor, LabelOrder, WWord};
use crate::diagram::traversal::{Role, TraversalCode};
use crate::error::{Error, Result};

/// Label order of a traversal: points and crossing labels in the order they
/// are met from the basepoint, each crossing at its first visit.
pub fn label_order(t: &TraversalCode) -> Result<LabelOrder> {
    let mut names: Vec<String> = vec![];
    let mut add = |s: &str| {
        if !names.iter().any(|n| n == s) {
            names.push(s.to_string());
        }
    };
    for s in t.strands() {
        add(&s.start);
        for (i, v) in s.visits.iter().enumerate() {
            add(&v.point);
            add(&v.crossing);
            add(s.point_after(i));
        }
        if let Some(e) = &s.end {
            add(e);
        }
    }
    LabelOrder::new(names)
}

/// W-word of a traversal. Each crossing `w` contributes the block
/// `W(u_in,w) W(w,o_out) W(o_in,w) W(w,u_out)`, where `o_*` and `u_*` are the
/// points just before and after the over and under passes; blocks follow
/// the order of first visits. A strand without crossings contributes
/// `W(start,end)`. Closed traversals give trace-closed words.
pub fn encode(t: &TraversalCode) -> Result<WWord> {
    let order = Arc::new(label_order(t)?);
    let rank = |s: &str| order.rank(s).expect("label collected above");
    // crossing -> (over (in, out), under (in, out))
    let mut passes: BTreeMap<&str, [Option<(&str, &str)>; 2]> = BTreeMap::new();
    let mut first_seen: Vec<&str> = vec![];
    for s in t.strands() {
        for (i, v) in s.visits.iter().enumerate() {
            let slot = match v.role {
                Role::Over => 0,
                Role::Under => 1,
            };
            let e = passes.entry(&v.crossing).or_insert_with(|| {
                first_seen.push(&v.crossing);
                [None, None]
            });
            e[slot] = Some((&v.point, s.point_after(i)));
        }
    }
    let mut factors = vec![];
    for s in t.strands() {
        if s.visits.is_empty() {
            let end = s.end.as_deref().unwrap_or(&s.start);
            factors.push(Factor::W(rank(&s.start), rank(end)));
        }
    }
    for c in first_seen {
        let [Some((oi, oo)), Some((ui, uo))] = passes[c] else {
            return Err(Error::Input(format!("crossing {c} lacks an over or under pass")));
        };
        let w = rank(c);
        factors.extend([
            Factor::W(rank(ui), w),
            Factor::W(w, rank(oo)),
            Factor::W(rank(oi), w),
            Factor::W(w, rank(uo)),
        ]);
    }
    WWord::new(factors, t.is_closed(), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::traversal::parse_traversal;

    fn enc(text: &str) -> WWord {
        encode(&parse_traversal(text).unwrap()).unwrap()
    }

    const FIG1: &str = "basepoint z1\nvisit z1 w over +1\nvisit z2 w under +1\n";

    #[test]
    fn single_kink() {
        let w = enc(FIG1);
        assert_eq!(w.labels().names(), ["z1", "w", "z2"]);
        let expect = WWord::parse("Tr[ W(z2,w) W(w,z2) W(z1,w) W(w,z1) ]", Some(w.labels().clone())).unwrap();
        assert_eq!(w, expect);
        let open = enc("basepoint z1\nvisit z1 w over +1\nvisit z2 w under +1\nend z3\n");
        assert_eq!(open.to_string(), "W(z2,w) W(w,z2) W(z1,w) W(w,z3)");
    }

    #[test]
    fn two_strand_fragment() {
        let w = enc("strand z1\nvisit z1 w1 over +1\nvisit z2 w2 over -1\nend z3\n\
             strand z4\nvisit z4 w2 under -1\nvisit z5 w1 under +1\nend z6\n");
        assert_eq!(
            w.to_string(),
            "W(z5,w1) W(w1,z2) W(z1,w1) W(w1,z6) W(z4,w2) W(w2,z3) W(z2,w2) W(w2,z5)"
        );
    }

    #[test]
    fn unknot_and_bare_strand() {
        assert_eq!(enc("basepoint z1\n").to_string(), "Tr[ W(z1,z1) ]");
        assert_eq!(enc("strand a\nend b\n").to_string(), "W(a,b)");
    }
}
