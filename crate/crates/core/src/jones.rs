//! Kauffman bracket state sum, the Jones polynomial and the skein relation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::LaurentPoly;
use crate::diagram::moves::{smooth_crossing, switch_crossing};
use crate::diagram::pd::{PDCode, Sign, UnionFind};
use crate::error::{Error, Result};

/// Largest crossing count accepted by the 2^n state sum.
pub const MAX_CROSSINGS: usize = 20;

/// δ = −A² − A⁻².
fn delta() -> LaurentPoly {
    LaurentPoly::from_terms([(4, -1), (-4, -1)])
}

/// ⟨d⟩ in the variable A (half-steps of A). The A-smoothing of
/// `X[a,b,c,d]` joins a–b and c–d, the B-smoothing joins a–d and b–c.
pub fn kauffman_bracket(d: &PDCode) -> Result<LaurentPoly> {
    let n = d.crossing_count();
    if n > MAX_CROSSINGS {
        return Err(Error::ResourceLimit(format!(
            "state sum over {n} crossings exceeds the limit of {MAX_CROSSINGS}"
        )));
    }
    if n == 0 {
        return Ok(delta().pow(d.free_loops().saturating_sub(1) as u32));
    }
    let index: BTreeMap<u32, usize> = d.arcs().into_iter().enumerate().map(|(i, a)| (a, i)).collect();
    let xs: Vec<[usize; 4]> = d.crossings().iter().map(|t| t.map(|a| index[&a])).collect();
    let arcs = index.len();
    // counts[(a − b, loops)]
    let mut counts: BTreeMap<(i32, usize), i64> = BTreeMap::new();
    for state in 0u32..(1u32 << n) {
        let mut uf = UnionFind::new(arcs);
        for (i, x) in xs.iter().enumerate() {
            if state >> i & 1 == 0 {
                uf.union(x[0], x[1]);
                uf.union(x[2], x[3]);
            } else {
                uf.union(x[0], x[3]);
                uf.union(x[1], x[2]);
            }
        }
        let loops = (0..arcs).filter(|&i| uf.find(i) == i).count() + d.free_loops();
        let b = state.count_ones() as i32;
        *counts.entry((n as i32 - 2 * b, loops)).or_default() += 1;
    }
    let mut out = LaurentPoly::zero();
    let del = delta();
    for ((e, loops), k) in counts {
        out = out + LaurentPoly::monomial(k, 2 * e) * del.pow(loops as u32 - 1);
    }
    Ok(out)
}

/// Jones polynomial in half-steps of t, normalized so V(unknot) = 1:
/// V = (−A)^(−3w)⟨d⟩ with A = t^(1/4).
pub fn jones(d: &PDCode) -> Result<LaurentPoly> {
    let w = d.writhe()?;
    let br = kauffman_bracket(d)?;
    let e = -3 * w;
    let norm = LaurentPoly::monomial(if e % 2 == 0 { 1 } else { -1 }, 2 * e);
    (norm * br).substitute_power(1, 4)
}

/// Three diagrams that differ only at crossing `site`: positive there,
/// negative there, and oriented smoothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeinTriple {
    pub l_plus: PDCode,
    pub l_minus: PDCode,
    pub l_zero: PDCode,
    pub site: usize,
}

pub fn make_skein_triple(d: &PDCode, c: usize) -> Result<SkeinTriple> {
    if c >= d.crossing_count() {
        return Err(Error::Input(format!("unknown crossing {c}")));
    }
    let sign = d
        .sign(c)
        .ok_or_else(|| Error::Input("skein triple needs an oriented diagram".into()))?;
    let (l_plus, l_minus) = match sign {
        Sign::Pos => (d.clone(), switch_crossing(d, c)?),
        Sign::Neg => (switch_crossing(d, c)?, d.clone()),
    };
    let l_zero = smooth_crossing(&l_plus, c)?;
    Ok(SkeinTriple {
        l_plus,
        l_minus,
        l_zero,
        site: c,
    })
}

fn check_triple(s: &SkeinTriple) -> Result<()> {
    let ok = s.l_plus.sign(s.site) == Some(Sign::Pos)
        && switch_crossing(&s.l_plus, s.site)? == s.l_minus
        && smooth_crossing(&s.l_plus, s.site)? == s.l_zero;
    if ok {
        Ok(())
    } else {
        Err(Error::Input(format!("mismatched skein triple at crossing {}", s.site)))
    }
}

fn residual(v_minus: &LaurentPoly, v_plus: &LaurentPoly, v_zero: &LaurentPoly) -> LaurentPoly {
    let t_inv = LaurentPoly::monomial(1, -2);
    let t = LaurentPoly::monomial(1, 2);
    let root_diff = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
    (&t_inv * v_minus) - (&t * v_plus) - (&root_diff * v_zero)
}

/// t⁻¹V(L₋) − tV(L₊) − (t^(1/2) − t^(−1/2))V(L₀); zero when the relation holds.
pub fn skein_residual(s: &SkeinTriple) -> Result<LaurentPoly> {
    check_triple(s)?;
    Ok(residual(&jones(&s.l_minus)?, &jones(&s.l_plus)?, &jones(&s.l_zero)?))
}

/// Residuals of the relation as written and with L₊ and L₋ exchanged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeinPairing {
    pub as_written: LaurentPoly,
    pub swapped: LaurentPoly,
}

pub fn skein_pairing(s: &SkeinTriple) -> Result<SkeinPairing> {
    check_triple(s)?;
    let (vp, vm, vz) = (jones(&s.l_plus)?, jones(&s.l_minus)?, jones(&s.l_zero)?);
    Ok(SkeinPairing {
        as_written: residual(&vm, &vp, &vz),
        swapped: residual(&vp, &vm, &vz),
    })
}
