//! Local diagram transformations: Reidemeister moves, crossing changes,
//! oriented smoothing, mirror image and connected sum.

use super::pd::{Arc, PDCode, Sign, Slot};
use crate::error::{Error, Result};

fn require_oriented(d: &PDCode) -> Result<()> {
    if d.is_oriented() {
        Ok(())
    } else {
        Err(Error::Input("diagram must be oriented".into()))
    }
}

/// Build an oriented crossing from four (arc, incoming?) rays listed
/// counterclockwise; `under` gives the pair of ray indices of the under
/// strand.
fn crossing_from_rays(rays: [(Arc, bool); 4], under: (usize, usize)) -> ([Arc; 4], Sign) {
    let start = if rays[under.0].1 { under.0 } else { under.1 };
    debug_assert!(rays[start].1);
    let t = [
        rays[start].0,
        rays[(start + 1) % 4].0,
        rays[(start + 2) % 4].0,
        rays[(start + 3) % 4].0,
    ];
    let d_in = rays[(start + 3) % 4].1;
    (t, if d_in { Sign::Pos } else { Sign::Neg })
}

/// Reidemeister 1: add a kink on `arc`. `over_first` chooses whether the
/// strand first passes over itself; `sign` picks the crossing sign.
pub fn r1_add_kink(d: &PDCode, arc: Arc, sign: Sign, over_first: bool) -> Result<PDCode> {
    require_oriented(d)?;
    let slots = d.slots_of(arc);
    if slots.is_empty() && (d.free_loops() == 0 || !d.crossings().is_empty()) {
        return Err(Error::Input(format!("unknown arc {arc}")));
    }
    let mut crossings = d.crossings().to_vec();
    let mut signs = d.signs().to_vec();
    let mut free = d.free_loops();
    let base = d.max_arc();
    let (p, l, q);
    if slots.is_empty() {
        // kink on a free loop
        free -= 1;
        p = base + 1;
        l = base + 2;
        q = p;
    } else {
        let head = slots
            .into_iter()
            .find(|&s| d.is_incoming(s) == Some(true))
            .expect("oriented");
        p = arc;
        l = base + 1;
        q = base + 2;
        crossings[head.0][head.1] = q;
    }
    let t = match (over_first, sign) {
        (false, Sign::Pos) => [p, q, l, l],
        (false, Sign::Neg) => [p, l, l, q],
        (true, Sign::Pos) => [l, l, q, p],
        (true, Sign::Neg) => [l, p, q, l],
    };
    crossings.push(t);
    signs.push(Some(sign));
    Ok(PDCode::raw(crossings, signs, free))
}

/// Whether the arc at dart `s` runs in the dart's direction.
fn dart_with_orientation(d: &PDCode, s: Slot) -> bool {
    d.is_incoming(s) == Some(false)
}

/// Pairs of darts on a common face with distinct arcs, i.e. the sites for
/// a Reidemeister 2 move.
pub fn r2_sites(d: &PDCode) -> Vec<(Slot, Slot)> {
    let mut out = vec![];
    for f in d.faces() {
        for i in 0..f.len() {
            for j in 0..f.len() {
                if i != j && d.arc_at(f[i]) != d.arc_at(f[j]) {
                    out.push((f[i], f[j]));
                }
            }
        }
    }
    out
}

/// Reidemeister 2: push the arc of dart `x` across the arc of dart `y`
/// through their common face, creating two crossings. `x_over` selects
/// which strand ends up on top.
pub fn r2_push(d: &PDCode, x: Slot, y: Slot, x_over: bool) -> Result<PDCode> {
    require_oriented(d)?;
    let on_face = d.faces().into_iter().any(|f| f.contains(&x) && f.contains(&y));
    if !on_face || d.arc_at(x) == d.arc_at(y) {
        return Err(Error::Input("R2 needs two distinct arcs on a common face".into()));
    }
    let xw = dart_with_orientation(d, x);
    let yw = dart_with_orientation(d, y);
    let (xp, xq) = (x, d.other_end(x));
    let (yp, yq) = (y, d.other_end(y));
    let base = d.max_arc();
    let (x1, xm, x2) = (base + 1, base + 2, base + 3);
    let (y1, ym, y2) = (base + 4, base + 5, base + 6);
    let mut crossings = d.crossings().to_vec();
    let mut signs = d.signs().to_vec();
    crossings[xp.0][xp.1] = x1;
    crossings[xq.0][xq.1] = x2;
    crossings[yp.0][yp.1] = y1;
    crossings[yq.0][yq.1] = y2;
    // Local picture: x runs west→east along the bottom of the face and
    // pokes up across y, which runs east→west along the top.
    // Crossing A: S = x1, E = ym, N = xm, W = y2.
    // Crossing B: S = x2, E = y1, N = xm, W = ym.
    // Rays are listed counterclockwise S, E, N, W; the bool marks incoming.
    let a_rays = [(x1, xw), (ym, yw), (xm, !xw), (y2, !yw)];
    let b_rays = [(x2, !xw), (y1, yw), (xm, xw), (ym, !yw)];
    let under_a = if x_over { (1, 3) } else { (0, 2) };
    let under_b = under_a;
    for (rays, under) in [(a_rays, under_a), (b_rays, under_b)] {
        let (t, s) = crossing_from_rays(rays, under);
        crossings.push(t);
        signs.push(Some(s));
    }
    Ok(PDCode::raw(crossings, signs, d.free_loops()))
}

/// A triangular face where the three strands have a consistent height
/// order, so the third Reidemeister move applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R3Site {
    pub darts: [Slot; 3],
}

fn triangle_vertices(d: &PDCode, darts: &[Slot; 3]) -> [usize; 3] {
    // vertex i is where side i ends and side i+1 starts
    [
        d.other_end(darts[0]).0,
        d.other_end(darts[1]).0,
        d.other_end(darts[2]).0,
    ]
}

pub fn r3_sites(d: &PDCode) -> Vec<R3Site> {
    let mut out = vec![];
    for f in d.faces() {
        if f.len() != 3 {
            continue;
        }
        let darts = [f[0], f[1], f[2]];
        let v = triangle_vertices(d, &darts);
        if v[0] == v[1] || v[1] == v[2] || v[0] == v[2] {
            continue;
        }
        // side i is over at vertex v if its slot there is b or d
        let over_at = |side: usize, vertex_slot: Slot| -> bool {
            let _ = side;
            vertex_slot.1 % 2 == 1
        };
        // strand i meets vertex i-1 at its start dart and vertex i at its end
        let mut height_edges = vec![];
        for i in 0..3 {
            let end = d.other_end(darts[i]); // side i at vertex i
            let start_next = darts[(i + 1) % 3]; // side i+1 at vertex i
            if over_at(i, end) == over_at(i + 1, start_next) {
                continue;
            }
            if over_at(i, end) {
                height_edges.push((i, (i + 1) % 3));
            } else {
                height_edges.push(((i + 1) % 3, i));
            }
        }
        // cyclic "over" relation means no R3
        let cyclic = height_edges.len() == 3 && (0..3).all(|i| height_edges.iter().filter(|e| e.0 == i).count() == 1);
        if !cyclic && height_edges.len() == 3 {
            out.push(R3Site { darts });
        }
    }
    out
}

/// Reidemeister 3 across a triangular face.
pub fn r3_move(d: &PDCode, site: &R3Site) -> Result<PDCode> {
    require_oriented(d)?;
    if !r3_sites(d).contains(site) {
        return Err(Error::Input("R3 not applicable at this face".into()));
    }
    let darts = site.darts;
    let v = triangle_vertices(d, &darts);
    // Strand i: outer start arc (before vertex i-1), side arc, outer end arc.
    let mut os = [0 as Arc; 3];
    let mut oe = [0 as Arc; 3];
    let mut side = [0 as Arc; 3];
    let mut fwd = [false; 3];
    for i in 0..3 {
        let s = darts[i];
        let e = d.other_end(s);
        side[i] = d.arc_at(s);
        os[i] = d.arc_at((s.0, (s.1 + 2) % 4));
        oe[i] = d.arc_at((e.0, (e.1 + 2) % 4));
        fwd[i] = dart_with_orientation(d, s);
    }
    // over relation between strands i and j, read at their old vertex
    let over = |i: usize, j: usize| -> bool {
        // vertex k joins sides k and k+1
        let (k, i_is_first) = if (i + 1) % 3 == j { (i, true) } else { (j, false) };
        let slot = if i_is_first {
            d.other_end(darts[k])
        } else {
            darts[(k + 1) % 3]
        };
        slot.1 % 2 == 1
    };
    // Boundary order counterclockwise: os1, oe0, os2, oe1, os0, oe2.
    let pos_os = |i: usize| (2 * (i + 2)) % 6;
    let pos_oe = |i: usize| 2 * i + 1;
    let mut crossings: Vec<[Arc; 4]> = vec![];
    let mut signs = vec![];
    for (ci, t) in d.crossings().iter().enumerate() {
        if !v.contains(&ci) {
            crossings.push(*t);
            signs.push(d.sign(ci));
        }
    }
    // New order along strand i: meets i+1 first, then i-1.
    for i in 0..3 {
        let j = (i + 1) % 3;
        // strand i at its first new crossing: toward os_i is the outer start
        // arc, toward oe_i is its new inner arc.
        // strand j meets i as its second crossing: toward os_j is j's inner
        // arc, toward oe_j its outer end arc.
        let mut rays: Vec<(usize, Arc, bool, usize)> = vec![
            (pos_os(i), os[i], fwd[i], i),
            (pos_oe(i), side[i], !fwd[i], i),
            (pos_os(j), side[j], fwd[j], j),
            (pos_oe(j), oe[j], !fwd[j], j),
        ];
        rays.sort_by_key(|r| r.0);
        let arr: [(Arc, bool); 4] = [
            (rays[0].1, rays[0].2),
            (rays[1].1, rays[1].2),
            (rays[2].1, rays[2].2),
            (rays[3].1, rays[3].2),
        ];
        let under_strand = if over(i, j) { j } else { i };
        let idx: Vec<usize> = (0..4).filter(|&k| rays[k].3 == under_strand).collect();
        let (t, s) = crossing_from_rays(arr, (idx[0], idx[1]));
        crossings.push(t);
        signs.push(Some(s));
    }
    Ok(PDCode::raw(crossings, signs, d.free_loops()))
}

/// Switch over and under at crossing `c`; the sign flips, orientation of
/// both strands is preserved.
pub fn switch_crossing(d: &PDCode, c: usize) -> Result<PDCode> {
    require_oriented(d)?;
    let t = *d
        .crossings()
        .get(c)
        .ok_or_else(|| Error::Input(format!("unknown crossing {c}")))?;
    let s = d.sign(c).expect("oriented");
    let nt = match s {
        Sign::Pos => [t[3], t[0], t[1], t[2]],
        Sign::Neg => [t[1], t[2], t[3], t[0]],
    };
    let mut crossings = d.crossings().to_vec();
    let mut signs = d.signs().to_vec();
    crossings[c] = nt;
    signs[c] = Some(s.flip());
    Ok(PDCode::raw(crossings, signs, d.free_loops()))
}

/// Oriented (Seifert) smoothing at crossing `c`.
pub fn smooth_crossing(d: &PDCode, c: usize) -> Result<PDCode> {
    require_oriented(d)?;
    let t = *d
        .crossings()
        .get(c)
        .ok_or_else(|| Error::Input(format!("unknown crossing {c}")))?;
    let pairs = match d.sign(c).expect("oriented") {
        Sign::Pos => [(t[0], t[1]), (t[3], t[2])],
        Sign::Neg => [(t[0], t[3]), (t[1], t[2])],
    };
    let mut crossings: Vec<[Arc; 4]> = d.crossings().to_vec();
    let mut signs = d.signs().to_vec();
    crossings.remove(c);
    signs.remove(c);
    let mut free = d.free_loops();
    let rename = |from: Arc, to: Arc, crossings: &mut Vec<[Arc; 4]>| {
        for t in crossings.iter_mut() {
            for a in t.iter_mut() {
                if *a == from {
                    *a = to;
                }
            }
        }
    };
    // Track merges so a second pair sees the first pair's renaming.
    let mut alias: Vec<(Arc, Arc)> = vec![];
    let resolve = |mut a: Arc, alias: &Vec<(Arc, Arc)>| {
        while let Some(&(_, to)) = alias.iter().find(|(f, _)| *f == a) {
            a = to;
        }
        a
    };
    for (x, y) in pairs {
        let (x, y) = (resolve(x, &alias), resolve(y, &alias));
        if x == y {
            free += 1;
        } else {
            rename(y, x, &mut crossings);
            alias.push((y, x));
        }
    }
    Ok(PDCode::raw(crossings, signs, free))
}

pub fn mirror(d: &PDCode) -> Result<PDCode> {
    let mut out = d.clone();
    for c in 0..d.crossing_count() {
        out = switch_crossing(&out, c)?;
    }
    Ok(out)
}

/// Connected sum joining arc `a1` of `d1` with arc `a2` of `d2`.
pub fn connected_sum(d1: &PDCode, a1: Arc, d2: &PDCode, a2: Arc) -> Result<PDCode> {
    require_oriented(d1)?;
    require_oriented(d2)?;
    let off = d1.max_arc();
    let mut crossings = d1.crossings().to_vec();
    let mut signs = d1.signs().to_vec();
    let n1 = crossings.len();
    crossings.extend(d2.crossings().iter().map(|t| t.map(|a| a + off)));
    signs.extend_from_slice(d2.signs());
    let head = |d: &PDCode, a: Arc| -> Result<Slot> {
        d.slots_of(a)
            .into_iter()
            .find(|&s| d.is_incoming(s) == Some(true))
            .ok_or_else(|| Error::Input(format!("unknown arc {a}")))
    };
    let h1 = head(d1, a1)?;
    let h2 = head(d2, a2)?;
    crossings[h1.0][h1.1] = a2 + off;
    crossings[n1 + h2.0][h2.1] = a1;
    Ok(PDCode::raw(crossings, signs, d1.free_loops() + d2.free_loops()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::braid::{braid_closure, parse_braid};
    use crate::diagram::pd::parse_pd;
    use crate::diagram::pd::render_pd;

    fn closure(s: &str) -> PDCode {
        braid_closure(&parse_braid(s).unwrap())
    }

    fn revalidate(d: &PDCode) -> PDCode {
        let back = parse_pd(&render_pd(d)).unwrap();
        assert_eq!(back.signs(), d.signs());
        back
    }

    #[test]
    fn kinks_have_expected_signs() {
        let t = closure("B2 1 1 1");
        for sign in [Sign::Pos, Sign::Neg] {
            for over_first in [false, true] {
                let k = r1_add_kink(&t, 1, sign, over_first).unwrap();
                let k = revalidate(&k);
                assert_eq!(k.writhe().unwrap(), 3 + sign.value());
                assert_eq!(k.component_count(), 1);
                assert_eq!(k.faces().len(), k.crossing_count() + 2);
            }
        }
        let u = r1_add_kink(&PDCode::unknot(), 0, Sign::Pos, false).unwrap();
        assert_eq!((u.crossing_count(), u.component_count()), (1, 1));
    }

    #[test]
    fn r2_adds_two_opposite_crossings() {
        let t = closure("B2 1 1 1");
        let sites = r2_sites(&t);
        assert!(!sites.is_empty());
        for &(x, y) in sites.iter().take(6) {
            for x_over in [true, false] {
                let m = revalidate(&r2_push(&t, x, y, x_over).unwrap());
                assert_eq!(m.crossing_count(), 5);
                assert_eq!(m.writhe().unwrap(), 3);
                assert_eq!(m.component_count(), 1);
                assert_eq!(m.faces().len(), 7);
            }
        }
    }

    #[test]
    fn r3_on_braid_relation() {
        // σ1 σ2 σ1 has a non-alternating triangle
        let d = closure("B3 1 2 1");
        let sites = r3_sites(&d);
        assert!(!sites.is_empty());
        let m = revalidate(&r3_move(&d, &sites[0]).unwrap());
        assert_eq!(m.crossing_count(), 3);
        assert_eq!(m.writhe().unwrap(), 3);
        assert_eq!(m.faces().len(), 5);
        // the alternating trefoil has no R3 site
        assert!(r3_sites(&closure("B2 1 1 1")).is_empty());
    }

    #[test]
    fn smoothing_and_switching() {
        let k = closure("B2 1");
        let z = smooth_crossing(&k, 0).unwrap();
        assert_eq!((z.crossing_count(), z.component_count()), (0, 2));
        let m = switch_crossing(&k, 0).unwrap();
        assert_eq!(m.writhe().unwrap(), -1);
        let t = closure("B2 1 1 1");
        let z = smooth_crossing(&t, 1).unwrap();
        assert_eq!(z.component_count(), 2);
        assert_eq!(mirror(&t).unwrap().writhe().unwrap(), -3);
    }

    #[test]
    fn connected_sum_counts() {
        let t = closure("B2 1 1 1");
        let s = revalidate(&connected_sum(&t, 1, &t, 2).unwrap());
        assert_eq!(s.crossing_count(), 6);
        assert_eq!(s.component_count(), 1);
        assert_eq!(s.writhe().unwrap(), 6);
        assert_eq!(s.faces().len(), 8);
    }
}
