use std::path::Path;

use knotforge::diagram::{parse_pd, parse_traversal, traversal, PDCode, TraversalCode};
use knotforge::jones::jones;
use knotforge::wcalc::{encode, normalize, open_reduce, RewriteTrace, SearchOptions};

const CLOSED: [&str; 4] = ["fig1", "fig3b", "fig4a", "fig4b"];

fn read(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)).unwrap()
}

fn pd(fig: &str) -> PDCode {
    parse_pd(&read(&format!("{fig}.pd"))).unwrap()
}

fn trav(fig: &str) -> TraversalCode {
    parse_traversal(&read(&format!("{fig}.traversal"))).unwrap()
}

fn small_budget() -> SearchOptions {
    SearchOptions {
        budget: 20_000,
        ..SearchOptions::default()
    }
}

#[test]
fn traversal_files_match_pd_files() {
    for fig in CLOSED {
        let from_pd = traversal(&pd(fig), None).unwrap();
        let t = trav(fig);
        assert!(t.is_closed());
        let any_base = (0..t.visit_count()).any(|k| t.rebased(k).unwrap().same_shape(&from_pd));
        assert!(any_base, "{fig}");
    }
    assert_eq!(pd("fig3a").component_count(), 2);
    assert_eq!(trav("fig3a").strands().len(), 2);
    assert!(!trav("fig2").is_closed());
}

#[test]
fn corpus_jones_polynomials() {
    assert_eq!(jones(&pd("fig1")).unwrap().to_string(), "1");
    let trefoil = jones(&pd("fig4a")).unwrap();
    let mirror = jones(&pd("fig4b")).unwrap();
    assert_ne!(trefoil, mirror);
    assert_eq!(trefoil.invert_variable(), mirror);
}

#[test]
fn kink_normal_form_is_basepoint_independent() {
    let t = trav("fig1");
    let ns: Vec<i64> = (0..t.visit_count())
        .map(|k| normalize(&encode(&t.rebased(k).unwrap()).unwrap(), &SearchOptions::default()).unwrap())
        .map(|r| {
            assert!(r.normal_form.is_normalized());
            r.normal_form.n
        })
        .collect();
    assert!(ns.windows(2).all(|w| w[0] == w[1]), "{ns:?}");
}

/// A crossing's block depends only on its passes, not on which pass comes
/// first, so the mirrored kink is a rotation of the same trace word.
#[test]
fn mirrored_kink_has_the_same_word() {
    let t = trav("fig1");
    assert_eq!(encode(&t.mirrored()).unwrap(), encode(&t).unwrap());
}

#[test]
fn traces_replay_after_serialization() {
    let opts = SearchOptions::default();
    let closed = encode(&trav("fig1")).unwrap();
    let open = encode(&trav("fig2")).unwrap();
    for (w, r) in [
        (&closed, normalize(&closed, &opts).unwrap()),
        (&open, open_reduce(&open, &opts).unwrap()),
    ] {
        let text = serde_json::to_string(&r.trace).unwrap();
        let back: RewriteTrace = serde_json::from_str(&text).unwrap();
        assert_eq!(back.replay(w).unwrap(), r.word);
    }
}

#[test]
fn exhausted_budget_reports_residual() {
    let w = encode(&trav("fig4a")).unwrap();
    let r = normalize(&w, &small_budget()).unwrap();
    assert!(!r.normal_form.is_normalized());
    assert!(r.stats.exhausted);
    assert!(r.stats.visited <= 20_000);
    assert_eq!(r.normal_form.residual.as_deref(), Some(r.word.to_string().as_str()));
    assert!(r.word.len() <= w.len());
    assert_eq!(r.trace.replay(&w).unwrap(), r.word);
}
