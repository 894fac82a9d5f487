//! Knot diagrams: braid words, planar-diagram codes and traversals.

pub mod braid;
pub mod moves;
pub mod pd;
pub mod traversal;

pub use braid::{braid_closure, parse_braid, render_braid, BraidWord};
pub use pd::{parse_pd, render_pd, Arc, PDCode, Sign};
pub use traversal::{parse_traversal, render_traversal, traversal, Role, TraversalCode};
