//! Trace-closed words in W-factors and R-powers, the braiding rewrite rules,
//! and the search for the normal form Tr⟨Rⁿ W(z,z)⟩.

pub mod encode;
pub mod model;
pub mod rules;
pub mod search;
pub mod word;

pub use encode::{encode, label_order};
pub use model::{invariant_value, soundness_report, MatrixModel, RuleSoundness, SoundnessReport};
pub use rules::{apply_rule, successors, Rule, RuleApp, RuleSet};
pub use search::{
    equivalent, is_reduced_fragment, normalize, open_reduce, Equivalence, NormalForm, Normalization, RewriteTrace,
    SearchOptions, TraceStep, DEFAULT_BUDGET,
};
pub use word::{Factor, Label, LabelOrder, WWord};
