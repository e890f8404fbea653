//! SROIQ concepts with explicit add/delete substitutions on concepts and
//! roles: syntax, finite-model semantics, role box analysis, a rewrite system
//! eliminating substitutions, and a bounded model search.

pub mod error;
pub mod gen;
pub mod parse;
pub mod rbox;
pub mod rewrite;
pub mod search;
pub mod semantics;
pub mod sigfile;
pub mod syntax;
pub mod wellformed;

pub use error::{Error, Result};
pub use parse::{parse_concept, parse_concept_unresolved, parse_role, print_concept};
pub use rbox::{
    check_regular, check_simple_assertions, find_regular_order, simple_roles, RegularForm,
    RegularityReport,
};
pub use semantics::{
    apply_subst, eval_concept, eval_role, eval_role_word, rbox_satisfied, ElementSet,
    Interpretation, Relation,
};
pub use sigfile::{parse_signature_file, print_signature_file};
pub use syntax::{
    canonical_nominal, Concept, Polarity, RBox, Role, RoleAssertion, RoleInclusion, Signature,
    Substitution,
};
pub use wellformed::{well_formed, Violation};
pub use rewrite::{
    measure_m, measure_mp, normalize, rewrite_step, MeasurePair, NormalizeOptions, RewriteStep,
    Variant,
};
pub use search::{check_model, sat_bounded, ModelReport, SatQuery, SatResult, SearchMode, Verdict};
