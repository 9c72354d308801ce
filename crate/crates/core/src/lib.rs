//! Desk-scale workbench for Rudin–Keisler domination structures, prime and
//! limit model distributions, and the theory-building operators around them.

pub mod cardinal;
pub mod distribution;
pub mod domination;
pub mod limitcount;
pub mod models;
pub mod operators;
pub mod preorder;
pub mod report;
pub mod syntax;
pub mod typespace;

pub use cardinal::{card_le, card_sum, card_sum_all, card_sup, Cardinal, CardinalError, DEFAULT_CH};
pub use distribution::{
    build_blueprint, check_blueprint, classify_triple, decompose, realize_corollary, validate_f, Cm3Triple,
    DistributionError, DistributionSpec, TheoryBlueprint, TheoryClass, Variant, Verdict,
};
pub use domination::{limit_exists_over, DominationError, DominationGraph, RealizationDigraph};
pub use models::{cm_dominates, construct_model, perturb, ModelError, ModelSpec, RkSequence};
pub use operators::{replay, replay_checked, verify_schemes, OpTag, OperatorError, Pipeline, StructSpec};
pub use preorder::{check_premodel, PremodelProfile, Preorder, PreorderError, QuotientPoset};
pub use report::Report;
pub use syntax::ParseError;
pub use typespace::{classify_formula, enumerate_types, has_prime_model, TypeId, TypeSpace, TypeSpaceError};
