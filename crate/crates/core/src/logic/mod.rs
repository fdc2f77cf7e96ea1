//! The modal propositional logic whose algebraic models are quantified MTL-algebras.

pub mod builder;
pub mod deduction;
pub mod formula;
pub mod proof;
pub mod random;
pub mod schema;
pub mod semantics;

pub use builder::{derived_rules, DerivedRule, ProofBuilder};
pub use deduction::{deduction_transform, Deduction, DeductionError};
pub use formula::{parse_formula, parse_pattern, Formula, ParseError};
pub use proof::{check_proof, parse_proof, Justification, Proof, ProofError, Step};
pub use schema::{Extension, Schema, SchemaCatalog};
pub use semantics::{countermodel_search, eval, is_valid, Goal, PoolEntry, SearchOutcome};
