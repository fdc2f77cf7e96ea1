//! Finite MTL-algebras with universal quantifiers.
//!
//! The crate validates operation tables, enumerates quantifiers, computes
//! filters, quotients and subdirect decompositions, audits characterization
//! results over a corpus, and checks Hilbert-style proofs in the modal logic
//! whose algebraic semantics these structures provide.

pub mod algebra;
pub mod analysis;
pub mod audit;
pub mod chains;
pub mod elemset;
pub mod filters;
pub mod logic;
pub mod properties;
pub mod quantifier;

pub use algebra::{Elem, FiniteMTLAlgebra, SubvarietyProfile, ValidationError};
pub use elemset::ElemSet;
pub use quantifier::{U2Parse, UmtlAlgebra, UniversalQuantifier};
