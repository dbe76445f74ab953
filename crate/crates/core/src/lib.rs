//! Generalized stratified order structures (gso-structures) over finite carriers.
//!
//! The crate covers the specification level (`earlier_than`, `not_later_than`,
//! `nonsimultaneous`), observations as stratified orders and their ranking
//! structures, the set of stratified-order extensions of a specification,
//! exhaustive checking of the first-order axioms on finite models, and a
//! translation of PSL-core fragments into observation-only models.
//!
//! Everything here is allocation-only: no I/O, no global state. Document
//! formats and the command-line front end live in the `gsokit` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod extensions;
pub mod id;
pub mod model;
pub mod observations;
pub mod psl;
#[cfg(feature = "random")]
pub mod random;
pub mod relgraph;
pub mod report;
pub mod spec;
pub mod witness;

pub use error::{ClassCondition, DecompositionCondition, Error, PslDefect, RankingDefect, Result};
pub use extensions::{ExtensionFailure, ExtensionSet, Reconstruction};
pub use id::NodeId;
pub use model::{ClassificationData, GsoModel, Theory};
pub use observations::{RankingStructure, StratOrder};
pub use psl::{PslCoreModel, TranslationResult};
pub use relgraph::{Digraph, UGraph};
pub use report::{AxiomId, Proposition, Rule, ValidationReport, Violation};
pub use spec::{GsoSpec, SpecDecomposition, Universe};
