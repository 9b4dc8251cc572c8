//! Generalized action graphs.
//!
//! An action graph family is a sequence of rooted, labeled, directed trees
//! `G_0, G_1, ...` where `G_n` is obtained from `G_{n-1}` by attaching
//! `s_n` new vertices labeled `n`. This crate decides which integer
//! sequences admit such a family, builds the graphs (in full and condensed
//! form) and checks the defining axioms by exact counting and
//! shift-normalized subtree isomorphism.
//!
//! The modules follow the data flow:
//!
//! * [`sequences`]: exact generators for the Catalan, Fuss-Catalan and
//!   super Catalan numbers, plus user-supplied prefixes.
//! * [`admissibility`]: solves for the root-adjacency counts `z_n` and
//!   renders a verdict.
//! * [`graph`]: the full-form tree, path profiles and canonical forms.
//! * [`builders`]: the generic `z`-driven construction and the three
//!   historical rule-based constructions.
//! * [`condensed`]: the multiplier-edge encoding.
//! * [`verification`]: axiom checks and aggregated reports.

#![forbid(unsafe_code)]

pub mod admissibility;
pub mod builders;
pub mod condensed;
mod decimal;
mod error;
pub mod graph;
pub mod sequences;
pub mod verification;

pub use admissibility::{compute_z, Failure, FailureReason, LemmaCheck, Verdict, ZResult};
pub use builders::{build_generic, build_rule, Rule, RuleBuild};
pub use condensed::{build_generic_condensed, CondensedGraph};
pub use error::{Error, Result};
pub use graph::{ActionGraph, Label, PathProfile, VertexBudget, VertexId};
pub use sequences::{Family, Sequence};
pub use verification::{verify_family, CheckRecord, CheckStatus, FamilySpec, VerificationReport};
