//! A termination-analysis laboratory for the step-duplicating primitive
//! recursor `F(x,y,Z) -> x`, `F(x,y,S(n)) -> G(y,F(x,y,n))`.
//!
//! The crate rewrites, orients, confesses, diagnoses, and supervises:
//!
//! - [`term`] / [`trs`]: first-order terms, rewrite systems, the
//!   TPDB-subset text format;
//! - [`rewrite`]: leftmost-innermost rewriting and the canonical trace with
//!   its counter/payload/wrapper statistics;
//! - [`orient`]: direct measure families with constructive pump
//!   refutations, the twelve-class barrier catalog, and the two
//!   construction escapes (polynomial interpretation, multiset path order);
//! - [`confess`]: dependency pairs, the four projection routes under
//!   distinct soundness licenses, and proof-length accounting;
//! - [`diagnostics`]: the closed-form dominance, entropy, inefficiency,
//!   norm, and description-gap laws;
//! - [`witness`]: the W0/W1/W2 hierarchy, minimal witness order, and the
//!   orientation-boundary predicate;
//! - [`supervisor`]: the budgeted supervisory loop with typed T3/T4 outputs
//!   and the exhaustion-gap audit;
//! - [`necessity`]: the exhaustive oracle for the record-emission theorem;
//! - [`family`]: the six-member recursion family and its classification;
//! - [`cli`]: the `recursorlab` command-line interface.
//!
//! Every CLI output and report format is deterministic JSON (see [`json`]);
//! the `examples/` directory holds one runnable walkthrough per subsystem.

pub mod cli;
pub mod confess;
pub mod diagnostics;
pub mod family;
pub mod json;
pub mod necessity;
pub mod orient;
pub mod rewrite;
pub mod supervisor;
pub mod term;
pub mod trs;
pub mod witness;

pub use json::{emit_report, parse_report, Json};
pub use rewrite::{canonical_trace, normalize, rewrite_once, CanonicalTrace};
pub use term::{Substitution, Symbol, Term};
pub use trs::{parse_trs, Rule, Trs};
