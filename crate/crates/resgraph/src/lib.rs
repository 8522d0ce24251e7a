//! Topological invariants of normal surface singularities, computed from the
//! weighted dual graph of a good resolution.
//!
//! A resolution graph records, per exceptional curve: self-intersection,
//! geometric genus, and the number of nodes and cusps. From that data alone
//! the library computes the intersection lattice, Artin's fundamental cycle,
//! the canonical cycle, the elliptic sequence, and the derived analytic
//! invariants (geometric genus bounds, multiplicity, embedding dimension,
//! Hilbert-Samuel data, graded generator degrees) that are forced by the
//! topology under explicitly tracked hypotheses.
//!
//! Module map:
//! - [`graph`]: graph model, text format, validation, intersection form
//! - [`cycle`]: integer/rational cycles, Euler characteristic, the greedy
//!   fundamental-cycle algorithm, the canonical cycle
//! - [`elliptic`]: elliptic sequence and structure of elliptic graphs
//! - [`invariants`]: classification and the invariant pipeline
//! - [`oracle`]: independent brute-force verifiers over bounded search boxes
//! - [`report`]: machine-readable report documents
//!
//! All arithmetic is exact: `i64` for graph data, arbitrary-precision
//! integers and rationals everywhere results are computed.

pub mod cycle;
pub mod elliptic;
pub mod graph;
pub mod invariants;
mod linalg;
pub mod oracle;
pub mod report;

use thiserror::Error;

pub use graph::{IntersectionForm, ResolutionGraph, ValidationReport, VertexData, Violation};

/// Errors shared by every module. Hypothesis failures are deliberate
/// refusals: the requested invariant is not forced by the graph without the
/// named assumption.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search box holds {cycles} cycles, over the safety limit {limit}; raise RESGRAPH_ORACLE_LIMIT or pass a smaller cap")]
    EnumerationLimit { cycles: u128, limit: u64 },

    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
