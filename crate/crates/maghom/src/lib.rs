//! Magnitude and magnitude homology of finite graphs.
//!
//! The crate is organized around the pipeline used by the `maghom` CLI:
//!
//! * [`graph`] builds finite connected graphs (named families, edge lists,
//!   joins, complements) and computes shortest-path metrics and the
//!   structural predicates (pawful, geodetic, ptolemaic, chordal, ...).
//! * [`series`] computes the magnitude power series of a graph exactly, via
//!   inversion of the similarity matrix, plus the closed rational form for
//!   graphs whose distance profile is vertex-independent.
//! * [`chain`] enumerates the magnitude chain complex: generators are vertex
//!   sequences graded by length `l` and degree `k`, with the boundary that
//!   deletes interior vertices when the length is preserved.
//! * [`snf`] and [`homology`] compute Smith normal forms of the sparse
//!   integer boundary matrices and assemble homology rank/torsion tables.
//! * [`morse`] implements matchings on based chain complexes: validation,
//!   zig-zag acyclicity checking with explicit cycle witnesses, and the
//!   reduction to the Morse complex of unmatched generators.
//! * [`rules`] implements matching rules (tree, geodetic-ptolemaic, pawful,
//!   icosahedral, odd/even cycle) that generate Morse matchings on magnitude
//!   complexes, together with rule validation and unmatched-generator
//!   enumeration.
//! * [`verify`] bundles the theorem-level checks exposed by
//!   `maghom verify-theorems`.

pub mod chain;
pub mod graph;
pub mod homology;
pub mod matrix;
pub mod morse;
pub mod rules;
pub mod series;
pub mod snf;
pub mod verify;

use thiserror::Error;

/// Default ceiling on the number of chain generators in a single slice.
pub const DEFAULT_GENERATOR_CAP: usize = 5_000_000;

/// Environment variable that overrides [`DEFAULT_GENERATOR_CAP`] in the CLI.
pub const GENERATOR_CAP_ENV: &str = "MAGHOM_MAX_GENERATORS";

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("vertex {0} out of range for graph with {1} vertices")]
    VertexOutOfRange(u32, usize),
    #[error("graph is disconnected: no path between vertices {0} and {1}")]
    Disconnected(u32, u32),
    #[error("unknown graph spec `{0}`")]
    UnknownGraph(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("generator cap exceeded: slice needs more than {cap} generators (k={k}, l={l})")]
    GeneratorCap { k: usize, l: u32, cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("matching rule violation: {0}")]
    RuleViolation(String),
    #[error("invalid matching: {0}")]
    MatchingInvalid(String),
    #[error("matching is not Morse: zig-zag cycle through {0} generators in degree {1}")]
    NotMorse(usize, usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
