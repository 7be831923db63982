use std::fmt;

use crate::graph::VertexSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("instance too large: {what} is {actual}, limit {limit}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex sets {0:#x} and {1:#x} overlap")]
    Overlap(VertexSet, VertexSet),
    #[error("{0}")]
    Mismatch(String),
    #[error("invalid V-stability: {0}")]
    Stability(StabilityViolation),
    #[error("invalid degeneracy subset: {0}")]
    Degeneracy(DegeneracyViolation),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration budget of {0} exceeded")]
    Budget(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Witness for a failed V-stability validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityViolation {
    Missing(VertexSet),
    NotBiconnected(VertexSet),
    Sum { w: VertexSet, excess: i64 },
    TwoOfThree([VertexSet; 3]),
    Triple { parts: [VertexSet; 3], excess: i64 },
}

impl StabilityViolation {
    /// The offending subsets, for reports.
    pub fn witness(&self) -> Vec<VertexSet> {
        match self {
            StabilityViolation::Missing(w)
            | StabilityViolation::NotBiconnected(w)
            | StabilityViolation::Sum { w, .. } => vec![*w],
            StabilityViolation::TwoOfThree(p) | StabilityViolation::Triple { parts: p, .. } => {
                p.to_vec()
            }
        }
    }
}

impl fmt::Display for StabilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityViolation::Missing(w) => write!(f, "no value for subset {w:#x}"),
            StabilityViolation::NotBiconnected(w) => {
                write!(f, "subset {w:#x} is not biconnected")
            }
            StabilityViolation::Sum { w, excess } => {
                write!(f, "sum axiom fails at {w:#x} (excess {excess})")
            }
            StabilityViolation::TwoOfThree(p) => write!(
                f,
                "degeneracy does not propagate on {:#x}, {:#x}, {:#x}",
                p[0], p[1], p[2]
            ),
            StabilityViolation::Triple { parts, excess } => write!(
                f,
                "triple axiom fails on {:#x}, {:#x}, {:#x} (excess {excess})",
                parts[0], parts[1], parts[2]
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegeneracyViolation {
    NotBiconnected(VertexSet),
    MissingComplement(VertexSet),
    MissingUnion(VertexSet, VertexSet),
}

impl fmt::Display for DegeneracyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegeneracyViolation::NotBiconnected(w) => write!(f, "{w:#x} is not biconnected"),
            DegeneracyViolation::MissingComplement(w) => {
                write!(f, "complement of {w:#x} is missing")
            }
            DegeneracyViolation::MissingUnion(a, b) => {
                write!(f, "union of {a:#x} and {b:#x} is missing")
            }
        }
    }
}
