use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::NodeId;

/// Errors raised by graph construction, queries and the learner.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("directed cycle {0:?}")]
    CyclicDirectedPart(Vec<NodeId>),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown node label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),
    #[error("graph has {0} nodes, at most {max} are supported", max = crate::nodeset::MAX_NODES)]
    TooManyNodes(usize),
    #[error("more than one edge between nodes {0} and {1}")]
    MultipleEdges(NodeId, NodeId),
    #[error("intervention target {0} listed twice")]
    DuplicateTarget(usize),
    #[error("target index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("query sets overlap")]
    QueryOverlap,
    #[error("query set intersects the intervention target")]
    TargetOverlap,
    #[error("query outcome intersects the symmetric difference of the targets")]
    YInSymmetricDifference,
    #[error("graphs are over different node universes")]
    UniverseMismatch,
    #[error("circle or undirected marks are not allowed here")]
    InvalidMarks,
    #[error("not ancestral: {0}")]
    NotAncestral(AncestralWitness),
    #[error("not maximal: inducing path between non-adjacent {0} and {1}")]
    NotMaximal(NodeId, NodeId),
    #[error("search space too large ({0} candidates)")]
    SearchSpaceTooLarge(u64),
    #[error("conflicting mark at {node} on edge with {other}")]
    MarkConflict { node: String, other: String },
}

/// Why a mixed graph fails ancestrality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AncestralWitness {
    /// Nodes of a directed cycle, in order.
    DirectedCycle(Vec<NodeId>),
    /// A bidirected edge `a <-> b` with `a` an ancestor of `b`.
    AlmostDirectedCycle(NodeId, NodeId),
}

impl core::fmt::Display for AncestralWitness {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AncestralWitness::DirectedCycle(c) => write!(f, "directed cycle {c:?}"),
            AncestralWitness::AlmostDirectedCycle(a, b) => {
                write!(f, "almost directed cycle through {a} <-> {b}")
            }
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
