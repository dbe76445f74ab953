use core::fmt;

use crate::id::NodeId;
use crate::report::Violation;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("self-loop on {0}")]
    SelfLoop(NodeId),
    #[error("edge endpoint {0} is not a vertex of the graph")]
    UnknownVertex(NodeId),
    #[error("operands are defined on different vertex sets")]
    VertexMismatch,
    #[error("graph has a directed cycle through {0}")]
    CyclicInput(NodeId),
    #[error("graph is not symmetric: ({0},{1}) present without ({1},{0})")]
    NotSymmetric(NodeId, NodeId),
    #[error("relation is not a stratified order: {0}")]
    NotStratified(Violation),
    #[error("invalid ranking structure: {0}")]
    InvalidRanking(RankingDefect),
    #[error("step sequence parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: &'static str },
    #[error("occurrence {0} appears in more than one step")]
    DuplicateOccurrence(NodeId),
    #[error("carriers do not match")]
    CarrierMismatch,
    #[error("observation family is empty")]
    EmptyFamily,
    #[error("carrier of {size} occurrences exceeds the enumeration bound {bound}")]
    CarrierTooLarge { size: usize, bound: usize },
    #[error("specification violates {0}")]
    InvalidSpec(Violation),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(DecompositionCondition),
    #[error("{0} is not an observation of the model")]
    UnknownObservation(NodeId),
    #[error("not a model of T_gso: {0}")]
    NotAModel(Violation),
    #[error("invalid classification data: {0}")]
    InvalidClassificationData(ClassCondition),
    #[error("sort {sort} has {size} elements, limit is {limit}")]
    SizeLimit {
        sort: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("ill-formed PSL-core model: {0}")]
    IllFormedPsl(PslDefect),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankingDefect {
    EmptyBlock(usize),
    Overlap(NodeId),
    Uncovered(NodeId),
    Foreign(NodeId),
}

impl fmt::Display for RankingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankingDefect::EmptyBlock(i) => write!(f, "block {i} is empty"),
            RankingDefect::Overlap(x) => write!(f, "{x} occurs in two blocks"),
            RankingDefect::Uncovered(x) => write!(f, "{x} is in no block"),
            RankingDefect::Foreign(x) => write!(f, "{x} is not in the carrier"),
        }
    }
}

/// The condition of a specification decomposition that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionCondition {
    VertexMismatch,
    BaseCyclic,
    BaseNotTransitive,
    /// `base ∪ residual` is not a transitive graph.
    NotLaterThanNotTransitive,
    ResidualComparable(NodeId, NodeId),
    ForbiddenTriangle(NodeId, NodeId, NodeId),
    SlackComparable(NodeId, NodeId),
    SlackNotSymmetric(NodeId, NodeId),
}

impl fmt::Display for DecompositionCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DecompositionCondition::*;
        match self {
            VertexMismatch => f.write_str("graphs are on different vertex sets"),
            BaseCyclic => f.write_str("base graph is cyclic"),
            BaseNotTransitive => f.write_str("base graph is not transitive"),
            NotLaterThanNotTransitive => f.write_str("base ∪ residual is not transitive"),
            ResidualComparable(u, v) => {
                write!(f, "residual edge ({u},{v}) is comparable in the base graph")
            }
            ForbiddenTriangle(u, v, w) => write!(f, "forbidden triangle ({u},{v},{w})"),
            SlackComparable(u, v) => {
                write!(f, "slack edge {{{u},{v}}} is comparable in base ∪ residual")
            }
            SlackNotSymmetric(u, v) => write!(f, "slack has ({u},{v}) but not ({v},{u})"),
        }
    }
}

/// The condition of [`crate::ClassificationData`] that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassCondition {
    EmptyEvent(NodeId),
    SharedOccurrence(NodeId),
    UncoveredOccurrence(NodeId),
    ForeignOccurrence(NodeId),
    /// An id is used by more than one sort.
    SortClash(NodeId),
    Decomposition(DecompositionCondition),
    RankingCarrier(NodeId),
    /// `not_later_than` differs from the intersection of the `Ĝ(R_o)`.
    NotLaterThanIntersection,
    /// `nonsimultaneous` differs from the intersection of the comparability
    /// graphs of `G(R_o)`.
    NonsimultaneousIntersection,
}

impl fmt::Display for ClassCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ClassCondition::*;
        match self {
            EmptyEvent(e) => write!(f, "event {e} has no occurrences"),
            SharedOccurrence(o) => write!(f, "occurrence {o} belongs to two events"),
            UncoveredOccurrence(o) => write!(f, "occurrence {o} belongs to no event"),
            ForeignOccurrence(o) => write!(f, "{o} is not an occurrence"),
            SortClash(x) => write!(f, "{x} is used by more than one sort"),
            Decomposition(c) => write!(f, "{c}"),
            RankingCarrier(o) => write!(f, "ranking of {o} is not on the occurrence set"),
            NotLaterThanIntersection => {
                f.write_str("not_later_than is not the intersection of the rankings' Ĝ graphs")
            }
            NonsimultaneousIntersection => f.write_str(
                "nonsimultaneous is not the intersection of the rankings' comparability graphs",
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PslDefect {
    SortClash(NodeId),
    NotAnActivityOccurrence(NodeId),
    NotAnActivity(NodeId),
    NotAnObject(NodeId),
    NotATimepoint(NodeId),
    NoActivity(NodeId),
    SeveralActivities(NodeId),
    /// `before` is not a strict total order on the timepoints.
    BeforeNotStrictTotal(NodeId, NodeId),
}

impl fmt::Display for PslDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PslDefect::*;
        match self {
            SortClash(x) => write!(f, "{x} belongs to more than one sort"),
            NotAnActivityOccurrence(x) => write!(f, "{x} is not an activity occurrence"),
            NotAnActivity(x) => write!(f, "{x} is not an activity"),
            NotAnObject(x) => write!(f, "{x} is not an object"),
            NotATimepoint(x) => write!(f, "{x} is not a timepoint"),
            NoActivity(x) => write!(f, "activity occurrence {x} occurs no activity"),
            SeveralActivities(x) => write!(f, "activity occurrence {x} occurs several activities"),
            BeforeNotStrictTotal(a, b) => {
                write!(f, "before is not a strict total order at ({a},{b})")
            }
        }
    }
}
