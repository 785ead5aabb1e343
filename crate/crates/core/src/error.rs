use std::fmt;

use crate::LinkId;
use crate::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown link id {0}")]
    UnknownLink(LinkId),

    #[error("unknown node id {0}")]
    UnknownNode(NodeId),

    #[error("links {0} and {1} are at distance zero")]
    DegenerateDistance(LinkId, LinkId),

    /// The link cannot clear the SINR threshold even without interference.
    #[error("link {0} is infeasible in isolation (P <= beta * N * len^alpha)")]
    InfeasibleLink(LinkId),

    #[error("invalid metric: {0}")]
    MetricInvalid(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("input set is not feasible")]
    InfeasibleInput,

    #[error("{what} is limited to {limit} links, instance has {links}")]
    TooLarge { what: &'static str, links: usize, limit: usize },

    #[error("invalid simulation config: {0}")]
    ConfigInvalid(String),

    #[error("simulation stopped after {0} slots with links still pending")]
    MaxSlotsExceeded(u64),

    #[error("instance carries no gadget metadata")]
    MetadataMissing,

    #[error("instance generation failed: {0}")]
    GenerationFailed(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("schema version {found} is not supported (expected {expected})")]
    SchemaVersionMismatch { found: u32, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    MetricInvalid(String),
    Invalid(String),
}

/// A document that could not be turned into a valid value, with the offending
/// field path and, when known, its position in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub field: String,
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = if self.field.is_empty() { "." } else { &self.field };
        write!(f, "parse error at `{field}`")?;
        if self.line > 0 {
            write!(f, " (line {}, column {})", self.line, self.column)?;
        }
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, ": {m}"),
            ParseErrorKind::MetricInvalid(m) => write!(f, ": invalid metric: {m}"),
            ParseErrorKind::Invalid(m) => write!(f, ": {m}"),
        }
    }
}

impl std::error::Error for ParseError {}
