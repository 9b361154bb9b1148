use thiserror::Error;

use crate::graph::ValidationReport;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("cyclic type hierarchy through `{0}`")]
    CyclicHierarchy(String),
    #[error("part structure of `{owner}` loops back through `{part_type}`")]
    CyclicComposition { owner: String, part_type: String },
    #[error("`{type_name}` cannot override `{member}`: {reason}")]
    IllegalOverride {
        type_name: String,
        member: String,
        reason: String,
    },
    #[error("invalid schema for `{type_name}`: {reason}")]
    InvalidSchema { type_name: String, reason: String },
    #[error("type `{0}` is already defined")]
    DuplicateTypeName(String),
    #[error("instance `{0}` is already defined")]
    DuplicateId(String),
    #[error("a type cannot be composed with itself (`{0}`)")]
    SelfComposition(String),
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    TypeMismatch { expected: String, found: String },
    #[error("no node at path `{0}`")]
    BadPath(String),
    #[error("attribute `{0}` not found")]
    NotFound(String),
    #[error("attribute name `{name}` is ambiguous; qualify it as one of: {}", candidates.join(", "))]
    Ambiguous {
        name: String,
        candidates: Vec<String>,
    },
    #[error("value `{value}` is outside the domain of `{attribute}`")]
    DomainViolation { attribute: String, value: String },
    #[error("`{attribute}` takes {expected} value(s), got {count}")]
    CardinalityViolation {
        attribute: String,
        count: usize,
        expected: String,
    },
    #[error("instance `{id}` does not conform to its type: {report}")]
    InvalidInstance {
        id: String,
        report: ValidationReport,
    },
    #[error("malformed time function: {0}")]
    MalformedFunction(String),
    #[error("attribute `{0}` has no reference value")]
    NoReference(String),
    #[error("bad time range: {0}")]
    BadRange(String),
    #[error("degenerate domain [{lo}, {hi}]")]
    DegenerateDomain { lo: String, hi: String },
    #[error("theoretical value {value} lies outside [{lo}, {hi}]")]
    TheoreticalOutsideDomain {
        value: String,
        lo: String,
        hi: String,
    },
    #[error("no evaluation rule for `{0}`")]
    MissingEvalSpec(String),
    #[error("no commonly present attribute can be evaluated")]
    EmptyOverlap,
    #[error("type `{0}` has no instances to compare against")]
    NoCandidates(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
