use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("loop edge at vertex {0}")]
    Loop(usize),
    #[error("vertex {0} is out of range")]
    VertexRange(usize),
    #[error("duplicate edge label `{0}`")]
    DuplicateLabel(String),
    #[error("edge {0}-{1} is parallel to another edge but has no label")]
    MissingLabel(usize, usize),
    #[error("edge `{0}` is labeled but has no parallel partner")]
    LoneLabel(String),
    #[error("ground set has {0} elements; at most 64 are supported")]
    GroundTooLarge(usize),
    #[error("unknown ground element `{0}`")]
    UnknownElement(String),
    #[error("set is not contained in the ground set")]
    NotInGround,
    #[error("set is not admissible")]
    Inadmissible,
    #[error("not an element of the poset: {0}")]
    NotAnElement(String),
    #[error("{0} is not covered by {1}")]
    NotACover(String, String),
    #[error("elements are not comparable in the required order")]
    NotLeq,
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("poset is not bounded")]
    Unbounded,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not a single-bundle graph of the listed families")]
    OutsideFamilies,
    #[error("graph is not in canonical form: {0}")]
    NotCanonical(String),
    #[error("graph is not in G*")]
    NotInGStar,
    #[error("chain is not a maximal chain")]
    NotMaximalChain,
    #[error("interval has no atoms")]
    NoAtoms,
    #[error("atom ordering is invalid: {0}")]
    InvalidOrdering(String),
    #[error("the two readings of the recursive atom ordering diverge at element {0}")]
    ReadingsDiverge(usize),
    #[error("complex has {facets} facets; brute force is limited to {limit}")]
    TooManyFacets { facets: usize, limit: usize },
    #[error("complex is not pure")]
    NotPure,
    #[error("{what}: budget of {budget} exceeded")]
    BudgetExceeded { what: &'static str, budget: u64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
