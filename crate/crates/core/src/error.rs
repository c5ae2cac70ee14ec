use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a model needs at least one agent")]
    EmptyAgents,
    #[error("a model needs at least one feature")]
    EmptyFeatures,
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("agent `{0}` declared twice")]
    DuplicateAgent(String),
    #[error("feature `{0}` declared twice")]
    DuplicateFeature(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("{which} = {value} is out of range ({range})")]
    ThresholdOutOfRange {
        which: &'static str,
        value: String,
        range: &'static str,
    },
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("self-loop on `{0}` is not allowed in irreflexive mode")]
    SelfLoop(String),
    #[error("atom N({0},{0}) is not admissible in irreflexive mode")]
    InadmissibleAtom(String),
    #[error("update sequences must be non-empty")]
    EmptySequence,
    #[error("unknown update `{0}` (expected diff, net or sync)")]
    UnknownUpdate(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown operator `{token}` at offset {offset}")]
    UnknownOperator { offset: usize, token: String },
    #[error("models do not share signature, thresholds and mode")]
    SignatureMismatch,
    #[error("index n = {n} must be below the agent count {agents}")]
    BadIndex { n: usize, agents: usize },
    #[error("sequence contains a synchronous update; only diff/net are allowed here")]
    UnexpectedSync,
    #[error("search space of {requested} sequences exceeds the cap of {cap}")]
    BudgetExceeded { requested: u128, cap: u128 },
    #[error("no witness found after {examined} candidates")]
    SearchExhausted { examined: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("model document error at line {line}, column {column}: {message}")]
    Document {
        line: usize,
        column: usize,
        message: String,
    },
}
