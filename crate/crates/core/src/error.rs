use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input shape: ragged tables, out-of-range indices, size mismatches.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("table is not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})")]
    NonAssociative { a: usize, b: usize, c: usize },

    #[error("table has no two-sided identity")]
    NoIdentity,

    /// Operands built over different monoids or ambient spaces.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("function undefined on value {0}")]
    Domain(f64),

    #[error("unknown {kind} `{name}`")]
    Lookup { kind: &'static str, name: String },

    #[error("reduction annihilates the state")]
    NullReduction,

    #[error("context error: {0}")]
    Context(String),
}

impl Error {
    pub(crate) fn lookup(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Lookup {
            kind,
            name: name.into(),
        }
    }
}
