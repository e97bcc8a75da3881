use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A textual MR could not be parsed. `offset` is the byte position of
    /// the offending character in the input string.
    #[error("malformed MR at byte {offset}: {detail}")]
    MalformedMr { offset: usize, detail: String },

    /// The same attribute appeared twice in one MR.
    #[error("duplicate slot for attribute `{attribute}`")]
    DuplicateSlot { attribute: String },

    /// A slot value or attribute name violated a construction invariant.
    #[error("invalid slot: {0}")]
    InvalidSlot(String),

    /// CSV ingestion failed. Row numbers are 1-based and count the header.
    #[error("ingestion error at row {row}: {detail}")]
    Ingestion { row: u64, detail: String },

    /// Matcher configuration failed to compile.
    #[error("config error in rule `{rule}`: {detail}")]
    ConfigCompile { rule: String, detail: String },

    /// Matcher configuration failed validation.
    #[error("config validation: {0}")]
    ConfigValidation(String),

    /// An MR mentions an attribute the matcher config does not declare.
    #[error("attribute `{0}` is not declared in the matcher config")]
    UndeclaredAttribute(String),

    /// Correction produced an MR with no slots.
    #[error("correction produced an empty MR")]
    DegenerateOutput,

    /// SER is undefined for an MR with zero slots.
    #[error("undefined denominator: MR has zero slots")]
    UndefinedDenominator,

    /// An operation that needs at least one element got none.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Requested sample size exceeds the population.
    #[error("sample size {requested} exceeds corpus size {available}")]
    SampleTooLarge { requested: usize, available: usize },

    /// Error while processing one element of a batch.
    #[error("item {index}: {source}")]
    InList {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        // Preserve row positions where the csv crate reports them.
        if let csv::ErrorKind::Utf8 { pos, .. } = e.kind() {
            if let Some(p) = pos {
                return Error::Ingestion {
                    row: p.line(),
                    detail: "invalid UTF-8".into(),
                };
            }
        }
        Error::Csv(e.to_string())
    }
}
