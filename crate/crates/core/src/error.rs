use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("alphabet mismatch: words are over different alphabets")]
    AlphabetMismatch,

    #[error("free presentation, Ω undefined")]
    FreePresentation,

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("relator {0} is not a single generator letter")]
    NotSingleLetter(usize),

    #[error("witness rejected: {0}")]
    WitnessRejected(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tuple length {got} does not match alphabet rank {rank}")]
    TupleLength { got: usize, rank: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid reeb graph at vertex {vertex}: {msg}")]
    InvalidGraph { vertex: usize, msg: String },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("no cancellable extremum pair: {0}")]
    StuckExtrema(String),

    #[error("event {event} invalid: {msg} (state: {state})")]
    InvalidEvent {
        event: usize,
        msg: String,
        state: String,
    },

    #[error("missing profile fields: {}", .0.join(", "))]
    MissingFields(Vec<String>),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),

    #[error("unknown catalog entry `{0}`")]
    UnknownProfile(String),

    #[error("json: {0}")]
    Json(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
