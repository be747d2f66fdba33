use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex {vertex} out of range for a graph on {count} vertices")]
    VertexOutOfRange { vertex: Vertex, count: usize },
    #[error("no instance: {0}")]
    NoInstance(String),
    #[error("graph has {size} vertices, above the configured cap of {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("inconsistent adversary state: no answer is consistent with any instance")]
    InconsistentState,
    #[error("no consistent instance reproduces the transcript")]
    NoWitness,
    #[error("lemma hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("separator certificate failed: {0}")]
    Certificate(String),
    #[error("degenerate region: {0}")]
    DegenerateRegion(String),
    #[error("input is not a tree")]
    NotATree,
    #[error("alpha {0} is outside the range the bound covers")]
    AlphaOutOfRange(String),
    #[error("function is not subhomogeneous: f({small}) > ({small}/{large}) * f({large})")]
    NotSubhomogeneous { small: u64, large: u64 },
    #[error("missing answer for cut vertex {0}")]
    MissingAnswer(Vertex),
    #[error("answers are inconsistent with every instance: {0}")]
    Inconsistent(String),
    #[error("separator provider broke its contract: {0}")]
    ProviderContract(String),
    #[error("localization stayed ambiguous between {0} parts")]
    Ambiguous(usize),
    #[error("blowup construction bug: {0}")]
    Construction(String),
    #[error("blown answer synthesis contradiction: {0}")]
    Synthesis(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
