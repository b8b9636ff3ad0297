use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown atomic proposition `{0}`")]
    UnknownAtom(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("formula is not in negation normal form: {0}")]
    NotNnf(String),

    #[error("automaton is not weak: SCC {scc:?} mixes accepting and rejecting states")]
    NotWeak { scc: Vec<usize> },

    #[error("incompatible automata: {0}")]
    IncompatibleAutomata(String),

    #[error("malformed automaton: {0}")]
    Malformed(String),

    #[error("resource limit exceeded while {what}: {limit}")]
    ResourceLimit { what: String, limit: String },
}
