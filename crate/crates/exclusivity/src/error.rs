use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("observable `{0}` is not declared in the scenario")]
    UndeclaredObservable(String),

    #[error("observable `{0}` declared or assigned twice")]
    DuplicateObservable(String),

    #[error("event {event} assigns {observable} a value inconsistent with its rule")]
    InconsistentEvent { event: String, observable: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate event at indices {0} and {1}")]
    DuplicateEvent(usize, usize),

    #[error("{0}")]
    SizeLimit(String),

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("copy mismatch: {0}")]
    CopyMismatch(String),

    #[error("exclusivity certification failed: events {first} and {second} ({first_label} and {second_label}) are not exclusive")]
    CertificationFailed {
        first: usize,
        second: usize,
        first_label: String,
        second_label: String,
    },

    #[error("inequality used before its event set was certified")]
    Uncertified,

    #[error("bound requested before the summation identity was verified")]
    IdentityNotVerified,

    #[error("solver did not reach the requested gap within the iteration cap (best gap {gap:.3e})")]
    NoConvergence { gap: f64 },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
