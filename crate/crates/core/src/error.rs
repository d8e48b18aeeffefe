use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("operation `{op}` is not supported over {ring}")]
    UnsupportedRing { ring: String, op: &'static str },

    #[error("cannot parse `{input}` as an element of {ring}")]
    Parse { input: String, ring: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("structure constants are not those of a GDPA: disagreement at c({n}, {m})")]
    NotGdpa { n: u64, m: u64 },

    #[error("sequence is not GCD-morphic: gcd(a({n}), a({m})) differs from a(gcd({n}, {m}))")]
    NotGcdMorphic { n: u64, m: u64 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("elements belong to different algebra contexts")]
    ContextMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
