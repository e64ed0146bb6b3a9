use thiserror::Error;

/// Errors surfaced by the algebra engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in Q(zeta_{order})")]
    DivisionByZero { order: u32 },

    #[error("order_of is undefined for zero")]
    OrderOfZero,

    #[error("cyclotomic orders {0} and {1} are incompatible (neither divides the other)")]
    OrderMismatch(u32, u32),

    #[error("{0} is not a multiple of {1}; cannot embed")]
    BadEmbedding(u32, u32),

    #[error("braiding matrix is not of Cartan type A at pair ({i},{j}): {detail}")]
    BraidingPattern { i: usize, j: usize, detail: String },

    #[error("character {j} is ill-defined on generator {k}: value^{order} != 1")]
    CharacterIllDefined { j: usize, k: usize, order: u64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("q-commutator arguments are not YD-bihomogeneous: {0}")]
    NonBihomogeneous(String),

    #[error("relation is not orientable as a rewrite rule: {0}")]
    NonOrientable(String),

    #[error("presentation collapses to zero algebra: {0}")]
    CollapsesToZero(String),

    #[error("normal-word language appears infinite (no empty degree layer below {0})")]
    InfiniteLanguage(usize),

    #[error("completion bound {bound} exceeded; result inconclusive")]
    Inconclusive { bound: usize },

    #[error("parameter constraint violated: {0}")]
    InvalidParams(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("coaction residue is not of the form e (x) 1: offending right factor {0}")]
    OracleResidue(String),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
