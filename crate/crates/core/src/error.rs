use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("presentation rejected: axiom `{axiom}` fails at {witness}")]
    Rejected { axiom: String, witness: String },
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("elements belong to different presentations")]
    OwnerMismatch,
    #[error("presentation has no integral")]
    NoIntegral,
    #[error("presentation has no diagonal")]
    NoDiagonal,
    #[error("presentation has no Hopf data")]
    NoHopf,
    #[error("pairing is degenerate in weight {0}")]
    DegeneratePairing(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("first partition does not refine the second")]
    NotARefinement,
    #[error("n = {n} exceeds the configured bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("estimated dimension {0} exceeds the configured budget {1}")]
    BudgetExceeded(u64, u64),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is not invariant under the symmetric group")]
    NotInvariant,
    #[error("level {0} is missing from the level data")]
    MissingLevel(i64),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
