use thiserror::Error;

/// Errors surfaced by laboratory operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("unknown generator {0:?} (declared rank {1})")]
    UnknownGenerator(char, usize),

    #[error("point outside enumerated ball: {word} needs radius > {radius}")]
    BallExceeded { word: String, radius: u32 },

    #[error("memory budget exceeded: {0} vertices requested, budget {1}")]
    BudgetExceeded(u64, u64),

    #[error("coincident boundary points: product exceeded divergence ceiling {0}")]
    CoincidentBoundaryPoints(f64),

    #[error("boundary points not pairwise distinct: {0}")]
    NotPairwiseDistinct(String),

    #[error("element is not hyperbolic: no axis")]
    NoAxis,

    #[error("no hyperbolic element found within radius {0}")]
    NoHyperbolicElement(u32),

    #[error("no theta found within radius {0}: action may be elementary")]
    MaybeElementary(u32),

    #[error("translation length below resolution at N={0}: increase N")]
    IncreaseN(u32),

    #[error("sequence does not converge to the target boundary point")]
    NotConverging,

    #[error("witness set too coarse: {0}")]
    WitnessTooCoarse(String),

    #[error("budget infeasible at severity {severity}: {detail}; retry with smaller severity")]
    BudgetInfeasible { severity: f64, detail: String },

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
