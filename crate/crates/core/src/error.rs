use thiserror::Error;

use crate::system::Signature;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Coxeter graph: {0}")]
    InvalidGraph(String),
    #[error("infinite edge ({i},{j}) has no c parameter")]
    MissingCParam { i: usize, j: usize },
    #[error("borderline signature: {zero_wide} eigenvalues within {tau:e} of zero but {zero_narrow} within {tau_narrow:e}")]
    BorderlineSignature {
        tau: f64,
        tau_narrow: f64,
        zero_wide: usize,
        zero_narrow: usize,
    },
    #[error("system is not Lorentzian: signature {0}")]
    NotLorentzian(Signature),
    #[error("generator {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("fingerprint collision between {a} and {b} (max entry difference {diff:e}); retry with a smaller dedup grid")]
    FingerprintCollision { a: String, b: String, diff: f64 },
    #[error("matrix entries exceed {limit:e} at length {length}")]
    EntryOverflow { limit: f64, length: usize },
    #[error("element budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("borderline spectrum: spectral radius {rho} is within the hyperbolicity band")]
    BorderlineSpectrum { rho: f64 },
    #[error("unresolved elliptic/parabolic element: no finite order up to {k_max} and no Jordan defect")]
    Unresolved { k_max: usize },
    #[error("ill-conditioned eigenvector: residual {0:e}")]
    IllConditioned(f64),
    #[error("expected a {expected} element, got {got}")]
    WrongKind {
        expected: &'static str,
        got: &'static str,
    },
    #[error("parabolic extraction failed: radical of restricted form has dimension {0}")]
    ParabolicExtraction(usize),
    #[error("subspace has dimension {got}, expected {expected}")]
    SubspaceDimension { got: usize, expected: usize },
    #[error("the zero vector has no projective point")]
    ZeroVector,
    #[error("no infinite-order elements with length in {0}..={1}")]
    EmptyCore(usize, usize),
    #[error("orbit degenerated to {0} point(s)")]
    DegenerateOrbit(usize),
    #[error("word is not reduced (failure at letter {0})")]
    NotReduced(usize),
    #[error("period element is elliptic: not an infinite reduced word witness")]
    EllipticPeriod,
    #[error("empty point set")]
    EmptyPointSet,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("bilinear form is singular")]
    SingularForm,
    #[error("unsupported rank {0} (only 3 and 4 can be drawn)")]
    UnsupportedRank(usize),
    #[error("light cone is unbounded in the affine chart")]
    UnboundedConic,
    #[error("element store only covers length {have}, need {need}")]
    StoreTooShort { have: usize, need: usize },
    #[error("intersection is {0}, not space-like")]
    NotSpaceLike(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
