use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("gate acts twice on qubit {0}")]
    DuplicateQubit(usize),
    #[error("non-finite rotation angle {0}")]
    NonFiniteAngle(f64),
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),
    #[error("channel arity {arity} does not match {qubits} target qubits")]
    ArityMismatch { arity: usize, qubits: usize },
    #[error("{what}: size {size} exceeds supported maximum {max}")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("noise scale factor {0} is below 1")]
    InvalidScaleFactor(f64),
    #[error("Pauli index {0} outside 0..=3")]
    InvalidPauliIndex(usize),
    #[error("projection onto the Fibonacci subspace has zero weight")]
    ZeroWeight,
    #[error("counts are empty")]
    EmptyCounts,
    #[error("postselection retained no shots")]
    EmptyPostselection,
    #[error("time grids do not match")]
    GridMismatch,
    #[error("correlator source site {0} must be even (1-based)")]
    OddSource(usize),
    #[error("missing correlator branch for source site {site}: {branch}")]
    MissingBranch { site: usize, branch: String },
    #[error("angle {theta} above amplitude-scaling threshold {threshold}")]
    AboveThreshold { theta: f64, threshold: f64 },
    #[error("parity group overlaps rotated neighbor at site {0}")]
    ParityOverlap(usize),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),
    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
