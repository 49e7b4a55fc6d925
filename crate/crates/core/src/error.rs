use thiserror::Error;

/// Every failure the engine can report. Variant names double as the typed
/// error names printed by the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("Euler characteristic {computed} does not match declared surface ({expected})")]
    EulerMismatch { computed: i64, expected: i64 },
    #[error("degenerate map: {0}")]
    DegenerateMap(String),
    #[error("map is not embedded on a torus")]
    NotATorus,
    #[error("size too small: {0}")]
    SizeTooSmall(String),
    #[error("enumeration of {required} states exceeds the cap of {cap}")]
    TooLarge { required: f64, cap: f64 },
    #[error("operation requires a different spin group: {0}")]
    WrongGroup(String),
    #[error("dual map is degenerate: {0}")]
    DegenerateDual(String),
    #[error("invalid correlator spec: {0}")]
    SpecInvalid(String),
    #[error("vertex and face are not adjacent")]
    NotAdjacent,
    #[error("invalid path: {0}")]
    PathInvalid(String),
    #[error("argument outside its domain: {0}")]
    DomainError(String),
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("charges do not sum to zero (total {0})")]
    ChargeImbalance(f64),
    #[error("lattice-sum truncation insufficient: {0}")]
    TruncationInsufficient(String),
    #[error("coincident points")]
    CoincidentPoints,
    #[error("edge {0} has zero weight")]
    ZeroWeightEdge(usize),
    #[error("q = {0} is not an integer")]
    NotInteger(f64),
    #[error("q = {0} outside (0, 4)")]
    QOutOfRange(f64),
    #[error("map is not 4-regular")]
    NotFourRegular,
    #[error("orientation violates the ice rule at vertex {0}")]
    InvalidIce(usize),
    #[error("edge set is not a perfect matching")]
    NotPerfectMatching,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is not embedded on the sphere")]
    NotPlanar,
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

impl Error {
    /// Short variant name, used in reports and exit diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::MalformedRotation(_) => "MalformedRotation",
            Error::EulerMismatch { .. } => "EulerMismatch",
            Error::DegenerateMap(_) => "DegenerateMap",
            Error::NotATorus => "NotATorus",
            Error::SizeTooSmall(_) => "SizeTooSmall",
            Error::TooLarge { .. } => "TooLarge",
            Error::WrongGroup(_) => "WrongGroup",
            Error::DegenerateDual(_) => "DegenerateDual",
            Error::SpecInvalid(_) => "SpecInvalid",
            Error::NotAdjacent => "NotAdjacent",
            Error::PathInvalid(_) => "PathInvalid",
            Error::DomainError(_) => "DomainError",
            Error::SingularSystem(_) => "SingularSystem",
            Error::ChargeImbalance(_) => "ChargeImbalance",
            Error::TruncationInsufficient(_) => "TruncationInsufficient",
            Error::CoincidentPoints => "CoincidentPoints",
            Error::ZeroWeightEdge(_) => "ZeroWeightEdge",
            Error::NotInteger(_) => "NotInteger",
            Error::QOutOfRange(_) => "QOutOfRange",
            Error::NotFourRegular => "NotFourRegular",
            Error::InvalidIce(_) => "InvalidIce",
            Error::NotPerfectMatching => "NotPerfectMatching",
            Error::NotBipartite => "NotBipartite",
            Error::NotPlanar => "NotPlanar",
            Error::ParseError(_) => "ParseError",
            Error::UnknownSuite(_) => "UnknownSuite",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
