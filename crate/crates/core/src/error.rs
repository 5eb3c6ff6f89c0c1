use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator images are not a permutation of 0..{degree}: {images:?}")]
    NonPermutation { degree: usize, images: Vec<usize> },
    #[error("group closure exceeds the size cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("modules live over different groups or primes")]
    GroupMismatch,
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("minimal resolutions need a p-group, but |G| = {order} is not a power of {p}")]
    MinimalityUnavailable { order: usize, p: u32 },
    #[error("resolution length must be at least {0}")]
    LengthTooSmall(usize),
    #[error("series has {got} entries, need at least {need}")]
    SeriesTooShort { got: usize, need: usize },
    #[error("series has {got} entries, need more than {need} to fit the numerator")]
    InsufficientData { got: usize, need: usize },
    #[error("the group is elementary abelian")]
    ElementaryAbelianInput,
    #[error("subgroup is not maximal: {0}")]
    NotMaximal(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("failed to lift a chain map in degree {0}")]
    LiftFailure(usize),
    #[error("the Sylow {0}-subgroup is not abelian")]
    SylowNotAbelian(u32),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("action map is not an automorphism assignment: {0}")]
    NotAnAutomorphism(String),
    #[error("no expected data for {name} at p = {p}")]
    NoExpectedData { name: String, p: u32 },
    #[error("not a representation: {0}")]
    NotARepresentation(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("cannot resolve subgroup spec `{0}`")]
    UnresolvableSubgroup(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
