use thiserror::Error;

/// Errors surfaced by the group, fusion, model, and cohomology engines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("images do not form a bijection of the point set")]
    NotBijective,

    #[error("cycle notation invalid: {0}")]
    BadCycle(String),

    #[error("group order exceeds cap {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("element {element} does not lie in the parent group")]
    NotInParent { element: String },

    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { order: u64, p: u64 },

    #[error("subgroup of order {got} is not Sylow: {p}-part of the group order is {want}")]
    NotSylow { got: u64, want: u64, p: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("generator images do not extend to a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("homomorphism is not invertible: {0}")]
    NotInvertible(String),

    #[error("subgroup is not normal in the ambient group")]
    NotNormal,

    #[error("subgroup {sub} is not contained in {sup}")]
    NotContained { sub: String, sup: String },

    #[error("morphism count {count} exceeds cap {cap}")]
    MorphismCapExceeded { count: usize, cap: usize },

    #[error("|G| = {order} exceeds the degree-{degree} cochain cap {cap}")]
    BarCapExceeded { order: u64, degree: usize, cap: usize },

    #[error("alperin datum entry {entry} invalid: {condition}")]
    DatumInvalid { entry: usize, condition: String },

    #[error("morphism set does not generate the fusion system: {0}")]
    DoesNotGenerate(String),

    #[error("no alperin decomposition found for the given morphism")]
    DecompositionNotFound,

    #[error("fusion systems live over different Sylow groups")]
    SylowMismatch,

    #[error("primes must be pairwise distinct, {0} repeats")]
    PrimeRepeated(u64),

    #[error("model is a direct product; the operation needs a graph-of-groups model")]
    NotAGraphModel,

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("syllable bound {requested} exceeds cap {cap}")]
    SyllableBoundExceeded { requested: usize, cap: usize },

    #[error("no extension of the character exists on vertex {vertex}")]
    NoCharacterExtension { vertex: usize },

    #[error("parse error in {file} line {line}: expected {expected}")]
    Parse {
        file: String,
        line: usize,
        expected: String,
    },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
