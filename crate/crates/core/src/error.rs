use thiserror::Error;

/// Errors raised by diagram construction and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("level {level}, vertex {vertex}: word length {found} differs from q = {expected}")]
    LengthMismatch {
        level: usize,
        vertex: u32,
        found: String,
        expected: String,
    },

    #[error("vertex {vertex} out of range 1..={rank}")]
    VertexOutOfRange { vertex: u64, rank: usize },

    #[error("duplicate level {0}")]
    DuplicateLevel(usize),

    #[error("level {level}: missing word for vertex {vertex}")]
    MissingWord { level: usize, vertex: u32 },

    #[error("levels must be numbered 2..={depth} consecutively, found level {found}")]
    LevelSequence { depth: usize, found: usize },

    #[error("level {level} out of range 1..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("invalid level window ({m}, {n}) for depth {depth}")]
    InvalidWindow { m: usize, n: usize, depth: usize },

    #[error("expansion of {letters} letters exceeds the limit of {limit}")]
    ExpansionLimit { letters: String, limit: u64 },

    #[error("operation requires a Toeplitz-type diagram (constant in-degree per level)")]
    NotToeplitz,

    #[error("empty block or word")]
    EmptyWord,

    #[error("subdiagram is disconnected: vertex {vertex} at level {level} keeps no incoming edge")]
    Disconnected { level: usize, vertex: u32 },

    #[error("path enumeration needs {required} paths, above the oracle scale {limit}")]
    ScaleExceeded { required: String, limit: u64 },

    #[error("gcd({a}, {b}) != 1")]
    NotCoprime { a: i64, b: u64 },

    #[error("tensor modulus {tensor} does not match candidate denominator {candidate}")]
    ModulusMismatch { tensor: u64, candidate: u64 },

    #[error("k-map has no value for pair ({t1}, {t2})")]
    MissingPair { t1: u32, t2: u32 },

    #[error("no stabilizing telescoping within {bound} levels; residues seen: {residues:?}")]
    Stabilization { bound: usize, residues: Vec<u64> },

    #[error("the maximal path has no successor")]
    MaximalPath,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
