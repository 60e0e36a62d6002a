use thiserror::Error;

use crate::exactnum::Field;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index {index} out of range 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("Pfaffian of odd-size ({0}) matrix")]
    OddSize(usize),
    #[error("expected odd size, got {0}")]
    EvenSize(usize),
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix is not in Skew+")]
    NotSkewPlus,
    #[error("size {size} exceeds the supported bound {max} for exhaustive certification")]
    TooLarge { size: usize, max: usize },

    #[error("elementary matrix needs distinct indices in 1..={dim}, got ({i}, {j})")]
    BadIndices { i: usize, j: usize, dim: usize },
    #[error("subspace is not non-degenerate: {0}")]
    NotNonDegenerate(String),
    #[error("subspace is degenerate")]
    Degenerate,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("map is not an isometry")]
    NotIsometry,
    #[error("matrix is not in the symplectic group of size {0}")]
    NotSymplectic(usize),
    #[error("parity violation: {0}")]
    BadParity(String),
    #[error("expected a unit, got zero")]
    ZeroUnit,
    #[error("index range violated: {0}")]
    BadRange(String),

    #[error("sampler exhausted after {attempts} attempts")]
    SamplerExhausted { attempts: usize },
    #[error("formal sum is not a cycle")]
    NotACycle,

    #[error("degenerate brace: a^-1 - b^-1 + c^-1 = 0")]
    DegenerateBrace,
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
