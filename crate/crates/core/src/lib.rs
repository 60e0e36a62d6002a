//! Exact linear algebra for unimodular and symplectic groups over fields:
//! Pfaffians, symplectic forms, unimodular sequences, skew-symmetric
//! matrices with invertible principal minors, the chain complexes built from
//! them, and the degree-3 map `gamma` with its checks.

pub mod bench;
pub mod chains;
pub mod error;
pub mod exactnum;
pub mod gamma;
pub mod matrix;
pub mod pfaffian;
pub mod report;
pub mod sections;
pub mod symplectic;
pub mod unimod;
pub mod verify;

pub use chains::{build_sm, Coeff, FormalSum, GroupRingElt, Simplicial};
pub use error::{Error, Result};
pub use exactnum::{sample_scalar, Field, Scalar};
pub use matrix::{Matrix, Permutation, Side, Vector};
pub use gamma::{gamma_map, Certificate, GammaOutput};
pub use pfaffian::{SkewMatrix, SkewPlusMatrix};
pub use report::Report;
pub use symplectic::{SpMatrix, Subspace, SymplecticSpace, VectorSeq};
pub use unimod::NonDegSeq;

/// Seeded generator used by every randomized routine.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Build a [`SeededRng`] from a `u64` seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
