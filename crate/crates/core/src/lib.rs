//! Exact construction and verification of tridiagonal pairs and systems.
//!
//! Everything is generic over [`Field`]; the aliases below fix the two
//! fields the command-line tool supports.

pub mod appshell;
pub mod conjlab;
pub mod d4orbit;
pub mod error;
pub mod formlab;
pub mod matrices;
pub mod polys;
pub mod report;
pub mod scalars;
pub mod splitparam;
pub mod tdcore;

pub use error::{Error, Result};
pub use scalars::{Field, FieldDescriptor, PrimeField, Rationals, Scalar};

pub type QMatrix = matrices::Matrix<Rationals>;
pub type FpMatrix = matrices::Matrix<PrimeField>;
pub type QSystem = tdcore::TdSystem<Rationals>;
pub type FpSystem = tdcore::TdSystem<PrimeField>;
pub type QValidated = tdcore::Validated<Rationals>;
pub type FpValidated = tdcore::Validated<PrimeField>;
pub type QParameterArray = splitparam::ParameterArray<Rationals>;
pub type FpParameterArray = splitparam::ParameterArray<PrimeField>;
