//! Finite-field projective geometry for the wonderful compactification of
//! the complement of all rational hyperplanes.
//!
//! * [`gf`]: finite fields GF(p^a) and embeddings of the prime field.
//! * [`projspace`]: linear subspaces of P^n, flags, the subspace lattice and
//!   lattice permutations.
//! * [`counting`]: exact Gaussian-binomial counts and rank inequalities.
//! * [`chow`]: divisor classes, pullbacks along lattice maps, the surface
//!   intersection pairing and the point/hyperplane swap test.
//! * [`valfan`]: valuations of units, cone points, separation certificates
//!   and affine chart polynomials.
//! * [`autgroup`]: PGL actions, collineation search and matrix realization.

pub mod autgroup;
pub mod chow;
pub mod counting;
pub mod gf;
pub mod linalg;
pub mod projspace;
pub mod valfan;

use thiserror::Error;

pub use autgroup::{
    act, collineation_search, induced_permutation, realize_as_pgl, AutError, GradedPermutation,
    Grading, ProjectiveMap,
};
pub use chow::{ChowError, ChowGroup, DivisorClass, SurfaceClass, SwapReport};
pub use gf::{Field, FieldElement, FieldEmbedding, GfError};
pub use projspace::{
    flag_complex_check, Ambient, Flag, FlagType, Lattice, Linear, LinearForm, ProjError, Subspace,
    SubspacePermutation,
};
pub use valfan::{ConePoint, FanError, SeparationCertificate, UnitMonomial};

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Projective(#[from] ProjError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Aut(#[from] AutError),
}

impl Error {
    /// Whether the failure was a resource guard rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::Projective(ProjError::BudgetExceeded { .. })
                | Error::Chow(ChowError::Lattice(ProjError::BudgetExceeded { .. }))
                | Error::Fan(FanError::Lattice(ProjError::BudgetExceeded { .. }))
                | Error::Aut(AutError::BudgetExceeded { .. })
                | Error::Aut(AutError::Lattice(ProjError::BudgetExceeded { .. }))
                | Error::Aut(AutError::TooManyPoints(_))
        )
    }
}

/// Exact integers in reports: a JSON number when it fits in 64 bits, a
/// decimal string otherwise.
pub(crate) fn serialize_big<S: serde::Serializer>(
    x: &num_bigint::BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(x) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}
