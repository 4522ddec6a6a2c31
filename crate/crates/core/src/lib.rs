//! Rank 2 Cohen-Macaulay modules over the boundary algebra `B_{k,n}`.
//!
//! Modules are quiver representations of the doubled cycle quiver over the
//! truncated series ring `Q[t]/(t^N)`. [`structure`] classifies them with
//! divisibility criteria on box sums; [`oracle`] decides the same questions
//! from the matrices alone by computing endomorphism rings.

pub mod error;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod oracle;
pub mod regression;
pub mod rim;
pub mod series;
pub mod structure;
pub mod sweep;

pub use error::{Error, Result};
pub use matrix::SeriesMatrix;
pub use module::{
    build_m, build_rank1, canonical_hom, solve_constraint, CoefficientTuple, Rank1Module,
    Rank2Module, Representation,
};
pub use rim::{interlacing_number, profile_geometry, reduce_profile, Profile, ProfileGeometry, Rim};
pub use series::{Rational, TruncatedSeries, Valuation};

/// Default truncation order `4n`.
pub fn default_order(n: usize) -> usize {
    4 * n
}
