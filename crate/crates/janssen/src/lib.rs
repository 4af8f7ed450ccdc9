//! Certified numerics for the Janssen sufficiency test on Gabor systems with
//! Hermite windows over rectangular lattices.
//!
//! The test certifies the frame property of 𝒢(hₙ, aℤ×bℤ) by bounding
//! Σ_{λ°∈Λ°} |V_{hₙ}hₙ(λ°)| < 2 over the adjoint lattice Λ° = (1/a)ℤ×(1/b)ℤ.
//! All certified quantities are carried as enclosures with directed rounding;
//! the fast mode trades rigor for speed via log-magnitude doubles.

pub mod ambiguity;
pub mod bigfloat;
pub mod certify;
pub mod error;
pub mod interval;
pub mod lattice;
pub mod specfun;

pub use error::{Error, Result};
pub use interval::{Enclosure, Mode, PrecisionConfig};
