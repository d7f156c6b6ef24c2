//! Exact multiplication of (p−1)×(p−1) rational matrices through the
//! quotient skew polynomial ring Q(β)[x; σ]/(x^{p−1} − 1), p prime.
//!
//! A matrix corresponds to a skew polynomial (see [`transform`]); the
//! product polynomial is supported on the sumset of the two supports, so
//! when that sumset is small only a few evaluations of the product are
//! needed to recover it. [`matmul::det_mul`] exploits the sumset bound;
//! [`matmul::mc_mul`] guesses the true sparsity by doubling and certifies
//! each guess with a Freivalds test.

pub mod counter;
pub mod cyclotomic;
pub mod error;
pub mod linalg;
pub mod matmul;
pub mod matrix;
mod modular;
pub mod skewpoly;
pub mod structure;
pub mod transform;

/// Exact rational; always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub use cyclotomic::{find_primitive_root, CycCtx, CycElem};
pub use error::{Error, Result};
pub use matmul::{det_mul, freivalds, mc_mul, naive_mul, Algorithm, FreivaldsOutcome, MulReport};
pub use matrix::{Cubic, RatMatrix, RectMul};
pub use skewpoly::{SkewPoly, SupportSet};
pub use transform::{mat_to_skew, phi_orientation, skew_to_mat, Orientation};
