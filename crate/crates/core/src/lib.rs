//! Exact computational models of the spine of a Fourier-Stieltjes algebra.
//!
//! The crate realizes, in exact rational and cyclotomic arithmetic, the
//! computable skeleton attached to a locally compact group from several
//! concrete families: the semilattice of non-quotient locally precompact
//! topologies, the spine compactification as a Clifford semigroup on dense
//! representatives, and the graded function algebra with trigonometric
//! polynomial coefficients, together with its characters, idempotents and
//! affine-pullback homomorphisms.

pub mod algebra;
pub mod batch;
pub mod coset;
pub mod cyclo;
pub mod error;
pub mod json;
pub mod padic;
pub mod rat;
pub mod semilattice;
pub mod spine;
pub mod trig;
pub mod subspace;
pub mod topology;

pub use error::{Error, Result};
