//! Finite-dimensional C*-weak Hopf algebras and the tensor-network toolkit
//! built on them.
//!
//! A weak Hopf algebra is presented concretely by structure constants over
//! complex doubles: multiplication and comultiplication tensors, unit and
//! counit vectors, and antipode and star matrices.  On top of that
//! presentation this crate provides
//!
//! * axiom verification ([`algebra`]),
//! * star representations, sector decompositions and boundary operators
//!   ([`rep`]),
//! * the canonical elements — Haar integral, the group-like element `g`,
//!   Watatani index, the pulling-through element Ω and its weights ξ —
//!   together with a verifier for the theorem suite that governs them
//!   ([`canonical`]),
//! * a labeled tensor engine with deterministic greedy contraction
//!   ([`tensor`]),
//! * the oriented square-lattice geometry (comb-like and cone-like regions)
//!   on which the matrix-product and PEPS layers operate ([`lattice`]).
//!
//! Everything is desk scale: dimensions are small enough that dense linear
//! algebra (LAPACK via ndarray-linalg) is the right tool, and every theorem
//! invoked downstream is re-verified numerically rather than trusted.

// Link the system BLAS/LAPACK through blas-src.
extern crate blas_src;

use num_complex::Complex64;

/// The scalar type used throughout: complex double precision.
pub type C64 = Complex64;

pub mod algebra;
pub mod canonical;
pub mod lattice;
pub mod linalg;
pub mod rep;
pub mod report;
pub mod tensor;

/// Default tolerances, central so that every module agrees on what "equal"
/// means.  Rationale: structure constants of the shipped builders are exact
/// small rationals, so identities that are linear in them hold to machine
/// precision and `TOL_STRICT` is appropriate; quantities that pass through an
/// eigendecomposition (square roots, inverses of canonical elements)
/// accumulate roughly `dim * eps * condition` and get `TOL_DERIVED`; large
/// tensor-network contractions accumulate further and get `TOL_NETWORK`.
pub mod tol {
    /// Identities linear in exact structure constants.
    pub const TOL_STRICT: f64 = 1e-12;
    /// Identities involving functional calculus (fractional powers, inverses).
    pub const TOL_DERIVED: f64 = 1e-10;
    /// Identities evaluated through many-tensor contractions.
    pub const TOL_NETWORK: f64 = 1e-9;
    /// Rank / kernel cutoff for singular values relative to the largest.
    pub const RANK_CUTOFF: f64 = 1e-10;
    /// Floor used in relative-residual denominators to avoid division by zero.
    pub const DENOM_FLOOR: f64 = 1e-300;
}
