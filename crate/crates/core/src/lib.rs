//! Symplectic vector-space functors on finite Galois-correspondence models.
//!
//! Given a finite group `G` standing in for `Gal(L/Q)`, a complete catalog of
//! its complex irreducible representations with explicit matrices, and a table
//! of root numbers `W(pi)` for the symplectic irreps, this crate builds the
//! covariant functor sending an intermediate field `K = L^H` to the triple
//! `(V_K, cup_K, *_K)`: the `H`-fixed subspace of the ambient direct sum of
//! the selected symplectic irreps, with the restricted alternating form and
//! star operator.  Every structural identity the construction is supposed to
//! satisfy (section/retraction of adjoints, Galois averaging, degree-scaling
//! laws, multiplicity-one isotypic decomposition, the sign-vector automorphism
//! group) is machine-checked at a configurable tolerance and collected into
//! reports.
//!
//! Dimensions of `V_K` are reported as the conjectural vanishing order of the
//! Dedekind zeta function `zeta_K` at `s = 1/2`; no analytic computation is
//! attempted or implied.

pub mod bundle;
pub mod error;
pub mod functor;
pub mod group;
pub mod linalg;
pub mod report;
pub mod repr;
pub mod rootdata;
pub mod seeded;
pub mod symplectic;
#[cfg(test)]
pub(crate) mod testsupport;
pub mod verify;

pub use error::{Error, Result};

/// Default numerical tolerance for all residual checks.
///
/// Bundled matrix entries are exact algebraic numbers rendered to full f64
/// precision, so residuals of the checked identities sit near machine epsilon;
/// 1e-9 leaves six orders of headroom.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Relative singular-value threshold for integer rank decisions.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Relative singular-value ratio below which a restricted form counts as
/// degenerate.
pub const NONDEGENERACY_RATIO: f64 = 1e-6;

/// Number of seeded probe vectors used for positivity and pairing checks.
pub const PROBE_VECTORS: usize = 100;
