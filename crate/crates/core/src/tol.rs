//! Numerical contract constants.
//!
//! Every tolerance the engine promises lives here so tests can assert against
//! the same values the implementation uses.

/// Two entropy values within this of each other are "equal" (winner ties,
/// verdict agreement across winners).
pub const TIE_TOL: f64 = 1e-9;

/// Accuracy demanded of a reported maximum-entropy value.
pub const VALUE_TOL: f64 = 1e-9;

/// Maximum constraint violation allowed at a returned maximiser.
pub const FEAS_TOL: f64 = 1e-10;

/// Optimality certificate: the objective gradient projected onto the feasible
/// directions of the active constraints must have norm at most this.
pub const CERT_TOL: f64 = 1e-7;

/// The tolerance-grid extrapolation must land within this of the τ = 0
/// closure value for the limit to count as well behaved.
pub const AGREEMENT_TOL: f64 = 1e-6;

/// A query proportion within this of a constraint boundary is resolved as
/// satisfied (closed semantics) and noted in the diagnostics.
pub const QUERY_BOUNDARY_TOL: f64 = 1e-9;

/// Hard cap on canonical-form disjuncts; DNF expansion is eager and refuses
/// to grow past this.
pub const MAX_DISJUNCTS: usize = 4096;
