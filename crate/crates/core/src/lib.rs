//! Degrees of belief from counting possible worlds.
//!
//! A knowledge base is a closed formula over unary predicates, constants and
//! approximate proportion comparisons such as `[Fly(x) || Bird(x)]_x ~(1) 9/10`.
//! The degree of belief in a query φ is the fraction of size-N models of the KB
//! that also satisfy φ, in the limit N → ∞ followed by tolerances → 0. Counting
//! is exact for finite N (worlds collapse into summaries by symmetry); the
//! asymptotic value is obtained by maximising entropy over the simplex of atom
//! proportions and reading the query off the maximising points.
//!
//! Module map:
//!
//! * [`vocab`] — vocabularies and predicate atoms.
//! * [`syntax`] — the formula AST, printing, validation, NNF, quantifier rank.
//! * [`parser`] — concrete syntax for formulas and KB files.
//! * [`worlds`] — exact finite-N world counting over summaries, plus a
//!   brute-force reference enumerator used to cross-check it.
//! * [`canonical`] — canonical forms: atomic descriptions × linear constraint
//!   regions over the atom simplex.
//! * [`maxent`] — entropy maximisation under linear constraints and the
//!   tolerance → 0 limit.
//! * [`infer`] — the asymptotic inference layer producing [`Belief`] verdicts.

pub mod canonical;
pub mod infer;
pub mod maxent;
pub mod parser;
mod simplex;
pub mod syntax;
pub mod tol;
pub mod vocab;
pub mod worlds;

pub use canonical::{
    canonicalize, AtomicDescription, CanonicalError, CanonicalForm, ConstraintRegion, Disjunct,
    GenericCount, LinearConstraint,
};
pub use infer::{
    compute01, compute_pr_inf, compute_pr_inf_with, rw_entails, winners, winners_with_grid, Belief,
    BeliefKind, Compute01Error, GroupDiag, UndefinedReason, Winner, WinnerSet, WinnersOutcome,
};
pub use maxent::{
    default_tau_grid, entropy, entropy_gradient, limit_maxent, maximize_entropy, LimitMaxEnt,
    MaxEntResult,
};
pub use parser::{parse, parse_kb_text, parse_rational};
pub use syntax::{quantifier_rank, to_nnf, validate, Comparator, Formula, PropCompare, Term};
pub use vocab::{Atom, Vocabulary};
pub use worlds::{
    convergence_table, count_worlds, enumerate_summaries, eval_summary, pr_finite, Tolerances,
    WorldSummary,
};
