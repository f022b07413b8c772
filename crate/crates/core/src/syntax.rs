//! Formulas of the unary statistical language.
//!
//! Besides the usual first-order stock (unary predicate applications, equality,
//! connectives, quantifiers) the language has one statistical construct, the
//! proportion comparison
//!
//! ```text
//! [φ || ψ]_x ~(i) α        (also <~ for "at most", >~ for "at least")
//! ```
//!
//! read: among the elements x satisfying ψ, the fraction also satisfying φ is
//! within the i-th tolerance τ_i of α. The denominator may be omitted, in which
//! case it defaults to `true` (a plain proportion of the whole domain). The
//! comparison is given cross-multiplied semantics, so an empty denominator set
//! satisfies every comparison vacuously:
//!
//! ```text
//! (α − τ_i)·#ψ  ≤  #(φ ∧ ψ)  ≤  (α + τ_i)·#ψ
//! ```
//!
//! Proportions bind exactly one variable and may not nest.

use crate::vocab::Vocabulary;
use num::BigRational;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// A term: a quantified variable or a declared constant.
///
/// Variables are single lowercase letters; whether a lowercase name is a
/// variable or a constant is decided by the enclosing binders (binding wins).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(char),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

/// Direction of a proportion comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    /// `~(i)`: within τ_i of the coefficient.
    ApproxEq,
    /// `<~(i)`: at most the coefficient, up to τ_i.
    ApproxLe,
    /// `>~(i)`: at least the coefficient, up to τ_i.
    ApproxGe,
}

impl Comparator {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::ApproxEq => "~",
            Comparator::ApproxLe => "<~",
            Comparator::ApproxGe => ">~",
        }
    }
}

/// A proportion comparison `[numerator || denominator]_var cmp(tol_index) coeff`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropCompare {
    pub numerator: Box<Formula>,
    /// `None` means the denominator is `true`: a proportion of the whole domain.
    pub denominator: Option<Box<Formula>>,
    pub var: char,
    pub cmp: Comparator,
    /// Index into the tolerance vector; 1-based and at least 1.
    pub tol_index: u32,
    /// Comparison coefficient, a rational in [0, 1].
    pub coeff: BigRational,
}

/// A formula. Connectives are binary; `a and b and c` parses left-associated.
///
/// `NegProp` is the negation-normal-form marker for a failed proportion
/// comparison: negations cannot be pushed inside a comparison, so NNF keeps
/// them as first-class literals. It prints as `not [...]`, which reparses as
/// `Not(Prop(..))` — semantically identical, structurally distinct, so NNF
/// output is not expected to round-trip through the printer.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    True,
    False,
    Pred(String, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(char, Box<Formula>),
    Exists(char, Box<Formula>),
    Prop(PropCompare),
    NegProp(PropCompare),
}

impl Formula {
    // Associated constructor, not a negation of `self`; keep it parallel to
    // `and`/`or` rather than implementing `std::ops::Not`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn forall(v: char, f: Formula) -> Formula {
        Formula::ForAll(v, Box::new(f))
    }
    pub fn exists(v: char, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    /// Variables occurring free, relative to all three binder kinds.
    pub fn free_vars(&self) -> BTreeSet<char> {
        fn go(f: &Formula, out: &mut BTreeSet<char>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Pred(_, t) => {
                    if let Term::Var(v) = t {
                        out.insert(*v);
                    }
                }
                Formula::Eq(a, b) => {
                    for t in [a, b] {
                        if let Term::Var(v) = t {
                            out.insert(*v);
                        }
                    }
                }
                Formula::Not(g) => go(g, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::ForAll(v, g) | Formula::Exists(v, g) => {
                    let mut inner = BTreeSet::new();
                    go(g, &mut inner);
                    inner.remove(v);
                    out.extend(inner);
                }
                Formula::Prop(pc) | Formula::NegProp(pc) => {
                    let mut inner = BTreeSet::new();
                    go(&pc.numerator, &mut inner);
                    if let Some(d) = &pc.denominator {
                        go(d, &mut inner);
                    }
                    inner.remove(&pc.var);
                    out.extend(inner);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Constant names occurring anywhere in the formula, in vocabulary order
    /// when a vocabulary is in play (callers sort as needed); here: sorted.
    pub fn constants(&self) -> BTreeSet<String> {
        fn term(t: &Term, out: &mut BTreeSet<String>) {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        }
        fn go(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Pred(_, t) => term(t, out),
                Formula::Eq(a, b) => {
                    term(a, out);
                    term(b, out);
                }
                Formula::Not(g) => go(g, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::ForAll(_, g) | Formula::Exists(_, g) => go(g, out),
                Formula::Prop(pc) | Formula::NegProp(pc) => {
                    go(&pc.numerator, out);
                    if let Some(d) = &pc.denominator {
                        go(d, out);
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Does any proportion comparison occur anywhere in the formula?
    pub fn has_proportions(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Pred(..) | Formula::Eq(..) => false,
            Formula::Not(g) => g.has_proportions(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_proportions() || b.has_proportions()
            }
            Formula::ForAll(_, g) | Formula::Exists(_, g) => g.has_proportions(),
            Formula::Prop(_) | Formula::NegProp(_) => true,
        }
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

/// Binding strength used by the printer. A child is parenthesised when its
/// level is below what its context requires.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::ForAll(..) | Formula::Exists(..) => 0,
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(..) | Formula::NegProp(..) => 4,
        _ => 5,
    }
}

fn print_at(f: &Formula, min_level: u8, out: &mut String) {
    let paren = level(f) < min_level;
    if paren {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Pred(p, t) => {
            out.push_str(p);
            out.push('(');
            out.push_str(&t.to_string());
            out.push(')');
        }
        Formula::Eq(a, b) => {
            out.push_str(&format!("{a} = {b}"));
        }
        Formula::Not(g) => {
            out.push_str("not ");
            print_at(g, 4, out);
        }
        Formula::And(a, b) => {
            print_at(a, 3, out);
            out.push_str(" and ");
            print_at(b, 4, out);
        }
        Formula::Or(a, b) => {
            print_at(a, 2, out);
            out.push_str(" or ");
            print_at(b, 3, out);
        }
        Formula::Implies(a, b) => {
            print_at(a, 2, out);
            out.push_str(" -> ");
            print_at(b, 1, out);
        }
        Formula::ForAll(v, g) => {
            out.push_str(&format!("forall {v}. "));
            print_at(g, 0, out);
        }
        Formula::Exists(v, g) => {
            out.push_str(&format!("exists {v}. "));
            print_at(g, 0, out);
        }
        Formula::Prop(pc) => print_prop(pc, out),
        Formula::NegProp(pc) => {
            out.push_str("not ");
            print_prop(pc, out);
        }
    }
    if paren {
        out.push(')');
    }
}

fn print_prop(pc: &PropCompare, out: &mut String) {
    out.push('[');
    print_at(&pc.numerator, 0, out);
    if let Some(d) = &pc.denominator {
        out.push_str(" || ");
        print_at(d, 0, out);
    }
    out.push_str(&format!(
        "]_{} {}({}) {}",
        pc.var,
        pc.cmp.symbol(),
        pc.tol_index,
        pc.coeff
    ));
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print_at(self, 0, &mut s);
        f.write_str(&s)
    }
}

// ---------------------------------------------------------------------------
// Quantifier rank
// ---------------------------------------------------------------------------

/// Maximum nesting depth of binders. A proportion counts as one binder level
/// for its bound variable, on top of whatever its bodies contain.
pub fn quantifier_rank(f: &Formula) -> u32 {
    match f {
        Formula::True | Formula::False | Formula::Pred(..) | Formula::Eq(..) => 0,
        Formula::Not(g) => quantifier_rank(g),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            quantifier_rank(a).max(quantifier_rank(b))
        }
        Formula::ForAll(_, g) | Formula::Exists(_, g) => 1 + quantifier_rank(g),
        Formula::Prop(pc) | Formula::NegProp(pc) => {
            let den = pc.denominator.as_deref().map_or(0, quantifier_rank);
            1 + quantifier_rank(&pc.numerator).max(den)
        }
    }
}

// ---------------------------------------------------------------------------
// Negation normal form
// ---------------------------------------------------------------------------

/// Push negations down to literals and eliminate `->`.
///
/// In the result, `Not` wraps only predicate or equality atoms, and failed
/// comparisons appear as `NegProp`. Quantifier rank is preserved. Proportion
/// bodies are separate evaluation contexts and are left untouched.
pub fn to_nnf(f: &Formula) -> Formula {
    fn go(f: &Formula, positive: bool) -> Formula {
        match (f, positive) {
            (Formula::True, true) | (Formula::False, false) => Formula::True,
            (Formula::True, false) | (Formula::False, true) => Formula::False,
            (Formula::Pred(..), true) | (Formula::Eq(..), true) => f.clone(),
            (Formula::Pred(..), false) | (Formula::Eq(..), false) => Formula::not(f.clone()),
            (Formula::Not(g), _) => go(g, !positive),
            (Formula::And(a, b), true) => Formula::and(go(a, true), go(b, true)),
            (Formula::And(a, b), false) => Formula::or(go(a, false), go(b, false)),
            (Formula::Or(a, b), true) => Formula::or(go(a, true), go(b, true)),
            (Formula::Or(a, b), false) => Formula::and(go(a, false), go(b, false)),
            (Formula::Implies(a, b), true) => Formula::or(go(a, false), go(b, true)),
            (Formula::Implies(a, b), false) => Formula::and(go(a, true), go(b, false)),
            (Formula::ForAll(v, g), true) => Formula::forall(*v, go(g, true)),
            (Formula::ForAll(v, g), false) => Formula::exists(*v, go(g, false)),
            (Formula::Exists(v, g), true) => Formula::exists(*v, go(g, true)),
            (Formula::Exists(v, g), false) => Formula::forall(*v, go(g, false)),
            (Formula::Prop(pc), true) | (Formula::NegProp(pc), false) => Formula::Prop(pc.clone()),
            (Formula::Prop(pc), false) | (Formula::NegProp(pc), true) => {
                Formula::NegProp(pc.clone())
            }
        }
    }
    go(f, true)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Violation {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("free variable `{0}` (formula must be closed)")]
    FreeVariable(char),
    #[error("proportion comparisons may not nest")]
    NestedProportion,
    #[error("proportion bound to `{binder}` mentions foreign variable `{foreign}`")]
    PropForeignVariable { binder: char, foreign: char },
    #[error("proportion binds `{0}` but its body never uses it")]
    PropUnusedVariable(char),
    #[error("comparison coefficient {0} is outside [0, 1]")]
    CoefficientOutOfRange(String),
    #[error("tolerance index must be at least 1")]
    ZeroToleranceIndex,
}

/// Check a formula against a vocabulary and the structural invariants:
/// closed, known symbols, no nested proportions, each proportion uses its own
/// bound variable and no other. Quantified bodies *inside* proportions are
/// legal here (finite semantics handles them); the asymptotic canonicaliser
/// imposes its own, stricter requirement.
pub fn validate(f: &Formula, vocab: &Vocabulary) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    for v in f.free_vars() {
        violations.push(Violation::FreeVariable(v));
    }
    fn term(t: &Term, vocab: &Vocabulary, out: &mut Vec<Violation>) {
        if let Term::Const(c) = t {
            if vocab.const_index(c).is_none() {
                out.push(Violation::UnknownConstant(c.clone()));
            }
        }
    }
    fn go(f: &Formula, vocab: &Vocabulary, in_prop: Option<char>, out: &mut Vec<Violation>) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Pred(p, t) => {
                if vocab.pred_index(p).is_none() {
                    out.push(Violation::UnknownPredicate(p.clone()));
                }
                term(t, vocab, out);
            }
            Formula::Eq(a, b) => {
                term(a, vocab, out);
                term(b, vocab, out);
            }
            Formula::Not(g) => go(g, vocab, in_prop, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                go(a, vocab, in_prop, out);
                go(b, vocab, in_prop, out);
            }
            Formula::ForAll(_, g) | Formula::Exists(_, g) => go(g, vocab, in_prop, out),
            Formula::Prop(pc) | Formula::NegProp(pc) => {
                if in_prop.is_some() {
                    out.push(Violation::NestedProportion);
                }
                if pc.tol_index == 0 {
                    out.push(Violation::ZeroToleranceIndex);
                }
                if pc.coeff < BigRational::from_integer(0.into())
                    || pc.coeff > BigRational::from_integer(1.into())
                {
                    out.push(Violation::CoefficientOutOfRange(pc.coeff.to_string()));
                }
                let mut body_free = pc.numerator.free_vars();
                if let Some(d) = &pc.denominator {
                    body_free.extend(d.free_vars());
                }
                if !body_free.contains(&pc.var) {
                    out.push(Violation::PropUnusedVariable(pc.var));
                }
                for v in body_free {
                    if v != pc.var {
                        out.push(Violation::PropForeignVariable {
                            binder: pc.var,
                            foreign: v,
                        });
                    }
                }
                go(&pc.numerator, vocab, Some(pc.var), out);
                if let Some(d) = &pc.denominator {
                    go(d, vocab, Some(pc.var), out);
                }
            }
        }
    }
    go(f, vocab, None, &mut violations);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
