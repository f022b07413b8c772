//! Canonical forms: what a KB says about worlds, split into finitely many
//! shapes whose asymptotics are linear-algebra problems.
//!
//! A size-N world is classified by three things a rank-R formula can see:
//!
//! 1. an [`AtomicDescription`] — which constants coincide and which atom each
//!    one carries;
//! 2. how many *unnamed* elements each atom has, truncated at R: exactly
//!    0, 1, …, R−1, or "at least R" ([`GenericCount`]);
//! 3. the truth value of each proportion comparison.
//!
//! Worlds in the same class agree on the KB, so the KB is equivalent (for
//! large N) to a disjunction of classes. Each surviving class becomes a
//! [`Disjunct`]: its proportion literals turn into linear constraints on the
//! vector u of atom proportions — `#φ/N` tends to the sum of `u_a` over the
//! atoms whose members satisfy φ, constants contributing nothing in the limit
//! — and every atom with a pinned finite count gets `u_a = 0`. Classes whose
//! atoms are all pinned describe worlds of bounded size and are dropped.
//!
//! Negated `~(i)` comparisons are not convex: they split into a strict low
//! branch (`< α−τ_i`) and a strict high branch (`> α+τ_i`).

use crate::syntax::{quantifier_rank, Comparator, Formula, PropCompare};
use crate::tol::MAX_DISJUNCTS;
use crate::vocab::{Atom, Vocabulary};
use crate::worlds::{
    eval_summary, eval_with_class, eval_with_generic, partitions, placements, Tolerances,
    WorldSummary,
};
use num::{BigRational, One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// How many (description, count-pattern, truth-assignment) classes we are
/// willing to *visit*; caps the search space before anything is enumerated.
const VISIT_BUDGET: u128 = 4_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("knowledge base expands to more than {} disjuncts", MAX_DISJUNCTS)]
    TooManyDisjuncts,
    #[error("search space of {0} world classes is out of reach (fewer predicates, constants or quantifiers needed)")]
    SearchSpace(u128),
    #[error("query needs {0} constant placements, which is out of reach (fewer query-only constants needed)")]
    Refinements(u128),
}

/// Equality pattern and atom placement of the constants occurring in the KB.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicDescription {
    /// The constants described, in sorted order.
    pub constants: Vec<String>,
    /// Equality class of each constant, numbered by first appearance.
    pub class_of: Vec<usize>,
    pub class_count: usize,
    /// Atom carried by each class.
    pub class_atom: Vec<usize>,
}

impl AtomicDescription {
    /// A summary with `caps[a]` unnamed elements per atom on top of the named
    /// ones — a stand-in world for deciding formulas under this description.
    /// Constants outside `self.constants` map to a poisoned class index so
    /// that accidentally reading them fails loudly.
    pub(crate) fn pseudo_summary(&self, vocab: &Vocabulary, caps: &[u64]) -> WorldSummary {
        let mut counts = caps.to_vec();
        for &a in &self.class_atom {
            counts[a] += 1;
        }
        let n = counts.iter().sum();
        let mut class_of = vec![usize::MAX; vocab.constants().len()];
        for (i, name) in self.constants.iter().enumerate() {
            class_of[vocab.const_index(name).expect("undeclared constant")] = self.class_of[i];
        }
        WorldSummary {
            n,
            counts,
            class_of,
            class_count: self.class_count,
            placement: self.class_atom.clone(),
            multiplicity: num::BigUint::one(),
        }
    }

    /// Does a concrete summary restrict to this description on our constants?
    pub fn matches(&self, s: &WorldSummary, vocab: &Vocabulary) -> bool {
        let mut renumber: Vec<Option<usize>> = vec![None; s.class_count];
        let mut next = 0usize;
        for (i, name) in self.constants.iter().enumerate() {
            let world_class = s.class_of[vocab.const_index(name).expect("undeclared constant")];
            let local = *renumber[world_class].get_or_insert_with(|| {
                let c = next;
                next += 1;
                c
            });
            if local != self.class_of[i] {
                return false;
            }
            if s.placement[world_class] != self.class_atom[self.class_of[i]] {
                return false;
            }
        }
        next == self.class_count
    }
}

/// Unnamed-element count of one atom, truncated at the quantifier rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenericCount {
    /// Rank 0: the KB cannot see counts at all.
    Unconstrained,
    Exactly(u32),
    AtLeast(u32),
}

impl GenericCount {
    pub fn admits(&self, cap: u64) -> bool {
        match *self {
            GenericCount::Unconstrained => true,
            GenericCount::Exactly(j) => cap == u64::from(j),
            GenericCount::AtLeast(r) => cap >= u64::from(r),
        }
    }

    fn cap(&self) -> u64 {
        match *self {
            GenericCount::Unconstrained => 0,
            GenericCount::Exactly(j) => u64::from(j),
            GenericCount::AtLeast(r) => u64::from(r),
        }
    }
}

/// Truth value assigned to one proportion comparison, with negated `~` split
/// into its two strict sides.
#[derive(Debug, Clone, PartialEq)]
pub enum PropLit {
    Pos(PropCompare),
    /// strictly below α − τ_i
    NegLow(PropCompare),
    /// strictly above α + τ_i
    NegHigh(PropCompare),
}

/// Relation of a [`LinearConstraint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// A scalar of the form q0 + Σ_i q_i·τ_i over the tolerance values.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineTau {
    pub q0: BigRational,
    pub terms: BTreeMap<u32, BigRational>,
}

impl AffineTau {
    pub fn constant(q0: BigRational) -> Self {
        AffineTau {
            q0,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    fn shifted(q0: BigRational, index: u32, sign: i32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(index, BigRational::from_integer(sign.into()));
        AffineTau { q0, terms }
    }

    pub fn eval(&self, tol: &Tolerances) -> BigRational {
        let mut v = self.q0.clone();
        for (&i, q) in &self.terms {
            v += q * tol.get(i);
        }
        v
    }
}

/// One face of a disjunct's constraint region:
///
/// ```text
/// Σ_a lhs[a]·u_a  REL  bound(τ) · Σ_a den[a]·u_a
/// ```
///
/// with `den` all ones when the source proportion is unconditional. `strict`
/// marks the open branches coming from negated comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub lhs: Vec<BigRational>,
    pub relation: Relation,
    pub bound: AffineTau,
    pub den: Vec<BigRational>,
    pub strict: bool,
    pub source: String,
}

/// Conjunction of linear constraints over the simplex of atom proportions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRegion {
    pub k: usize,
    pub constraints: Vec<LinearConstraint>,
}

/// One world class the KB admits at large N.
#[derive(Debug, Clone, PartialEq)]
pub struct Disjunct {
    pub desc: AtomicDescription,
    pub counts_pattern: Vec<GenericCount>,
    pub prop_literals: Vec<PropLit>,
    pub region: ConstraintRegion,
    /// Atoms whose proportion is pinned to zero (finite count).
    pub forced_empty: u64,
    /// Atoms guaranteed at least one unnamed element even when their
    /// proportion vanishes.
    pub forced_nonempty: u64,
    pub index: usize,
}

impl Disjunct {
    /// Unnamed-element counts of the stand-in world this disjunct was
    /// decided on.
    pub fn caps(&self) -> Vec<u64> {
        self.counts_pattern.iter().map(GenericCount::cap).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub k: usize,
    pub rank: u32,
    pub kb_constants: Vec<String>,
    pub props: Vec<PropCompare>,
    pub disjuncts: Vec<Disjunct>,
}

/// Distinct proportion comparisons, in first-occurrence order.
pub(crate) fn collect_props(f: &Formula, out: &mut Vec<PropCompare>) {
    match f {
        Formula::Prop(pc) | Formula::NegProp(pc) => {
            if !out.contains(pc) {
                out.push(pc.clone());
            }
        }
        Formula::Not(g) | Formula::ForAll(_, g) | Formula::Exists(_, g) => collect_props(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_props(a, out);
            collect_props(b, out);
        }
        Formula::True | Formula::False | Formula::Pred(..) | Formula::Eq(..) => {}
    }
}

/// Replace each proportion by the truth value `sigma` assigns it.
pub(crate) fn subst_props(f: &Formula, props: &[PropCompare], sigma: u64) -> Formula {
    let truth = |pc: &PropCompare| {
        let i = props.iter().position(|p| p == pc).expect("collected");
        sigma >> i & 1 == 1
    };
    match f {
        Formula::Prop(pc) => {
            if truth(pc) {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::NegProp(pc) => {
            if truth(pc) {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::Not(g) => Formula::not(subst_props(g, props, sigma)),
        Formula::And(a, b) => {
            Formula::and(subst_props(a, props, sigma), subst_props(b, props, sigma))
        }
        Formula::Or(a, b) => {
            Formula::or(subst_props(a, props, sigma), subst_props(b, props, sigma))
        }
        Formula::Implies(a, b) => {
            Formula::implies(subst_props(a, props, sigma), subst_props(b, props, sigma))
        }
        Formula::ForAll(v, g) => Formula::forall(*v, subst_props(g, props, sigma)),
        Formula::Exists(v, g) => Formula::exists(*v, subst_props(g, props, sigma)),
        Formula::True | Formula::False | Formula::Pred(..) | Formula::Eq(..) => f.clone(),
    }
}

/// Atoms whose unnamed members satisfy `body(var)`, as a bitmask, under a
/// description with `caps[a]` unnamed elements per atom; atoms with no
/// unnamed element are left out. Also reports the named classes whose truth
/// deviates from their atom's — finitely many elements, invisible to the
/// limit proportions, but worth surfacing.
pub fn formula_to_atom_set(
    body: &Formula,
    var: char,
    desc: &AtomicDescription,
    caps: &[u64],
    vocab: &Vocabulary,
) -> (u64, Vec<(usize, bool)>) {
    debug_assert!(vocab.atom_count() <= 64);
    let ps = desc.pseudo_summary(vocab, caps);
    let tol = Tolerances::zero();
    let mut mask = 0u64;
    for (a, &cap) in caps.iter().enumerate() {
        if cap >= 1 && eval_with_generic(body, var, a, &ps, vocab, &tol) {
            mask |= 1 << a;
        }
    }
    let mut exceptions = Vec::new();
    for class in 0..desc.class_count {
        let named = eval_with_class(body, var, class, &ps, vocab, &tol);
        let generic = mask >> desc.class_atom[class] & 1 == 1;
        if named != generic {
            exceptions.push((class, named));
        }
    }
    (mask, exceptions)
}

fn indicator(mask: u64, k: usize) -> Vec<BigRational> {
    (0..k)
        .map(|a| {
            if mask >> a & 1 == 1 {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// The numerator indicator and denominator indicator of a proportion under a
/// (description, caps) context.
pub(crate) fn proportion_masks(
    pc: &PropCompare,
    desc: &AtomicDescription,
    caps: &[u64],
    vocab: &Vocabulary,
) -> (u64, Vec<BigRational>) {
    let k = vocab.atom_count();
    let (num_mask, _) = formula_to_atom_set(&pc.numerator, pc.var, desc, caps, vocab);
    match &pc.denominator {
        Some(d) => {
            let (den_mask, _) = formula_to_atom_set(d, pc.var, desc, caps, vocab);
            (num_mask & den_mask, indicator(den_mask, k))
        }
        None => (num_mask, vec![BigRational::one(); k]),
    }
}

/// Linear constraints of one proportion literal.
fn literal_constraints(
    lit: &PropLit,
    num_mask: u64,
    den: &[BigRational],
    k: usize,
) -> Vec<LinearConstraint> {
    let build = |relation, bound, strict, side: &str, pc: &PropCompare| LinearConstraint {
        lhs: indicator(num_mask, k),
        relation,
        bound,
        den: den.to_vec(),
        strict,
        source: format!("{} ({side})", Formula::Prop(pc.clone())),
    };
    match lit {
        PropLit::Pos(pc) => match pc.cmp {
            Comparator::ApproxEq => vec![
                build(
                    Relation::Ge,
                    AffineTau::shifted(pc.coeff.clone(), pc.tol_index, -1),
                    false,
                    "lower",
                    pc,
                ),
                build(
                    Relation::Le,
                    AffineTau::shifted(pc.coeff.clone(), pc.tol_index, 1),
                    false,
                    "upper",
                    pc,
                ),
            ],
            Comparator::ApproxLe => vec![build(
                Relation::Le,
                AffineTau::shifted(pc.coeff.clone(), pc.tol_index, 1),
                false,
                "upper",
                pc,
            )],
            Comparator::ApproxGe => vec![build(
                Relation::Ge,
                AffineTau::shifted(pc.coeff.clone(), pc.tol_index, -1),
                false,
                "lower",
                pc,
            )],
        },
        PropLit::NegLow(pc) => vec![build(
            Relation::Le,
            AffineTau::shifted(pc.coeff.clone(), pc.tol_index, -1),
            true,
            "negated, low side",
            pc,
        )],
        PropLit::NegHigh(pc) => vec![build(
            Relation::Ge,
            AffineTau::shifted(pc.coeff.clone(), pc.tol_index, 1),
            true,
            "negated, high side",
            pc,
        )],
    }
}

/// The constraint pinning one atom's proportion to zero.
fn pinned_empty(a: usize, k: usize, vocab: &Vocabulary) -> LinearConstraint {
    let mut lhs = vec![BigRational::zero(); k];
    lhs[a] = BigRational::one();
    LinearConstraint {
        lhs,
        relation: Relation::Eq,
        bound: AffineTau::zero(),
        den: vec![BigRational::one(); k],
        strict: false,
        source: format!("atom {} has finitely many elements", Atom(a).label(vocab)),
    }
}

/// The negative sides a falsified comparison can take.
fn neg_sides(pc: &PropCompare) -> &'static [bool] {
    // false = low, true = high
    match pc.cmp {
        Comparator::ApproxEq => &[false, true],
        Comparator::ApproxLe => &[true],
        Comparator::ApproxGe => &[false],
    }
}

/// Expand a validated KB into its canonical disjuncts.
pub fn canonicalize(kb: &Formula, vocab: &Vocabulary) -> Result<CanonicalForm, CanonicalError> {
    let k = vocab.atom_count();
    let mut props = Vec::new();
    collect_props(kb, &mut props);
    let rank = quantifier_rank(kb);
    let kb_constants: Vec<String> = kb.constants().into_iter().collect();

    // Size the search space before walking it.
    if props.len() > 16 {
        return Err(CanonicalError::SearchSpace(u128::MAX));
    }
    let n_sigma = 1u128 << props.len();
    let n_patterns = if rank == 0 {
        1u128
    } else {
        u128::from(rank + 1)
            .checked_pow(k as u32)
            .ok_or(CanonicalError::SearchSpace(u128::MAX))?
    };
    let mut n_desc = 0u128;
    let class_partitions = partitions(kb_constants.len());
    for p in &class_partitions {
        let classes = p.iter().copied().max().map_or(0, |c| c + 1);
        let placements = (k as u128)
            .checked_pow(classes as u32)
            .ok_or(CanonicalError::SearchSpace(u128::MAX))?;
        n_desc = n_desc
            .checked_add(placements)
            .ok_or(CanonicalError::SearchSpace(u128::MAX))?;
    }
    let visits = n_desc
        .checked_mul(n_patterns)
        .and_then(|v| v.checked_mul(n_sigma))
        .ok_or(CanonicalError::SearchSpace(u128::MAX))?;
    if visits > VISIT_BUDGET {
        return Err(CanonicalError::SearchSpace(visits));
    }

    let mut descs = Vec::new();
    for class_of in class_partitions {
        let class_count = class_of.iter().copied().max().map_or(0, |c| c + 1);
        for class_atom in placements(class_count, k) {
            descs.push(AtomicDescription {
                constants: kb_constants.clone(),
                class_of: class_of.clone(),
                class_count,
                class_atom,
            });
        }
    }

    let residues: Vec<Formula> = (0..n_sigma as u64)
        .map(|sigma| subst_props(kb, &props, sigma))
        .collect();

    let tol0 = Tolerances::zero();
    let mut disjuncts: Vec<Disjunct> = Vec::new();
    for desc in descs {
        // walk count patterns in mixed radix: digit r means AtLeast(rank)
        let mut digits = vec![0u32; k];
        'patterns: loop {
            let pattern: Vec<GenericCount> = if rank == 0 {
                vec![GenericCount::Unconstrained; k]
            } else {
                digits
                    .iter()
                    .map(|&d| {
                        if d == rank {
                            GenericCount::AtLeast(rank)
                        } else {
                            GenericCount::Exactly(d)
                        }
                    })
                    .collect()
            };
            let unbounded = rank == 0
                || pattern
                    .iter()
                    .any(|g| matches!(g, GenericCount::AtLeast(_)));
            if unbounded {
                let caps: Vec<u64> = pattern.iter().map(GenericCount::cap).collect();
                let ps = desc.pseudo_summary(vocab, &caps);
                let masks: Vec<(u64, Vec<BigRational>)> = props
                    .iter()
                    .map(|pc| proportion_masks(pc, &desc, &caps, vocab))
                    .collect();
                for sigma in 0..n_sigma as u64 {
                    if !eval_summary(&residues[sigma as usize], &ps, vocab, &tol0) {
                        continue;
                    }
                    // falsified comparisons each pick a side
                    let falsified: Vec<usize> =
                        (0..props.len()).filter(|&i| sigma >> i & 1 == 0).collect();
                    let mut side_choice = vec![0usize; falsified.len()];
                    loop {
                        let mut literals = Vec::with_capacity(props.len());
                        for (i, pc) in props.iter().enumerate() {
                            if sigma >> i & 1 == 1 {
                                literals.push(PropLit::Pos(pc.clone()));
                            } else {
                                let pos = falsified.iter().position(|&j| j == i).unwrap();
                                let high = neg_sides(pc)[side_choice[pos]];
                                literals.push(if high {
                                    PropLit::NegHigh(pc.clone())
                                } else {
                                    PropLit::NegLow(pc.clone())
                                });
                            }
                        }
                        let mut constraints = Vec::new();
                        for (lit, (num_mask, den)) in literals.iter().zip(&masks) {
                            constraints.extend(literal_constraints(lit, *num_mask, den, k));
                        }
                        let mut forced_empty = 0u64;
                        let mut forced_nonempty = 0u64;
                        for (a, g) in pattern.iter().enumerate() {
                            match *g {
                                GenericCount::Exactly(j) => {
                                    forced_empty |= 1 << a;
                                    constraints.push(pinned_empty(a, k, vocab));
                                    if j >= 1 {
                                        forced_nonempty |= 1 << a;
                                    }
                                }
                                GenericCount::AtLeast(r) if r >= 1 => {
                                    forced_nonempty |= 1 << a;
                                }
                                _ => {}
                            }
                        }
                        if disjuncts.len() == MAX_DISJUNCTS {
                            return Err(CanonicalError::TooManyDisjuncts);
                        }
                        disjuncts.push(Disjunct {
                            desc: desc.clone(),
                            counts_pattern: pattern.clone(),
                            prop_literals: literals,
                            region: ConstraintRegion { k, constraints },
                            forced_empty,
                            forced_nonempty,
                            index: disjuncts.len(),
                        });
                        // advance the side choices
                        let mut i = falsified.len();
                        loop {
                            if i == 0 {
                                break;
                            }
                            i -= 1;
                            side_choice[i] += 1;
                            if side_choice[i] < neg_sides(&props[falsified[i]]).len() {
                                break;
                            }
                            side_choice[i] = 0;
                        }
                        if side_choice.iter().all(|&c| c == 0) {
                            break;
                        }
                    }
                }
            }
            if rank == 0 {
                break;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    break 'patterns;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] <= rank {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    Ok(CanonicalForm {
        k,
        rank,
        kb_constants,
        props,
        disjuncts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn fly() -> (Vocabulary, Formula) {
        let v = Vocabulary::new(["Bird", "Fly"], ["tweety"]).unwrap();
        let f = parse("[Fly(x) || Bird(x)]_x ~(1) 9/10 and Bird(tweety)", &v).unwrap();
        (v, f)
    }

    #[test]
    fn fly_expands_to_the_expected_classes() {
        let (v, f) = fly();
        let cf = canonicalize(&f, &v).unwrap();
        assert_eq!(cf.rank, 1);
        assert_eq!(cf.props.len(), 1);
        // 2 placements of tweety in a Bird atom × (2^4 − 1) unbounded count
        // patterns, the falsified branch dying on `false and Bird(tweety)`
        assert_eq!(cf.disjuncts.len(), 30);
        for d in &cf.disjuncts {
            assert!(matches!(d.prop_literals[0], PropLit::Pos(_)));
            assert!(
                Atom(d.desc.class_atom[0]).satisfies(0),
                "tweety must be a Bird"
            );
        }
    }

    #[test]
    fn proportion_turns_into_a_two_sided_band() {
        let (v, f) = fly();
        let cf = canonicalize(&f, &v).unwrap();
        // the fully unbounded pattern carries only the band
        let d = cf
            .disjuncts
            .iter()
            .find(|d| {
                d.counts_pattern
                    .iter()
                    .all(|g| *g == GenericCount::AtLeast(1))
            })
            .unwrap();
        assert_eq!(d.forced_empty, 0);
        assert_eq!(d.forced_nonempty, 0b1111);
        let cs = &d.region.constraints;
        assert_eq!(cs.len(), 2);
        // atoms: 0 = !B!F, 1 = B!F, 2 = !BF, 3 = BF; numerator Fly∧Bird = {3},
        // denominator Bird = {1, 3}
        let num = indicator(0b1000, 4);
        let den = indicator(0b1010, 4);
        let nine_tenths = BigRational::new(9.into(), 10.into());
        assert_eq!(cs[0].relation, Relation::Ge);
        assert_eq!(cs[0].lhs, num);
        assert_eq!(cs[0].den, den);
        assert_eq!(cs[0].bound.q0, nine_tenths);
        assert_eq!(
            cs[0].bound.terms[&1],
            BigRational::from_integer((-1).into())
        );
        assert!(!cs[0].strict);
        assert_eq!(cs[1].relation, Relation::Le);
        assert_eq!(cs[1].bound.terms[&1], BigRational::one());
    }

    #[test]
    fn negated_equality_splits_into_strict_sides() {
        let v = Vocabulary::new(["P"], [] as [&str; 0]).unwrap();
        let f = parse("not [P(x)]_x ~(1) 1/2", &v).unwrap();
        let cf = canonicalize(&f, &v).unwrap();
        // one unbounded pattern… per side; {P} has K = 2, rank = 1 → 3
        // unbounded patterns, each splitting low/high
        assert_eq!(cf.disjuncts.len(), 6);
        assert!(cf
            .disjuncts
            .iter()
            .any(|d| matches!(d.prop_literals[0], PropLit::NegLow(_))));
        assert!(cf
            .disjuncts
            .iter()
            .any(|d| matches!(d.prop_literals[0], PropLit::NegHigh(_))));
        for d in &cf.disjuncts {
            let c = &d.region.constraints[0];
            assert!(c.strict);
            assert_eq!(
                c.den,
                vec![BigRational::one(); 2],
                "unconditional denominator"
            );
        }
    }

    #[test]
    fn rank_zero_kb_leaves_counts_unconstrained() {
        let v = Vocabulary::new(["Bird", "Fly"], ["tweety"]).unwrap();
        let f = parse("Bird(tweety)", &v).unwrap();
        let cf = canonicalize(&f, &v).unwrap();
        assert_eq!(cf.rank, 0);
        assert_eq!(cf.disjuncts.len(), 2);
        for d in &cf.disjuncts {
            assert!(d
                .counts_pattern
                .iter()
                .all(|g| *g == GenericCount::Unconstrained));
            assert!(d.region.constraints.is_empty());
            assert_eq!(d.forced_empty, 0);
        }
    }

    #[test]
    fn universal_statements_pin_atoms_empty() {
        let v = Vocabulary::new(["Penguin", "Bird"], [] as [&str; 0]).unwrap();
        let f = parse("forall x. Penguin(x) -> Bird(x)", &v).unwrap();
        let cf = canonicalize(&f, &v).unwrap();
        // atom 1 = Penguin&!Bird must be Exactly(0) in every disjunct
        assert!(!cf.disjuncts.is_empty());
        for d in &cf.disjuncts {
            assert_eq!(d.counts_pattern[1], GenericCount::Exactly(0));
            assert!(d.forced_empty & 0b10 != 0);
            assert!(d
                .region
                .constraints
                .iter()
                .any(|c| c.relation == Relation::Eq && c.lhs[1] == BigRational::one()));
        }
    }

    #[test]
    fn oversized_vocabularies_are_refused_up_front() {
        let v = Vocabulary::new(["A", "B", "C", "D", "E", "F", "G", "H"], [] as [&str; 0]).unwrap();
        let f = parse("forall x. A(x) -> B(x)", &v).unwrap();
        assert!(matches!(
            canonicalize(&f, &v),
            Err(CanonicalError::SearchSpace(_))
        ));
    }

    #[test]
    fn atom_sets_see_quantified_bodies() {
        let v = Vocabulary::new(["P"], ["c"]).unwrap();
        let desc = AtomicDescription {
            constants: vec!["c".into()],
            class_of: vec![0],
            class_count: 1,
            class_atom: vec![1], // c is a P
        };
        // body: something else is a P too
        let f = parse("[exists y. (not y = x) and P(y)]_x ~(1) 1", &v).unwrap();
        let Formula::Prop(pc) = f else { panic!() };
        // with 2 unnamed per atom, everybody sees c
        let (mask, exceptions) = formula_to_atom_set(&pc.numerator, 'x', &desc, &[2, 2], &v);
        assert_eq!(mask, 0b11);
        assert!(exceptions.is_empty());
        // with no unnamed P elements, a generic non-P still sees c
        let (mask, exceptions) = formula_to_atom_set(&pc.numerator, 'x', &desc, &[2, 0], &v);
        assert_eq!(mask, 0b01);
        assert!(exceptions.is_empty());

        // `x = c` holds for no unnamed element but does for c itself
        let f = parse("[x = c]_x ~(1) 1", &v).unwrap();
        let Formula::Prop(pc) = f else { panic!() };
        let (mask, exceptions) = formula_to_atom_set(&pc.numerator, 'x', &desc, &[2, 2], &v);
        assert_eq!(mask, 0);
        assert_eq!(exceptions, vec![(0, true)]);
    }
}
