//! Asymptotic inference: turning canonical forms into degrees of belief.
//!
//! The degree of belief in a query is decided by the entropy-maximal
//! disjuncts of the knowledge base's canonical form. Worlds concentrate on
//! the disjuncts whose constraint region attains the globally maximal
//! entropy; within one maximizing proportion vector the named constants
//! distribute over the atoms proportionally, and constants mentioned only
//! by the query behave like fresh proportion-distributed elements. First-
//! order structure at a maximizer is settled by a zero-one law: a sentence
//! holds in almost all admitted worlds or in almost none, and which of the
//! two can be read off one canonical finite structure.
//!
//! Distinct maximizers are a genuine obstruction: the limit frequency need
//! not exist, and no average across them is fabricated here. The verdict
//! in that case is the interval spanned by the per-maximizer values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num::{BigRational, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::canonical::{
    canonicalize, collect_props, proportion_masks, subst_props, AtomicDescription, CanonicalError,
    CanonicalForm, ConstraintRegion, Disjunct, GenericCount,
};
use crate::maxent::{default_tau_grid, limit_maxent, LimitMaxEnt};
use crate::syntax::{quantifier_rank, Comparator, Formula, PropCompare};
use crate::tol::{QUERY_BOUNDARY_TOL, TIE_TOL};
use crate::vocab::Vocabulary;
use crate::worlds::{eval_summary, Tolerances};

/// Why no degree of belief could be assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UndefinedReason {
    /// The knowledge base admits no worlds at large N.
    DegenerateKb,
    /// An entropy-maximal disjunct's τ→0 limit could not be certified.
    IllConditionedLimit,
}

/// The verdict of [`compute_pr_inf`].
#[derive(Debug, Clone, PartialEq)]
pub enum BeliefKind {
    /// The limiting degree of belief exists and equals this value.
    Point(f64),
    /// Zero-one law verdict for a constant-free first-order query over a
    /// knowledge base with no statistical content.
    ZeroOne(bool),
    /// Entropy-maximal points disagree; the limit need not exist. The
    /// interval spans the per-maximizer values.
    TieInterval(f64, f64),
    Undefined(UndefinedReason),
}

/// One entropy-maximal disjunct.
#[derive(Debug, Clone)]
pub struct Winner {
    /// Index into the canonical form's disjunct list.
    pub disjunct: usize,
    /// Limiting entropy of the disjunct's region.
    pub value: f64,
    /// Maximum-entropy point on the τ=0 closure.
    pub point: Vec<f64>,
    /// ω(D): the product over the description's constant classes of the
    /// point proportion at the class's atom — the asymptotic share of
    /// worlds in which the constants land as described.
    pub weight: f64,
}

/// All disjuncts achieving the maximal entropy, with the maximum itself.
#[derive(Debug, Clone)]
pub struct WinnerSet {
    pub hstar: f64,
    pub winners: Vec<Winner>,
}

/// Outcome of the per-disjunct entropy analysis.
#[derive(Debug, Clone)]
pub enum WinnersOutcome {
    Set(WinnerSet),
    /// No disjunct is feasible (or the canonical form is empty).
    Degenerate,
    /// A disjunct contends for the maximum but its limit is untrustworthy:
    /// failed τ-grid agreement or a maximizer on a strict boundary.
    IllConditioned {
        candidates: Vec<Winner>,
    },
}

/// How one group of winners (sharing a maximizer) evaluated the query.
#[derive(Debug, Clone)]
pub struct GroupDiag {
    /// The shared maximum-entropy point.
    pub point: Vec<f64>,
    /// Disjunct indices of the group members.
    pub disjuncts: Vec<usize>,
    /// ω(D) per member.
    pub weights: Vec<f64>,
    /// Query probability per member.
    pub probabilities: Vec<f64>,
    /// The group's contribution to the verdict (`lo == hi` unless the
    /// group carries zero weight and its members disagree).
    pub lo: f64,
    pub hi: f64,
}

/// A degree-of-belief verdict together with its full diagnostics.
#[derive(Debug, Clone)]
pub struct Belief {
    pub kind: BeliefKind,
    /// The global maximum entropy H*, when any disjunct was feasible.
    pub entropy: Option<f64>,
    pub winners: Vec<Winner>,
    pub groups: Vec<GroupDiag>,
    pub notes: Vec<String>,
}

impl Belief {
    fn undefined(reason: UndefinedReason, winners: Vec<Winner>, notes: Vec<String>) -> Self {
        let entropy = winners
            .iter()
            .map(|w| w.value)
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
        Belief {
            kind: BeliefKind::Undefined(reason),
            entropy,
            winners,
            groups: Vec::new(),
            notes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Compute01Error {
    #[error("the query contains proportion comparisons; the zero-one law covers first-order sentences only")]
    NotFirstOrder,
    #[error("constant `{0}` is described into an inactive atom")]
    NamedInInactiveAtom(String),
    #[error("the active atom set is empty")]
    NoActiveAtoms,
}

/// Asymptotic truth of a closed first-order sentence among worlds whose
/// positive-proportion atoms are exactly `active` and whose named elements
/// sit as `named` describes.
///
/// The sentence is decided on one canonical finite structure: per active
/// atom, `quantifier_rank(phi) + classes` unnamed elements (inactive atoms
/// get none) plus the named elements. Worlds of the admitted kind cannot be
/// distinguished from this structure by `phi`, so its truth here is the
/// almost-sure truth value.
pub fn compute01(
    phi: &Formula,
    active: u64,
    named: &AtomicDescription,
    vocab: &Vocabulary,
) -> Result<bool, Compute01Error> {
    if phi.has_proportions() {
        return Err(Compute01Error::NotFirstOrder);
    }
    let k = vocab.atom_count();
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    if active & full == 0 {
        return Err(Compute01Error::NoActiveAtoms);
    }
    for class in 0..named.class_count {
        if active >> named.class_atom[class] & 1 == 0 {
            let pos = named
                .class_of
                .iter()
                .position(|&c| c == class)
                .expect("class inhabited");
            return Err(Compute01Error::NamedInInactiveAtom(
                named.constants[pos].clone(),
            ));
        }
    }
    let m = quantifier_rank(phi) as u64 + named.class_count as u64;
    let caps: Vec<u64> = (0..k)
        .map(|a| if active >> a & 1 == 1 { m } else { 0 })
        .collect();
    Ok(eval_on_standin(phi, &caps, named, vocab))
}

/// Evaluate a first-order sentence on the stand-in world with `caps[a]`
/// unnamed elements per atom plus the named elements.
fn eval_on_standin(
    phi: &Formula,
    caps: &[u64],
    named: &AtomicDescription,
    vocab: &Vocabulary,
) -> bool {
    let ps = named.pseudo_summary(vocab, caps);
    eval_summary(phi, &ps, vocab, &Tolerances::zero())
}

/// The mathematical content of a region, independent of constraint
/// sources: disjuncts with equal keys share one solve, which keeps equal
/// regions bit-identical in every downstream comparison.
fn region_key(r: &ConstraintRegion) -> String {
    let mut s = String::new();
    let _ = write!(s, "{}|", r.k);
    for c in &r.constraints {
        for x in &c.lhs {
            let _ = write!(s, "{}/{},", x.numer(), x.denom());
        }
        let _ = write!(
            s,
            ";{:?};{}/{}",
            c.relation,
            c.bound.q0.numer(),
            c.bound.q0.denom()
        );
        for (i, q) in &c.bound.terms {
            let _ = write!(s, "+{}*{}/{}", i, q.numer(), q.denom());
        }
        let _ = write!(s, ";");
        for x in &c.den {
            let _ = write!(s, "{}/{},", x.numer(), x.denom());
        }
        let _ = write!(s, ";{}|", c.strict);
    }
    s
}

/// Entropy-maximal disjuncts of a canonical form, using the default grid.
pub fn winners(cf: &CanonicalForm) -> WinnersOutcome {
    winners_with_grid(cf, &default_tau_grid())
}

/// Entropy-maximal disjuncts of a canonical form.
///
/// Every region is put through [`limit_maxent`]; the winners are the
/// disjuncts whose limiting entropy reaches the global maximum H* within
/// 1e−9. A disjunct whose limit fails certification (no τ-grid agreement,
/// or a maximizer pinned on a strict boundary) poisons the outcome when it
/// contends for the maximum.
pub fn winners_with_grid(cf: &CanonicalForm, grid: &[BigRational]) -> WinnersOutcome {
    let keys: Vec<String> = cf.disjuncts.iter().map(|d| region_key(&d.region)).collect();
    let mut index_of: BTreeMap<&str, usize> = BTreeMap::new();
    let mut unique: Vec<&ConstraintRegion> = Vec::new();
    for (d, key) in cf.disjuncts.iter().zip(&keys) {
        index_of.entry(key.as_str()).or_insert_with(|| {
            unique.push(&d.region);
            unique.len() - 1
        });
    }
    let solves: Vec<LimitMaxEnt> = unique.par_iter().map(|r| limit_maxent(r, grid)).collect();

    // candidate disjuncts: anything with a value that could contend
    struct Cand {
        disjunct: usize,
        value: f64,
        trusted: bool,
        solve: usize,
    }
    let mut cands: Vec<Cand> = Vec::new();
    for (i, key) in keys.iter().enumerate() {
        let si = index_of[key.as_str()];
        let lm = &solves[si];
        let closure_v = lm.closure.as_ref().map(|c| c.value);
        let trusted = lm.agreement && lm.closure.as_ref().is_some_and(|c| !c.boundary_flag);
        let value = if trusted {
            lm.value.expect("agreement implies a value")
        } else {
            match (closure_v, lm.extrapolated) {
                (Some(c), Some(x)) => c.max(x),
                (Some(c), None) => c,
                (None, Some(x)) => x,
                (None, None) => continue,
            }
        };
        cands.push(Cand {
            disjunct: i,
            value,
            trusted,
            solve: si,
        });
    }
    if cands.is_empty() {
        return WinnersOutcome::Degenerate;
    }
    let hstar = cands
        .iter()
        .map(|c| c.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let top: Vec<&Cand> = cands
        .iter()
        .filter(|c| c.value >= hstar - TIE_TOL)
        .collect();
    let build = |c: &Cand| {
        let point = solves[c.solve]
            .closure
            .as_ref()
            .map(|r| r.point.clone())
            .unwrap_or_default();
        let weight = omega(&cf.disjuncts[c.disjunct].desc, &point);
        Winner {
            disjunct: c.disjunct,
            value: c.value,
            point,
            weight,
        }
    };
    let winners: Vec<Winner> = top.iter().map(|c| build(c)).collect();
    if top.iter().any(|c| !c.trusted) {
        return WinnersOutcome::IllConditioned {
            candidates: winners,
        };
    }
    WinnersOutcome::Set(WinnerSet { hstar, winners })
}

/// ω(D): asymptotic share of worlds placing the named constants as the
/// description does.
fn omega(desc: &AtomicDescription, point: &[f64]) -> f64 {
    if point.is_empty() {
        return 0.0;
    }
    desc.class_atom.iter().map(|&a| point[a]).product()
}

/// The degree of belief in `phi` given `kb`, with the default τ-grid.
pub fn compute_pr_inf(
    phi: &Formula,
    kb: &Formula,
    vocab: &Vocabulary,
) -> Result<Belief, CanonicalError> {
    compute_pr_inf_with(phi, kb, vocab, &default_tau_grid())
}

/// The degree of belief in `phi` given `kb`.
///
/// Canonicalizes the knowledge base, finds the entropy-maximal disjuncts,
/// groups them by maximum-entropy point, and evaluates the query per
/// group: constants named by the KB weight their group members by ω(D),
/// query-only constants range over the positive atoms with proportion
/// weights, proportion atoms evaluate at the maximizer with τ = 0, and the
/// first-order remainder is settled by the zero-one law. Groups that agree
/// within 1e−9 give a `Point`; disagreeing groups give the honest
/// `TieInterval`.
pub fn compute_pr_inf_with(
    phi: &Formula,
    kb: &Formula,
    vocab: &Vocabulary,
    grid: &[BigRational],
) -> Result<Belief, CanonicalError> {
    let cf = canonicalize(kb, vocab)?;
    let set = match winners_with_grid(&cf, grid) {
        WinnersOutcome::Degenerate => {
            return Ok(Belief::undefined(
                UndefinedReason::DegenerateKb,
                Vec::new(),
                vec!["the knowledge base admits no worlds at large N".into()],
            ));
        }
        WinnersOutcome::IllConditioned { candidates } => {
            return Ok(Belief::undefined(
                UndefinedReason::IllConditionedLimit,
                candidates,
                vec!["an entropy-maximal disjunct has an uncertified τ→0 limit".into()],
            ));
        }
        WinnersOutcome::Set(s) => s,
    };

    let mut groups: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, w) in set.winners.iter().enumerate() {
        let key: Vec<i64> = w.point.iter().map(|&x| (x * 1e9).round() as i64).collect();
        groups.entry(key).or_default().push(i);
    }

    let mut notes: Vec<String> = Vec::new();
    let mut diags: Vec<GroupDiag> = Vec::new();
    for members in groups.values() {
        let point = set.winners[members[0]].point.clone();
        let mut weights = Vec::with_capacity(members.len());
        let mut probs = Vec::with_capacity(members.len());
        for &wi in members {
            let w = &set.winners[wi];
            let p =
                disjunct_probability(phi, &cf.disjuncts[w.disjunct], &w.point, vocab, &mut notes)?;
            weights.push(w.weight);
            probs.push(p);
        }
        let total: f64 = weights.iter().sum();
        let (lo, hi) = if total > 1e-12 {
            let v = weights.iter().zip(&probs).map(|(w, p)| w * p).sum::<f64>() / total;
            (v, v)
        } else {
            let lo = probs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi - lo <= TIE_TOL {
                push_note(
                    &mut notes,
                    "a winner group carries zero weight; resolved by unanimity of its members"
                        .into(),
                );
                (lo, lo)
            } else {
                push_note(&mut notes, "a winner group carries zero weight and its members disagree; the verdict interval is widened".into());
                (lo, hi)
            }
        };
        diags.push(GroupDiag {
            point,
            disjuncts: members.iter().map(|&wi| set.winners[wi].disjunct).collect(),
            weights,
            probabilities: probs,
            lo,
            hi,
        });
    }

    let lo = diags.iter().map(|g| g.lo).fold(f64::INFINITY, f64::min);
    let hi = diags.iter().map(|g| g.hi).fold(f64::NEG_INFINITY, f64::max);
    let kind = if hi - lo <= TIE_TOL {
        let v = lo.clamp(0.0, 1.0);
        let zero_one_setting =
            !phi.has_proportions() && !kb.has_proportions() && phi.constants().is_empty();
        if zero_one_setting && v <= TIE_TOL {
            BeliefKind::ZeroOne(false)
        } else if zero_one_setting && v >= 1.0 - TIE_TOL {
            BeliefKind::ZeroOne(true)
        } else {
            BeliefKind::Point(v)
        }
    } else {
        BeliefKind::TieInterval(lo, hi)
    };
    Ok(Belief {
        kind,
        entropy: Some(set.hstar),
        winners: set.winners,
        groups: diags,
        notes,
    })
}

/// Random-worlds entailment: the belief in `phi` given `kb` is exactly 1.
/// An `Undefined` verdict entails nothing; the belief is returned alongside
/// as the diagnostic.
pub fn rw_entails(
    kb: &Formula,
    phi: &Formula,
    vocab: &Vocabulary,
) -> Result<(bool, Belief), CanonicalError> {
    let belief = compute_pr_inf(phi, kb, vocab)?;
    let yes = match &belief.kind {
        BeliefKind::Point(p) => (p - 1.0).abs() <= TIE_TOL,
        BeliefKind::ZeroOne(b) => *b,
        BeliefKind::TieInterval(..) | BeliefKind::Undefined(_) => false,
    };
    Ok((yes, belief))
}

fn push_note(notes: &mut Vec<String>, s: String) {
    if !notes.contains(&s) {
        notes.push(s);
    }
}

/// Probability of `phi` among the worlds of one winning disjunct at its
/// maximizer: enumerate the placements of query-only constants over the
/// positive atoms (all other placements — merges with existing classes or
/// vanishing atoms — carry weight 0), evaluate the query per placement,
/// and take the weighted fraction.
fn disjunct_probability(
    phi: &Formula,
    d: &Disjunct,
    point: &[f64],
    vocab: &Vocabulary,
    notes: &mut Vec<String>,
) -> Result<f64, CanonicalError> {
    let k = vocab.atom_count();
    let positive: Vec<bool> = point.iter().map(|&x| x > 1e-12).collect();
    let mut active: u64 = d.forced_nonempty;
    for (a, &pos) in positive.iter().enumerate() {
        if pos {
            active |= 1 << a;
        }
    }
    let known: BTreeSet<&String> = d.desc.constants.iter().collect();
    let extra: Vec<String> = phi
        .constants()
        .into_iter()
        .filter(|c| !known.contains(c))
        .collect();
    let landing: Vec<usize> = (0..k).filter(|&a| positive[a]).collect();
    let combos = (landing.len() as u128).checked_pow(extra.len() as u32);
    match combos {
        Some(n) if n <= 1 << 20 => {}
        _ => return Err(CanonicalError::Refinements(combos.unwrap_or(u128::MAX))),
    }

    let mut num = 0.0;
    let mut den = 0.0;
    let mut choice = vec![0usize; extra.len()];
    loop {
        let atoms: Vec<usize> = choice.iter().map(|&c| landing[c]).collect();
        let weight: f64 = atoms.iter().map(|&a| point[a]).product();
        let refined = refine(&d.desc, &extra, &atoms);
        let sat = eval_query(phi, d, &refined, point, active, vocab, notes);
        den += weight;
        if sat {
            num += weight;
        }
        // odometer over the placements
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(if den > 0.0 { num / den } else { 0.0 });
            }
            choice[pos] += 1;
            if choice[pos] < landing.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Extend a description with one fresh class per query-only constant.
fn refine(desc: &AtomicDescription, extra: &[String], atoms: &[usize]) -> AtomicDescription {
    let mut constants = desc.constants.clone();
    let mut class_of = desc.class_of.clone();
    let mut class_atom = desc.class_atom.clone();
    let mut class_count = desc.class_count;
    for (c, &a) in extra.iter().zip(atoms) {
        constants.push(c.clone());
        class_of.push(class_count);
        class_atom.push(a);
        class_count += 1;
    }
    AtomicDescription {
        constants,
        class_of,
        class_count,
        class_atom,
    }
}

/// Truth of the query under one refinement: proportion atoms evaluate at
/// the maximizer with τ = 0 (closed semantics on boundaries), and the
/// first-order remainder is decided on a stand-in world that keeps
/// finitely-pinned atoms at their exact counts.
fn eval_query(
    phi: &Formula,
    d: &Disjunct,
    refined: &AtomicDescription,
    point: &[f64],
    active: u64,
    vocab: &Vocabulary,
    notes: &mut Vec<String>,
) -> bool {
    let k = vocab.atom_count();
    let m = quantifier_rank(phi) as u64 + refined.class_count as u64 + 1;
    let caps: Vec<u64> = (0..k)
        .map(|a| match d.counts_pattern[a] {
            GenericCount::Exactly(j) => j as u64,
            _ if active >> a & 1 == 1 => m,
            _ => 0,
        })
        .collect();
    let mut props = Vec::new();
    collect_props(phi, &mut props);
    assert!(
        props.len() <= 63,
        "too many distinct proportions in one query"
    );
    let mut sigma = 0u64;
    for (i, pc) in props.iter().enumerate() {
        if prop_truth_at(pc, refined, &caps, point, vocab, notes) {
            sigma |= 1 << i;
        }
    }
    let fo = subst_props(phi, &props, sigma);
    eval_on_standin(&fo, &caps, refined, vocab)
}

/// Closed-semantics truth of one proportion comparison at a maximizer.
fn prop_truth_at(
    pc: &PropCompare,
    refined: &AtomicDescription,
    caps: &[u64],
    point: &[f64],
    vocab: &Vocabulary,
    notes: &mut Vec<String>,
) -> bool {
    let (num_mask, den) = proportion_masks(pc, refined, caps, vocab);
    let num_val: f64 = (0..vocab.atom_count())
        .filter(|a| num_mask >> a & 1 == 1)
        .map(|a| point[a])
        .sum();
    let den_val: f64 = den
        .iter()
        .zip(point)
        .map(|(c, &x)| c.to_f64().unwrap_or(f64::NAN) * x)
        .sum();
    let bound = pc.coeff.to_f64().unwrap_or(f64::NAN) * den_val;
    let on_boundary = (num_val - bound).abs() <= QUERY_BOUNDARY_TOL;
    let sat = match pc.cmp {
        Comparator::ApproxEq => on_boundary,
        Comparator::ApproxLe => num_val <= bound + QUERY_BOUNDARY_TOL,
        Comparator::ApproxGe => num_val >= bound - QUERY_BOUNDARY_TOL,
    };
    if on_boundary && sat {
        push_note(
            notes,
            format!(
                "query proportion `{}` sits exactly on its bound at the winning point; counted as satisfied (closed semantics)",
                Formula::Prop(pc.clone())
            ),
        );
    }
    sat
}
