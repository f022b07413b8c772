//! Exact model counting at finite domain size.
//!
//! A world over a domain of size N assigns one atom to every element and an
//! element to every constant. Closed formulas cannot tell two worlds apart
//! when they agree on (a) how many elements carry each atom, (b) which
//! constants denote the same element, and (c) which atom each such element
//! carries — so we enumerate *summaries* of worlds and weight each by the
//! number of concrete worlds it stands for. That multiplicity is
//!
//! ```text
//! N! / Π_A counts[A]!  ·  Π_A counts[A]·(counts[A]-1)···(counts[A]-m_A+1)
//! ```
//!
//! where `m_A` is the number of constant classes placed in atom A. Summing
//! multiplicities over all summaries recovers K^N · N^(#constants).
//!
//! Truth on a summary is decided without touching concrete elements: a
//! quantifier only needs to try each constant class, each element already
//! picked by an enclosing quantifier, and one fresh unnamed element per atom
//! that still has spare capacity — any two unpicked unnamed elements in the
//! same atom are exchangeable by an automorphism of the world. Proportions
//! count the same way: per class, plus the whole unnamed pool of each atom at
//! once.

use crate::syntax::{Comparator, Formula, PropCompare, Term};
use crate::vocab::{Atom, Vocabulary};
use num::{BigInt, BigRational, BigUint, One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Tolerance values τ_i for the approximate comparisons, indexed from 1.
/// Indices without an explicit entry fall back to the default, so
/// `Tolerances::uniform(τ)` gives every comparison the same slack.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    default: BigRational,
    overrides: BTreeMap<u32, BigRational>,
}

impl Tolerances {
    pub fn zero() -> Self {
        Self::uniform(BigRational::zero())
    }

    pub fn uniform(tau: BigRational) -> Self {
        Tolerances {
            default: tau,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with(mut self, index: u32, tau: BigRational) -> Self {
        self.overrides.insert(index, tau);
        self
    }

    pub fn get(&self, index: u32) -> &BigRational {
        self.overrides.get(&index).unwrap_or(&self.default)
    }
}

/// One orbit of worlds under domain permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldSummary {
    pub n: u64,
    /// Elements carrying each atom, indexed by atom bitmask; sums to `n`.
    pub counts: Vec<u64>,
    /// Equality class of each constant, classes numbered by first appearance.
    pub class_of: Vec<usize>,
    pub class_count: usize,
    /// Atom carried by each class representative.
    pub placement: Vec<usize>,
    /// Concrete worlds collapsed into this summary.
    pub multiplicity: BigUint,
}

impl WorldSummary {
    /// Build a summary, computing its multiplicity. Returns `None` when no
    /// world matches (an atom holds fewer elements than constant classes) or
    /// when `class_of` is not a restricted growth string onto
    /// `0..placement.len()`.
    pub fn new(
        counts: Vec<u64>,
        class_of: Vec<usize>,
        placement: Vec<usize>,
    ) -> Option<WorldSummary> {
        let n: u64 = counts.iter().sum();
        let class_count = placement.len();
        let mut next = 0usize;
        for &c in &class_of {
            if c > next {
                return None;
            }
            if c == next {
                next += 1;
            }
        }
        if next != class_count {
            return None;
        }
        let facts = factorials(n);
        let multiplicity = multiplicity(&counts, &placement, &facts);
        if multiplicity.is_zero() {
            return None;
        }
        Some(WorldSummary {
            n,
            counts,
            class_of,
            class_count,
            placement,
            multiplicity,
        })
    }

    /// Unnamed elements left in each atom once class representatives are
    /// accounted for.
    pub fn generic_capacity(&self) -> Vec<u64> {
        let mut cap = self.counts.clone();
        for &a in &self.placement {
            cap[a] -= 1;
        }
        cap
    }
}

fn factorials(n: u64) -> Vec<BigUint> {
    let mut f: Vec<BigUint> = Vec::with_capacity(n as usize + 1);
    f.push(BigUint::one());
    for i in 1..=n {
        let next = f.last().unwrap() * i;
        f.push(next);
    }
    f
}

fn multiplicity(counts: &[u64], placement: &[usize], facts: &[BigUint]) -> BigUint {
    let n: u64 = counts.iter().sum();
    let mut m = facts[n as usize].clone();
    for &c in counts {
        m /= &facts[c as usize];
    }
    let mut used = vec![0u64; counts.len()];
    for &a in placement {
        used[a] += 1;
    }
    for (a, &u) in used.iter().enumerate() {
        for k in 0..u {
            if k >= counts[a] {
                return BigUint::zero();
            }
            m *= counts[a] - k;
        }
    }
    m
}

/// Set partitions of `k` items as restricted growth strings.
pub(crate) fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, maxv: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=maxv {
            cur[i] = v;
            rec(i + 1, maxv.max(v + 1), cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, 0, &mut vec![0usize; k], &mut out);
    out
}

pub(crate) fn placements(class_count: usize, atoms: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; class_count];
    loop {
        out.push(cur.clone());
        let mut i = class_count;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < atoms {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn for_each_composition(total: u64, parts: usize, f: &mut impl FnMut(&[u64])) {
    fn rec(rem: u64, idx: usize, cur: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if idx + 1 == cur.len() {
            cur[idx] = rem;
            f(cur);
            return;
        }
        for v in 0..=rem {
            cur[idx] = v;
            rec(rem - v, idx + 1, cur, f);
        }
    }
    let mut cur = vec![0u64; parts];
    rec(total, 0, &mut cur, f);
}

/// All summaries of size-`n` worlds, in a deterministic order: partitions of
/// the constants, then class placements, then atom counts lexicographically.
pub fn enumerate_summaries(vocab: &Vocabulary, n: u64) -> Vec<WorldSummary> {
    let k = vocab.atom_count();
    let facts = factorials(n);
    let mut out = Vec::new();
    for class_of in partitions(vocab.constants().len()) {
        let class_count = class_of.iter().copied().max().map_or(0, |c| c + 1);
        for placement in placements(class_count, k) {
            for_each_composition(n, k, &mut |counts| {
                let m = multiplicity(counts, &placement, &facts);
                if !m.is_zero() {
                    out.push(WorldSummary {
                        n,
                        counts: counts.to_vec(),
                        class_of: class_of.clone(),
                        class_count,
                        placement: placement.clone(),
                        multiplicity: m,
                    });
                }
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Evaluation on a summary
// ---------------------------------------------------------------------------

/// An element of the summarised world: a constant-class representative, or
/// the `slot`-th distinct pick from the unnamed pool of an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ElemRef {
    Named(usize),
    Generic { atom: usize, slot: u64 },
}

struct EvalCx<'a> {
    s: &'a WorldSummary,
    vocab: &'a Vocabulary,
    tol: &'a Tolerances,
    cap: Vec<u64>,
    env: Vec<(char, ElemRef)>,
}

impl EvalCx<'_> {
    fn atom_of(&self, e: ElemRef) -> usize {
        match e {
            ElemRef::Named(c) => self.s.placement[c],
            ElemRef::Generic { atom, .. } => atom,
        }
    }

    fn resolve(&self, t: &Term) -> ElemRef {
        match t {
            Term::Var(v) => self
                .env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, e)| e)
                .unwrap_or_else(|| panic!("unbound variable `{v}` (validate first)")),
            Term::Const(name) => {
                let i = self
                    .vocab
                    .const_index(name)
                    .unwrap_or_else(|| panic!("unknown constant `{name}` (validate first)"));
                ElemRef::Named(self.s.class_of[i])
            }
        }
    }

    /// Representatives of every orbit a quantified variable can land in,
    /// given what the environment already distinguishes.
    fn candidates(&self) -> Vec<ElemRef> {
        let mut cands: Vec<ElemRef> = (0..self.s.class_count).map(ElemRef::Named).collect();
        let mut used = vec![0u64; self.cap.len()];
        for &(_, e) in &self.env {
            if let ElemRef::Generic { atom, slot } = e {
                if !cands.contains(&e) {
                    cands.push(e);
                }
                used[atom] = used[atom].max(slot + 1);
            }
        }
        for (atom, &used_here) in used.iter().enumerate() {
            if used_here < self.cap[atom] {
                cands.push(ElemRef::Generic {
                    atom,
                    slot: used_here,
                });
            }
        }
        cands
    }

    fn eval(&mut self, f: &Formula) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Pred(p, t) => {
                let pi = self
                    .vocab
                    .pred_index(p)
                    .unwrap_or_else(|| panic!("unknown predicate `{p}` (validate first)"));
                Atom(self.atom_of(self.resolve(t))).satisfies(pi)
            }
            Formula::Eq(a, b) => self.resolve(a) == self.resolve(b),
            Formula::Not(g) => !self.eval(g),
            Formula::And(a, b) => self.eval(a) && self.eval(b),
            Formula::Or(a, b) => self.eval(a) || self.eval(b),
            Formula::Implies(a, b) => !self.eval(a) || self.eval(b),
            Formula::ForAll(v, body) => self.quantify(*v, body, true),
            Formula::Exists(v, body) => self.quantify(*v, body, false),
            Formula::Prop(pc) => self.proportion_holds(pc),
            Formula::NegProp(pc) => !self.proportion_holds(pc),
        }
    }

    fn quantify(&mut self, v: char, body: &Formula, universal: bool) -> bool {
        for cand in self.candidates() {
            self.env.push((v, cand));
            let holds = self.eval(body);
            self.env.pop();
            if holds != universal {
                return !universal;
            }
        }
        universal
    }

    /// `(#(numerator ∧ denominator), #denominator)` over the whole domain.
    /// Proportion bodies mention no variable but their own, so we count in a
    /// fresh environment: each class representative singly, each atom's
    /// unnamed pool in one go.
    fn proportion_counts(&mut self, pc: &PropCompare) -> (u64, u64) {
        let saved = std::mem::take(&mut self.env);
        let mut num = 0u64;
        let mut den = 0u64;
        let mut tally = |cx: &mut Self, e: ElemRef, weight: u64| {
            cx.env.push((pc.var, e));
            let in_den = match &pc.denominator {
                Some(d) => cx.eval(d),
                None => true,
            };
            if in_den {
                den += weight;
                if cx.eval(&pc.numerator) {
                    num += weight;
                }
            }
            cx.env.pop();
        };
        for c in 0..self.s.class_count {
            tally(self, ElemRef::Named(c), 1);
        }
        for atom in 0..self.cap.len() {
            let weight = self.cap[atom];
            if weight > 0 {
                tally(self, ElemRef::Generic { atom, slot: 0 }, weight);
            }
        }
        self.env = saved;
        (num, den)
    }

    fn proportion_holds(&mut self, pc: &PropCompare) -> bool {
        let (num, den) = self.proportion_counts(pc);
        if den == 0 {
            return true; // conditioning on nothing holds vacuously
        }
        let tau = self.tol.get(pc.tol_index);
        let num = BigRational::from_integer(num.into());
        let den = BigRational::from_integer(den.into());
        match pc.cmp {
            Comparator::ApproxEq => {
                num >= (&pc.coeff - tau) * &den && num <= (&pc.coeff + tau) * &den
            }
            Comparator::ApproxLe => num <= (&pc.coeff + tau) * &den,
            Comparator::ApproxGe => num >= (&pc.coeff - tau) * &den,
        }
    }
}

/// Decide a closed, validated formula on a summary.
pub fn eval_summary(f: &Formula, s: &WorldSummary, vocab: &Vocabulary, tol: &Tolerances) -> bool {
    let cap = s.generic_capacity();
    EvalCx {
        s,
        vocab,
        tol,
        cap,
        env: Vec::new(),
    }
    .eval(f)
}

/// Decide `f` with `var` bound to an unnamed element of `atom` (which must
/// have one). Used to read off the atoms whose members satisfy a proportion
/// body.
pub(crate) fn eval_with_generic(
    f: &Formula,
    var: char,
    atom: usize,
    s: &WorldSummary,
    vocab: &Vocabulary,
    tol: &Tolerances,
) -> bool {
    let cap = s.generic_capacity();
    debug_assert!(cap[atom] >= 1, "atom {atom} has no unnamed element");
    let env = vec![(var, ElemRef::Generic { atom, slot: 0 })];
    EvalCx {
        s,
        vocab,
        tol,
        cap,
        env,
    }
    .eval(f)
}

/// Decide `f` with `var` bound to the representative of a constant class.
pub(crate) fn eval_with_class(
    f: &Formula,
    var: char,
    class: usize,
    s: &WorldSummary,
    vocab: &Vocabulary,
    tol: &Tolerances,
) -> bool {
    let cap = s.generic_capacity();
    let env = vec![(var, ElemRef::Named(class))];
    EvalCx {
        s,
        vocab,
        tol,
        cap,
        env,
    }
    .eval(f)
}

/// `(#(numerator ∧ denominator), #denominator)` of a proportion on a summary.
pub fn proportion_counts_on(
    pc: &PropCompare,
    s: &WorldSummary,
    vocab: &Vocabulary,
    tol: &Tolerances,
) -> (u64, u64) {
    let cap = s.generic_capacity();
    EvalCx {
        s,
        vocab,
        tol,
        cap,
        env: Vec::new(),
    }
    .proportion_counts(pc)
}

/// Fold `tally` over every summary of size-`n` worlds, in parallel, summing
/// multiplicities into two accumulators (`tally` says which to feed).
fn sum_summaries<F>(vocab: &Vocabulary, n: u64, tally: F) -> (BigUint, BigUint)
where
    F: Fn(&WorldSummary) -> (bool, bool) + Sync,
{
    let k = vocab.atom_count();
    let facts = factorials(n);
    let mut tasks = Vec::new();
    for class_of in partitions(vocab.constants().len()) {
        let class_count = class_of.iter().copied().max().map_or(0, |c| c + 1);
        for placement in placements(class_count, k) {
            for n0 in 0..=n {
                tasks.push((class_of.clone(), placement.clone(), n0));
            }
        }
    }
    tasks
        .into_par_iter()
        .map(|(class_of, placement, n0)| {
            let class_count = placement.len();
            let mut first = BigUint::zero();
            let mut second = BigUint::zero();
            let mut s = WorldSummary {
                n,
                counts: vec![0; k],
                class_of,
                class_count,
                placement,
                multiplicity: BigUint::one(),
            };
            s.counts[0] = n0;
            for_each_composition(n - n0, k - 1, &mut |rest| {
                s.counts[1..].copy_from_slice(rest);
                s.multiplicity = multiplicity(&s.counts, &s.placement, &facts);
                if s.multiplicity.is_zero() {
                    return;
                }
                let (a, b) = tally(&s);
                if a {
                    first += &s.multiplicity;
                }
                if b {
                    second += &s.multiplicity;
                }
            });
            (first, second)
        })
        .reduce(
            || (BigUint::zero(), BigUint::zero()),
            |x, y| (x.0 + y.0, x.1 + y.1),
        )
}

/// Number of size-`n` worlds satisfying a closed, validated formula.
pub fn count_worlds(f: &Formula, vocab: &Vocabulary, n: u64, tol: &Tolerances) -> BigUint {
    sum_summaries(vocab, n, |s| (eval_summary(f, s, vocab, tol), false)).0
}

/// Fraction of size-`n` models of `kb` that also satisfy `query`, or `None`
/// when `kb` has no size-`n` model at these tolerances.
pub fn pr_finite(
    kb: &Formula,
    query: &Formula,
    vocab: &Vocabulary,
    n: u64,
    tol: &Tolerances,
) -> Option<BigRational> {
    let (den, num) = sum_summaries(vocab, n, |s| {
        let kb_holds = eval_summary(kb, s, vocab, tol);
        (kb_holds, kb_holds && eval_summary(query, s, vocab, tol))
    });
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// `pr_finite` at each requested domain size.
pub fn convergence_table(
    kb: &Formula,
    query: &Formula,
    vocab: &Vocabulary,
    ns: &[u64],
    tol: &Tolerances,
) -> Vec<(u64, Option<BigRational>)> {
    ns.iter()
        .map(|&n| (n, pr_finite(kb, query, vocab, n, tol)))
        .collect()
}

pub mod raw {
    //! Brute force over concrete worlds. Exponential in everything; exists so
    //! the summary-based counter has an independent cross-check.

    use super::*;

    struct World {
        atom_of: Vec<usize>,
        const_elem: Vec<usize>,
    }

    fn eval(
        f: &Formula,
        w: &World,
        vocab: &Vocabulary,
        tol: &Tolerances,
        env: &mut Vec<(char, usize)>,
    ) -> bool {
        let resolve = |t: &Term, env: &[(char, usize)]| -> usize {
            match t {
                Term::Var(v) => {
                    env.iter()
                        .rev()
                        .find(|(name, _)| name == v)
                        .expect("unbound")
                        .1
                }
                Term::Const(name) => w.const_elem[vocab.const_index(name).expect("unknown const")],
            }
        };
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Pred(p, t) => Atom(w.atom_of[resolve(t, env)])
                .satisfies(vocab.pred_index(p).expect("unknown pred")),
            Formula::Eq(a, b) => resolve(a, env) == resolve(b, env),
            Formula::Not(g) => !eval(g, w, vocab, tol, env),
            Formula::And(a, b) => eval(a, w, vocab, tol, env) && eval(b, w, vocab, tol, env),
            Formula::Or(a, b) => eval(a, w, vocab, tol, env) || eval(b, w, vocab, tol, env),
            Formula::Implies(a, b) => !eval(a, w, vocab, tol, env) || eval(b, w, vocab, tol, env),
            Formula::ForAll(v, body) => (0..w.atom_of.len()).all(|e| {
                env.push((*v, e));
                let r = eval(body, w, vocab, tol, env);
                env.pop();
                r
            }),
            Formula::Exists(v, body) => (0..w.atom_of.len()).any(|e| {
                env.push((*v, e));
                let r = eval(body, w, vocab, tol, env);
                env.pop();
                r
            }),
            Formula::Prop(pc) => {
                let mut num = 0u64;
                let mut den = 0u64;
                for e in 0..w.atom_of.len() {
                    env.push((pc.var, e));
                    let in_den = match &pc.denominator {
                        Some(d) => eval(d, w, vocab, tol, env),
                        None => true,
                    };
                    if in_den {
                        den += 1;
                        if eval(&pc.numerator, w, vocab, tol, env) {
                            num += 1;
                        }
                    }
                    env.pop();
                }
                if den == 0 {
                    return true;
                }
                let tau = tol.get(pc.tol_index);
                let num = BigRational::from_integer(num.into());
                let den = BigRational::from_integer(den.into());
                match pc.cmp {
                    Comparator::ApproxEq => {
                        num >= (&pc.coeff - tau) * &den && num <= (&pc.coeff + tau) * &den
                    }
                    Comparator::ApproxLe => num <= (&pc.coeff + tau) * &den,
                    Comparator::ApproxGe => num >= (&pc.coeff - tau) * &den,
                }
            }
            Formula::NegProp(pc) => !eval(&Formula::Prop(pc.clone()), w, vocab, tol, env),
        }
    }

    /// Count satisfying worlds one concrete world at a time.
    pub fn count_worlds_raw(f: &Formula, vocab: &Vocabulary, n: u64, tol: &Tolerances) -> BigUint {
        let k = vocab.atom_count();
        let n = n as usize;
        let nc = vocab.constants().len();
        if n == 0 && nc > 0 {
            return BigUint::zero(); // constants have nothing to denote
        }
        let mut count = BigUint::zero();
        let mut w = World {
            atom_of: vec![0; n],
            const_elem: vec![0; nc],
        };
        loop {
            // for this atom assignment, run through every constant interpretation
            loop {
                if eval(f, &w, vocab, tol, &mut Vec::new()) {
                    count += 1u32;
                }
                let mut i = nc;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    w.const_elem[i] += 1;
                    if w.const_elem[i] < n {
                        break;
                    }
                    w.const_elem[i] = 0;
                }
                if w.const_elem.iter().all(|&e| e == 0) {
                    break;
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return count;
                }
                i -= 1;
                w.atom_of[i] += 1;
                if w.atom_of[i] < k {
                    break;
                }
                w.atom_of[i] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn tol(s: &str) -> Tolerances {
        Tolerances::uniform(crate::parser::parse_rational(s).unwrap())
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        assert_eq!(partitions(0).len(), 1);
        assert_eq!(partitions(1).len(), 1);
        assert_eq!(partitions(3).len(), 5);
        assert_eq!(partitions(4).len(), 15);
    }

    #[test]
    fn one_predicate_summaries_are_binomial() {
        let v = Vocabulary::new(["P"], [] as [&str; 0]).unwrap();
        let summaries = enumerate_summaries(&v, 3);
        let mults: Vec<u64> = summaries
            .iter()
            .map(|s| u64::try_from(&s.multiplicity).unwrap())
            .collect();
        assert_eq!(mults, [1, 3, 3, 1]);
        let counts: Vec<&[u64]> = summaries.iter().map(|s| s.counts.as_slice()).collect();
        assert_eq!(counts, [&[0, 3], &[1, 2], &[2, 1], &[3, 0]]);
    }

    #[test]
    fn multiplicities_sum_to_all_worlds() {
        // K^N · N^(#constants)
        let v = Vocabulary::new(["P", "Q"], ["a", "b"]).unwrap();
        let total: BigUint = enumerate_summaries(&v, 3)
            .iter()
            .map(|s| &s.multiplicity)
            .sum();
        assert_eq!(total, BigUint::from(4u32.pow(3) * 9u32));
    }

    #[test]
    fn counts_match_hand_calculations() {
        let v = Vocabulary::new(["P"], ["c"]).unwrap();
        let taut = parse("true", &v).unwrap();
        assert_eq!(
            count_worlds(&taut, &v, 3, &Tolerances::zero()),
            BigUint::from(24u32)
        );
        let pc = parse("P(c)", &v).unwrap();
        assert_eq!(
            count_worlds(&pc, &v, 2, &Tolerances::zero()),
            BigUint::from(4u32)
        );

        // |#P/4 - 1/2| <= 1/10 forces #P = 2, and C(4,2) = 6
        let v = Vocabulary::new(["P"], [] as [&str; 0]).unwrap();
        let half = parse("[P(x)]_x ~(1) 1/2", &v).unwrap();
        assert_eq!(
            count_worlds(&half, &v, 4, &tol("1/10")),
            BigUint::from(6u32)
        );

        // two distinct elements exist only from n = 2 on
        let two = parse("exists x. exists y. not x = y", &v).unwrap();
        assert_eq!(
            count_worlds(&two, &v, 1, &Tolerances::zero()),
            BigUint::zero()
        );
        assert_eq!(
            count_worlds(&two, &v, 2, &Tolerances::zero()),
            BigUint::from(4u32)
        );
    }

    #[test]
    fn fraction_with_a_p_element_is_one_minus_two_to_minus_n() {
        let v = Vocabulary::new(["P"], [] as [&str; 0]).unwrap();
        let kb = parse("true", &v).unwrap();
        let q = parse("exists x. P(x)", &v).unwrap();
        for n in 1..=6u64 {
            let pr = pr_finite(&kb, &q, &v, n, &Tolerances::zero()).unwrap();
            let expect = BigRational::one()
                - BigRational::new(BigInt::one(), BigInt::from(2u64.pow(n as u32)));
            assert_eq!(pr, expect, "n = {n}");
        }
    }

    #[test]
    fn unsatisfiable_kb_has_no_models() {
        let v = Vocabulary::new(["P"], [] as [&str; 0]).unwrap();
        let kb = parse("(exists x. P(x)) and (forall x. not P(x))", &v).unwrap();
        assert_eq!(pr_finite(&kb, &kb, &v, 3, &Tolerances::zero()), None);
    }

    #[test]
    fn summary_counter_agrees_with_brute_force() {
        let v = Vocabulary::new(["Bird", "Fly"], ["c"]).unwrap();
        let t = tol("1/10");
        for text in [
            "[Fly(x) || Bird(x)]_x ~(1) 9/10 and Bird(c)",
            "forall x. Bird(x) -> Fly(x)",
            "exists x. not x = c and Fly(x)",
            "[Fly(x)]_x <~(1) 1/2 or not Bird(c)",
            "not [Bird(x)]_x >~(2) 1/3",
            "exists x. exists y. (not x = y and not Bird(x)) and Bird(y)",
        ] {
            let f = parse(text, &v).unwrap();
            for n in 0..=4u64 {
                assert_eq!(
                    count_worlds(&f, &v, n, &t),
                    raw::count_worlds_raw(&f, &v, n, &t),
                    "{text} at n = {n}"
                );
            }
        }
    }

    #[test]
    fn empty_denominator_is_vacuous() {
        let v = Vocabulary::new(["P", "Q"], [] as [&str; 0]).unwrap();
        // no element satisfies P and not P
        let f = parse("[Q(x) || P(x) and not P(x)]_x ~(1) 1", &v).unwrap();
        let total = count_worlds(&parse("true", &v).unwrap(), &v, 3, &Tolerances::zero());
        assert_eq!(count_worlds(&f, &v, 3, &Tolerances::zero()), total);
        let neg = parse("not [Q(x) || P(x) and not P(x)]_x ~(1) 1", &v).unwrap();
        assert_eq!(
            count_worlds(&neg, &v, 3, &Tolerances::zero()),
            BigUint::zero()
        );
    }
}
