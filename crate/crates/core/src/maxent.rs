//! Entropy maximization over a disjunct's constraint region.
//!
//! The asymptotic weight of a disjunct is decided by the maximum of the
//! entropy function H(u) = −Σ u_a ln u_a over its region of atom
//! proportions, and by how that maximum behaves as the tolerances shrink.
//! The solver here works in two layers:
//!
//! * an exact-rational layer (simplex-based) that settles feasibility,
//!   discovers every implicit equality of the region (facial reduction),
//!   and produces a strictly interior starting point;
//! * a floating-point layer that refines the maximizer with an
//!   equality-constrained Newton method plus an active set for the
//!   remaining inequalities.
//!
//! Splitting the work this way keeps every yes/no decision exact — only
//! the final coordinates of a provably well-posed problem are computed in
//! binary64.

use nalgebra::{DMatrix, DVector};
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::canonical::{ConstraintRegion, Relation};
use crate::simplex::{simplex_min, LpOutcome};
use crate::tol::AGREEMENT_TOL;
use crate::worlds::Tolerances;

/// Outcome of one entropy maximization at fixed tolerance values.
#[derive(Debug, Clone)]
pub struct MaxEntResult {
    /// Maximizer on the closed region, length `k`, summing to one.
    pub point: Vec<f64>,
    /// Entropy at `point`.
    pub value: f64,
    /// Largest violation of any region constraint by `point`.
    pub feasibility_residual: f64,
    /// True when a strict (open-branch) constraint is active at `point`,
    /// i.e. the open region does not attain this maximum itself.
    pub boundary_flag: bool,
}

/// Behaviour of the entropy maximum as the tolerances shrink to zero.
#[derive(Debug, Clone)]
pub struct LimitMaxEnt {
    /// Solve with every tolerance set to exactly zero.
    pub closure: Option<MaxEntResult>,
    /// Solves at each grid tolerance, in the order given.
    pub grid: Vec<(f64, Option<MaxEntResult>)>,
    /// Value at τ=0 predicted from the feasible grid solves.
    pub extrapolated: Option<f64>,
    /// True when the closure solve and the grid extrapolation point at the
    /// same limit; only then is `value` trustworthy.
    pub agreement: bool,
    /// The limiting entropy, present exactly when `agreement` holds.
    pub value: Option<f64>,
}

/// H(u) = −Σ u_a ln u_a, with 0·ln 0 = 0.
pub fn entropy(u: &[f64]) -> f64 {
    u.iter()
        .map(|&x| {
            assert!(x > -1e-12, "entropy of a negative coordinate {x}");
            if x <= 0.0 {
                0.0
            } else {
                -x * x.ln()
            }
        })
        .sum()
}

/// ∇H at an interior point: (−1 − ln u_a)_a.
pub fn entropy_gradient(u: &[f64]) -> Vec<f64> {
    u.iter()
        .map(|&x| {
            assert!(x > 0.0, "entropy gradient needs an interior point");
            -(1.0 + x.ln())
        })
        .collect()
}

/// The tolerance grid used when the caller does not supply one:
/// 1e-2, 1e-3, 1e-4.
pub fn default_tau_grid() -> Vec<BigRational> {
    [100, 1_000, 10_000]
        .iter()
        .map(|&q| BigRational::new(1.into(), q.into()))
        .collect()
}

/// Region constraints instantiated at fixed tolerances and normalized to
/// `row·u ≤ 0` / `row·u = 0` form.
struct Rows {
    les: Vec<(Vec<BigRational>, bool)>,
    eqs: Vec<Vec<BigRational>>,
    /// A strict row reduced to 0 < 0: the open region is empty even though
    /// its closure may not be.
    vanished_strict: bool,
}

fn build_rows(region: &ConstraintRegion, tol: &Tolerances) -> Rows {
    let k = region.k;
    let mut les: Vec<(Vec<BigRational>, bool)> = Vec::new();
    let mut eqs: Vec<Vec<BigRational>> = Vec::new();
    let mut vanished_strict = false;
    for c in &region.constraints {
        let bound = c.bound.eval(tol);
        let mut row: Vec<BigRational> = (0..k).map(|i| &c.lhs[i] - &bound * &c.den[i]).collect();
        if c.relation == Relation::Ge {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        if row.iter().all(Zero::is_zero) {
            if c.relation != Relation::Eq && c.strict {
                vanished_strict = true;
            }
            continue;
        }
        match c.relation {
            Relation::Eq => eqs.push(row),
            Relation::Le | Relation::Ge => les.push((row, c.strict)),
        }
    }
    // A pair of exactly opposite non-strict rows is an equality in
    // disguise; recognizing it here saves facial reduction the trouble.
    let mut keep = vec![true; les.len()];
    for i in 0..les.len() {
        if !keep[i] || les[i].1 {
            continue;
        }
        for j in i + 1..les.len() {
            if !keep[j] || les[j].1 {
                continue;
            }
            if les[i]
                .0
                .iter()
                .zip(&les[j].0)
                .all(|(x, y)| (x + y).is_zero())
            {
                eqs.push(les[i].0.clone());
                keep[i] = false;
                keep[j] = false;
                break;
            }
        }
    }
    let les = les
        .into_iter()
        .zip(keep)
        .filter_map(|(r, kp)| kp.then_some(r))
        .collect();
    Rows {
        les,
        eqs,
        vanished_strict,
    }
}

/// Coordinates provably zero on the whole region by signs alone: a `≤ 0`
/// row with no negative coefficient forces its positive-coefficient
/// coordinates to vanish, and similarly for one-signed equality rows.
fn presolve_zeros(k: usize, rows: &Rows) -> Vec<bool> {
    let mut zero = vec![false; k];
    loop {
        let mut changed = false;
        for (row, _) in &rows.les {
            if row
                .iter()
                .enumerate()
                .all(|(i, x)| zero[i] || !x.is_negative())
            {
                for (i, x) in row.iter().enumerate() {
                    if !zero[i] && x.is_positive() {
                        zero[i] = true;
                        changed = true;
                    }
                }
            }
        }
        for row in &rows.eqs {
            let nonneg = row
                .iter()
                .enumerate()
                .all(|(i, x)| zero[i] || !x.is_negative());
            let nonpos = row
                .iter()
                .enumerate()
                .all(|(i, x)| zero[i] || !x.is_positive());
            if nonneg || nonpos {
                for (i, x) in row.iter().enumerate() {
                    if !zero[i] && !x.is_zero() {
                        zero[i] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return zero;
        }
    }
}

fn rat_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn dot_rat_f64(row: &[BigRational], point: &[f64]) -> f64 {
    row.iter().zip(point).map(|(c, &x)| rat_f64(c) * x).sum()
}

/// Feasibility LP: maximize δ subject to `row·u ≤ −δ` for every inequality,
/// `u_i ≥ δ`, the equalities, and Σu = 1. A positive optimum hands back a
/// strictly interior point; zero means the region is a proper face.
fn interior_lp(
    f: usize,
    eqs: &[Vec<BigRational>],
    les: &[(Vec<BigRational>, bool)],
) -> Option<(BigRational, Vec<BigRational>)> {
    let l = les.len();
    let e = eqs.len();
    // variables: u (f) | δ | t (l) | w (f)
    let n = f + 1 + l + f;
    let m = l + f + e + 1;
    let mut a = vec![vec![BigRational::zero(); n]; m];
    let mut b = vec![BigRational::zero(); m];
    let mut r = 0;
    for (li, (row, _)) in les.iter().enumerate() {
        a[r][..f].clone_from_slice(row);
        a[r][f] = BigRational::one();
        a[r][f + 1 + li] = BigRational::one();
        r += 1;
    }
    for i in 0..f {
        a[r][i] = BigRational::one();
        a[r][f] = -BigRational::one();
        a[r][f + 1 + l + i] = -BigRational::one();
        r += 1;
    }
    for row in eqs {
        a[r][..f].clone_from_slice(row);
        r += 1;
    }
    for cell in &mut a[r][..f] {
        *cell = BigRational::one();
    }
    b[r] = BigRational::one();
    let mut c = vec![BigRational::zero(); n];
    c[f] = -BigRational::one();
    match simplex_min(&a, &b, &c) {
        LpOutcome::Infeasible => None,
        LpOutcome::Optimal { x, value } => Some((-value, x[..f].to_vec())),
        LpOutcome::Unbounded => unreachable!("δ is bounded on the simplex"),
    }
}

/// Maximize `obj·u` over a region already known to be nonempty.
fn lp_max(
    f: usize,
    eqs: &[Vec<BigRational>],
    les: &[(Vec<BigRational>, bool)],
    obj: &[BigRational],
) -> BigRational {
    let l = les.len();
    let e = eqs.len();
    // variables: u (f) | slacks (l)
    let n = f + l;
    let m = l + e + 1;
    let mut a = vec![vec![BigRational::zero(); n]; m];
    let mut b = vec![BigRational::zero(); m];
    let mut r = 0;
    for (li, (row, _)) in les.iter().enumerate() {
        a[r][..f].clone_from_slice(row);
        a[r][f + li] = BigRational::one();
        r += 1;
    }
    for row in eqs {
        a[r][..f].clone_from_slice(row);
        r += 1;
    }
    for cell in &mut a[r][..f] {
        *cell = BigRational::one();
    }
    b[r] = BigRational::one();
    let mut c = vec![BigRational::zero(); n];
    c[..f].clone_from_slice(&obj.iter().map(|x| -x.clone()).collect::<Vec<_>>());
    match simplex_min(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => -value,
        LpOutcome::Infeasible => unreachable!("caller established feasibility"),
        LpOutcome::Unbounded => unreachable!("objective is bounded on the simplex"),
    }
}

/// Solve the equality system exactly; `Some` only when it pins every
/// variable (zero degrees of freedom).
fn unique_solution(sys: &[(Vec<BigRational>, BigRational)], n: usize) -> Option<Vec<BigRational>> {
    let mut rows: Vec<(Vec<BigRational>, BigRational)> = sys.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut top = 0;
    for col in 0..n {
        let Some(pr) = (top..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else {
            continue;
        };
        rows.swap(top, pr);
        let scale = rows[top].0[col].clone();
        for x in rows[top].0.iter_mut() {
            *x /= &scale;
        }
        rows[top].1 /= &scale;
        for r in 0..rows.len() {
            if r != top && !rows[r].0[col].is_zero() {
                let w = rows[r].0[col].clone();
                for j in 0..n {
                    let d = &w * &rows[top].0[j];
                    rows[r].0[j] -= d;
                }
                let d = &w * &rows[top].1;
                rows[r].1 -= d;
            }
        }
        pivots.push((top, col));
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    if pivots.len() < n {
        return None;
    }
    let mut sol = vec![BigRational::zero(); n];
    for &(r, c) in &pivots {
        sol[c] = rows[r].1.clone();
    }
    Some(sol)
}

/// Equality-constrained Newton ascent with an active set for the leftover
/// inequalities. `c_eq`/`d` hold the equality rows (already including
/// Σu = 1), `les` the inequality rows as `row·v ≤ 0`, and `start` is
/// strictly feasible.
fn newton(
    f: usize,
    c_eq: &DMatrix<f64>,
    d: &DVector<f64>,
    les: &[Vec<f64>],
    start: &[f64],
) -> Vec<f64> {
    let e = c_eq.nrows();
    let mut v = DVector::from_column_slice(start);
    let mut working: Vec<usize> = Vec::new();
    'outer: for _ in 0..500 {
        let m = e + working.len();
        let dim = f + m;
        let mut kkt = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..f {
            kkt[(i, i)] = -1.0 / v[i];
        }
        for r in 0..e {
            for j in 0..f {
                kkt[(f + r, j)] = c_eq[(r, j)];
                kkt[(j, f + r)] = c_eq[(r, j)];
            }
        }
        for (wi, &r) in working.iter().enumerate() {
            for j in 0..f {
                kkt[(f + e + wi, j)] = les[r][j];
                kkt[(j, f + e + wi)] = les[r][j];
            }
        }
        // tiny ridge so linearly dependent constraint rows stay solvable
        for r in 0..m {
            kkt[(f + r, f + r)] = -1e-12;
        }
        let mut rhs = DVector::<f64>::zeros(dim);
        for i in 0..f {
            rhs[i] = 1.0 + v[i].ln();
        }
        for r in 0..e {
            let cv: f64 = (0..f).map(|j| c_eq[(r, j)] * v[j]).sum();
            rhs[f + r] = d[r] - cv;
        }
        for (wi, &r) in working.iter().enumerate() {
            let cv: f64 = (0..f).map(|j| les[r][j] * v[j]).sum();
            rhs[f + e + wi] = -cv;
        }
        let Some(sol) = kkt.lu().solve(&rhs) else {
            break;
        };
        let p = sol.rows(0, f).into_owned();
        if p.amax() <= 1e-11 * v.amax().max(1.0) {
            // Stationary for this working set. With the system solved as
            // Hess·p + C_actᵀν = −∇H, the KKT multiplier of an inequality
            // row is μ = −ν and must be nonnegative at a maximum; a
            // negative μ says the row blocks ascent and has to leave.
            let mut worst: Option<(usize, f64)> = None;
            for wi in 0..working.len() {
                let mu = -sol[f + e + wi];
                if mu < -1e-9 && worst.is_none_or(|(_, w)| mu < w) {
                    worst = Some((wi, mu));
                }
            }
            match worst {
                Some((wi, _)) => {
                    working.remove(wi);
                    continue;
                }
                None => break,
            }
        }
        // Longest admissible step: fraction-to-boundary for positivity,
        // exact stop on the first blocking inequality row.
        let mut alpha = 1.0f64;
        for i in 0..f {
            if p[i] < 0.0 {
                alpha = alpha.min(0.995 * (-v[i] / p[i]));
            }
        }
        for (r, row) in les.iter().enumerate() {
            if working.contains(&r) {
                continue;
            }
            let along: f64 = (0..f).map(|j| row[j] * p[j]).sum();
            if along > 1e-13 {
                let slack: f64 = -(0..f).map(|j| row[j] * v[j]).sum::<f64>();
                let a = (slack / along).max(0.0);
                if a < alpha {
                    alpha = a;
                }
            }
        }
        let h0: f64 = v.iter().map(|&x| -x * x.ln()).sum();
        let mut tries = 0;
        loop {
            let cand = &v + &p * alpha;
            if cand.iter().all(|&x| x > 0.0)
                && cand.iter().map(|&x| -x * x.ln()).sum::<f64>() >= h0 - 1e-12
            {
                v = cand;
                break;
            }
            alpha *= 0.5;
            tries += 1;
            if tries > 60 {
                break 'outer;
            }
        }
        for (r, row) in les.iter().enumerate() {
            if working.contains(&r) {
                continue;
            }
            let cv: f64 = (0..f).map(|j| row[j] * v[j]).sum();
            if cv >= -1e-12 {
                working.push(r);
            }
        }
    }
    v.iter().copied().collect()
}

fn assemble(
    region: &ConstraintRegion,
    rows: &Rows,
    free: &[usize],
    v: &[f64],
    vanished: bool,
) -> MaxEntResult {
    let mut point = vec![0.0; region.k];
    for (pos, &i) in free.iter().enumerate() {
        point[i] = v[pos].max(0.0);
    }
    let value = entropy(&point);
    let mut residual = (point.iter().sum::<f64>() - 1.0).abs();
    let mut boundary = vanished;
    for (row, strict) in &rows.les {
        let x = dot_rat_f64(row, &point);
        residual = residual.max(x.max(0.0));
        if *strict && x.abs() <= 1e-9 {
            boundary = true;
        }
    }
    for row in &rows.eqs {
        residual = residual.max(dot_rat_f64(row, &point).abs());
    }
    MaxEntResult {
        point,
        value,
        feasibility_residual: residual,
        boundary_flag: boundary,
    }
}

/// Maximize entropy over the closed region at the given tolerance values.
/// `None` means the region is empty.
pub fn maximize_entropy(region: &ConstraintRegion, tol: &Tolerances) -> Option<MaxEntResult> {
    let k = region.k;
    assert!(k >= 1, "a region needs at least one atom");
    let rows = build_rows(region, tol);
    let zero = presolve_zeros(k, &rows);
    let mut free: Vec<usize> = (0..k).filter(|&i| !zero[i]).collect();
    if free.is_empty() {
        return None;
    }
    let mut vanished = rows.vanished_strict;
    let restrict = |row: &[BigRational], free: &[usize]| -> Vec<BigRational> {
        free.iter().map(|&i| row[i].clone()).collect()
    };
    let mut les: Vec<(Vec<BigRational>, bool)> = Vec::new();
    for (row, strict) in &rows.les {
        let r = restrict(row, &free);
        if r.iter().all(Zero::is_zero) {
            if *strict {
                vanished = true;
            }
        } else {
            les.push((r, *strict));
        }
    }
    let mut eqs: Vec<Vec<BigRational>> = rows
        .eqs
        .iter()
        .map(|r| restrict(r, &free))
        .filter(|r| !r.iter().all(Zero::is_zero))
        .collect();

    // Facial reduction: until a strictly interior point exists, find the
    // rows and coordinates that are tight on the whole region and turn
    // them into equalities / zeros. Each pass of the δ-LP either hands
    // back an interior point or certifies that at least one conversion is
    // possible, so this terminates.
    let interior: Vec<BigRational> = loop {
        let f = free.len();
        let (delta, u) = interior_lp(f, &eqs, &les)?;
        if delta.is_positive() {
            break u;
        }
        let mut to_eq: Vec<usize> = Vec::new();
        for (r, (row, _)) in les.iter().enumerate() {
            let obj: Vec<BigRational> = row.iter().map(|x| -x.clone()).collect();
            if lp_max(f, &eqs, &les, &obj).is_zero() {
                to_eq.push(r);
            }
        }
        let mut to_zero: Vec<usize> = Vec::new();
        for pos in 0..f {
            let mut obj = vec![BigRational::zero(); f];
            obj[pos] = BigRational::one();
            if lp_max(f, &eqs, &les, &obj).is_zero() {
                to_zero.push(pos);
            }
        }
        assert!(
            !to_eq.is_empty() || !to_zero.is_empty(),
            "degenerate region with no tight face"
        );
        for &r in to_eq.iter().rev() {
            let (row, strict) = les.remove(r);
            if strict {
                vanished = true;
            }
            eqs.push(row);
        }
        if !to_zero.is_empty() {
            let keep: Vec<usize> = (0..f).filter(|pos| !to_zero.contains(pos)).collect();
            free = keep.iter().map(|&pos| free[pos]).collect();
            if free.is_empty() {
                return None;
            }
            let shrink = |row: &[BigRational]| -> Vec<BigRational> {
                keep.iter().map(|&p| row[p].clone()).collect()
            };
            let mut kept_les = Vec::new();
            for (row, strict) in &les {
                let r = shrink(row);
                if r.iter().all(Zero::is_zero) {
                    if *strict {
                        vanished = true;
                    }
                } else {
                    kept_les.push((r, *strict));
                }
            }
            les = kept_les;
            eqs = eqs
                .iter()
                .map(|r| shrink(r))
                .filter(|r| !r.iter().all(Zero::is_zero))
                .collect();
        }
    };

    let f = free.len();
    let mut sys: Vec<(Vec<BigRational>, BigRational)> = eqs
        .iter()
        .map(|r| (r.clone(), BigRational::zero()))
        .collect();
    sys.push((vec![BigRational::one(); f], BigRational::one()));
    if let Some(sol) = unique_solution(&sys, f) {
        let v: Vec<f64> = sol.iter().map(rat_f64).collect();
        return Some(assemble(region, &rows, &free, &v, vanished));
    }

    let e = eqs.len() + 1;
    let mut c_eq = DMatrix::<f64>::zeros(e, f);
    let mut d = DVector::<f64>::zeros(e);
    for (r, row) in eqs.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            c_eq[(r, j)] = rat_f64(x);
        }
    }
    for j in 0..f {
        c_eq[(e - 1, j)] = 1.0;
    }
    d[e - 1] = 1.0;
    let les_f: Vec<Vec<f64>> = les
        .iter()
        .map(|(row, _)| row.iter().map(rat_f64).collect())
        .collect();
    let start: Vec<f64> = interior.iter().map(rat_f64).collect();
    let v = newton(f, &c_eq, &d, &les_f, &start);
    Some(assemble(region, &rows, &free, &v, vanished))
}

/// Size of the entropy gradient at `result.point` after projecting out the
/// active constraint rows — a stationarity certificate for the solve.
pub fn stationarity_residual(
    region: &ConstraintRegion,
    tol: &Tolerances,
    result: &MaxEntResult,
) -> f64 {
    let rows = build_rows(region, tol);
    let support: Vec<usize> = (0..region.k).filter(|&i| result.point[i] > 1e-12).collect();
    let mut act: Vec<Vec<f64>> = vec![vec![1.0; support.len()]];
    for row in &rows.eqs {
        act.push(support.iter().map(|&i| rat_f64(&row[i])).collect());
    }
    for (row, _) in &rows.les {
        if dot_rat_f64(row, &result.point).abs() <= 1e-9 {
            act.push(support.iter().map(|&i| rat_f64(&row[i])).collect());
        }
    }
    let g = DVector::from_iterator(
        support.len(),
        support.iter().map(|&i| -(1.0 + result.point[i].ln())),
    );
    let a = DMatrix::from_row_iterator(act.len(), support.len(), act.iter().flatten().copied());
    let pinv = a
        .clone()
        .svd(true, true)
        .pseudo_inverse(1e-10)
        .expect("svd of a finite matrix");
    (&g - pinv * (a * &g)).amax()
}

/// Fit v(τ) ≈ c₀ + c₁τ + c₂·τ ln τ through the smallest feasible grid
/// points and report c₀; fewer than three points degrade gracefully.
fn extrapolate(pts: &[(f64, f64)]) -> Option<f64> {
    match pts {
        [] => None,
        [(_, v)] => Some(*v),
        [(t1, v1), (t2, v2)] => Some(v1 - t1 * (v2 - v1) / (t2 - t1)),
        [(t1, v1), (t2, v2), (t3, v3), ..] => {
            let m = nalgebra::Matrix3::new(
                1.0,
                *t1,
                t1 * t1.ln(),
                1.0,
                *t2,
                t2 * t2.ln(),
                1.0,
                *t3,
                t3 * t3.ln(),
            );
            let rhs = nalgebra::Vector3::new(*v1, *v2, *v3);
            match m.lu().solve(&rhs) {
                Some(c) => Some(c[0]),
                None => Some(v1 - t1 * (v2 - v1) / (t2 - t1)),
            }
        }
    }
}

/// Study the τ→0 limit of the region's entropy maximum: solve on the
/// closure (all tolerances zero), solve at each grid tolerance, and accept
/// the closure value only when the grid solves extrapolate to it.
///
/// The fit is anchored below the smallest feasible grid tolerance (two
/// extra solves at τ/2 and τ/4): on geometrically spaced nodes the smooth
/// part of v(τ) leaks only O(τ²) into the extrapolated constant, which
/// keeps genuine limits comfortably inside the agreement tolerance.
pub fn limit_maxent(region: &ConstraintRegion, grid: &[BigRational]) -> LimitMaxEnt {
    let closure = maximize_entropy(region, &Tolerances::zero());
    let grid_results: Vec<(f64, Option<MaxEntResult>)> = grid
        .iter()
        .map(|tau| {
            (
                rat_f64(tau),
                maximize_entropy(region, &Tolerances::uniform(tau.clone())),
            )
        })
        .collect();
    let mut feas: Vec<(BigRational, f64)> = grid
        .iter()
        .zip(&grid_results)
        .filter_map(|(t, (_, r))| r.as_ref().map(|r| (t.clone(), r.value)))
        .collect();
    if let Some(tmin) = feas.iter().map(|(t, _)| t).min().cloned() {
        let half = BigRational::new(1.into(), 2.into());
        for extra in [&tmin * &half, &tmin * &half * &half] {
            if feas.iter().any(|(t, _)| *t == extra) {
                continue;
            }
            if let Some(r) = maximize_entropy(region, &Tolerances::uniform(extra.clone())) {
                feas.push((extra, r.value));
            }
        }
    }
    let mut pts: Vec<(f64, f64)> = feas.iter().map(|(t, v)| (rat_f64(t), *v)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    pts.truncate(3);
    let extrapolated = extrapolate(&pts);
    let agreement = match (&closure, extrapolated) {
        (Some(c), Some(x)) => (x - c.value).abs() <= AGREEMENT_TOL,
        _ => false,
    };
    let value = if agreement {
        closure.as_ref().map(|c| c.value)
    } else {
        None
    };
    LimitMaxEnt {
        closure,
        grid: grid_results,
        extrapolated,
        agreement,
        value,
    }
}
