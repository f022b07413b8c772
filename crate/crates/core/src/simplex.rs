//! Dense exact-rational simplex, used for feasibility and facial questions
//! about constraint regions. Problems here have a few dozen variables at
//! most, so a textbook two-phase tableau with Bland's rule (no cycling, no
//! rounding) is the right tool.

use num::{BigRational, One, Signed, Zero};

pub(crate) enum LpOutcome {
    Infeasible,
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    Unbounded,
}

/// minimize c·x subject to A x = b, x ≥ 0.
pub(crate) fn simplex_min(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    // columns: x (n) | artificials (m) | rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(width);
        let flip = b[i].is_negative();
        for v in &a[i][..n] {
            row.push(if flip { -v } else { v.clone() });
        }
        for r in 0..m {
            row.push(if r == i {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        row.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials. Reduced costs start as
    // cost(artificial) = 1 minus the sum of the (all-basic) rows.
    let mut obj = vec![BigRational::zero(); width];
    for cell in obj.iter_mut().take(n + m).skip(n) {
        *cell = BigRational::one();
    }
    for row in &t {
        for (o, cell) in obj.iter_mut().zip(row) {
            *o -= cell;
        }
    }
    if !iterate(&mut t, &mut obj, &mut basis, n + m) {
        unreachable!("phase-1 objective is bounded below by zero");
    }
    if !obj[width - 1].is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive surviving artificials out of the basis; rows that cannot pivot
    // are redundant.
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut obj, &mut basis, i, j);
            } else {
                t.remove(i);
                basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    // Phase 2: the real objective, artificial columns barred from entering.
    let mut obj = vec![BigRational::zero(); width];
    obj[..n].clone_from_slice(c);
    for (i, row) in t.iter().enumerate() {
        if basis[i] < n && !c[basis[i]].is_zero() {
            let w = c[basis[i]].clone();
            for (o, cell) in obj.iter_mut().zip(row) {
                *o -= &w * cell;
            }
        }
    }
    if !iterate(&mut t, &mut obj, &mut basis, n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![BigRational::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][width - 1].clone();
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, value }
}

/// Bland pivoting until no reduced cost is negative. `false` on unboundedness.
fn iterate(
    t: &mut [Vec<BigRational>],
    obj: &mut [BigRational],
    basis: &mut [usize],
    cols: usize,
) -> bool {
    let width = obj.len();
    loop {
        let Some(e) = (0..cols).find(|&j| obj[j].is_negative()) else {
            return true;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[e].is_positive() {
                let ratio = &row[width - 1] / &row[e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return false;
        };
        pivot(t, obj, basis, r, e);
    }
}

fn pivot(
    t: &mut [Vec<BigRational>],
    obj: &mut [BigRational],
    basis: &mut [usize],
    r: usize,
    e: usize,
) {
    let scale = t[r][e].clone();
    for cell in t[r].iter_mut() {
        *cell /= &scale;
    }
    // Take the pivot row out so the other rows can borrow it while mutating.
    let prow = std::mem::take(&mut t[r]);
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[e].is_zero() {
            let w = row[e].clone();
            for (cell, base) in row.iter_mut().zip(&prow) {
                *cell -= &w * base;
            }
        }
    }
    if !obj[e].is_zero() {
        let w = obj[e].clone();
        for (cell, base) in obj.iter_mut().zip(&prow) {
            *cell -= &w * base;
        }
    }
    t[r] = prow;
    basis[r] = e;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn solves_a_textbook_program() {
        // max x0 + x1 s.t. x0 + 2 x1 ≤ 4, 3 x0 + x1 ≤ 6  → (8/5, 6/5), 14/5
        // standard form with slacks
        let a = vec![
            vec![r(1, 1), r(2, 1), r(1, 1), r(0, 1)],
            vec![r(3, 1), r(1, 1), r(0, 1), r(1, 1)],
        ];
        let b = vec![r(4, 1), r(6, 1)];
        let c = vec![r(-1, 1), r(-1, 1), r(0, 1), r(0, 1)];
        match simplex_min(&a, &b, &c) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x[0], r(8, 5));
                assert_eq!(x[1], r(6, 5));
                assert_eq!(value, r(-14, 5));
            }
            _ => panic!("expected an optimum"),
        }
    }

    #[test]
    fn detects_infeasibility_and_unboundedness() {
        // x0 = 1 and x0 = 2
        let a = vec![vec![r(1, 1)], vec![r(1, 1)]];
        let b = vec![r(1, 1), r(2, 1)];
        assert!(matches!(
            simplex_min(&a, &b, &[r(0, 1)]),
            LpOutcome::Infeasible
        ));

        // min −x0 with no constraints
        assert!(matches!(
            simplex_min(&[], &[], &[r(-1, 1)]),
            LpOutcome::Unbounded
        ));
    }

    #[test]
    fn handles_negative_rhs_and_redundant_rows() {
        // −x0 = −3 twice over
        let a = vec![vec![r(-1, 1)], vec![r(-1, 1)]];
        let b = vec![r(-3, 1), r(-3, 1)];
        match simplex_min(&a, &b, &[r(1, 1)]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x[0], r(3, 1));
                assert_eq!(value, r(3, 1));
            }
            _ => panic!("expected an optimum"),
        }
    }
}
