//! Exact linear programming and convex-hull vertex tests over rationals.
//!
//! Point sets here are tiny (tens of points in three or four dimensions), so
//! a dense two-phase simplex on big rationals is fast enough and removes any
//! question of floating-point tolerance from membership decisions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

/// Exact rational value of a finite double.
pub fn q_from_f64(v: f64) -> Q {
    BigRational::from_float(v).expect("finite value")
}

pub fn q_int(v: i64) -> Q {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Infeasible,
    Unbounded,
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`.
///
/// Two-phase tableau simplex with Bland's rule, so it terminates on
/// degenerate problems.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m, "rhs length");
    assert!(a.iter().all(|row| row.len() == n), "constraint width");

    // Phase 1 tableau: original columns, one artificial per row, rhs.
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut r: Vec<Q> = Vec::with_capacity(width);
        for v in row {
            r.push(if flip { -v.clone() } else { v.clone() });
        }
        for k in 0..m {
            r.push(if k == i { Q::one() } else { Q::zero() });
        }
        r.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut phase1_cost = vec![Q::zero(); n + m];
    for cost in phase1_cost.iter_mut().skip(n) {
        *cost = -Q::one();
    }
    match run_simplex(&mut t, &mut basis, &phase1_cost, n + m) {
        Pivoting::Optimal => {}
        Pivoting::Unbounded => unreachable!("phase one is bounded"),
    }
    let infeasibility: Q = basis
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= n)
        .map(|(i, _)| t[i][width - 1].clone())
        .sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificials out of the basis or drop redundant rows.
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, i, col);
                basis[i] = col;
                i += 1;
            } else {
                t.remove(i);
                basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    for row in t.iter_mut() {
        let rhs = row.pop().expect("rhs");
        row.truncate(n);
        row.push(rhs);
    }

    match run_simplex(&mut t, &mut basis, c, n) {
        Pivoting::Unbounded => LpOutcome::Unbounded,
        Pivoting::Optimal => {
            let mut x = vec![Q::zero(); n];
            for (i, &v) in basis.iter().enumerate() {
                x[v] = t[i][n].clone();
            }
            let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
            LpOutcome::Optimal { value, x }
        }
    }
}

enum Pivoting {
    Optimal,
    Unbounded,
}

fn run_simplex(t: &mut [Vec<Q>], basis: &mut [usize], c: &[Q], cols: usize) -> Pivoting {
    let rhs = t.first().map_or(cols, |r| r.len() - 1);
    loop {
        let entering = (0..cols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut r = c[j].clone();
            for (i, &bv) in basis.iter().enumerate() {
                if !t[i][j].is_zero() && !c[bv].is_zero() {
                    r -= &c[bv] * &t[i][j];
                }
            }
            r.is_positive()
        });
        let Some(col) = entering else {
            return Pivoting::Optimal;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..t.len() {
            if t[i][col].is_positive() {
                let ratio = &t[i][rhs] / &t[i][col];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Pivoting::Unbounded;
        };
        pivot(t, row, col);
        basis[row] = col;
    }
}

fn pivot(t: &mut [Vec<Q>], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

/// Smallest ∞-norm distance from `p` to the convex hull of `others`.
pub fn hull_distance(p: &[Q], others: &[&[Q]]) -> Q {
    let d = p.len();
    let k = others.len();
    assert!(k > 0, "hull of an empty set");
    // Columns: λ (k), δ, s⁺ (d), s⁻ (d).
    let cols = k + 1 + 2 * d;
    let mut a = Vec::with_capacity(2 * d + 1);
    let mut b = Vec::with_capacity(2 * d + 1);
    for i in 0..d {
        let mut plus = vec![Q::zero(); cols];
        let mut minus = vec![Q::zero(); cols];
        for (l, q) in others.iter().enumerate() {
            plus[l] = q[i].clone();
            minus[l] = -q[i].clone();
        }
        plus[k] = Q::one();
        minus[k] = Q::one();
        plus[k + 1 + i] = -Q::one();
        minus[k + 1 + d + i] = -Q::one();
        a.push(plus);
        b.push(p[i].clone());
        a.push(minus);
        b.push(-p[i].clone());
    }
    let mut sum = vec![Q::zero(); cols];
    for v in sum.iter_mut().take(k) {
        *v = Q::one();
    }
    a.push(sum);
    b.push(Q::one());
    let mut c = vec![Q::zero(); cols];
    c[k] = -Q::one();
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { value, .. } => -value,
        other => unreachable!("distance LP is feasible and bounded: {other:?}"),
    }
}

/// Indices of the hull vertices of `points`, in lexicographic order of the
/// points. A point counts as a vertex when its distance to the hull of the
/// remaining distinct points exceeds `eps`; `eps = 0` is exact.
pub fn convex_hull_indices(points: &[Vec<Q>], eps: &Q) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].cmp(&points[j]).then(i.cmp(&j)));
    order.dedup_by(|a, b| points[*a] == points[*b]);
    if order.len() <= 1 {
        return order;
    }
    let mut vertices = Vec::new();
    for &i in &order {
        let others: Vec<&[Q]> = order
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| points[j].as_slice())
            .collect();
        if hull_distance(&points[i], &others) > *eps {
            vertices.push(i);
        }
    }
    vertices
}

/// Largest `t ≥ 0` with `t·h` dominated by some convex combination of
/// `points`; `None` when unbounded (only when `h = 0`).
pub fn gauge(h: &[Q], points: &[Vec<Q>]) -> Option<Q> {
    let d = h.len();
    let k = points.len();
    assert!(k > 0, "gauge against an empty set");
    // Columns: λ (k), t, slack (d).
    let cols = k + 1 + d;
    let mut a = Vec::with_capacity(d + 1);
    let mut b = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row = vec![Q::zero(); cols];
        for (l, p) in points.iter().enumerate() {
            row[l] = -p[i].clone();
        }
        row[k] = h[i].clone();
        row[k + 1 + i] = Q::one();
        a.push(row);
        b.push(Q::zero());
    }
    let mut sum = vec![Q::zero(); cols];
    for v in sum.iter_mut().take(k) {
        *v = Q::one();
    }
    a.push(sum);
    b.push(Q::one());
    let mut c = vec![Q::zero(); cols];
    c[k] = Q::one();
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { value, .. } => Some(value),
        LpOutcome::Unbounded => None,
        LpOutcome::Infeasible => unreachable!("λ on any vertex with t = 0 is feasible"),
    }
}
