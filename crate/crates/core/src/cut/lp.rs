//! Exact phase-1 simplex for `A x = b, x >= 0`.
//!
//! Dense tableau over rationals with Bland's rule, so it terminates and is
//! deterministic for a fixed column order. Only feasibility is decided; the
//! returned point is whatever basic feasible solution the pivots reach.

use crate::rational::Rational;

/// A basic feasible solution of `A x = b, x >= 0`, or `None` if infeasible.
/// `a` is row-major with `b.len()` rows.
pub(crate) fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = b.len();
    let cols = a.first().map_or(0, Vec::len);
    let width = cols + rows + 1;
    let rhs = width - 1;

    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row = Vec::with_capacity(width);
        for j in 0..cols {
            row.push(if flip {
                -a[i][j].clone()
            } else {
                a[i][j].clone()
            });
        }
        for k in 0..rows {
            row.push(if k == i {
                Rational::one()
            } else {
                Rational::zero()
            });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    loop {
        // Reduced cost of column j for "minimize the sum of artificials" is
        // minus the sum of its entries over rows whose basic variable is
        // artificial.
        let entering = (0..cols).find(|&j| {
            let mut s = Rational::zero();
            for (i, row) in t.iter().enumerate() {
                if basis[i] >= cols && !row[j].is_zero() {
                    s += &row[j];
                }
            }
            s.is_positive()
        });
        let Some(j) = entering else { break };

        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[j].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[j];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase 1 is bounded below by zero, so a positive entry always exists.
        let (r, _) = leave.expect("phase-1 objective is bounded");
        pivot(&mut t, r, j);
        basis[r] = j;
    }

    let infeasible = t
        .iter()
        .zip(&basis)
        .any(|(row, &v)| v >= cols && !row[rhs].is_zero());
    if infeasible {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &v) in t.iter().zip(&basis) {
        if v < cols {
            x[v] = row[rhs].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        if !v.is_zero() {
            *v = &*v / &p;
        }
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v = &*v - &(&f * pv);
            }
        }
    }
}
