//! Dense phase-one simplex for small feasibility problems
//! `A·z = b` with some coordinates of `z` sign-constrained to be `≥ 0`.

/// Finds `z` with `A z = b` and `z[j] ≥ 0` for every `nonneg[j]`, or `None`.
/// `tol` is an absolute tolerance on the phase-one objective.
pub(crate) fn feasible_point(a: &[Vec<f64>], b: &[f64], nonneg: &[bool], tol: f64) -> Option<Vec<f64>> {
    let m = a.len();
    let n = nonneg.len();
    // Column layout: for each original variable one column (nonneg) or two (free split),
    // then one artificial per row.
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut ncols = 0;
    for &nn in nonneg {
        if nn {
            col_of.push((ncols, None));
            ncols += 1;
        } else {
            col_of.push((ncols, Some(ncols + 1)));
            ncols += 2;
        }
    }
    let art0 = ncols;
    let total = ncols + m;
    // Tableau rows: m constraint rows, each of width total + 1 (rhs last).
    let mut t = vec![vec![0.0; total + 1]; m];
    for (r, row) in a.iter().enumerate() {
        let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            let (p, q) = col_of[j];
            t[r][p] = sign * v;
            if let Some(q) = q {
                t[r][q] = -sign * v;
            }
        }
        t[r][art0 + r] = 1.0;
        t[r][total] = sign * b[r];
    }
    let mut basis: Vec<usize> = (art0..art0 + m).collect();
    // Phase-one objective: minimize the sum of artificials; reduced costs row.
    let mut cost = vec![0.0; total + 1];
    for row in &t {
        for j in 0..ncols {
            cost[j] -= row[j];
        }
        cost[total] -= row[total];
    }
    let eps = 1e-12;
    for _ in 0..50_000 {
        // Bland: first column with negative reduced cost.
        let Some(enter) = (0..total).find(|&j| cost[j] < -eps && !basis.contains(&j)) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for (r, row) in t.iter().enumerate() {
            if row[enter] > eps {
                let ratio = row[total] / row[enter];
                match leave {
                    None => leave = Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - eps || (ratio <= lratio + eps && basis[r] < basis[lr]) {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((pr, _)) = leave else {
            // Unbounded direction cannot happen in phase one; bail out.
            break;
        };
        let pv = t[pr][enter];
        for v in t[pr].iter_mut() {
            *v /= pv;
        }
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && row[enter].abs() > 0.0 {
                let f = row[enter];
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        let f = cost[enter];
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            *v -= f * p;
        }
        basis[pr] = enter;
    }
    let infeasibility = -cost[total];
    if infeasibility > tol {
        return None;
    }
    let mut raw = vec![0.0; total];
    for (r, &bcol) in basis.iter().enumerate() {
        raw[bcol] = t[r][total];
    }
    Some(
        col_of
            .iter()
            .map(|&(p, q)| raw[p] - q.map_or(0.0, |q| raw[q]))
            .collect(),
    )
}

/// Indices of a maximal linearly independent subset of rows (partial pivoting).
pub(crate) fn independent_rows(a: &[Vec<f64>], tol: f64) -> Vec<usize> {
    let Some(width) = a.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut basis: Vec<(usize, Vec<f64>)> = Vec::new(); // (pivot column, reduced row)
    let mut chosen = Vec::new();
    for (r, row) in a.iter().enumerate() {
        let mut v = row.clone();
        for (pc, brow) in &basis {
            let f = v[*pc];
            if f != 0.0 {
                for (x, y) in v.iter_mut().zip(brow) {
                    *x -= f * y;
                }
            }
        }
        let (pc, mag) = (0..width)
            .map(|j| (j, v[j].abs()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag > tol {
            let p = v[pc];
            for x in v.iter_mut() {
                *x /= p;
            }
            basis.push((pc, v));
            chosen.push(r);
            if chosen.len() == width {
                break;
            }
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_feasible() {
        // a + q = 1, a - q = -1  => a = 0, q = 1
        let a = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let z = feasible_point(&a, &[1.0, -1.0], &[false, true], 1e-9).unwrap();
        assert!((z[0]).abs() < 1e-9 && (z[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sign_makes_infeasible() {
        // q = -1 with q >= 0
        let a = vec![vec![1.0]];
        assert!(feasible_point(&a, &[-1.0], &[true], 1e-9).is_none());
        assert!(feasible_point(&a, &[-1.0], &[false], 1e-9).is_some());
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![1.0], vec![1.0]];
        assert!(feasible_point(&a, &[1.0, 2.0], &[false], 1e-9).is_none());
    }

    #[test]
    fn row_selection() {
        let a = vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![1.0, 1.0]];
        assert_eq!(independent_rows(&a, 1e-9), vec![0, 2]);
    }
}
