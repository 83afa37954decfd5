//! Small dense linear-algebra helpers. Everything here is sized for the
//! dimensions this crate works in (n up to a few dozen).

/// Rank of an m x n matrix by Gaussian elimination with partial pivoting.
/// A pivot counts if it exceeds `tol_rel` times the largest entry of the
/// input matrix.
pub(crate) fn rank(mut rows: Vec<Vec<f64>>, tol_rel: f64) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    let max_abs = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, &v| a.max(v.abs()));
    if max_abs == 0.0 {
        return 0;
    }
    let tol = tol_rel * max_abs;
    let mut rank = 0;
    let mut col = 0;
    while rank < m && col < n {
        let mut pivot_row = rank;
        let mut pivot_val = rows[rank][col].abs();
        for (i, row) in rows.iter().enumerate().skip(rank + 1) {
            let v = row[col].abs();
            if v > pivot_val {
                pivot_row = i;
                pivot_val = v;
            }
        }
        if pivot_val <= tol {
            col += 1;
            continue;
        }
        rows.swap(rank, pivot_row);
        let (upper, lower) = rows.split_at_mut(rank + 1);
        let pivot_entries = &upper[rank][col..];
        let pivot = pivot_entries[0];
        for row in lower.iter_mut() {
            let factor = row[col] / pivot;
            if factor != 0.0 {
                for (dst, src) in row[col..].iter_mut().zip(pivot_entries) {
                    *dst -= factor * src;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Euclidean distance of `y` from the line spanned by `x`, relative to
/// `‖y‖`. Returns 0 when either vector is zero, so a threshold test on the
/// result doubles as a nonzero check.
pub(crate) fn residual_ratio(x: &[f64], y: &[f64]) -> f64 {
    let xx: f64 = x.iter().map(|v| v * v).sum();
    let yy: f64 = y.iter().map(|v| v * v).sum();
    if xx == 0.0 || yy == 0.0 {
        return 0.0;
    }
    let xy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let t = xy / xx;
    let rr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - t * a;
            r * r
        })
        .sum();
    (rr / yy).sqrt()
}
