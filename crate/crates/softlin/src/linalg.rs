//! Crate-internal numeric kernels: tolerance-thresholded rank, null spaces,
//! least squares, span operations. Vectors cross this boundary as plain
//! `Vec<f64>` columns.

use nalgebra::{DMatrix, DVector};

/// Builds the n×k matrix whose columns are the given vectors.
pub(crate) fn to_matrix(columns: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    let k = columns.len();
    DMatrix::from_fn(n, k, |i, j| columns[j][i])
}

pub(crate) fn largest_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0.0;
    }
    m.singular_values().max()
}

/// Rank by singular-value thresholding at `tol · max(rows, cols) · σ_max`.
pub(crate) fn svd_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    let thresh = tol * m.nrows().max(m.ncols()) as f64 * smax;
    sv.iter().filter(|&&s| s > thresh).count()
}

pub(crate) fn rank_of_columns(columns: &[Vec<f64>], n: usize, tol: f64) -> usize {
    svd_rank(&to_matrix(columns, n), tol)
}

/// Greedy column-pivoted selection of a basis for the span of `columns`.
///
/// Keeps the earliest columns whose residual against the already-accepted
/// ones exceeds the singular-value threshold; near-zero columns are dropped.
/// Returned columns are clones of input columns (not orthonormalized), so a
/// caller-supplied basis survives canonicalization unchanged.
pub(crate) fn canonical_basis(columns: &[Vec<f64>], n: usize, tol: f64) -> Vec<Vec<f64>> {
    if columns.is_empty() {
        return Vec::new();
    }
    let m = to_matrix(columns, n);
    let smax = largest_singular_value(&m);
    if smax == 0.0 {
        return Vec::new();
    }
    let thresh = tol * n.max(columns.len()) as f64 * smax;
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    let mut kept = Vec::new();
    for col in columns {
        let mut v = DVector::from_column_slice(col);
        for q in &ortho {
            let proj = q.dot(&v);
            v -= q * proj;
        }
        // re-orthogonalize once; classical single-pass MGS loses digits
        for q in &ortho {
            let proj = q.dot(&v);
            v -= q * proj;
        }
        let norm = v.norm();
        if norm > thresh {
            ortho.push(v / norm);
            kept.push(col.clone());
        }
    }
    kept
}

/// Orthonormal basis of the span (modified Gram-Schmidt with the same
/// thresholding as `canonical_basis`).
pub(crate) fn orthonormal_basis(columns: &[Vec<f64>], n: usize, tol: f64) -> Vec<Vec<f64>> {
    if columns.is_empty() {
        return Vec::new();
    }
    let m = to_matrix(columns, n);
    let smax = largest_singular_value(&m);
    if smax == 0.0 {
        return Vec::new();
    }
    let thresh = tol * n.max(columns.len()) as f64 * smax;
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for col in columns {
        let mut v = DVector::from_column_slice(col);
        for q in &ortho {
            let proj = q.dot(&v);
            v -= q * proj;
        }
        for q in &ortho {
            let proj = q.dot(&v);
            v -= q * proj;
        }
        let norm = v.norm();
        if norm > thresh {
            ortho.push(v / norm);
        }
    }
    ortho.iter().map(|q| q.as_slice().to_vec()).collect()
}

/// Row-reduces a copy of `m`, returning `(pivot (row, col) pairs, reduced matrix)`.
fn reduced_row_echelon(m: &DMatrix<f64>, thresh: f64) -> (Vec<(usize, usize)>, DMatrix<f64>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let (p, best) = (r..rows)
            .map(|i| (i, a[(i, c)].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if best <= thresh {
            continue;
        }
        a.swap_rows(p, r);
        let inv = 1.0 / a[(r, c)];
        for j in 0..cols {
            a[(r, j)] *= inv;
        }
        a[(r, c)] = 1.0;
        for i in 0..rows {
            if i != r {
                let f = a[(i, c)];
                if f != 0.0 {
                    for j in 0..cols {
                        a[(i, j)] -= f * a[(r, j)];
                    }
                    a[(i, c)] = 0.0;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    (pivots, a)
}

fn rref_threshold(m: &DMatrix<f64>, tol: f64) -> f64 {
    let smax = largest_singular_value(m);
    if smax == 0.0 {
        // all-zero matrix: any positive threshold keeps every column free
        f64::MIN_POSITIVE
    } else {
        tol * m.nrows().max(m.ncols()) as f64 * smax
    }
}

/// One deterministic null-space vector of the matrix with the given columns,
/// or `None` at full column rank. The first free column (in declaration
/// order) gets coefficient 1 and pivot coefficients are back-substituted.
pub(crate) fn nullspace_vector(columns: &[Vec<f64>], n: usize, tol: f64) -> Option<Vec<f64>> {
    let m = to_matrix(columns, n);
    let basis = nullspace_basis_of(&m, tol);
    basis.into_iter().next()
}

/// Full null-space basis (one vector per free column).
pub(crate) fn nullspace_basis_of(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    let (pivots, a) = reduced_row_echelon(m, rref_threshold(m, tol));
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for j in 0..cols {
        if pivot_cols.contains(&j) {
            continue;
        }
        let mut v = vec![0.0; cols];
        v[j] = 1.0;
        for &(pr, pc) in &pivots {
            v[pc] = -a[(pr, j)];
        }
        out.push(v);
    }
    out
}

/// Least-squares coefficients minimizing ‖B·c − z‖₂ (SVD pseudo-inverse).
pub(crate) fn least_squares_coeffs(basis: &[Vec<f64>], n: usize, z: &[f64]) -> Vec<f64> {
    if basis.is_empty() {
        return Vec::new();
    }
    let b = to_matrix(basis, n);
    let svd = b.svd(true, true);
    let rhs = DVector::from_column_slice(z);
    let sol = svd
        .solve(&rhs, f64::EPSILON * n.max(basis.len()) as f64)
        .expect("svd.solve with computed u/v");
    sol.as_slice().to_vec()
}

/// Euclidean distance from `z` to the span of `basis`.
pub(crate) fn euclidean_distance_to_span(basis: &[Vec<f64>], n: usize, z: &[f64]) -> f64 {
    if basis.is_empty() {
        return DVector::from_column_slice(z).norm();
    }
    let coeffs = least_squares_coeffs(basis, n, z);
    let mut residual = z.to_vec();
    for (c, col) in coeffs.iter().zip(basis) {
        for (r, &x) in residual.iter_mut().zip(col) {
            *r -= c * x;
        }
    }
    DVector::from_column_slice(&residual).norm()
}

/// Least-squares residual membership test for the span of `basis`.
pub(crate) fn span_contains(basis: &[Vec<f64>], n: usize, z: &[f64], tol: f64) -> bool {
    euclidean_distance_to_span(basis, n, z) <= tol
}

/// Column-space inclusion span(a) ⊆ span(b) via rank([b]) = rank([b|a]).
pub(crate) fn span_included(a: &[Vec<f64>], b: &[Vec<f64>], n: usize, tol: f64) -> bool {
    if a.is_empty() {
        return true;
    }
    let rank_b = rank_of_columns(b, n, tol);
    let mut stacked = b.to_vec();
    stacked.extend(a.iter().cloned());
    rank_of_columns(&stacked, n, tol) == rank_b
}

/// Intersection of two spans by null-space stacking on orthonormalized bases:
/// null([Qa | −Qb]) maps through Qa onto span(a) ∩ span(b).
pub(crate) fn intersect_spans(a: &[Vec<f64>], b: &[Vec<f64>], n: usize, tol: f64) -> Vec<Vec<f64>> {
    let qa = orthonormal_basis(a, n, tol);
    let qb = orthonormal_basis(b, n, tol);
    if qa.is_empty() || qb.is_empty() {
        return Vec::new();
    }
    let stacked: Vec<Vec<f64>> = qa
        .iter()
        .cloned()
        .chain(qb.iter().map(|c| c.iter().map(|&x| -x).collect()))
        .collect();
    let m = to_matrix(&stacked, n);
    let null = nullspace_basis_of(&m, tol);
    let mut vectors = Vec::new();
    for c in null {
        let mut w = vec![0.0; n];
        for (j, col) in qa.iter().enumerate() {
            for (wi, &x) in w.iter_mut().zip(col) {
                *wi += c[j] * x;
            }
        }
        vectors.push(w);
    }
    canonical_basis(&vectors, n, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn e(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    #[test]
    fn rank_thresholding() {
        assert_eq!(rank_of_columns(&[e(3, 0), e(3, 1)], 3, TOL), 2);
        assert_eq!(
            rank_of_columns(&[e(3, 0), vec![2.0, 0.0, 0.0]], 3, TOL),
            1
        );
        assert_eq!(rank_of_columns(&[vec![0.0; 3]], 3, TOL), 0);
        assert_eq!(rank_of_columns(&[], 3, TOL), 0);
    }

    #[test]
    fn canonical_basis_keeps_original_columns() {
        let cols = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 1.0]];
        let basis = canonical_basis(&cols, 2, TOL);
        assert_eq!(basis, vec![vec![1.0, 1.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn nullspace_vector_first_free_column() {
        // columns (1,0) and (2,0): c = (-2, 1) after back-substitution
        let c = nullspace_vector(&[vec![1.0, 0.0], vec![2.0, 0.0]], 2, TOL).unwrap();
        assert!((c[0] - -2.0).abs() < 1e-12);
        assert!((c[1] - 1.0).abs() < 1e-12);
        assert!(nullspace_vector(&[e(2, 0), e(2, 1)], 2, TOL).is_none());
    }

    #[test]
    fn distance_and_membership() {
        let basis = vec![e(3, 1), e(3, 2)];
        assert!(span_contains(&basis, 3, &[0.0, 1.0, 1.0], TOL));
        assert!(!span_contains(&basis, 3, &[1.0, 0.0, 0.0], TOL));
        let d = euclidean_distance_to_span(&basis, 3, &[1.0, 2.0, 3.0]);
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inclusion_by_rank() {
        assert!(span_included(&[e(3, 0)], &[e(3, 0), e(3, 1)], 3, TOL));
        assert!(!span_included(&[e(3, 2)], &[e(3, 0)], 3, TOL));
        assert!(span_included(&[], &[e(3, 0)], 3, TOL));
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        // span{e1,e2} ∩ span{e2,e3} = span{e2}
        let a = vec![e(3, 0), e(3, 1)];
        let b = vec![e(3, 1), e(3, 2)];
        let inter = intersect_spans(&a, &b, 3, TOL);
        assert_eq!(inter.len(), 1);
        let v = &inter[0];
        assert!(v[0].abs() < 1e-9 && v[2].abs() < 1e-9 && v[1].abs() > 0.5);
    }

    #[test]
    fn disjoint_spans_intersect_trivially() {
        let inter = intersect_spans(&[e(3, 0)], &[e(3, 1)], 3, TOL);
        assert!(inter.is_empty());
    }
}
