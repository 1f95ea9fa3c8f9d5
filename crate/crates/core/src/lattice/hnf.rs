use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Column-style Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `m · u = h`. The matrix `h` is in
/// lower column-echelon form: pivot `k` sits in column `k` at row `r_k`
/// (with `r_0 < r_1 < …`), it is positive, everything above it in its column
/// is zero, and the entries to its left in row `r_k` lie in `[0, pivot)`.
/// Columns past the rank are zero.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols());
    let cols = m.cols();
    let mut col = 0;
    for row in 0..m.rows() {
        if col == cols {
            break;
        }
        // gcd-combine every column right of `col` into `col`
        for j in col + 1..cols {
            if h[(row, j)].is_zero() {
                continue;
            }
            let a = h[(row, col)].clone();
            let b = h[(row, j)].clone();
            let eg = a.extended_gcd(&b);
            let g = eg.gcd;
            // (col, j) ← (s·col + t·j, −(b/g)·col + (a/g)·j); determinant 1
            let s = eg.x;
            let t = eg.y;
            let neg_b = -(&b / &g);
            let a_g = &a / &g;
            h.combine_cols(col, j, [&s, &t, &neg_b, &a_g]);
            u.combine_cols(col, j, [&s, &t, &neg_b, &a_g]);
        }
        if h[(row, col)].is_zero() {
            continue;
        }
        if h[(row, col)].is_negative() {
            h.negate_col(col);
            u.negate_col(col);
        }
        let pivot = h[(row, col)].clone();
        for j in 0..col {
            let q = h[(row, j)].div_floor(&pivot);
            if !q.is_zero() {
                let f = -q;
                h.add_col_multiple(j, col, &f);
                u.add_col_multiple(j, col, &f);
            }
        }
        col += 1;
    }
    (h, u)
}

/// Number of nonzero columns of a column-style HNF.
pub(crate) fn hnf_rank(h: &IntMatrix) -> usize {
    (0..h.cols())
        .take_while(|&j| (0..h.rows()).any(|i| !h[(i, j)].is_zero()))
        .count()
}

/// Pivot row of every nonzero column of a column-style HNF.
pub(crate) fn pivot_rows(h: &IntMatrix) -> Vec<usize> {
    (0..hnf_rank(h))
        .map(|j| {
            (0..h.rows())
                .find(|&i| !h[(i, j)].is_zero())
                .expect("nonzero column has a pivot")
        })
        .collect()
}

/// Whether `u` is square with determinant ±1.
pub fn is_unimodular(u: &IntMatrix) -> bool {
    u.rows() == u.cols() && u.determinant().abs().is_one()
}

/// Checks the column-style HNF shape described on [`hermite_normal_form`].
pub fn is_column_hnf(h: &IntMatrix) -> bool {
    let rank = hnf_rank(h);
    if (rank..h.cols()).any(|j| (0..h.rows()).any(|i| !h[(i, j)].is_zero())) {
        return false;
    }
    let pivots = pivot_rows(h);
    for (k, &r) in pivots.iter().enumerate() {
        if k > 0 && r <= pivots[k - 1] {
            return false;
        }
        let p = &h[(r, k)];
        if !p.is_positive() {
            return false;
        }
        for j in 0..k {
            let e = &h[(r, j)];
            if e.is_negative() || e >= p {
                return false;
            }
        }
    }
    true
}

pub(crate) fn zero_vec(n: usize) -> Vec<BigInt> {
    vec![BigInt::zero(); n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_fixed() {
        let id = IntMatrix::identity(3);
        let (h, u) = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn diagonal_is_fixed() {
        let m = IntMatrix::from_diagonal(&[2i64, 3]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, m);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn two_by_two_defining_equations() {
        let m = IntMatrix::from_rows(2, [[1i64, 2], [3, 4]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(&m * &u, h);
        assert!(is_unimodular(&u));
        assert!(is_column_hnf(&h));
        // column lattice of m has determinant 2: pivots 1 and 2
        assert_eq!(h, IntMatrix::from_rows(2, [[1i64, 0], [1, 2]]));
    }

    #[test]
    fn rank_deficient_rows() {
        let m = IntMatrix::from_rows(3, [[2i64, 4, 6], [1, 2, 3]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(&m * &u, h);
        assert_eq!(hnf_rank(&h), 1);
        assert!(is_column_hnf(&h));
    }
}
