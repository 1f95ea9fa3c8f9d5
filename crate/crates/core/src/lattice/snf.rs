use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `left · m · right = diag(d₁, …, d_r, 0, …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// `min(rows, cols)` nonnegative entries with `dᵢ | dᵢ₊₁`; zeros trail.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    /// The full diagonal matrix with the shape of the input.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, v) in self.diagonal.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }

    pub fn nonzero_invariants(&self) -> &[BigInt] {
        &self.diagonal[..self.rank]
    }
}

/// Smith normal form by repeated gcd elimination of rows and columns.
///
/// The pivot at each step is the smallest nonzero entry (ties broken by
/// position), so the output is deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);
        loop {
            let mut changed = false;
            // clear column t below the pivot
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let f = -q;
                a.add_row_multiple(i, t, &f);
                left.add_row_multiple(i, t, &f);
                if !a[(i, t)].is_zero() {
                    // remainder smaller than the pivot: swap it in
                    a.swap_rows(t, i);
                    left.swap_rows(t, i);
                    changed = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let f = -q;
                a.add_col_multiple(j, t, &f);
                right.add_col_multiple(j, t, &f);
                if !a[(t, j)].is_zero() {
                    a.swap_cols(t, j);
                    right.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: fold an offending row into row t
            let pivot = a[(t, t)].clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..n).map(|i| a[(i, i)].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    SnfResult {
        diagonal,
        rank,
        left,
        right,
    }
}

fn smallest_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let e = &a[(i, j)];
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::hnf::is_unimodular;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.left * m) * &s.right, s.diagonal_matrix());
        assert!(is_unimodular(&s.left));
        assert!(is_unimodular(&s.right));
        for w in s.diagonal.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert_eq!(s.rank, 0);
        assert!(s.diagonal.iter().all(Zero::is_zero));
    }

    #[test]
    fn diag_4_6() {
        let s = check(&IntMatrix::from_diagonal(&[4i64, 6]));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn identity() {
        let s = check(&IntMatrix::identity(4));
        assert!(s.diagonal.iter().all(|d| *d == BigInt::from(1)));
    }

    #[test]
    fn rectangular() {
        let m = IntMatrix::from_rows(3, [[2i64, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let s = check(&m);
        assert_eq!(
            s.diagonal,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }
}
