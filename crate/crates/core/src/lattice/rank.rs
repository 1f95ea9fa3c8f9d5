//! Exact ranks over the rationals by fraction-free elimination.
//!
//! Dense matrices go through Bareiss elimination, whose intermediate entries
//! are minors of the input and hence stay exact under integer division.
//! Sparse matrices (the Koszul and toric strands) are eliminated row by row
//! with integer row operations followed by division by the row content; the
//! rank over ℤ-row-operations with content removal equals the rank over ℚ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

pub(crate) struct BareissOutcome {
    pub rank: usize,
    /// Determinant for square input, zero otherwise.
    pub determinant: BigInt,
}

pub(crate) fn bareiss(mut m: IntMatrix) -> BareissOutcome {
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut negate = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap_rows(p, r);
            negate = !negate;
        }
        let pivot = m[(r, c)].clone();
        for i in r + 1..rows {
            let lead = m[(i, c)].clone();
            for j in c + 1..cols {
                let v = &pivot * &m[(i, j)] - &lead * &m[(r, j)];
                m[(i, j)] = v / &prev;
            }
            m[(i, c)] = BigInt::zero();
        }
        // entries of rows above r keep their values; only the trailing block changes
        prev = pivot;
        r += 1;
    }
    let determinant = if rows == cols && r == rows {
        let d = if rows == 0 {
            BigInt::one()
        } else {
            m[(rows - 1, cols - 1)].clone()
        };
        if negate {
            -d
        } else {
            d
        }
    } else {
        BigInt::zero()
    };
    BareissOutcome { rank: r, determinant }
}

/// Rank over ℚ of an integer matrix.
pub fn rank(m: &IntMatrix) -> usize {
    bareiss(m.clone()).rank
}

/// A sparse integer row: `(column, value)` pairs, strictly increasing columns,
/// no stored zeros.
pub type SparseRow = Vec<(usize, i64)>;

/// Rank over ℚ of a sparse integer matrix given by its rows.
///
/// Elimination runs first in checked `i64` arithmetic and restarts in
/// arbitrary precision if any intermediate value overflows, so the answer is
/// always exact.
pub fn sparse_rank(rows: &[SparseRow]) -> usize {
    match eliminate::<i64>(rows) {
        Some(r) => r,
        None => eliminate::<BigInt>(rows).expect("arbitrary-precision elimination cannot overflow"),
    }
}

/// Scalar used by the sparse eliminator. Operations return `None` on overflow.
trait Scalar: Clone + PartialEq {
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn gcd(&self, other: &Self) -> Self;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    fn exact_div(&self, other: &Self) -> Self;
    fn abs_is_one(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn negated(&self) -> Option<Self>;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i64::checked_mul(*self, *other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        i64::checked_sub(*self, *other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
    fn abs_is_one(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
    fn abs_is_one(&self) -> bool {
        self.abs().is_one()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
}

fn eliminate<S: Scalar>(rows: &[SparseRow]) -> Option<usize> {
    // pivot rows keyed by their leading column; each stored row is primitive
    // with a positive leading entry
    let mut pivots: BTreeMap<usize, Vec<(usize, S)>> = BTreeMap::new();
    // process sparser rows first: they create less fill
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| (rows[i].len(), rows[i].first().map(|e| e.0)));
    for &i in &order {
        let mut row: Vec<(usize, S)> = rows[i]
            .iter()
            .filter(|e| e.1 != 0)
            .map(|&(c, v)| (c, S::from_i64(v)))
            .collect();
        while let Some(&(lead_col, _)) = row.first() {
            match pivots.get(&lead_col) {
                Some(pivot) => {
                    row = reduce(&row, pivot)?;
                }
                None => {
                    let row = normalize(row)?;
                    pivots.insert(lead_col, row);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// Eliminates the leading entry of `row` using `pivot` (same leading column).
fn reduce<S: Scalar>(row: &[(usize, S)], pivot: &[(usize, S)]) -> Option<Vec<(usize, S)>> {
    let a = &pivot[0].1;
    let b = &row[0].1;
    let g = a.gcd(b);
    let fa = a.exact_div(&g);
    let fb = b.exact_div(&g);
    // new = fa·row − fb·pivot
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (col, val) = if ci < cj {
            let v = fa.checked_mul(&row[i].1)?;
            i += 1;
            (ci, v)
        } else if cj < ci {
            let v = S::from_i64(0).checked_sub(&fb.checked_mul(&pivot[j].1)?)?;
            j += 1;
            (cj, v)
        } else {
            let v = fa
                .checked_mul(&row[i].1)?
                .checked_sub(&fb.checked_mul(&pivot[j].1)?)?;
            i += 1;
            j += 1;
            (ci, v)
        };
        if !val.is_nil() {
            out.push((col, val));
        }
    }
    Some(content_reduce(out))
}

fn content_reduce<S: Scalar>(mut row: Vec<(usize, S)>) -> Vec<(usize, S)> {
    if row.iter().any(|e| e.1.abs_is_one()) {
        return row;
    }
    let mut g = S::from_i64(0);
    for e in &row {
        g = g.gcd(&e.1);
        if g.abs_is_one() {
            return row;
        }
    }
    if !g.is_nil() {
        for e in &mut row {
            e.1 = e.1.exact_div(&g);
        }
    }
    row
}

fn normalize<S: Scalar>(row: Vec<(usize, S)>) -> Option<Vec<(usize, S)>> {
    let mut row = content_reduce(row);
    if row[0].1.is_negative() {
        for e in &mut row {
            e.1 = e.1.negated()?;
        }
    }
    Some(row)
}
