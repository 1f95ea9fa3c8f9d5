//! Exact integer linear algebra: Hermite and Smith normal forms, ranks,
//! lattice bases, lattice membership and sublattice indices.
//!
//! Everything here is arbitrary precision. Lattices are given by generator
//! rows; a basis is returned as the rows of an [`IntMatrix`].

mod hnf;
mod matrix;
mod rank;
mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub use hnf::{hermite_normal_form, is_column_hnf, is_unimodular};
pub use matrix::IntMatrix;
pub use rank::{rank, sparse_rank, SparseRow};
pub use snf::{smith_normal_form, SnfResult};

pub(crate) use hnf::hnf_rank;

/// Index of a sublattice in an ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeIndex {
    Finite(BigInt),
    /// The sublattice has lower rank than the ambient lattice.
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(q) => Some(q),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(q) => write!(f, "{q}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// Index of the lattice spanned by the rows of `generators` in `ℤ^ambient_rank`.
pub fn sublattice_index(generators: &IntMatrix, ambient_rank: usize) -> LatticeIndex {
    assert_eq!(generators.cols(), ambient_rank, "generator width != ambient rank");
    let snf = smith_normal_form(generators);
    if snf.rank < ambient_rank {
        return LatticeIndex::Infinite;
    }
    LatticeIndex::Finite(snf.nonzero_invariants().iter().product())
}

/// Index of the lattice spanned by the rows of `generators` inside its
/// saturation `span_ℚ(generators) ∩ ℤⁿ`. Always finite; 1 for the zero lattice.
pub fn saturation_index(generators: &IntMatrix) -> BigInt {
    let snf = smith_normal_form(generators);
    snf.nonzero_invariants().iter().product()
}

/// A ℤ-basis (as rows) of the lattice generated by the rows of `generators`.
///
/// The basis is read off the column-style HNF of the transpose, so it is
/// canonical for the lattice.
pub fn lattice_basis(generators: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(&generators.transpose());
    let r = hnf_rank(&h);
    IntMatrix::from_rows(generators.cols(), (0..r).map(|j| h.column(j)))
}

/// Error returned by [`coordinates_in_basis`] when the point is not a lattice
/// vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("point is not in the lattice")]
pub struct NotInLattice;

/// Integer coordinates `x` with `Σ xᵢ·basisᵢ = point`.
///
/// The rows of `basis` must be linearly independent.
pub fn coordinates_in_basis(basis: &IntMatrix, point: &[BigInt]) -> Result<Vec<BigInt>, NotInLattice> {
    assert_eq!(basis.cols(), point.len(), "point dimension mismatch");
    let r = basis.rows();
    let (h, u) = hermite_normal_form(&basis.transpose());
    debug_assert_eq!(hnf_rank(&h), r, "basis rows must be independent");
    // solve h·y = point by forward substitution along pivot rows
    let pivots = hnf::pivot_rows(&h);
    let mut y = hnf::zero_vec(r);
    for (k, &pr) in pivots.iter().enumerate() {
        let mut rhs = point[pr].clone();
        for (j, yj) in y.iter().enumerate().take(k) {
            rhs -= &h[(pr, j)] * yj;
        }
        let (q, rem) = rhs.div_rem(&h[(pr, k)]);
        if !rem.is_zero() {
            return Err(NotInLattice);
        }
        y[k] = q;
    }
    // the non-pivot rows must agree too
    let image = h.apply(&y);
    if image.as_slice() != point {
        return Err(NotInLattice);
    }
    Ok(u.apply(&y))
}

/// A ℤ-basis (as rows) of the integer kernel `{x ∈ ℤⁿ : m·x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(m);
    let r = hnf_rank(&h);
    IntMatrix::from_rows(m.cols(), (r..m.cols()).map(|j| u.column(j)))
}

/// Divides a vector by the gcd of its entries. The zero vector is returned as is.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn index_of_standard_basis() {
        assert_eq!(
            sublattice_index(&IntMatrix::identity(3), 3),
            LatticeIndex::Finite(BigInt::one())
        );
    }

    #[test]
    fn index_of_even_lattice() {
        let g = IntMatrix::from_rows(2, [[2i64, 0], [0, 2]]);
        // cosets of 2ℤ² in ℤ² by brute force over [0,2)²
        let cosets = (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).count();
        assert_eq!(sublattice_index(&g, 2), LatticeIndex::Finite(BigInt::from(cosets)));
    }

    #[test]
    fn index_of_rank_deficient() {
        let g = IntMatrix::from_rows(2, [[1i64, 0]]);
        assert_eq!(sublattice_index(&g, 2), LatticeIndex::Infinite);
    }

    #[test]
    fn basis_of_parity_lattice() {
        let g = IntMatrix::from_rows(2, [[2i64, 0], [0, 2], [1, 1]]);
        let b = lattice_basis(&g);
        assert_eq!(b.rows(), 2);
        for row in g.row_vecs() {
            assert!(coordinates_in_basis(&b, &row).is_ok());
        }
        for row in b.row_vecs() {
            let s: BigInt = row.iter().sum();
            assert!(s.is_even());
        }
        assert_eq!(sublattice_index(&b, 2), LatticeIndex::Finite(BigInt::from(2)));
    }

    #[test]
    fn basis_of_single_vector() {
        let g = IntMatrix::from_rows(2, [[3i64, 6]]);
        assert_eq!(lattice_basis(&g), g);
    }

    #[test]
    fn basis_of_standard_lattice() {
        let b = lattice_basis(&IntMatrix::identity(3));
        assert_eq!(b.rows(), 3);
        assert!(b.determinant() == BigInt::one() || b.determinant() == -BigInt::one());
    }

    #[test]
    fn coordinates() {
        let b = IntMatrix::from_rows(2, [[2i64, 0], [0, 2]]);
        assert_eq!(coordinates_in_basis(&b, &big(&[4, 2])), Ok(big(&[2, 1])));
        assert_eq!(coordinates_in_basis(&b, &big(&[1, 0])), Err(NotInLattice));
    }

    #[test]
    fn coordinates_non_full_rank() {
        let b = IntMatrix::from_rows(3, [[1i64, 1, 0]]);
        assert_eq!(coordinates_in_basis(&b, &big(&[3, 3, 0])), Ok(big(&[3])));
        assert_eq!(coordinates_in_basis(&b, &big(&[3, 3, 1])), Err(NotInLattice));
    }

    #[test]
    fn kernel() {
        let m = IntMatrix::from_rows(3, [[1i64, 1, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rows(), 2);
        for row in k.row_vecs() {
            assert!(m.apply(&row).iter().all(Zero::is_zero));
        }
        // the kernel lattice is saturated
        assert_eq!(saturation_index(&k), BigInt::one());
    }
}
