//! Lattice polytopes in vertex representation with an exact facet description.
//!
//! A [`Polytope`] is built from any finite point set: duplicates and
//! non-vertices are dropped, the affine dimension is computed by exact rank,
//! and the facets are found by brute force over affinely independent point
//! subsets. Polytopes that are not full-dimensional carry the equations of
//! their affine hull, and every interior test is relative to that hull.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::lattice::{integer_kernel, lattice_basis, primitive, rank, IntMatrix};
use crate::{Error, Result};

/// A lattice point with machine-sized coordinates.
pub type Point = Vec<i64>;

/// Coordinates and facet data must stay below this bound for the machine
/// integer fast paths used by enumeration.
pub(crate) const MACHINE_LIMIT: i64 = 1 << 40;

/// Largest supported number of affinely independent subsets examined during
/// facet enumeration.
const SUBSET_CAP: u128 = 20_000_000;

/// An inequality `normal · x ≤ offset`, or an equation `normal · x = offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl Halfspace {
    fn value(&self, x: &[BigInt]) -> BigInt {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Irredundant H-description: `P = {x : equations hold, facets hold}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FacetSystem {
    /// Facet inequalities with primitive normals lying in the linear span of
    /// `P − P`, sorted.
    pub facets: Vec<Halfspace>,
    /// Affine hull equations (empty for full-dimensional `P`).
    pub equations: Vec<Halfspace>,
}

/// Machine-integer copy of the polytope data used on hot paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct MachineSystem {
    pub vertices: Vec<Point>,
    pub facets: Vec<(Vec<i64>, i64)>,
    pub equations: Vec<(Vec<i64>, i64)>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<Vec<BigInt>>,
    dim: usize,
    system: FacetSystem,
    machine: Option<MachineSystem>,
}

impl Polytope {
    /// Convex hull of `points`.
    pub fn new(points: &[Vec<BigInt>]) -> Result<Self> {
        make_polytope(points)
    }

    pub fn from_i64<R: AsRef<[i64]>>(points: &[R]) -> Result<Self> {
        let pts: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.as_ref().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        make_polytope(&pts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    /// The lexicographically smallest vertex.
    pub fn base_vertex(&self) -> &[BigInt] {
        &self.vertices[0]
    }

    pub fn facet_system(&self) -> &FacetSystem {
        &self.system
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    /// Vertices as machine integers, if every coordinate is within bounds.
    pub fn vertices_i64(&self) -> Option<Vec<Point>> {
        self.machine.as_ref().map(|m| m.vertices.clone())
    }

    pub(crate) fn machine(&self) -> Result<&MachineSystem> {
        self.machine.as_ref().ok_or_else(|| {
            Error::CapExceeded("polytope coordinates exceed the machine-integer range".into())
        })
    }

    /// Whether `x ∈ kP`.
    pub fn contains(&self, x: &[i64], k: u64) -> Result<bool> {
        self.check_point(x)?;
        let m = self.machine()?;
        let k = k as i128;
        Ok(m.equations.iter().all(|(a, b)| dot(a, x) == k * *b as i128)
            && m.facets.iter().all(|(a, b)| dot(a, x) <= k * *b as i128))
    }

    /// Whether `x` lies in the relative interior of `kP`.
    pub fn contains_interior(&self, x: &[i64], k: u64) -> Result<bool> {
        self.check_point(x)?;
        let m = self.machine()?;
        let k = k as i128;
        Ok(m.equations.iter().all(|(a, b)| dot(a, x) == k * *b as i128)
            && m.facets.iter().all(|(a, b)| dot(a, x) < k * *b as i128))
    }

    /// Arbitrary-precision membership test `x ∈ kP`.
    pub fn contains_big(&self, x: &[BigInt], k: &BigInt) -> Result<bool> {
        if x.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: x.len(),
            });
        }
        Ok(self.system.equations.iter().all(|h| h.value(x) == k * &h.offset)
            && self.system.facets.iter().all(|h| h.value(x) <= k * &h.offset))
    }

    fn check_point(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: x.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope")
            .field("ambient", &self.ambient)
            .field("dim", &self.dim)
            .field(
                "vertices",
                &self
                    .vertices
                    .iter()
                    .map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

#[inline]
pub(crate) fn dot(a: &[i64], x: &[i64]) -> i128 {
    a.iter().zip(x).map(|(&a, &x)| a as i128 * x as i128).sum()
}

/// Builds the polytope `conv(points)`: removes duplicates and non-vertices,
/// computes the affine dimension and the facet system.
pub fn make_polytope(points: &[Vec<BigInt>]) -> Result<Polytope> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let ambient = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != ambient) {
        return Err(Error::DimensionMismatch {
            expected: ambient,
            found: bad.len(),
        });
    }
    let pts: Vec<Vec<BigInt>> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let dim = affine_dimension(&pts);
    let system = facet_enumeration(&pts, dim)?;

    // a point is a vertex iff the normals of its tight facets together with
    // the hull equations have full rank
    let eq_rows: Vec<Vec<BigInt>> = system.equations.iter().map(|h| h.normal.clone()).collect();
    let vertices: Vec<Vec<BigInt>> = pts
        .iter()
        .filter(|p| {
            let mut rows = eq_rows.clone();
            rows.extend(
                system
                    .facets
                    .iter()
                    .filter(|h| h.value(p) == h.offset)
                    .map(|h| h.normal.clone()),
            );
            rank(&IntMatrix::from_rows(ambient, &rows)) == ambient
        })
        .cloned()
        .collect();

    let machine = machine_system(&vertices, &system);
    Ok(Polytope {
        ambient,
        vertices,
        dim,
        system,
        machine,
    })
}

fn difference_matrix(pts: &[Vec<BigInt>]) -> IntMatrix {
    let base = &pts[0];
    let n = base.len();
    IntMatrix::from_rows(
        n,
        pts[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect::<Vec<_>>()),
    )
}

fn affine_dimension(pts: &[Vec<BigInt>]) -> usize {
    rank(&difference_matrix(pts))
}

/// Complete irredundant H-description of `conv(points)`, which must have
/// affine dimension `dim`.
///
/// Every `dim`-subset of the points whose affine span is a hyperplane of the
/// affine hull yields a candidate normal; candidates with points on both
/// sides are discarded.
pub fn facet_enumeration(points: &[Vec<BigInt>], dim: usize) -> Result<FacetSystem> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let n = first.len();
    let diffs = difference_matrix(points);

    // canonical basis of the lattice orthogonal to P − P
    let kernel = integer_kernel(&diffs);
    let kernel = if kernel.rows() > 0 {
        lattice_basis(&kernel)
    } else {
        kernel
    };
    let equations: Vec<Halfspace> = kernel
        .row_vecs()
        .into_iter()
        .map(|normal| {
            let offset = normal.iter().zip(first).map(|(a, b)| a * b).sum();
            Halfspace { normal, offset }
        })
        .collect();
    if dim == 0 {
        return Ok(FacetSystem {
            facets: Vec::new(),
            equations,
        });
    }

    let m = points.len();
    if binomial_u128(m as u128, dim as u128) > SUBSET_CAP {
        return Err(Error::CapExceeded(format!(
            "facet enumeration over {m} points in dimension {dim}"
        )));
    }
    let eq_rows: Vec<Vec<BigInt>> = equations.iter().map(|h| h.normal.clone()).collect();
    let mut found: BTreeSet<Halfspace> = BTreeSet::new();
    for subset in Combinations::new(m, dim) {
        let base = &points[subset[0]];
        let mut rows = eq_rows.clone();
        rows.extend(
            subset[1..]
                .iter()
                .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect::<Vec<_>>()),
        );
        let k = integer_kernel(&IntMatrix::from_rows(n, &rows));
        if k.rows() != 1 {
            continue;
        }
        let normal = primitive(k.row(0));
        let offset: BigInt = normal.iter().zip(base).map(|(a, b)| a * b).sum();
        let (mut above, mut below) = (false, false);
        for p in points {
            let v: BigInt = normal.iter().zip(p).map(|(a, b)| a * b).sum();
            if v > offset {
                above = true;
            } else if v < offset {
                below = true;
            }
            if above && below {
                break;
            }
        }
        let h = match (above, below) {
            (false, _) => Halfspace { normal, offset },
            (true, false) => Halfspace {
                normal: normal.iter().map(|x| -x).collect(),
                offset: -offset,
            },
            (true, true) => continue,
        };
        found.insert(h);
    }
    Ok(FacetSystem {
        facets: found.into_iter().collect(),
        equations,
    })
}

fn machine_system(vertices: &[Vec<BigInt>], system: &FacetSystem) -> Option<MachineSystem> {
    fn small(v: &BigInt) -> Option<i64> {
        v.to_i64().filter(|x| x.abs() < MACHINE_LIMIT)
    }
    fn small_vec(v: &[BigInt]) -> Option<Vec<i64>> {
        v.iter().map(small).collect()
    }
    fn halfspaces(hs: &[Halfspace]) -> Option<Vec<(Vec<i64>, i64)>> {
        hs.iter()
            .map(|h| Some((small_vec(&h.normal)?, h.offset.to_i64()?)))
            .collect()
    }
    Some(MachineSystem {
        vertices: vertices.iter().map(|v| small_vec(v)).collect::<Option<_>>()?,
        facets: halfspaces(&system.facets)?,
        equations: halfspaces(&system.equations)?,
    })
}

pub(crate) fn binomial_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(cur);
            }
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    pub(crate) fn reeve() -> Polytope {
        Polytope::from_i64(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2]]).unwrap()
    }

    #[test]
    fn combinations_enumerate_all() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn unit_square_with_redundant_points() {
        let p = Polytope::from_i64(&[[0, 0], [1, 0], [0, 1], [1, 1], [1, 1], [0, 0]]).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facet_system().facets.len(), 4);
        assert!(p.facet_system().equations.is_empty());
    }

    #[test]
    fn non_vertices_removed() {
        // edge midpoint and interior point of 2·square
        let p = Polytope::from_i64(&[[0, 0], [2, 0], [0, 2], [2, 2], [1, 0], [1, 1]]).unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn reeve_is_simplex() {
        let p = reeve();
        assert_eq!(p.dim(), 3);
        assert!(p.is_simplex());
        assert_eq!(p.facet_system().facets.len(), 4);
    }

    #[test]
    fn unit_cube_facets() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push([x, y, z]);
                }
            }
        }
        let p = Polytope::from_i64(&pts).unwrap();
        let facets = &p.facet_system().facets;
        assert_eq!(facets.len(), 6);
        for h in facets {
            let nonzero: Vec<_> = h.normal.iter().filter(|x| !x.is_zero()).collect();
            assert_eq!(nonzero.len(), 1);
            let expect = if nonzero[0].is_positive() { 1 } else { 0 };
            assert_eq!(h.offset, BigInt::from(expect));
        }
    }

    #[test]
    fn simplex_facet_count() {
        for d in 1..=5usize {
            let mut pts = vec![vec![0i64; d]];
            for i in 0..d {
                let mut e = vec![0i64; d];
                e[i] = 1;
                pts.push(e);
            }
            let p = Polytope::from_i64(&pts).unwrap();
            assert_eq!(p.facet_system().facets.len(), d + 1);
        }
    }

    #[test]
    fn lower_dimensional_segment() {
        let p = Polytope::from_i64(&[[0, 0, 0], [2, 2, 2], [1, 1, 1]]).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.facet_system().equations.len(), 2);
        assert_eq!(p.facet_system().facets.len(), 2);
        assert!(p.contains(&[1, 1, 1], 1).unwrap());
        assert!(!p.contains(&[1, 1, 0], 1).unwrap());
        assert!(p.contains_interior(&[1, 1, 1], 1).unwrap());
        assert!(!p.contains_interior(&[2, 2, 2], 1).unwrap());
    }

    #[test]
    fn point_polytope() {
        let p = Polytope::from_i64(&[[3, -1]]).unwrap();
        assert_eq!(p.dim(), 0);
        assert!(p.facet_system().facets.is_empty());
        assert!(p.contains(&[6, -2], 2).unwrap());
        assert!(p.contains_interior(&[3, -1], 1).unwrap());
    }

    #[test]
    fn empty_and_ragged_rejected() {
        assert_eq!(Polytope::from_i64::<[i64; 2]>(&[]).unwrap_err(), Error::EmptyInput);
        let pts: Vec<Vec<i64>> = vec![vec![0, 0], vec![1]];
        assert!(matches!(
            Polytope::from_i64(&pts),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn membership() {
        let p = reeve();
        for v in p.vertices_i64().unwrap() {
            assert!(p.contains(&v, 1).unwrap());
            assert!(!p.contains_interior(&v, 1).unwrap());
        }
        assert!(!p.contains(&[5, 5, 5], 1).unwrap());
        assert!(p.contains_interior(&[1, 1, 1], 2).unwrap());
        assert_eq!(
            p.contains(&[0, 0], 1),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn parity_witness_lies_in_second_dilate() {
        let p = Polytope::from_i64(&[
            [0, 0, 0, 0],
            [1, 1, 0, 0],
            [1, 0, 1, 0],
            [1, 0, 0, 1],
            [0, 1, 1, 0],
            [0, 1, 0, 1],
            [0, 0, 1, 1],
        ])
        .unwrap();
        assert_eq!(p.dim(), 4);
        assert!(p.contains(&[1, 1, 1, 0], 2).unwrap());
        assert!(!p.contains(&[1, 1, 1, 0], 1).unwrap());
    }

    #[test]
    fn unit_simplex_interior_centroid() {
        for d in 1..=4usize {
            let mut pts = vec![vec![0i64; d]];
            for i in 0..d {
                let mut e = vec![0i64; d];
                e[i] = 1;
                pts.push(e);
            }
            let p = Polytope::from_i64(&pts).unwrap();
            let ones = vec![1i64; d];
            assert!(p.contains_interior(&ones, d as u64 + 1).unwrap());
            assert!(!p.contains_interior(&ones, d as u64).unwrap());
        }
    }
}
