//! Graded pieces of the Ehrhart ring `R = k[P]`, minimal generator counts of
//! the toric ideal, and graded Betti numbers of `R` over `S = Sym R₁` via
//! Koszul homology. All ranks are exact.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dilates::{add, sub, Dilates};
use crate::ehrhart::interior_points;
use crate::lattice::{sparse_rank, SparseRow};
use crate::monoid::is_idp;
use crate::polytope::{binomial_u128, Combinations, Point, Polytope};
use crate::{Error, Result};

/// Default largest degree for [`toric_generator_counts`].
pub const TORIC_DEGREE_CAP: usize = 5;

/// Largest number of degree-`j` monomials the toric computation builds.
pub const MONOMIAL_CAP: u128 = 2_000_000;

/// Largest number of nonzeros in one Koszul differential.
pub const KOSZUL_NONZERO_CAP: u128 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    /// `dim R_j = L_P(j)`.
    pub ehrhart: Vec<u64>,
    /// `dim A_j` for `A = k[R₁]`: size of the `j`-fold sumset of `P ∩ ℤⁿ`.
    pub subalgebra: Vec<u64>,
    /// `dim Sym^j R₁ = C(N+j−1, j)`.
    pub symmetric: Vec<u128>,
}

pub fn graded_dims(p: &Polytope, max_j: usize) -> Result<GradedDims> {
    if max_j == 0 {
        return Err(Error::InvalidArgument("max_j must be at least 1".into()));
    }
    let mut dil = Dilates::new(p);
    dil.ensure(max_j)?;
    let ones = dil.layer(1).points.clone();
    let n = ones.len() as u128;
    let mut ehrhart = Vec::with_capacity(max_j + 1);
    let mut subalgebra = Vec::with_capacity(max_j + 1);
    let mut symmetric = Vec::with_capacity(max_j + 1);
    let mut sumset: HashSet<Point> = std::iter::once(vec![0; p.ambient_dim()]).collect();
    for j in 0..=max_j {
        if j > 0 {
            sumset = sumset
                .par_iter()
                .flat_map_iter(|z| ones.iter().map(move |x| add(z, x)))
                .collect();
        }
        ehrhart.push(dil.layer(j).len() as u64);
        subalgebra.push(sumset.len() as u64);
        symmetric.push(binomial_u128(n + j as u128 - 1, j as u128));
    }
    Ok(GradedDims {
        ehrhart,
        subalgebra,
        symmetric,
    })
}

/// Whether `P` is a simplex whose only boundary lattice points are its vertices.
pub fn is_clean_simplex(p: &Polytope) -> Result<bool> {
    if !p.is_simplex() {
        return Ok(false);
    }
    let mut dil = Dilates::new(p);
    let all = dil.count(1)?;
    let interior = interior_points(p, 1)?.len();
    Ok(all - interior == p.vertices().len())
}

/// Monomials of `Sym R₁` grouped by the lattice point they evaluate to.
/// A monomial is a non-decreasing list of indices into the degree-1 points.
type Fibers = BTreeMap<Point, Vec<Vec<u32>>>;

fn next_fibers(prev: &Fibers, ones: &[Point]) -> Fibers {
    let mut out = Fibers::new();
    for (z, monomials) in prev {
        for m in monomials {
            let start = m.last().map_or(0, |&i| i as usize);
            for (i, x) in ones.iter().enumerate().skip(start) {
                let mut m2 = m.clone();
                m2.push(i as u32);
                out.entry(add(z, x)).or_default().push(m2);
            }
        }
    }
    out
}

fn times(i: u32, m: &[u32]) -> Vec<u32> {
    let at = m.partition_point(|&x| x < i);
    let mut v = Vec::with_capacity(m.len() + 1);
    v.extend_from_slice(&m[..at]);
    v.push(i);
    v.extend_from_slice(&m[at..]);
    v
}

/// Number of minimal generators of the toric ideal `I = ker(S → R)` in each
/// degree `2 ≤ j ≤ max_j`, computed as `dim I_j − dim (S₁·I_{j−1})`.
///
/// Requires `P` to be IDP, so that `S → R` is onto.
pub fn toric_generator_counts(p: &Polytope, max_j: usize) -> Result<BTreeMap<usize, usize>> {
    toric_generator_counts_capped(p, max_j, TORIC_DEGREE_CAP)
}

pub fn toric_generator_counts_capped(
    p: &Polytope,
    max_j: usize,
    degree_cap: usize,
) -> Result<BTreeMap<usize, usize>> {
    if max_j > degree_cap {
        return Err(Error::InvalidArgument(format!(
            "toric degree {max_j} above the cap {degree_cap}"
        )));
    }
    let idp = is_idp(p)?;
    if !idp.value {
        return Err(Error::NotIdp(format!(
            "undecomposable point {:?} in degree {}",
            idp.witness.as_ref().map(|w| &w.1),
            idp.witness.as_ref().map_or(0, |w| w.0)
        )));
    }
    toric_counts_of_idp(p, max_j)
}

/// [`toric_generator_counts`] for a polytope already known to be IDP.
pub(crate) fn toric_counts_of_idp(p: &Polytope, max_j: usize) -> Result<BTreeMap<usize, usize>> {
    let mut dil = Dilates::new(p);
    let ones = dil.points(1)?.to_vec();
    let n = ones.len() as u128;
    if let Some(j) = (2..=max_j).find(|&j| binomial_u128(n + j as u128 - 1, j as u128) > MONOMIAL_CAP) {
        return Err(Error::CapExceeded(format!(
            "{n} variables give more than {MONOMIAL_CAP} monomials in degree {j}"
        )));
    }
    let mut counts = BTreeMap::new();
    let mut prev: Fibers = std::iter::once((vec![0; p.ambient_dim()], vec![Vec::new()])).collect();
    prev = next_fibers(&prev, &ones);
    for j in 2..=max_j {
        let cur = next_fibers(&prev, &ones);
        let blocks: Vec<(&Point, &Vec<Vec<u32>>)> = cur.iter().collect();
        let count: usize = blocks
            .par_iter()
            .map(|(w, monomials)| {
                let index: HashMap<&[u32], usize> = monomials
                    .iter()
                    .enumerate()
                    .map(|(c, m)| (m.as_slice(), c))
                    .collect();
                let mut rows: Vec<SparseRow> = Vec::new();
                for (i, x) in ones.iter().enumerate() {
                    let Some(fiber) = prev.get(&sub(w, x)) else {
                        continue;
                    };
                    let base = index[times(i as u32, &fiber[0]).as_slice()];
                    for m in &fiber[1..] {
                        let c = index[times(i as u32, m).as_slice()];
                        let mut row = vec![(base, -1i64), (c, 1)];
                        row.sort_unstable();
                        rows.push(row);
                    }
                }
                monomials.len() - 1 - sparse_rank(&rows)
            })
            .sum();
        counts.insert(j, count);
        prev = cur;
    }
    Ok(counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBettiCell {
    pub p: usize,
    pub j: usize,
    pub value: u64,
}

/// Koszul complex `Λ^• R₁ ⊗ R` of the Ehrhart ring, graded by lattice points.
///
/// A basis element `e_I ⊗ m` with `|I| = p` and `m ∈ (j−p)P` has multidegree
/// `Σ_{i∈I} xᵢ + m ∈ jP`, and the differential preserves it, so every
/// differential splits into one block per multidegree. Inside a block the
/// element is determined by `I` alone.
pub struct Koszul<'a> {
    dil: Dilates<'a>,
    ones: Vec<Point>,
    nonzero_cap: u128,
}

impl<'a> Koszul<'a> {
    pub fn new(p: &'a Polytope) -> Result<Self> {
        let mut dil = Dilates::new(p);
        let ones = dil.points(1)?.to_vec();
        if ones.len() > 64 {
            return Err(Error::CapExceeded(format!(
                "{} degree-1 points; Koszul blocks support at most 64",
                ones.len()
            )));
        }
        Ok(Koszul {
            dil,
            ones,
            nonzero_cap: KOSZUL_NONZERO_CAP,
        })
    }

    pub fn with_cap(mut self, nonzero_cap: u128) -> Self {
        self.nonzero_cap = nonzero_cap;
        self
    }

    /// `N = dim R₁`.
    pub fn variables(&self) -> usize {
        self.ones.len()
    }

    /// `β_{p,j} = dim ker ∂_p − rank ∂_{p+1}` in internal degree `j`.
    pub fn betti(&mut self, p: usize, j: usize) -> Result<u64> {
        if j < p || p > self.ones.len() {
            return Ok(0);
        }
        let n = self.ones.len() as u128;
        let mid = binomial_u128(n, p as u128) * self.dil.count(j - p)? as u128;
        let out = self.differential_rank(p, j)? as u128;
        let inc = self.differential_rank(p + 1, j)? as u128;
        let value = mid
            .checked_sub(out + inc)
            .ok_or_else(|| Error::Internal(format!("negative Betti number at ({p}, {j})")))?;
        Ok(value as u64)
    }

    /// Every `β_{p,j}` with `p ≤ p_max` and `p ≤ j ≤ j_max`.
    pub fn table(&mut self, p_max: usize, j_max: usize) -> Result<Vec<GradedBettiCell>> {
        let mut cells = Vec::new();
        for p in 0..=p_max {
            for j in p..=j_max {
                cells.push(GradedBettiCell {
                    p,
                    j,
                    value: self.betti(p, j)?,
                });
            }
        }
        Ok(cells)
    }

    /// Rank of `∂_p : Λ^p R₁ ⊗ R_{j−p} → Λ^{p−1} R₁ ⊗ R_{j−p+1}`.
    fn differential_rank(&mut self, p: usize, j: usize) -> Result<usize> {
        if p == 0 || p > j || p > self.ones.len() {
            return Ok(0);
        }
        let n = self.ones.len() as u128;
        let sources = binomial_u128(n, p as u128) * self.dil.count(j - p)? as u128;
        if sources * p as u128 > self.nonzero_cap {
            return Err(Error::CapExceeded(format!(
                "Koszul differential in degree ({p}, {j}) needs {} nonzeros, cap {}",
                sources * p as u128,
                self.nonzero_cap
            )));
        }
        let layer = &self.dil.layer(j - p).points;
        let mut blocks: HashMap<Point, Vec<u64>> = HashMap::new();
        for subset in Combinations::new(self.ones.len(), p) {
            let mut s = vec![0i64; layer[0].len()];
            let mut mask = 0u64;
            for &i in &subset {
                s = add(&s, &self.ones[i]);
                mask |= 1 << i;
            }
            for m in layer {
                blocks.entry(add(&s, m)).or_default().push(mask);
            }
        }
        let blocks: Vec<Vec<u64>> = blocks.into_values().collect();
        Ok(blocks.par_iter().map(|b| block_rank(b)).sum())
    }
}

/// Rank of one multidegree block of the Koszul differential. Sources are the
/// subsets `I`; `e_I ↦ Σ_t (−1)^t e_{I∖i_t}` with `i_0 < i_1 < …`.
fn block_rank(sources: &[u64]) -> usize {
    let mut targets: HashMap<u64, usize> = HashMap::new();
    let rows: Vec<SparseRow> = sources
        .iter()
        .map(|&mask| {
            let mut row: SparseRow = Vec::with_capacity(mask.count_ones() as usize);
            let mut rest = mask;
            let mut t = 0;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                let next = targets.len();
                let col = *targets.entry(mask ^ bit).or_insert(next);
                row.push((col, if t % 2 == 0 { 1 } else { -1 }));
                t += 1;
            }
            row.sort_unstable();
            row
        })
        .collect();
    sparse_rank(&rows)
}

pub fn koszul_betti(p: &Polytope, hom: usize, j: usize) -> Result<u64> {
    Koszul::new(p)?.betti(hom, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reeve() -> Polytope {
        Polytope::from_i64(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2]]).unwrap()
    }

    fn square(a: i64) -> Polytope {
        Polytope::from_i64(&[[0, 0], [a, 0], [0, a], [a, a]]).unwrap()
    }

    #[test]
    fn dims_square() {
        let g = graded_dims(&square(1), 2).unwrap();
        assert_eq!(g.ehrhart, vec![1, 4, 9]);
        assert_eq!(g.subalgebra, vec![1, 4, 9]);
        assert_eq!(g.symmetric, vec![1, 4, 10]);
    }

    #[test]
    fn dims_reeve() {
        let g = graded_dims(&reeve(), 2).unwrap();
        assert_eq!(g.ehrhart[2], 11);
        assert_eq!(g.subalgebra[2], 10);
    }

    #[test]
    fn toric_unimodular_triangle() {
        let t = Polytope::from_i64(&[[0, 0], [1, 0], [0, 1]]).unwrap();
        let c = toric_generator_counts(&t, 4).unwrap();
        assert!(c.values().all(|&v| v == 0));
    }

    #[test]
    fn toric_unit_square_is_one_quadric() {
        let c = toric_generator_counts(&square(1), 3).unwrap();
        assert_eq!(c[&2], 1);
        assert_eq!(c[&3], 0);
    }

    #[test]
    fn toric_square_side_two() {
        // 9 points, dim I₂ = 45 − 25 = 20, all quadrics
        let c = toric_generator_counts(&square(2), 3).unwrap();
        assert_eq!(c[&2], 20);
        assert_eq!(c[&3], 0);
    }

    #[test]
    fn toric_rejects_non_idp() {
        assert!(matches!(toric_generator_counts(&reeve(), 2), Err(Error::NotIdp(_))));
        assert!(matches!(
            toric_generator_counts(&square(1), 6),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn betti_reeve() {
        let r = reeve();
        let mut k = Koszul::new(&r).unwrap();
        assert_eq!(k.betti(0, 0).unwrap(), 1);
        assert_eq!(k.betti(0, 1).unwrap(), 0);
        assert_eq!(k.betti(0, 2).unwrap(), 1);
        assert_eq!(k.betti(0, 3).unwrap(), 0);
    }

    #[test]
    fn betti_unit_square() {
        // R = k[a,b,c,d]/(ad − bc): resolution 0 → S(−2) → S
        let sq = square(1);
        let mut k = Koszul::new(&sq).unwrap();
        assert_eq!(k.betti(1, 2).unwrap(), 1);
        assert_eq!(k.betti(1, 3).unwrap(), 0);
        assert_eq!(k.betti(2, 3).unwrap(), 0);
        assert_eq!(k.betti(2, 4).unwrap(), 0);
    }

    #[test]
    fn betti_polynomial_ring_is_trivial() {
        let t = Polytope::from_i64(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        let cells = Koszul::new(&t).unwrap().table(3, 4).unwrap();
        for c in cells {
            let expected = u64::from(c.p == 0 && c.j == 0);
            assert_eq!(c.value, expected, "{c:?}");
        }
    }

    #[test]
    fn betti_cap() {
        let sq = square(2);
        let mut k = Koszul::new(&sq).unwrap().with_cap(10);
        assert!(matches!(k.betti(1, 3), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn clean_simplex() {
        assert!(is_clean_simplex(&reeve()).unwrap());
        let t = Polytope::from_i64(&[[0, 0], [2, 0], [0, 2]]).unwrap();
        assert!(!is_clean_simplex(&t).unwrap());
        assert!(!is_clean_simplex(&square(1)).unwrap());
    }
}
