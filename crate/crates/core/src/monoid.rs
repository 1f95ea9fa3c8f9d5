//! Predicates of the monoid `M_P` generated by the degree-1 points of the cone
//! over `P` and of its normalization `M̄_P` (all lattice points of the cone):
//! IDP, module generators of `M̄_P` over `M_P`, spanning, and levelness.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::dilates::{sub, Dilates};
use crate::ehrhart::{h_star, HStarVector};
use crate::lattice::{coordinates_in_basis, lattice_basis, saturation_index, IntMatrix};
use crate::polytope::{Point, Polytope};
use crate::{Error, Result};

/// Degrees above `min(deg P, dim P − 1)` carry no module generators of `M̄_P`
/// over `M_P`.
pub fn generator_degree_bound(h: &HStarVector) -> usize {
    h.degree().min(h.dim().saturating_sub(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdpResult {
    pub value: bool,
    /// Lexicographically smallest point of the lowest degree that is not a sum
    /// of a degree-1 point and a point one degree lower.
    pub witness: Option<(usize, Point)>,
}

pub fn is_idp(p: &Polytope) -> Result<IdpResult> {
    let h = h_star(p)?;
    is_idp_with(&h, &mut Dilates::new(p))
}

/// IDP by degree-wise sumset closure up to [`generator_degree_bound`]: once
/// all degrees below `k` decompose, `kP` decomposes iff every point of it is
/// `p + w` with `p ∈ P` and `w ∈ (k−1)P`.
pub fn is_idp_with(h: &HStarVector, dil: &mut Dilates) -> Result<IdpResult> {
    let bound = generator_degree_bound(h);
    dil.ensure(bound.max(1))?;
    for k in 2..=bound {
        if let Some(z) = first_undecomposable(dil, k) {
            return Ok(IdpResult {
                value: false,
                witness: Some((k, z)),
            });
        }
    }
    Ok(IdpResult {
        value: true,
        witness: None,
    })
}

fn decomposes(dil: &Dilates, k: usize, z: &[i64]) -> bool {
    let lower = dil.layer(k - 1);
    dil.layer(1)
        .points
        .iter()
        .any(|p| lower.contains(&sub(z, p)))
}

fn first_undecomposable(dil: &Dilates, k: usize) -> Option<Point> {
    dil.layer(k)
        .points
        .par_iter()
        .find_first(|z| !decomposes(dil, k, z))
        .cloned()
}

/// Minimal generators of `M̄_P` as an `M_P`-module, by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorProfile {
    /// `g_k` for `k = 2..=max_degree_checked`.
    pub counts: BTreeMap<usize, usize>,
    /// The generators themselves with their degree, sorted by degree then
    /// lexicographically.
    pub generators: Vec<(usize, Point)>,
    pub max_degree_checked: usize,
}

impl GeneratorProfile {
    pub fn idp(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Largest degree of a minimal algebra generator of `k[P]`: the degree of
    /// the last module generator, or 1 when the degree-1 points suffice.
    pub fn max_generator_degree(&self) -> usize {
        self.generators.last().map(|g| g.0).unwrap_or(1)
    }
}

pub fn generator_profile(p: &Polytope) -> Result<GeneratorProfile> {
    let h = h_star(p)?;
    generator_profile_up_to(generator_degree_bound(&h), &mut Dilates::new(p))
}

/// `g_k = #{z ∈ kP ∩ ℤⁿ : z ∉ (P ∩ ℤⁿ) + ((k−1)P ∩ ℤⁿ)}` for `2 ≤ k ≤ max_k`.
pub fn generator_profile_up_to(max_k: usize, dil: &mut Dilates) -> Result<GeneratorProfile> {
    dil.ensure(max_k.max(1))?;
    let mut counts = BTreeMap::new();
    let mut generators = Vec::new();
    for k in 2..=max_k {
        let dil = &*dil;
        let found: Vec<Point> = dil
            .layer(k)
            .points
            .par_iter()
            .filter(|z| !decomposes(dil, k, z))
            .cloned()
            .collect();
        counts.insert(k, found.len());
        generators.extend(found.into_iter().map(|z| (k, z)));
    }
    Ok(GeneratorProfile {
        counts,
        generators,
        max_degree_checked: max_k,
    })
}

/// The lattice `L ⊂ ℤ^{n+1}` spanned by `(P × {1}) ∩ ℤ^{n+1}`, its index, and
/// `P` re-expressed in that lattice.
#[derive(Clone, Debug)]
pub struct SublatticeReport {
    /// Index of `L` in its saturation (for full-dimensional `P`, in `ℤ^{n+1}`).
    pub q: BigInt,
    /// `q = 1` and `P` full-dimensional.
    pub is_spanning: bool,
    /// For lower-dimensional `P`, `q = 1` only says `P` spans its own affine
    /// lattice; this flag tells the two cases apart.
    pub full_dimensional: bool,
    /// Basis of `L`: `(p₀, 1)` followed by a basis of the degree-0 part.
    pub basis: IntMatrix,
    /// `P` in the coordinates of the degree-0 part of `L`, based at `p₀`.
    pub p_tilde: Polytope,
    pub h_tilde: HStarVector,
}

impl SublatticeReport {
    pub fn deg_tilde(&self) -> usize {
        self.h_tilde.degree()
    }
}

pub fn spanning_report(p: &Polytope) -> Result<SublatticeReport> {
    let h = h_star(p)?;
    spanning_report_with(&h, &mut Dilates::new(p))
}

pub fn spanning_report_with(h: &HStarVector, dil: &mut Dilates) -> Result<SublatticeReport> {
    let p = dil.polytope();
    let n = p.ambient_dim();
    let points: Vec<Vec<BigInt>> = dil
        .points(1)?
        .iter()
        .map(|x| x.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let lifted = IntMatrix::from_rows(
        n + 1,
        points.iter().map(|x| {
            let mut v = x.clone();
            v.push(BigInt::one());
            v
        }),
    );
    let q = saturation_index(&lifted);

    let base = &points[0];
    let diffs: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|x| x.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let degree_zero = lattice_basis(&IntMatrix::from_rows(n, &diffs));
    let mut basis_rows = vec![{
        let mut v = base.clone();
        v.push(BigInt::one());
        v
    }];
    basis_rows.extend(degree_zero.row_vecs().into_iter().map(|mut v| {
        v.push(BigInt::from(0));
        v
    }));
    let basis = IntMatrix::from_rows(n + 1, &basis_rows);

    let tilde_vertices: Vec<Vec<BigInt>> = p
        .vertices()
        .iter()
        .map(|v| {
            let d: Vec<BigInt> = v.iter().zip(base).map(|(a, b)| a - b).collect();
            coordinates_in_basis(&degree_zero, &d)
                .map_err(|_| Error::Internal("vertex outside the lattice of its points".into()))
        })
        .collect::<Result<_>>()?;
    let p_tilde = Polytope::new(&tilde_vertices)?;
    let h_tilde = h_star(&p_tilde)?;

    let vol = BigInt::from(h.normalized_volume());
    let vol_tilde = BigInt::from(h_tilde.normalized_volume());
    if vol != &q * &vol_tilde {
        return Err(Error::Internal(format!(
            "Vol(P) = {vol} but q·Vol(P̃) = {q}·{vol_tilde}"
        )));
    }
    Ok(SublatticeReport {
        is_spanning: q.is_one() && p.is_full_dimensional(),
        full_dimensional: p.is_full_dimensional(),
        q,
        basis,
        p_tilde,
        h_tilde,
    })
}

/// Whether `h*₁ + h*_d ≥ Σ_{i=2}^{d−1} h*ᵢ`, the h*-inequality that forces a
/// polytope to be spanning.
pub fn spanning_criterion(h: &HStarVector) -> bool {
    let d = h.dim();
    let lhs = h.get(1) + h.get(d);
    let rhs: u64 = (2..d).map(|i| h.get(i)).sum();
    lhs >= rhs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub is_level: bool,
    /// Degrees of the minimal generators of the module of interior points of
    /// the cone, with multiplicity, ascending.
    pub generator_degrees: Vec<usize>,
    pub codegree: usize,
}

impl LevelReport {
    pub fn degree_counts(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.generator_degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }
}

pub fn is_level(p: &Polytope) -> Result<LevelReport> {
    let h = h_star(p)?;
    let mut dil = Dilates::new(p);
    let profile = generator_profile_up_to(generator_degree_bound(&h), &mut dil)?;
    is_level_with(&h, &profile, &mut dil)
}

/// Levelness via minimal generators of the interior module.
///
/// A point `α ∈ kP°` is not a generator iff `α = β + γ` with `β` interior of
/// lower degree and `γ` a nonzero point of the cone. Writing `γ` as a sum of
/// algebra generators shows it suffices to let `γ` range over the degree-1
/// points and the module generators in `profile`. Degrees are scanned from
/// the codegree up to `dim P + 1`.
pub fn is_level_with(
    h: &HStarVector,
    profile: &GeneratorProfile,
    dil: &mut Dilates,
) -> Result<LevelReport> {
    let p = dil.polytope();
    let c = h.codegree();
    let top = h.dim() + 1;
    let mut shifts: Vec<(usize, Point)> = dil.points(1)?.iter().map(|x| (1, x.clone())).collect();
    shifts.extend(profile.generators.iter().cloned());

    let mut degrees = Vec::new();
    for k in c..=top {
        let alphas = dil.interior(k)?.to_vec();
        if k == c {
            degrees.extend(std::iter::repeat_n(k, alphas.len()));
            continue;
        }
        let generators = alphas
            .par_iter()
            .map(|alpha| -> Result<bool> {
                for (m, gamma) in &shifts {
                    if k < c + m {
                        continue;
                    }
                    if p.contains_interior(&sub(alpha, gamma), (k - m) as u64)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
            .collect::<Result<Vec<bool>>>()?;
        let count = generators.iter().filter(|&&g| g).count();
        degrees.extend(std::iter::repeat_n(k, count));
    }
    Ok(LevelReport {
        is_level: degrees.iter().all(|&d| d == c),
        generator_degrees: degrees,
        codegree: c,
    })
}

/// `q` as a machine integer for reporting, if it fits.
pub fn q_small(report: &SublatticeReport) -> Option<u64> {
    report.q.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reeve() -> Polytope {
        Polytope::from_i64(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2]]).unwrap()
    }

    fn cube() -> Polytope {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push([x, y, z]);
                }
            }
        }
        Polytope::from_i64(&pts).unwrap()
    }

    #[test]
    fn reeve_not_idp() {
        let r = is_idp(&reeve()).unwrap();
        assert!(!r.value);
        assert_eq!(r.witness, Some((2, vec![1, 1, 1])));
    }

    #[test]
    fn cube_idp() {
        assert!(is_idp(&cube()).unwrap().value);
    }

    #[test]
    fn reeve_profile() {
        let g = generator_profile(&reeve()).unwrap();
        assert_eq!(g.count(2), 1);
        assert_eq!(g.generators, vec![(2, vec![1, 1, 1])]);
        assert_eq!(g.max_generator_degree(), 2);
    }

    #[test]
    fn reeve_sublattice() {
        let s = spanning_report(&reeve()).unwrap();
        assert_eq!(s.q, BigInt::from(2));
        assert!(!s.is_spanning);
        assert_eq!(s.h_tilde.entries(), &[1, 0, 0, 0]);
        assert_eq!(s.deg_tilde(), 0);
        assert_eq!(s.basis.rows(), 4);
    }

    #[test]
    fn cube_spanning() {
        let s = spanning_report(&cube()).unwrap();
        assert!(s.is_spanning);
        assert_eq!(s.q, BigInt::one());
        assert_eq!(s.h_tilde, h_star(&cube()).unwrap());
    }

    #[test]
    fn reeve_level() {
        let l = is_level(&reeve()).unwrap();
        assert!(l.is_level);
        assert_eq!(l.codegree, 2);
    }

    #[test]
    fn unit_simplex_level() {
        let p = Polytope::from_i64(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        let l = is_level(&p).unwrap();
        assert!(l.is_level);
        assert_eq!(l.generator_degrees, vec![4]);
    }

    #[test]
    fn criterion() {
        let reeve_h = h_star(&reeve()).unwrap();
        assert!(!spanning_criterion(&reeve_h));
        let tri = Polytope::from_i64(&[[0, 0], [3, 0], [0, 3]]).unwrap();
        assert!(spanning_criterion(&h_star(&tri).unwrap()));
        assert!(!spanning_criterion(&HStarVector::from_entries(vec![1, 5, 6, 0]).unwrap()));
    }
}
