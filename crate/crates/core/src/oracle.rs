//! Slow reference implementations that share as little as possible with the
//! main algorithms. Used by tests and by the `oracle` command.
//!
//! Membership here never looks at facets: a point lies in `kP` iff it lies in
//! one of the simplices spanned by `dim P + 1` vertices of `kP` (Carathéodory),
//! and simplex membership is a sign test on barycentric coordinates obtained
//! from the adjugate. Only full-dimensional polytopes are supported.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::ehrhart::{interior_points, HStarVector};
use crate::lattice::IntMatrix;
use crate::polytope::{Combinations, Point, Polytope};
use crate::{Error, Result};

/// Largest `(box cells) × (simplices)` product a box scan will attempt.
pub const SCAN_CAP: u128 = 200_000_000;

/// Largest number of `k`-multisets the composition search will enumerate.
pub const COMPOSITION_CAP: u128 = 20_000_000;

/// Barycentric sign test for one full-dimensional vertex simplex.
struct SimplexTest {
    /// `adj(M)` for `M` the matrix with columns `(vᵢ, 1)`.
    adjugate: Vec<Vec<i128>>,
    det_sign: i128,
}

impl SimplexTest {
    fn contains(&self, x: &[i64], k: i64) -> bool {
        self.adjugate.iter().all(|row| {
            let (last, head) = row.split_last().unwrap();
            let s: i128 = head
                .iter()
                .zip(x)
                .map(|(a, &b)| a * b as i128)
                .sum::<i128>()
                + last * k as i128;
            s * self.det_sign >= 0
        })
    }
}

/// Membership in `kP` by covering `P` with vertex simplices.
pub struct Caratheodory {
    simplices: Vec<SimplexTest>,
    vertices: Vec<Point>,
}

impl Caratheodory {
    pub fn new(p: &Polytope) -> Result<Self> {
        if !p.is_full_dimensional() {
            return Err(Error::InvalidArgument(
                "the oracle supports full-dimensional polytopes only".into(),
            ));
        }
        let vertices = p
            .vertices_i64()
            .ok_or_else(|| Error::CapExceeded("vertex coordinates too large for the oracle".into()))?;
        let n = p.ambient_dim();
        let mut simplices = Vec::new();
        for subset in Combinations::new(vertices.len(), n + 1) {
            let m = IntMatrix::from_rows(
                n + 1,
                (0..n + 1).map(|r| {
                    subset
                        .iter()
                        .map(|&i| if r < n { vertices[i][r] } else { 1 })
                        .collect::<Vec<i64>>()
                }),
            );
            let det = m.determinant();
            if det.is_zero() {
                continue;
            }
            simplices.push(SimplexTest {
                adjugate: adjugate(&m)?,
                det_sign: if det.is_positive() { 1 } else { -1 },
            });
        }
        Ok(Caratheodory {
            simplices,
            vertices,
        })
    }

    pub fn contains(&self, x: &[i64], k: u64) -> bool {
        self.simplices.iter().any(|s| s.contains(x, k as i64))
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    /// Every lattice point of `kP` from a scan of its bounding box.
    pub fn scan(&self, k: u64) -> Result<Vec<Point>> {
        let (lo, hi) = self.scan_box(k)?;
        let n = lo.len();
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            if self.contains(&x, k) {
                out.push(x.clone());
            }
            let mut c = n;
            loop {
                if c == 0 {
                    return Ok(out);
                }
                c -= 1;
                if x[c] < hi[c] {
                    x[c] += 1;
                    break;
                }
                x[c] = lo[c];
            }
        }
    }

    /// Bounding box of `kP`, refused when scanning it would exceed the cap.
    fn scan_box(&self, k: u64) -> Result<(Point, Point)> {
        let n = self.vertices[0].len();
        let k = k as i64;
        let lo: Vec<i64> = (0..n)
            .map(|c| self.vertices.iter().map(|v| v[c] * k).min().unwrap())
            .collect();
        let hi: Vec<i64> = (0..n)
            .map(|c| self.vertices.iter().map(|v| v[c] * k).max().unwrap())
            .collect();
        let cells: u128 = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| (b - a + 1) as u128)
            .product();
        if cells.saturating_mul(self.simplices.len() as u128) > SCAN_CAP {
            return Err(Error::CapExceeded(format!(
                "box scan of {cells} cells against {} simplices exceeds {SCAN_CAP}",
                self.simplices.len()
            )));
        }
        Ok((lo, hi))
    }
}

#[allow(clippy::needless_range_loop)]
fn adjugate(m: &IntMatrix) -> Result<Vec<Vec<i128>>> {
    let n = m.rows();
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            // adj[i][j] = (−1)^{i+j} det(m without row j and column i)
            let minor = IntMatrix::from_rows(
                n - 1,
                (0..n).filter(|&r| r != j).map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m[(r, c)].clone())
                        .collect::<Vec<BigInt>>()
                }),
            );
            let d = if n == 1 { BigInt::from(1) } else { minor.determinant() };
            let d = if (i + j) % 2 == 0 { d } else { -d };
            adj[i][j] = d
                .to_i128()
                .ok_or_else(|| Error::CapExceeded("adjugate entry overflows i128".into()))?;
        }
    }
    Ok(adj)
}

/// `L_P(0), …, L_P(max_k)` by box scan.
pub fn box_scan_counts(p: &Polytope, max_k: u64) -> Result<Vec<u64>> {
    let c = Caratheodory::new(p)?;
    // the largest box is checked before any scanning starts
    c.scan_box(max_k)?;
    (0..=max_k)
        .map(|k| c.scan(k).map(|v| v.len() as u64))
        .collect()
}

/// h* as the first `d + 1` coefficients of `(1 − t)^{d+1} · Σ L_P(k) tᵏ`.
pub fn h_star_by_box_scan(p: &Polytope) -> Result<HStarVector> {
    let d = p.dim();
    let counts = box_scan_counts(p, d as u64)?;
    let mut factor = vec![1i128];
    for _ in 0..=d {
        let mut next = vec![0i128; factor.len() + 1];
        for (i, &a) in factor.iter().enumerate() {
            next[i] += a;
            next[i + 1] -= a;
        }
        factor = next;
    }
    let mut h = vec![0i128; d + 1];
    for (i, hi) in h.iter_mut().enumerate() {
        for (k, &l) in counts.iter().enumerate().take(i + 1) {
            *hi += factor[i - k] * l as i128;
        }
    }
    let entries = h
        .into_iter()
        .map(|x| u64::try_from(x).map_err(|_| Error::Internal(format!("h* entry {x} out of range"))))
        .collect::<Result<Vec<u64>>>()?;
    HStarVector::from_entries(entries)
}

/// IDP by enumerating every sum of `k` lattice points of `P` for
/// `2 ≤ k ≤ dim P − 1` and comparing against the points of `kP`.
pub fn idp_by_compositions(p: &Polytope) -> Result<bool> {
    let c = Caratheodory::new(p)?;
    let ones = c.scan(1)?;
    let n = ones.len() as u128;
    for k in 2..p.dim() {
        if crate::polytope::binomial_u128(n + k as u128 - 1, k as u128) > COMPOSITION_CAP {
            return Err(Error::CapExceeded(format!(
                "{n} points give too many {k}-fold compositions"
            )));
        }
        let mut sums = HashSet::new();
        multisets(ones.len(), k, &mut |idx| {
            let mut s = vec![0i64; p.ambient_dim()];
            for &i in idx {
                for (a, b) in s.iter_mut().zip(&ones[i]) {
                    *a += b;
                }
            }
            sums.insert(s);
        });
        if c.scan(k as u64)?.iter().any(|z| !sums.contains(z)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn multisets(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i, cur, f);
            cur.pop();
        }
    }
    go(n, k, 0, &mut Vec::with_capacity(k), f);
}

/// Degrees of the minimal generators of the interior module, straight from
/// the definition: `α ∈ kP°` is redundant iff `α − β ∈ (k−k')P` for some
/// interior `β` of a lower degree `k'`.
pub fn level_by_definition(p: &Polytope) -> Result<Vec<usize>> {
    let top = p.dim() + 1;
    let c = Caratheodory::new(p)?;
    let interiors: Vec<Vec<Point>> = (0..=top as u64)
        .map(|k| interior_points(p, k))
        .collect::<Result<_>>()?;
    let mut degrees = Vec::new();
    for k in 1..=top {
        for alpha in &interiors[k] {
            let redundant = (1..k).any(|kp| {
                interiors[kp].iter().any(|beta| {
                    let diff: Point = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
                    c.contains(&diff, (k - kp) as u64)
                })
            });
            if !redundant {
                degrees.push(k);
            }
        }
    }
    Ok(degrees)
}

/// Toric generator counts from connected components: in each fiber of degree
/// `j`, monomials `xᵢa` and `xᵢb` with `a`, `b` in the same degree-`(j−1)`
/// fiber are joined; the count is `Σ (components − 1)`.
pub fn toric_counts_by_components(p: &Polytope, max_j: usize) -> Result<BTreeMap<usize, usize>> {
    let c = Caratheodory::new(p)?;
    let ones = c.scan(1)?;
    let eval = |m: &[usize]| -> Point {
        let mut s = vec![0i64; p.ambient_dim()];
        for &i in m {
            for (a, b) in s.iter_mut().zip(&ones[i]) {
                *a += b;
            }
        }
        s
    };
    let mut out = BTreeMap::new();
    for j in 2..=max_j {
        let mut monomials: Vec<Vec<usize>> = Vec::new();
        multisets(ones.len(), j, &mut |m| monomials.push(m.to_vec()));
        let index: HashMap<Vec<usize>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut parent: Vec<usize> = (0..monomials.len()).collect();
        // first multiple of xᵢ seen for each (i, fiber of m / xᵢ)
        let mut anchor: HashMap<(usize, Point), usize> = HashMap::new();
        for m in &monomials {
            let me = index[m];
            let mut seen = None;
            for (t, &i) in m.iter().enumerate() {
                if seen == Some(i) {
                    continue;
                }
                seen = Some(i);
                let mut rest = m.clone();
                rest.remove(t);
                let key = (i, eval(&rest));
                match anchor.get(&key) {
                    Some(&a) => union(&mut parent, a, me),
                    None => {
                        anchor.insert(key, me);
                    }
                }
            }
        }
        let mut components: HashMap<Point, HashSet<usize>> = HashMap::new();
        for m in &monomials {
            let root = find(&mut parent, index[m]);
            components.entry(eval(m)).or_default().insert(root);
        }
        out.insert(j, components.values().map(|s| s.len() - 1).sum());
    }
    Ok(out)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}
