//! Lattice points of dilates, Ehrhart counts and the h*-vector.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::polytope::{dot, MachineSystem, Point, Polytope};
use crate::{Error, Result};

/// Largest dilation factor accepted by the enumerators.
pub const MAX_DILATE: u64 = 1 << 20;

/// Box scans refuse boxes with more cells than this.
pub const BOX_CELL_CAP: u128 = 400_000_000;

/// Enumerators refuse to materialize more points than this.
pub const POINT_CAP: usize = 20_000_000;

/// How [`lattice_points_with`] walks the candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Box scan for `dim P ≤ 3`, fiber recursion above.
    Auto,
    /// Every point of the bounding box of `kP`, filtered by the facets.
    BoxScan,
    /// Coordinate-by-coordinate recursion; each coordinate's range is cut
    /// down by every facet before descending.
    Fiber,
}

/// All points of `kP ∩ ℤⁿ`, in lexicographic order. `0P` is the origin.
pub fn lattice_points(p: &Polytope, k: u64) -> Result<Vec<Point>> {
    lattice_points_with(p, k, Strategy::Auto)
}

pub fn lattice_points_with(p: &Polytope, k: u64, strategy: Strategy) -> Result<Vec<Point>> {
    if k > MAX_DILATE {
        return Err(Error::CapExceeded(format!("dilate {k} exceeds {MAX_DILATE}")));
    }
    let m = p.machine()?;
    if k == 0 {
        return Ok(vec![vec![0; p.ambient_dim()]]);
    }
    let strategy = match strategy {
        Strategy::Auto if p.dim() <= 3 => Strategy::BoxScan,
        Strategy::Auto => Strategy::Fiber,
        s => s,
    };
    match strategy {
        Strategy::BoxScan => box_scan(m, p.ambient_dim(), k, false),
        _ => Ok(fiber_scan(m, p.ambient_dim(), k, false)?),
    }
}

/// All points of the relative interior of `kP`, in lexicographic order.
pub fn interior_points(p: &Polytope, k: u64) -> Result<Vec<Point>> {
    if k > MAX_DILATE {
        return Err(Error::CapExceeded(format!("dilate {k} exceeds {MAX_DILATE}")));
    }
    let m = p.machine()?;
    if k == 0 {
        // the relative interior of {0} is {0} only when P is a point
        return Ok(if p.dim() == 0 {
            vec![vec![0; p.ambient_dim()]]
        } else {
            Vec::new()
        });
    }
    if p.dim() <= 3 {
        box_scan(m, p.ambient_dim(), k, true)
    } else {
        fiber_scan(m, p.ambient_dim(), k, true)
    }
}

fn bounding_box(m: &MachineSystem, n: usize, k: u64) -> (Vec<i64>, Vec<i64>) {
    let k = k as i64;
    let lo = (0..n)
        .map(|i| k * m.vertices.iter().map(|v| v[i]).min().unwrap())
        .collect();
    let hi = (0..n)
        .map(|i| k * m.vertices.iter().map(|v| v[i]).max().unwrap())
        .collect();
    (lo, hi)
}

fn inside(m: &MachineSystem, x: &[i64], k: i128, strict: bool) -> bool {
    m.equations.iter().all(|(a, b)| dot(a, x) == k * *b as i128)
        && m.facets.iter().all(|(a, b)| {
            let v = dot(a, x);
            let rhs = k * *b as i128;
            if strict {
                v < rhs
            } else {
                v <= rhs
            }
        })
}

fn box_scan(m: &MachineSystem, n: usize, k: u64, strict: bool) -> Result<Vec<Point>> {
    let (lo, hi) = bounding_box(m, n, k);
    let cells = lo
        .iter()
        .zip(&hi)
        .fold(1u128, |acc, (l, h)| acc.saturating_mul((h - l + 1) as u128));
    if cells > BOX_CELL_CAP {
        return Err(Error::CapExceeded(format!(
            "bounding box of dilate {k} has {cells} cells"
        )));
    }
    let kk = k as i128;
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if inside(m, &x, kk, strict) {
            out.push(x.clone());
            if out.len() > POINT_CAP {
                return Err(Error::CapExceeded("too many lattice points".into()));
            }
        }
        // odometer, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                x[i + 1..n].copy_from_slice(&lo[i + 1..n]);
                break;
            }
        }
    }
}

/// Linear constraint `a·x ≤ rhs` (strict: `<`) used by the fiber recursion.
struct Constraint {
    a: Vec<i64>,
    rhs: i128,
    strict: bool,
    /// `min_rest[i] = Σ_{j ≥ i} min(a_j·lo_j, a_j·hi_j)`
    min_rest: Vec<i128>,
}

fn fiber_scan(m: &MachineSystem, n: usize, k: u64, strict: bool) -> Result<Vec<Point>> {
    let (lo, hi) = bounding_box(m, n, k);
    let kk = k as i128;
    let mut constraints = Vec::new();
    let mut push = |a: Vec<i64>, rhs: i128, strict: bool| {
        let mut min_rest = vec![0i128; n + 1];
        for i in (0..n).rev() {
            let c = (a[i] as i128 * lo[i] as i128).min(a[i] as i128 * hi[i] as i128);
            min_rest[i] = min_rest[i + 1] + c;
        }
        constraints.push(Constraint {
            a,
            rhs,
            strict,
            min_rest,
        });
    };
    for (a, b) in &m.equations {
        push(a.clone(), kk * *b as i128, false);
        push(a.iter().map(|x| -x).collect(), -kk * *b as i128, false);
    }
    for (a, b) in &m.facets {
        push(a.clone(), kk * *b as i128, strict);
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut partial = vec![0i128; constraints.len()];
    descend(&constraints, &lo, &hi, 0, &mut x, &mut partial, &mut out)?;
    Ok(out)
}

fn descend(
    cs: &[Constraint],
    lo: &[i64],
    hi: &[i64],
    i: usize,
    x: &mut Vec<i64>,
    partial: &mut Vec<i128>,
    out: &mut Vec<Point>,
) -> Result<()> {
    let n = lo.len();
    if i == n {
        out.push(x.clone());
        if out.len() > POINT_CAP {
            return Err(Error::CapExceeded("too many lattice points".into()));
        }
        return Ok(());
    }
    let mut low = lo[i] as i128;
    let mut high = hi[i] as i128;
    for (c, s) in cs.iter().zip(partial.iter()) {
        let ai = c.a[i] as i128;
        // a_i·x_i ≤ rhs − s − min_rest[i+1]; strictness is enforced at the leaf
        let slack = c.rhs - s - c.min_rest[i + 1];
        if ai > 0 {
            high = high.min(slack.div_euclid(ai));
        } else if ai < 0 {
            // x_i ≥ slack / ai
            low = low.max(ceil_div(slack, ai));
        } else if slack < 0 {
            return Ok(());
        }
        if low > high {
            return Ok(());
        }
    }
    for v in low..=high {
        let v = v as i64;
        x[i] = v;
        for (c, s) in cs.iter().zip(partial.iter_mut()) {
            *s += c.a[i] as i128 * v as i128;
        }
        let ok = i + 1 < n || cs.iter().zip(partial.iter()).all(|(c, s)| {
            if c.strict {
                *s < c.rhs
            } else {
                *s <= c.rhs
            }
        });
        if ok {
            descend(cs, lo, hi, i + 1, x, partial, out)?;
        }
        for (c, s) in cs.iter().zip(partial.iter_mut()) {
            *s -= c.a[i] as i128 * v as i128;
        }
    }
    Ok(())
}

fn ceil_div(a: i128, b: i128) -> i128 {
    let (a, b) = if b < 0 { (-a, -b) } else { (a, b) };
    -(-a).div_euclid(b)
}

/// The h*-vector `(h*₀, …, h*_d)` of a `d`-dimensional lattice polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HStarVector {
    entries: Vec<u64>,
}

impl HStarVector {
    /// Wraps raw entries; the length fixes the dimension (`len − 1`).
    pub fn from_entries(entries: Vec<u64>) -> Result<Self> {
        if entries.first() != Some(&1) {
            return Err(Error::Internal(format!(
                "h*-vector must start with 1, got {entries:?}"
            )));
        }
        Ok(HStarVector { entries })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// `h*ᵢ`, zero past the dimension.
    pub fn get(&self, i: usize) -> u64 {
        self.entries.get(i).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.entries.len() - 1
    }

    /// Index of the last nonzero entry.
    pub fn degree(&self) -> usize {
        self.entries.iter().rposition(|&h| h != 0).unwrap_or(0)
    }

    /// `dim + 1 − degree`.
    pub fn codegree(&self) -> usize {
        self.dim() + 1 - self.degree()
    }

    pub fn normalized_volume(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// `L_P(t)` for any integer `t`, from `Σ h*ᵢ·C(t + d − i, d)`.
    ///
    /// For negative `t` this evaluates the Ehrhart polynomial, so
    /// `(−1)^d·value(−k)` counts the interior points of `kP`.
    pub fn ehrhart_polynomial_value(&self, t: i64) -> i128 {
        let d = self.dim() as i64;
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &h)| h as i128 * binomial_poly(t + d - i as i64, d as u32))
            .sum()
    }
}

/// `C(x, d) = x(x−1)…(x−d+1)/d!` for any integer `x`.
fn binomial_poly(x: i64, d: u32) -> i128 {
    let mut num: i128 = 1;
    for i in 0..d as i128 {
        num = num * (x as i128 - i) / (i + 1);
    }
    num
}

fn binomial(n: u64, k: u64) -> i128 {
    binomial_poly(n as i64, k as u32)
}

/// `L_P(0), …, L_P(dim P)`.
pub fn ehrhart_counts(p: &Polytope) -> Result<Vec<u64>> {
    (0..=p.dim() as u64)
        .into_par_iter()
        .map(|k| lattice_points(p, k).map(|pts| pts.len() as u64))
        .collect()
}

/// The h*-vector from `L_P(0..=d)` by the binomial transform
/// `h*ⱼ = Σ_{i ≤ j} (−1)ⁱ C(d+1, i) L_P(j − i)`.
pub fn h_star_from_counts(counts: &[u64]) -> Result<HStarVector> {
    let d = counts.len().checked_sub(1).ok_or(Error::EmptyInput)? as u64;
    let mut entries = Vec::with_capacity(counts.len());
    for j in 0..=d as usize {
        let mut h: i128 = 0;
        for i in 0..=j {
            let term = binomial(d + 1, i as u64) * counts[j - i] as i128;
            if i % 2 == 0 {
                h += term;
            } else {
                h -= term;
            }
        }
        if h < 0 {
            return Err(Error::Internal(format!(
                "negative h*-entry {h} at index {j} from counts {counts:?}"
            )));
        }
        entries.push(h as u64);
    }
    HStarVector::from_entries(entries)
}

pub fn h_star(p: &Polytope) -> Result<HStarVector> {
    h_star_from_counts(&ehrhart_counts(p)?)
}

/// `(deg P, codeg P)`; the codegree is found by scanning dilates for interior
/// points, independently of the h*-vector, and the identity
/// `deg + codeg = dim + 1` is checked.
pub fn degree_and_codegree(p: &Polytope) -> Result<(usize, usize)> {
    let h = h_star(p)?;
    let c = codegree_by_scan(p)?;
    if h.degree() + c != p.dim() + 1 {
        return Err(Error::Internal(format!(
            "degree {} and codegree {c} do not add up to dim + 1 = {}",
            h.degree(),
            p.dim() + 1
        )));
    }
    Ok((h.degree(), c))
}

/// Smallest `ℓ ≥ 1` with an interior lattice point in `ℓP`.
pub fn codegree_by_scan(p: &Polytope) -> Result<usize> {
    for l in 1..=p.dim() as u64 + 1 {
        if !interior_points(p, l)?.is_empty() {
            return Ok(l as usize);
        }
    }
    Err(Error::Internal(format!(
        "no interior lattice point in ({} + 1)P",
        p.dim()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_simplex(d: usize) -> Polytope {
        let mut pts = vec![vec![0i64; d]];
        for i in 0..d {
            let mut e = vec![0i64; d];
            e[i] = 1;
            pts.push(e);
        }
        Polytope::from_i64(&pts).unwrap()
    }

    fn reeve() -> Polytope {
        Polytope::from_i64(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2]]).unwrap()
    }

    #[test]
    fn ceil_div_signs() {
        assert_eq!(ceil_div(7, 2), 4);
        assert_eq!(ceil_div(-7, 2), -3);
        assert_eq!(ceil_div(7, -2), -3);
        assert_eq!(ceil_div(-7, -2), 4);
        assert_eq!(ceil_div(6, -2), -3);
    }

    #[test]
    fn unit_triangle_second_dilate() {
        assert_eq!(lattice_points(&unit_simplex(2), 2).unwrap().len(), 6);
    }

    #[test]
    fn reeve_points_are_vertices() {
        let p = reeve();
        let pts = lattice_points(&p, 1).unwrap();
        assert_eq!(pts, p.vertices_i64().unwrap());
    }

    #[test]
    fn strategies_agree() {
        let p = reeve();
        for k in 0..4 {
            let a = lattice_points_with(&p, k, Strategy::BoxScan).unwrap();
            let b = lattice_points_with(&p, k, Strategy::Fiber).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn counts() {
        let square = Polytope::from_i64(&[[0, 0], [1, 0], [0, 1], [1, 1]]).unwrap();
        assert_eq!(ehrhart_counts(&square).unwrap(), vec![1, 4, 9]);
        assert_eq!(ehrhart_counts(&reeve()).unwrap(), vec![1, 4, 11, 24]);
        let point = Polytope::from_i64(&[[2, 5]]).unwrap();
        assert_eq!(ehrhart_counts(&point).unwrap(), vec![1]);
    }

    #[test]
    fn reeve_hstar() {
        let h = h_star(&reeve()).unwrap();
        assert_eq!(h.entries(), &[1, 0, 1, 0]);
        assert_eq!(degree_and_codegree(&reeve()).unwrap(), (2, 2));
    }

    #[test]
    fn unit_simplex_hstar() {
        for d in 1..=5 {
            let p = unit_simplex(d);
            let h = h_star(&p).unwrap();
            let mut expect = vec![0u64; d + 1];
            expect[0] = 1;
            assert_eq!(h.entries(), expect.as_slice());
            assert_eq!(degree_and_codegree(&p).unwrap(), (0, d + 1));
        }
    }

    #[test]
    fn interior_of_reeve_second_dilate() {
        assert_eq!(interior_points(&reeve(), 2).unwrap(), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn polynomial_value_reciprocity() {
        let p = reeve();
        let h = h_star(&p).unwrap();
        for k in 0..4i64 {
            assert_eq!(
                h.ehrhart_polynomial_value(k),
                lattice_points(&p, k as u64).unwrap().len() as i128
            );
        }
        for k in 1..4 {
            let interior = interior_points(&p, k).unwrap().len() as i128;
            assert_eq!(-h.ehrhart_polynomial_value(-(k as i64)), interior);
        }
    }

    #[test]
    fn lower_dimensional_counts() {
        // a triangle living in the plane x + y + z = 1 of ℤ³
        let p = Polytope::from_i64(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(ehrhart_counts(&p).unwrap(), vec![1, 3, 6]);
        assert_eq!(h_star(&p).unwrap().entries(), &[1, 0, 0]);
        let fib = lattice_points_with(&p, 3, Strategy::Fiber).unwrap();
        let boxed = lattice_points_with(&p, 3, Strategy::BoxScan).unwrap();
        assert_eq!(fib, boxed);
    }

    #[test]
    fn negative_entry_is_internal_error() {
        assert!(matches!(h_star_from_counts(&[1, 1, 1]), Err(Error::Internal(_))));
    }
}
