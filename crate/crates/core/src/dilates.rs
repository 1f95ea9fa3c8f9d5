use std::collections::HashSet;

use crate::ehrhart::{interior_points, lattice_points};
use crate::polytope::{Point, Polytope};
use crate::Result;

/// Lattice points of `kP` (and of its relative interior) for `k = 0, 1, …`,
/// computed on demand and kept for reuse by the monoid and algebra passes.
pub struct Dilates<'a> {
    polytope: &'a Polytope,
    layers: Vec<Layer>,
    interiors: Vec<Option<Vec<Point>>>,
}

pub struct Layer {
    pub points: Vec<Point>,
    pub set: HashSet<Point>,
}

impl Layer {
    pub fn contains(&self, x: &[i64]) -> bool {
        self.set.contains(x)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl<'a> Dilates<'a> {
    pub fn new(polytope: &'a Polytope) -> Self {
        Dilates {
            polytope,
            layers: Vec::new(),
            interiors: Vec::new(),
        }
    }

    pub fn polytope(&self) -> &'a Polytope {
        self.polytope
    }

    /// Makes layers `0..=k` available.
    pub fn ensure(&mut self, k: usize) -> Result<()> {
        while self.layers.len() <= k {
            let points = lattice_points(self.polytope, self.layers.len() as u64)?;
            let set = points.iter().cloned().collect();
            self.layers.push(Layer { points, set });
        }
        Ok(())
    }

    /// Layer `k`; panics unless [`ensure`](Self::ensure) covered it.
    pub fn layer(&self, k: usize) -> &Layer {
        &self.layers[k]
    }

    pub fn points(&mut self, k: usize) -> Result<&[Point]> {
        self.ensure(k)?;
        Ok(&self.layers[k].points)
    }

    pub fn interior(&mut self, k: usize) -> Result<&[Point]> {
        if self.interiors.len() <= k {
            self.interiors.resize(k + 1, None);
        }
        if self.interiors[k].is_none() {
            self.interiors[k] = Some(interior_points(self.polytope, k as u64)?);
        }
        Ok(self.interiors[k].as_deref().unwrap())
    }

    /// `L_P(k)`.
    pub fn count(&mut self, k: usize) -> Result<usize> {
        self.ensure(k)?;
        Ok(self.layers[k].len())
    }
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
