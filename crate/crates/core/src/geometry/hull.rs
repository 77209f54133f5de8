use num_traits::Zero;

use super::polytope::{enumerate_vertices_with, HPolytope};
use crate::linalg::{self, dot};
use crate::par::Exec;
use crate::rational::int;
use crate::{Error, Rational, Result};

/// Facet description of the convex hull of a finite point set, computed in
/// the affine hull of the points (so lower-dimensional sets work too).
#[derive(Clone, Debug)]
pub struct ConvexHull {
    dim: usize,
    origin: Vec<Rational>,
    /// RREF basis of the direction space; `pivots[j]` reads coordinate `j`.
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    center: Vec<Rational>,
    /// `a . (q - center) <= 1` in local coordinates.
    facets: Vec<Vec<Rational>>,
    points: Vec<Vec<Rational>>,
}

impl ConvexHull {
    pub fn new(points: &[Vec<Rational>]) -> Result<Self> {
        Self::new_with(points, Exec::default())
    }

    pub fn new_with(points: &[Vec<Rational>], exec: Exec) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::Invalid("convex hull of no points".into()))?;
        let dim = first.len();
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let origin = first.clone();
        let diffs: Vec<Vec<Rational>> = points
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect())
            .collect();
        let red = linalg::rref(diffs.clone(), dim);
        let (basis, pivots) = (red.rows, red.pivots);
        let k = pivots.len();

        let local: Vec<Vec<Rational>> = diffs
            .iter()
            .map(|d| pivots.iter().map(|&c| d[c].clone()).collect())
            .collect();
        let n = Rational::from_integer((local.len() as i64).into());
        let center: Vec<Rational> = (0..k)
            .map(|j| local.iter().map(|q| q[j].clone()).sum::<Rational>() / &n)
            .collect();

        let facets = if k == 0 {
            Vec::new()
        } else {
            // polar of (hull - center): bounded since center is relatively interior
            let mut polar = HPolytope::new(k);
            for q in &local {
                let a: Vec<Rational> = q.iter().zip(&center).map(|(x, c)| x - c).collect();
                if a.iter().all(|x| x.is_zero()) {
                    continue;
                }
                polar.add_inequality(a, int(1))?;
            }
            enumerate_vertices_with(&polar, exec)?
        };

        Ok(Self {
            dim,
            origin,
            basis,
            pivots,
            center,
            facets,
            points: points.to_vec(),
        })
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    fn local(&self, p: &[Rational]) -> Option<Vec<Rational>> {
        let d: Vec<Rational> = p.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        let coords: Vec<Rational> = self.pivots.iter().map(|&c| d[c].clone()).collect();
        // d must be exactly the combination of the basis rows read off the pivots
        let mut rebuilt = vec![Rational::zero(); self.dim];
        for (c, row) in coords.iter().zip(&self.basis) {
            for (x, r) in rebuilt.iter_mut().zip(row) {
                *x += c * r;
            }
        }
        (rebuilt == d).then_some(coords)
    }

    pub fn contains(&self, p: &[Rational]) -> Result<bool> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        let Some(q) = self.local(p) else {
            return Ok(false);
        };
        let shifted: Vec<Rational> = q.iter().zip(&self.center).map(|(x, c)| x - c).collect();
        Ok(self.facets.iter().all(|a| dot(a, &shifted) <= int(1)))
    }

    /// The input points that are extreme points of the hull (input order).
    pub fn extreme_points(&self) -> Vec<Vec<Rational>> {
        let k = self.affine_dim();
        let mut out: Vec<Vec<Rational>> = Vec::new();
        for p in &self.points {
            if out.contains(p) {
                continue;
            }
            let extreme = if k == 0 {
                true
            } else {
                let q = self
                    .local(p)
                    .expect("input points lie in their affine hull");
                let shifted: Vec<Rational> =
                    q.iter().zip(&self.center).map(|(x, c)| x - c).collect();
                let tight: Vec<Vec<Rational>> = self
                    .facets
                    .iter()
                    .filter(|a| dot(a, &shifted) == int(1))
                    .cloned()
                    .collect();
                linalg::rank(&tight, k) == k
            };
            if extreme {
                out.push(p.clone());
            }
        }
        out
    }
}

/// True iff `p` is a convex combination of `points`.
pub fn point_in_hull(points: &[Vec<Rational>], p: &[Rational]) -> Result<bool> {
    ConvexHull::new(points)?.contains(p)
}
