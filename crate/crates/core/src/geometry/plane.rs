//! Planar polygons in `(x, z)`: projection, area, lower envelope and the
//! strengthened-proportion comparison between two relaxations.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::polytope::{enumerate_vertices_with, HPolytope};
use crate::linalg::dot;
use crate::par::Exec;
use crate::{Error, Rational, Result};

pub type Point2 = (Rational, Rational);

/// Convex polygon, counter-clockwise, starting at the lexicographically
/// smallest vertex, with no collinear vertices. Two vertices describe a
/// segment and one a point; both count as degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon2D {
    vertices: Vec<Point2>,
}

impl Polygon2D {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn x_range(&self) -> (Rational, Rational) {
        let xs = self.vertices.iter().map(|v| &v.0);
        let lo = xs.clone().min().expect("polygon has a vertex").clone();
        let hi = xs.max().expect("polygon has a vertex").clone();
        (lo, hi)
    }
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Exact convex hull (monotone chain), returned in canonical form.
pub fn convex_hull_2d(points: &[Point2]) -> Result<Polygon2D> {
    let mut pts: Vec<Point2> = points.to_vec();
    if pts.is_empty() {
        return Err(Error::Empty);
    }
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Ok(Polygon2D { vertices: pts });
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // all points collinear: the chain collapses to the two extremes
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    Ok(Polygon2D { vertices: lower })
}

/// Affine map `R^n -> R^2`: `(x, z) = (rows[0] . v + offset.0, rows[1] . v + offset.1)`.
#[derive(Clone, Debug)]
pub struct PlaneMap {
    pub x: Vec<Rational>,
    pub z: Vec<Rational>,
    pub offset: Point2,
}

impl PlaneMap {
    pub fn linear(x: Vec<Rational>, z: Vec<Rational>) -> Self {
        Self {
            x,
            z,
            offset: (Rational::zero(), Rational::zero()),
        }
    }

    pub fn apply(&self, v: &[Rational]) -> Point2 {
        (
            dot(&self.x, v) + &self.offset.0,
            dot(&self.z, v) + &self.offset.1,
        )
    }
}

/// Image of a bounded polytope under an affine map to the plane.
pub fn project_to_plane(p: &HPolytope, map: &PlaneMap) -> Result<Polygon2D> {
    project_to_plane_with(p, map, Exec::default())
}

pub(crate) fn project_to_plane_with(
    p: &HPolytope,
    map: &PlaneMap,
    exec: Exec,
) -> Result<Polygon2D> {
    if map.x.len() != p.dim() || map.z.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: map.x.len().min(map.z.len()),
        });
    }
    let verts = enumerate_vertices_with(p, exec)?;
    let images: Vec<Point2> = verts.iter().map(|v| map.apply(v)).collect();
    convex_hull_2d(&images)
}

/// Shoelace area; zero for degenerate polygons.
pub fn polygon_area(poly: &Polygon2D) -> Rational {
    let v = &poly.vertices;
    if v.len() < 3 {
        return Rational::zero();
    }
    let mut twice = Rational::zero();
    for i in 0..v.len() {
        let (a, b) = (&v[i], &v[(i + 1) % v.len()]);
        twice += &a.0 * &b.1 - &b.0 * &a.1;
    }
    twice.abs() / Rational::from_integer(2.into())
}

/// Pointwise minimum of `z` over a polygon, as a continuous piecewise linear
/// function of `x`. A vertical segment gives a single breakpoint and no pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerEnvelope {
    breakpoints: Vec<Rational>,
    /// `(slope, intercept)` on `[breakpoints[i], breakpoints[i + 1]]`.
    pieces: Vec<(Rational, Rational)>,
    start_value: Rational,
}

impl LowerEnvelope {
    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[(Rational, Rational)] {
        &self.pieces
    }

    pub fn domain(&self) -> (Rational, Rational) {
        (
            self.breakpoints[0].clone(),
            self.breakpoints.last().expect("nonempty").clone(),
        )
    }

    /// Envelope value at `x`, `None` outside the domain.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let (lo, hi) = self.domain();
        if x < &lo || x > &hi {
            return None;
        }
        if self.pieces.is_empty() {
            return Some(self.start_value.clone());
        }
        let idx = self
            .breakpoints
            .windows(2)
            .position(|w| x <= &w[1])
            .unwrap_or(self.pieces.len() - 1);
        let (m, c) = &self.pieces[idx];
        Some(m * x + c)
    }
}

pub fn lower_envelope(poly: &Polygon2D) -> Result<LowerEnvelope> {
    let v = &poly.vertices;
    if v.len() <= 1 {
        return Err(Error::DegeneratePoint);
    }
    // from the lexicographic minimum, counter-clockwise order walks the lower
    // chain left to right first
    let mut chain: Vec<&Point2> = vec![&v[0]];
    for p in &v[1..] {
        if p.0 > chain.last().expect("nonempty").0 {
            chain.push(p);
        } else {
            break;
        }
    }
    let breakpoints: Vec<Rational> = chain.iter().map(|p| p.0.clone()).collect();
    let pieces = chain
        .windows(2)
        .map(|w| {
            let m = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
            let c = &w[0].1 - &m * &w[0].0;
            (m, c)
        })
        .collect();
    Ok(LowerEnvelope {
        breakpoints,
        pieces,
        start_value: v[0].1.clone(),
    })
}

/// Fraction of `[lo, hi]` on which the branched relaxation's lower envelope
/// lies strictly above the original's. Where the branched polygon has no
/// points its bound is infinite, so those `x` count as strengthened.
pub fn strengthened_proportion(
    original: &Polygon2D,
    branched: &Polygon2D,
    domain: (&Rational, &Rational),
) -> Result<Rational> {
    let (lo, hi) = domain;
    if hi <= lo {
        return Err(Error::EmptyDomain {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let width = hi - lo;
    let env_o = lower_envelope(original)?;

    let (bx0, bx1) = branched.x_range();
    let a = std::cmp::max(lo.clone(), bx0);
    let b = std::cmp::min(hi.clone(), bx1);
    if a >= b {
        // branched region meets the domain in measure zero
        return Ok(Rational::from_integer(1.into()));
    }
    let env_b = lower_envelope(branched)?;

    let mut cuts: Vec<Rational> = env_o
        .breakpoints
        .iter()
        .chain(&env_b.breakpoints)
        .filter(|x| **x > a && **x < b)
        .cloned()
        .collect();
    cuts.push(a.clone());
    cuts.push(b.clone());
    cuts.sort();
    cuts.dedup();

    let gap = |x: &Rational| -> Result<Rational> {
        let zb = env_b.eval(x).ok_or(Error::Empty)?;
        let zo = env_o
            .eval(x)
            .ok_or_else(|| Error::Invalid("domain exceeds the original relaxation".into()))?;
        Ok(zb - zo)
    };

    let mut inside = Rational::zero();
    for w in cuts.windows(2) {
        let (s, t) = (&w[0], &w[1]);
        let (gs, gt) = (gap(s)?, gap(t)?);
        let len = t - s;
        inside += match (gs.is_positive(), gt.is_positive()) {
            (true, true) => len,
            (false, false) => Rational::zero(),
            _ => {
                let root = s + &len * &gs / (&gs - &gt);
                if gs.is_positive() {
                    root - s
                } else {
                    t - root
                }
            }
        };
    }
    let outside = &width - (&b - &a);
    Ok((inside + outside) / width)
}

impl PartialOrd for Polygon2D {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polygon2D {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices.cmp(&other.vertices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(x: i64, z: i64) -> Point2 {
        (int(x), int(z))
    }

    fn graph_hull(t: &[i64], f: &[i64]) -> Polygon2D {
        let pts: Vec<Point2> = t.iter().zip(f).map(|(&a, &b)| p(a, b)).collect();
        convex_hull_2d(&pts).unwrap()
    }

    #[test]
    fn canonical_form() {
        let sq = convex_hull_2d(&[p(1, 1), p(0, 1), p(1, 0), p(0, 0), p(1, 0)]).unwrap();
        assert_eq!(sq.vertices(), &[p(0, 0), p(1, 0), p(1, 1), p(0, 1)]);
        let seg = convex_hull_2d(&[p(2, 2), p(0, 0), p(1, 1)]).unwrap();
        assert_eq!(seg.vertices(), &[p(0, 0), p(2, 2)]);
        assert!(seg.is_degenerate());
        let pt = convex_hull_2d(&[p(3, 3), p(3, 3)]).unwrap();
        assert_eq!(pt.vertices(), &[p(3, 3)]);
    }

    #[test]
    fn areas() {
        let sq = convex_hull_2d(&[p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap();
        assert_eq!(polygon_area(&sq), int(1));
        let example = graph_hull(&[0, 1, 2, 3, 4], &[0, 4, 7, 9, 10]);
        assert_eq!(polygon_area(&example), int(5));
        assert_eq!(
            polygon_area(&convex_hull_2d(&[p(0, 0), p(3, 1)]).unwrap()),
            int(0)
        );
    }

    #[test]
    fn envelopes() {
        let sq = convex_hull_2d(&[p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap();
        let env = lower_envelope(&sq).unwrap();
        assert_eq!(env.breakpoints(), &[int(0), int(1)]);
        assert_eq!(env.pieces(), &[(int(0), int(0))]);

        let example = graph_hull(&[0, 1, 2, 3, 4], &[0, 4, 7, 9, 10]);
        let env = lower_envelope(&example).unwrap();
        assert_eq!(env.breakpoints(), &[int(0), int(4)]);
        assert_eq!(env.pieces(), &[(rat(10, 4), int(0))]);

        let tri = convex_hull_2d(&[p(0, 0), p(2, 0), p(1, 1)]).unwrap();
        let env = lower_envelope(&tri).unwrap();
        assert_eq!(env.pieces(), &[(int(0), int(0))]);
        assert_eq!(env.domain(), (int(0), int(2)));

        let pt = convex_hull_2d(&[p(1, 1)]).unwrap();
        assert_eq!(lower_envelope(&pt), Err(Error::DegeneratePoint));

        let vertical = convex_hull_2d(&[p(1, 1), p(1, 5)]).unwrap();
        let env = lower_envelope(&vertical).unwrap();
        assert_eq!(env.eval(&int(1)), Some(int(1)));
    }

    #[test]
    fn proportion_basics() {
        let example = graph_hull(&[0, 1, 2, 3, 4], &[0, 4, 7, 9, 10]);
        let (lo, hi) = (int(0), int(4));
        assert_eq!(
            strengthened_proportion(&example, &example, (&lo, &hi)).unwrap(),
            int(0)
        );
        // first piece only: bound strictly better on (0, 1], infinite elsewhere
        let piece = convex_hull_2d(&[p(0, 0), p(1, 4)]).unwrap();
        assert_eq!(
            strengthened_proportion(&example, &piece, (&lo, &hi)).unwrap(),
            int(1)
        );
        assert!(matches!(
            strengthened_proportion(&example, &example, (&hi, &lo)),
            Err(Error::EmptyDomain { .. })
        ));
    }

    #[test]
    fn proportion_with_crossing() {
        // original envelope 0, branched envelope x - 1 on [0, 2]
        let orig = convex_hull_2d(&[p(0, 0), p(2, 0), p(2, 5), p(0, 5)]).unwrap();
        let br = convex_hull_2d(&[p(0, -1), p(2, 1), p(0, 5)]).unwrap();
        assert_eq!(
            strengthened_proportion(&orig, &br, (&int(0), &int(2))).unwrap(),
            rat(1, 2)
        );
    }
}
