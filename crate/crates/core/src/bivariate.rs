//! Grid triangulations of a rectangle and their formulations: one SOS2
//! formulation per axis on aggregated weights plus a triangle-selection
//! biclique cover.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::rational::int;
use crate::sos2::{
    assemble_ib_indexed, build_sos2, AuxVar, BicliqueCover, ContVar, FormulationFragment, Method,
    Row,
};
use crate::{Error, Rational, Result};

/// `(i, j)`, 1-based.
pub type GridPoint = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Diagonal {
    /// `(i, j)` to `(i+1, j+1)`.
    Swne,
    /// `(i+1, j)` to `(i, j+1)`.
    Senw,
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagonal::Swne => "swne",
            Diagonal::Senw => "senw",
        })
    }
}

impl FromStr for Diagonal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "swne" => Ok(Diagonal::Swne),
            "senw" => Ok(Diagonal::Senw),
            _ => Err(Error::Invalid(format!("unknown diagonal {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridTriangulation {
    xbreaks: Vec<Rational>,
    ybreaks: Vec<Rational>,
    /// `values[i-1][j-1] = F(t^1_i, t^2_j)`.
    values: Vec<Vec<Rational>>,
    /// `diag[i-1][j-1]` for cell `(i, j)`.
    diag: Vec<Vec<Diagonal>>,
}

impl GridTriangulation {
    pub fn new(
        xbreaks: Vec<Rational>,
        ybreaks: Vec<Rational>,
        values: Vec<Vec<Rational>>,
        diag: Vec<Vec<Diagonal>>,
    ) -> Result<Self> {
        for b in [&xbreaks, &ybreaks] {
            if b.len() < 2 || b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(
                    "grid breakpoints must be strictly increasing with at least two entries".into(),
                ));
            }
        }
        let (n1, n2) = (xbreaks.len(), ybreaks.len());
        if values.len() != n1 || values.iter().any(|r| r.len() != n2) {
            return Err(Error::Invalid(format!(
                "values must be a {n1} x {n2} matrix"
            )));
        }
        if diag.len() != n1 - 1 || diag.iter().any(|r| r.len() != n2 - 1) {
            return Err(Error::Invalid(format!(
                "diagonals must be a {} x {} matrix",
                n1 - 1,
                n2 - 1
            )));
        }
        Ok(Self {
            xbreaks,
            ybreaks,
            values,
            diag,
        })
    }

    /// Integer breakpoints `0..=d`, zero values, and the given diagonals.
    pub fn with_diagonals(diag: Vec<Vec<Diagonal>>) -> Result<Self> {
        let d1 = diag.len();
        let d2 = diag.first().map_or(0, Vec::len);
        let xb = (0..=d1 as i64).map(int).collect();
        let yb = (0..=d2 as i64).map(int).collect();
        Self::new(xb, yb, vec![vec![int(0); d2 + 1]; d1 + 1], diag)
    }

    pub fn uniform(d1: usize, d2: usize, diagonal: Diagonal) -> Result<Self> {
        Self::with_diagonals(vec![vec![diagonal; d2]; d1])
    }

    pub fn d1(&self) -> usize {
        self.xbreaks.len() - 1
    }

    pub fn d2(&self) -> usize {
        self.ybreaks.len() - 1
    }

    pub fn xbreaks(&self) -> &[Rational] {
        &self.xbreaks
    }

    pub fn ybreaks(&self) -> &[Rational] {
        &self.ybreaks
    }

    pub fn value(&self, p: GridPoint) -> &Rational {
        &self.values[p.0 - 1][p.1 - 1]
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn diagonal(&self, i: usize, j: usize) -> Diagonal {
        self.diag[i - 1][j - 1]
    }

    pub fn diagonals(&self) -> &[Vec<Diagonal>] {
        &self.diag
    }

    pub fn ground(&self) -> BTreeSet<GridPoint> {
        (1..=self.d1() + 1)
            .flat_map(|i| (1..=self.d2() + 1).map(move |j| (i, j)))
            .collect()
    }

    pub fn point_count(&self) -> usize {
        (self.d1() + 1) * (self.d2() + 1)
    }

    /// Position of λ_(i,j) in the row-major λ block.
    pub fn lambda_index(&self, p: GridPoint) -> usize {
        (p.0 - 1) * (self.d2() + 1) + (p.1 - 1)
    }

    pub fn point_at(&self, idx: usize) -> GridPoint {
        (idx / (self.d2() + 1) + 1, idx % (self.d2() + 1) + 1)
    }

    /// The diagonal pair of each cell that is not a triangle edge.
    pub fn forbidden_pairs(&self) -> Vec<(GridPoint, GridPoint)> {
        let mut out = Vec::new();
        for j in 1..=self.d2() {
            for i in 1..=self.d1() {
                out.push(match self.diagonal(i, j) {
                    Diagonal::Swne => ((i + 1, j), (i, j + 1)),
                    Diagonal::Senw => ((i, j), (i + 1, j + 1)),
                });
            }
        }
        out
    }
}

/// Two triangles per cell, cells ordered with `j` outer and `i` inner.
pub fn triangles(gt: &GridTriangulation) -> Vec<BTreeSet<GridPoint>> {
    let mut out = Vec::with_capacity(2 * gt.d1() * gt.d2());
    for j in 1..=gt.d2() {
        for i in 1..=gt.d1() {
            let (sw, se, nw, ne) = ((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1));
            match gt.diagonal(i, j) {
                Diagonal::Swne => {
                    out.push(BTreeSet::from([sw, se, ne]));
                    out.push(BTreeSet::from([sw, nw, ne]));
                }
                Diagonal::Senw => {
                    out.push(BTreeSet::from([sw, se, nw]));
                    out.push(BTreeSet::from([se, nw, ne]));
                }
            }
        }
    }
    out
}

/// Lifts an SOS2 cover on one axis to the grid: every set becomes its
/// product with the full index range of the other axis.
pub fn aggregated_sos2_cover(
    axis: usize,
    base: &BicliqueCover<usize>,
    d_other: usize,
) -> Result<BicliqueCover<GridPoint>> {
    let lift = |s: &BTreeSet<usize>| -> BTreeSet<GridPoint> {
        s.iter()
            .flat_map(|&u| (1..=d_other + 1).map(move |w| if axis == 1 { (u, w) } else { (w, u) }))
            .collect()
    };
    if axis != 1 && axis != 2 {
        return Err(Error::Invalid(format!("axis must be 1 or 2, got {axis}")));
    }
    let levels = base
        .levels()
        .iter()
        .map(|(a, b)| (lift(a), lift(b)))
        .collect();
    BicliqueCover::new(lift(base.ground()), levels)
}

/// Triangle selection with at most six levels: walk every diagonal and
/// anti-diagonal line, alternate sides across forbidden pairs, and merge
/// lines whose offsets agree modulo 3.
pub fn six_stencil_cover(gt: &GridTriangulation) -> BicliqueCover<GridPoint> {
    let (d1, d2) = (gt.d1() as i64, gt.d2() as i64);
    let forbidden: BTreeSet<(GridPoint, GridPoint)> = gt
        .forbidden_pairs()
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    let is_forbidden = |a: GridPoint, b: GridPoint| forbidden.contains(&(a.min(b), a.max(b)));

    let on_grid = |u: i64, v: i64| u >= 1 && u <= d1 + 1 && v >= 1 && v <= d2 + 1;
    // lines as point lists ordered by the first coordinate
    let diagonal_line = |i: i64| -> Vec<GridPoint> {
        (1..=d1 + 1)
            .filter(|&u| on_grid(u, u + i))
            .map(|u| (u as usize, (u + i) as usize))
            .collect()
    };
    let anti_line = |i: i64| -> Vec<GridPoint> {
        (1..=d1 + 1)
            .filter(|&u| on_grid(u, d1 + 2 - i - u))
            .map(|u| (u as usize, (d1 + 2 - i - u) as usize))
            .collect()
    };

    let split = |line: &[GridPoint]| -> (BTreeSet<GridPoint>, BTreeSet<GridPoint>) {
        let mut adj: BTreeSet<usize> = BTreeSet::new();
        for k in 1..line.len() {
            if is_forbidden(line[k - 1], line[k]) {
                adj.insert(k - 1);
                adj.insert(k);
            }
        }
        let (mut a, mut b) = (BTreeSet::new(), BTreeSet::new());
        let mut side_a = true;
        let mut prev: Option<usize> = None;
        for &k in &adj {
            if let Some(p) = prev {
                if p + 1 == k && is_forbidden(line[p], line[k]) {
                    side_a = !side_a;
                }
            }
            if side_a {
                a.insert(line[k]);
            } else {
                b.insert(line[k]);
            }
            prev = Some(k);
        }
        (a, b)
    };

    let mut levels = Vec::with_capacity(6);
    for diagonal in [true, false] {
        let offsets = if diagonal { -d1..=d2 } else { -d2..=d1 };
        let mut groups: BTreeMap<i64, (BTreeSet<GridPoint>, BTreeSet<GridPoint>)> = BTreeMap::new();
        for i in offsets {
            let line = if diagonal {
                diagonal_line(i)
            } else {
                anti_line(i)
            };
            let (a, b) = split(&line);
            let g = groups.entry(i.rem_euclid(3)).or_default();
            g.0.extend(a);
            g.1.extend(b);
        }
        levels.extend(
            groups
                .into_values()
                .filter(|(a, b)| !a.is_empty() || !b.is_empty()),
        );
    }
    BicliqueCover::new(gt.ground(), levels).expect("sides of a line are disjoint")
}

/// First problem found with a triangle-selection cover: a level joining two
/// points of one triangle, or a forbidden cell diagonal left unseparated.
pub fn triangle_cover_violation(
    gt: &GridTriangulation,
    cover: &BicliqueCover<GridPoint>,
) -> Option<String> {
    let tris = triangles(gt);
    for (k, (a, b)) in cover.levels().iter().enumerate() {
        if let Some(x) = a.intersection(b).next() {
            return Some(format!("level {} has {x:?} on both sides", k + 1));
        }
        for u in a {
            for v in b {
                if tris.iter().any(|t| t.contains(u) && t.contains(v)) {
                    return Some(format!(
                        "level {} separates triangle edge {u:?}-{v:?}",
                        k + 1
                    ));
                }
            }
        }
    }
    let separated = |u: &GridPoint, v: &GridPoint| {
        cover
            .levels()
            .iter()
            .any(|(a, b)| (a.contains(u) && b.contains(v)) || (a.contains(v) && b.contains(u)))
    };
    gt.forbidden_pairs()
        .into_iter()
        .find(|(u, v)| !separated(u, v))
        .map(|(u, v)| format!("cell diagonal {u:?}-{v:?} is not separated"))
}

/// A fragment, the λ indices each of its λ maps to, and a name prefix.
type Part<'a> = (
    FormulationFragment,
    Box<dyn Fn(usize) -> Vec<usize> + 'a>,
    String,
);

/// Appends `parts` to one fragment over `lambda_count` weights. Each part
/// maps its own λ indices to a list of target λ indices (a weight of the part
/// becomes the sum of those targets).
fn combine(lambda_count: usize, parts: Vec<Part<'_>>) -> FormulationFragment {
    let mut out = FormulationFragment::new(lambda_count);
    let mut cont_base = Vec::with_capacity(parts.len());
    for (frag, _, prefix) in &parts {
        cont_base.push(out.cont.len());
        out.cont.extend(frag.cont().iter().map(|c| ContVar {
            name: format!("{prefix}{}", c.name),
            ..c.clone()
        }));
    }
    let mut aux_base = Vec::with_capacity(parts.len());
    for (frag, _, _) in &parts {
        aux_base.push(out.aux.len());
        for a in frag.aux() {
            let k = out.aux.len() + 1;
            out.aux.push(AuxVar {
                name: format!("y_{k}"),
                ..a.clone()
            });
        }
    }
    let cont_start = lambda_count;
    let aux_start = lambda_count + out.cont.len();
    for (p, (frag, lmap, _)) in parts.iter().enumerate() {
        for row in frag.rows() {
            let mut terms = Vec::new();
            for (i, c) in &row.terms {
                if *i < frag.cont_offset() {
                    terms.extend(lmap(*i).into_iter().map(|t| (t, c.clone())));
                } else if *i < frag.aux_offset() {
                    terms.push((
                        cont_start + cont_base[p] + i - frag.cont_offset(),
                        c.clone(),
                    ));
                } else {
                    terms.push((aux_start + aux_base[p] + i - frag.aux_offset(), c.clone()));
                }
            }
            out.rows.push(Row::new(terms, row.sense, row.rhs.clone()));
        }
    }
    out
}

/// SOS2 formulations on the aggregated weights of each axis (`None` skips an
/// axis) plus independent branching on `triangle_cover`.
pub fn build_bivariate(
    gt: &GridTriangulation,
    method_x: Option<Method>,
    method_y: Option<Method>,
    triangle_cover: &BicliqueCover<GridPoint>,
) -> Result<FormulationFragment> {
    if let Some(msg) = triangle_cover_violation(gt, triangle_cover) {
        return Err(Error::InvalidTriangleCover(msg));
    }
    let (d1, d2) = (gt.d1(), gt.d2());
    let n = gt.point_count();
    let mut parts: Vec<Part<'_>> = Vec::new();
    for (axis, method) in [(1, method_x), (2, method_y)] {
        let Some(m) = method else { continue };
        if !m.is_lambda() {
            return Err(Error::Unsupported(format!(
                "`{m}` has no aggregated form; use a lambda-space method"
            )));
        }
        let frag = build_sos2(m, if axis == 1 { d1 } else { d2 })?;
        let map: Box<dyn Fn(usize) -> Vec<usize>> = if axis == 1 {
            Box::new(move |u| (1..=d2 + 1).map(|j| u * (d2 + 1) + j - 1).collect())
        } else {
            Box::new(move |w| (1..=d1 + 1).map(|i| (i - 1) * (d2 + 1) + w).collect())
        };
        parts.push((frag, map, format!("a{axis}_")));
    }
    let tri = assemble_ib_indexed(triangle_cover, n, |p| {
        (p.0 >= 1 && p.0 <= d1 + 1 && p.1 >= 1 && p.1 <= d2 + 1).then(|| gt.lambda_index(*p))
    })?;
    parts.push((tri, Box::new(|i| vec![i]), String::new()));
    Ok(combine(n, parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sos2::build_logib_cover;

    fn set(v: &[GridPoint]) -> BTreeSet<GridPoint> {
        v.iter().copied().collect()
    }

    #[test]
    fn single_cell_triangles() {
        let gt = GridTriangulation::uniform(1, 1, Diagonal::Senw).unwrap();
        assert_eq!(
            triangles(&gt),
            vec![
                set(&[(1, 1), (2, 1), (1, 2)]),
                set(&[(2, 1), (1, 2), (2, 2)])
            ]
        );
        let gt = GridTriangulation::uniform(1, 1, Diagonal::Swne).unwrap();
        assert_eq!(
            triangles(&gt),
            vec![
                set(&[(1, 1), (2, 1), (2, 2)]),
                set(&[(1, 1), (1, 2), (2, 2)])
            ]
        );
    }

    #[test]
    fn two_by_two_triangles() {
        let gt = GridTriangulation::uniform(2, 2, Diagonal::Senw).unwrap();
        let t = triangles(&gt);
        assert_eq!(t.len(), 8);
        assert_eq!(t[2], set(&[(2, 1), (3, 1), (2, 2)]));
        assert_eq!(t[7], set(&[(2, 3), (3, 2), (3, 3)]));
    }

    #[test]
    fn aggregation() {
        let base = build_logib_cover(2).unwrap();
        let c = aggregated_sos2_cover(1, &base, 2).unwrap();
        assert_eq!(
            c.levels()[0],
            (
                set(&[(3, 1), (3, 2), (3, 3)]),
                set(&[(1, 1), (1, 2), (1, 3)])
            )
        );
        let c = aggregated_sos2_cover(2, &base, 2).unwrap();
        assert_eq!(
            c.levels()[0],
            (
                set(&[(1, 3), (2, 3), (3, 3)]),
                set(&[(1, 1), (2, 1), (3, 1)])
            )
        );
        let empty = BicliqueCover::new((1..=3).collect(), vec![]).unwrap();
        assert!(aggregated_sos2_cover(1, &empty, 2).unwrap().is_empty());
    }

    #[test]
    fn stencil_is_valid_on_uniform_grids() {
        for diag in [Diagonal::Swne, Diagonal::Senw] {
            for (d1, d2) in [(1, 1), (2, 3), (4, 4), (5, 2)] {
                let gt = GridTriangulation::uniform(d1, d2, diag).unwrap();
                let c = six_stencil_cover(&gt);
                assert!(c.len() <= 6);
                assert_eq!(triangle_cover_violation(&gt, &c), None, "{diag} {d1}x{d2}");
            }
        }
        // all swne: only anti-diagonal lines carry forbidden pairs
        let gt = GridTriangulation::uniform(4, 4, Diagonal::Swne).unwrap();
        assert_eq!(six_stencil_cover(&gt).len(), 3);
    }

    #[test]
    fn stencil_on_mixed_grid() {
        use Diagonal::*;
        let gt = GridTriangulation::with_diagonals(vec![
            vec![Swne, Senw, Swne],
            vec![Senw, Senw, Swne],
            vec![Swne, Swne, Senw],
        ])
        .unwrap();
        let c = six_stencil_cover(&gt);
        assert!(c.len() <= 6);
        assert_eq!(triangle_cover_violation(&gt, &c), None);
    }

    #[test]
    fn single_cell_formulation() {
        let gt = GridTriangulation::uniform(1, 1, Diagonal::Senw).unwrap();
        let cover = six_stencil_cover(&gt);
        let f = build_bivariate(&gt, Some(Method::Log), Some(Method::Zzi), &cover).unwrap();
        assert_eq!(f.aux().len(), 1);
        assert_eq!(f.lambda_count(), 4);
    }

    #[test]
    fn rejects_bad_triangle_cover() {
        let gt = GridTriangulation::uniform(1, 1, Diagonal::Senw).unwrap();
        let empty = BicliqueCover::new(gt.ground(), vec![]).unwrap();
        assert!(matches!(
            build_bivariate(&gt, None, None, &empty),
            Err(Error::InvalidTriangleCover(_))
        ));
        // separating a triangle edge
        let bad = BicliqueCover::new(
            gt.ground(),
            vec![(set(&[(1, 1), (2, 1)]), set(&[(2, 2), (1, 2)]))],
        )
        .unwrap();
        assert!(triangle_cover_violation(&gt, &bad).is_some());
    }

    #[test]
    fn aggregated_rows_sum_columns() {
        let gt = GridTriangulation::uniform(2, 1, Diagonal::Swne).unwrap();
        let cover = six_stencil_cover(&gt);
        let f = build_bivariate(&gt, Some(Method::LogIb), None, &cover).unwrap();
        // first level of the axis-1 cover: λ_(3,1) + λ_(3,2) <= y_1
        let r = &f.rows()[0];
        let idx: Vec<usize> = r.terms.iter().map(|t| t.0).collect();
        assert_eq!(
            idx,
            vec![gt.lambda_index((3, 1)), gt.lambda_index((3, 2)), f.y(1)]
        );
    }
}
