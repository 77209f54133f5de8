use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{Check, Witness};
use crate::geometry::project_to_plane_with;
use crate::geometry::{convex_hull_2d, polygon_area, strengthened_proportion, PlaneMap, Polygon2D};
use crate::model::Sense;
use crate::par::Exec;
use crate::rational::{parse_rational, pretty, to_i64};
use crate::sos2::{build_for_pwl, FormulationFragment, Method, UnivariatePwl};
use crate::{Error, Rational, Result};

/// A single-variable bound `y_k <= b` or `y_k >= b` (1-based `k`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub aux: usize,
    pub sense: Sense,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
}

pub(crate) fn ser_rational<S: serde::Serializer>(
    q: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl Branch {
    pub fn le(aux: usize, bound: i64) -> Self {
        Self {
            aux,
            sense: Sense::Le,
            bound: Rational::from_integer(bound.into()),
        }
    }

    pub fn ge(aux: usize, bound: i64) -> Self {
        Self {
            aux,
            sense: Sense::Ge,
            bound: Rational::from_integer(bound.into()),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}{}{}", self.aux, self.sense, self.bound)
    }
}

impl FromStr for Branch {
    type Err = Error;

    /// Parses `y1<=0`, `y2 >= 1`, `y_3<=2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("cannot parse branch `{s}`; expected e.g. y1<=0"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact.strip_prefix('y').ok_or_else(bad)?;
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let (idx, sense, bound) = if let Some((a, b)) = rest.split_once("<=") {
            (a, Sense::Le, b)
        } else if let Some((a, b)) = rest.split_once(">=") {
            (a, Sense::Ge, b)
        } else {
            return Err(bad());
        };
        let aux: usize = idx.parse().map_err(|_| bad())?;
        if aux == 0 {
            return Err(bad());
        }
        Ok(Self {
            aux,
            sense,
            bound: parse_rational(bound)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchMetrics {
    #[serde(serialize_with = "ser_rational")]
    pub volume: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub strengthened_proportion: Rational,
    /// `None` when the branch is infeasible.
    #[serde(skip)]
    pub polygon: Option<Polygon2D>,
}

impl fmt::Display for BranchMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "volume {}, strengthened proportion {}",
            pretty(&self.volume),
            pretty(&self.strengthened_proportion)
        )
    }
}

fn plane_map(frag: &FormulationFragment, pwl: &UnivariatePwl) -> PlaneMap {
    let n = frag.var_count();
    let mut x = vec![Rational::zero(); n];
    let mut z = vec![Rational::zero(); n];
    match frag.xz() {
        Some((xi, zi)) => {
            x[xi] = Rational::one();
            z[zi] = Rational::one();
        }
        None => {
            for v in 0..frag.lambda_count() {
                x[v] = pwl.breakpoints()[v].clone();
                z[v] = pwl.values()[v].clone();
            }
        }
    }
    PlaneMap::linear(x, z)
}

fn project(
    frag: &FormulationFragment,
    pwl: &UnivariatePwl,
    branch: Option<&Branch>,
    exec: Exec,
) -> Result<Option<Polygon2D>> {
    let mut p = frag.relaxation();
    if let Some(b) = branch {
        if b.aux > frag.aux().len() {
            return Err(Error::Invalid(format!(
                "branch on y{} but the formulation has {} aux variables",
                b.aux,
                frag.aux().len()
            )));
        }
        let mut a = vec![Rational::zero(); frag.var_count()];
        a[frag.y(b.aux)] = Rational::one();
        match b.sense {
            Sense::Le => p.add_inequality(a, b.bound.clone())?,
            Sense::Ge => p.add_inequality(a.into_iter().map(|c| -c).collect(), -b.bound.clone())?,
            Sense::Eq => p.add_equality(a, b.bound.clone())?,
        }
    }
    match project_to_plane_with(&p, &plane_map(frag, pwl), exec) {
        Ok(poly) => Ok(Some(poly)),
        Err(Error::Empty) => Ok(None),
        Err(e) => Err(e),
    }
}

fn metrics(
    original: &Polygon2D,
    branched: Option<Polygon2D>,
    pwl: &UnivariatePwl,
) -> Result<BranchMetrics> {
    match branched {
        None => Ok(BranchMetrics {
            volume: Rational::zero(),
            strengthened_proportion: Rational::one(),
            polygon: None,
        }),
        Some(poly) => Ok(BranchMetrics {
            volume: polygon_area(&poly),
            strengthened_proportion: strengthened_proportion(original, &poly, pwl.domain())?,
            polygon: Some(poly),
        }),
    }
}

/// Area of the `(x, z)` projection of the relaxation after `branch`, and the
/// share of the domain where its lower envelope rises above the unbranched
/// one. `None` measures the unbranched relaxation itself.
pub fn branching_metrics(
    pwl: &UnivariatePwl,
    method: Method,
    branch: Option<&Branch>,
) -> Result<BranchMetrics> {
    let frag = build_for_pwl(method, pwl)?;
    let exec = Exec::default();
    let original = project(&frag, pwl, None, exec)?.ok_or(Error::Empty)?;
    let branched = project(&frag, pwl, branch, exec)?;
    metrics(&original, branched, pwl)
}

fn render_polygon(poly: &Polygon2D) -> Vec<String> {
    poly.vertices()
        .iter()
        .map(|(x, z)| format!("({}, {})", pretty(x), pretty(z)))
        .collect()
}

/// Passes iff the `(x, z)` projection of the relaxation is the convex hull
/// of the graph of `pwl`.
pub fn check_sharp_xz(pwl: &UnivariatePwl, method: Method) -> Result<Check> {
    let graph: Vec<(Rational, Rational)> = pwl
        .breakpoints()
        .iter()
        .cloned()
        .zip(pwl.values().iter().cloned())
        .collect();
    let hull = convex_hull_2d(&graph)?;
    let frag = build_for_pwl(method, pwl)?;
    let proj = project(&frag, pwl, None, Exec::default())?.ok_or(Error::Empty)?;
    Ok(if proj == hull {
        Check::pass("xz-sharp")
    } else {
        Check::fail(
            "xz-sharp",
            Witness::ProjectionMismatch {
                found: render_polygon(&proj),
                expected: render_polygon(&hull),
            },
        )
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingTable {
    pub method: Method,
    pub unbranched: BranchMetrics,
    pub rows: Vec<(Branch, BranchMetrics)>,
}

impl fmt::Display for BranchingTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<8} {:<10} {:<24} {}",
            "method", "branch", "volume", "strengthened prop."
        )?;
        writeln!(
            f,
            "{:<8} {:<10} {:<24} {}",
            self.method.to_string(),
            "none",
            pretty(&self.unbranched.volume),
            pretty(&self.unbranched.strengthened_proportion)
        )?;
        for (b, m) in &self.rows {
            writeln!(
                f,
                "{:<8} {:<10} {:<24} {}",
                self.method.to_string(),
                b.to_string(),
                pretty(&m.volume),
                pretty(&m.strengthened_proportion)
            )?;
        }
        Ok(())
    }
}

/// Every threshold split of `y_1`: `y1 <= b` then `y1 >= b+1` for each
/// integer `b` between its bounds.
pub fn branching_table(pwl: &UnivariatePwl, method: Method) -> Result<BranchingTable> {
    let frag = build_for_pwl(method, pwl)?;
    let aux = frag
        .aux()
        .first()
        .ok_or_else(|| Error::Invalid("formulation has no aux variables to branch on".into()))?;
    let lo = to_i64(&aux.lower).ok_or_else(|| Error::ScaleLimit("aux bound".into()))?;
    let hi = to_i64(&aux.upper).ok_or_else(|| Error::ScaleLimit("aux bound".into()))?;
    let branches: Vec<Branch> = (lo..hi)
        .flat_map(|b| [Branch::le(1, b), Branch::ge(1, b + 1)])
        .collect();

    let exec = Exec::default();
    let original = project(&frag, pwl, None, Exec::Sequential)?.ok_or(Error::Empty)?;
    let rows = exec
        .map(&branches, |b| {
            let poly = project(&frag, pwl, Some(b), Exec::Sequential)?;
            Ok((b.clone(), metrics(&original, poly, pwl)?))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(BranchingTable {
        method,
        unbranched: metrics(&original, Some(original.clone()), pwl)?,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn example() -> UnivariatePwl {
        UnivariatePwl::from_ints(&[0, 1, 2, 3, 4], &[0, 4, 7, 9, 10]).unwrap()
    }

    #[test]
    fn parse_branch() {
        assert_eq!("y1<=0".parse::<Branch>().unwrap(), Branch::le(1, 0));
        assert_eq!(" y_2 >= 1 ".parse::<Branch>().unwrap(), Branch::ge(2, 1));
        assert!("x1<=0".parse::<Branch>().is_err());
        assert!("y0<=0".parse::<Branch>().is_err());
        assert!("y1<0".parse::<Branch>().is_err());
        assert_eq!(Branch::ge(1, 2).to_string(), "y1>=2");
    }

    #[test]
    fn zzi_up_branch() {
        let m = branching_metrics(&example(), Method::Zzi, Some(&Branch::ge(1, 1))).unwrap();
        assert_eq!(m.volume, rat(7, 2));
        assert_eq!(m.strengthened_proportion, rat(1, 2));
    }

    #[test]
    fn degenerate_branch_convention() {
        let m = branching_metrics(&example(), Method::Zzi, Some(&Branch::ge(1, 2))).unwrap();
        assert_eq!((m.volume, m.strengthened_proportion), (int(0), int(1)));
        assert!(m.polygon.unwrap().is_degenerate());
    }

    #[test]
    fn infeasible_branch_convention() {
        let m = branching_metrics(&example(), Method::Log, Some(&Branch::ge(1, 2))).unwrap();
        assert_eq!((m.volume, m.strengthened_proportion), (int(0), int(1)));
        assert!(m.polygon.is_none());
    }

    #[test]
    fn vacuous_bound() {
        let m = branching_metrics(&example(), Method::Log, Some(&Branch::le(1, 1))).unwrap();
        assert_eq!((m.volume, m.strengthened_proportion), (int(5), int(0)));
    }

    #[test]
    fn table_rows() {
        let t = branching_table(&example(), Method::Zzi).unwrap();
        let names: Vec<String> = t.rows.iter().map(|r| r.0.to_string()).collect();
        assert_eq!(names, ["y1<=0", "y1>=1", "y1<=1", "y1>=2"]);
        assert_eq!(t.unbranched.strengthened_proportion, int(0));
    }

    #[test]
    fn sharp_in_xz() {
        for method in Method::ALL {
            assert!(
                check_sharp_xz(&example(), method).unwrap().passed,
                "{method}"
            );
        }
    }

    #[test]
    fn inc_projection_matches_graph_hull() {
        for method in [Method::Inc, Method::Mc, Method::Cc] {
            let m = branching_metrics(&example(), method, None).unwrap();
            assert_eq!(m.volume, int(5), "{method}");
        }
    }
}
