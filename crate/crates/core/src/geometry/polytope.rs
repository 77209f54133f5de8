use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dd;
use crate::linalg::{self, dot};
use crate::par::Exec;
use crate::rational::primitive_integer;
use crate::{Error, Rational, Result};

/// `{x : A_eq x = b_eq, A x <= b}` over exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    equalities: Vec<(Vec<Rational>, Rational)>,
    inequalities: Vec<(Vec<Rational>, Rational)>,
}

impl HPolytope {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.inequalities
    }

    fn check_len(&self, a: &[Rational]) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.len(),
            });
        }
        Ok(())
    }

    /// `a . x = b`
    pub fn add_equality(&mut self, a: Vec<Rational>, b: Rational) -> Result<()> {
        self.check_len(&a)?;
        self.equalities.push((a, b));
        Ok(())
    }

    /// `a . x <= b`
    pub fn add_inequality(&mut self, a: Vec<Rational>, b: Rational) -> Result<()> {
        self.check_len(&a)?;
        self.inequalities.push((a, b));
        Ok(())
    }

    /// Adds `lo <= x_i <= hi`; `None` leaves that side open.
    pub fn add_bounds(&mut self, i: usize, lo: Option<&Rational>, hi: Option<&Rational>) {
        if let Some(lo) = lo {
            let mut a = vec![Rational::zero(); self.dim];
            a[i] = Rational::from_integer((-1).into());
            self.inequalities.push((a, -lo.clone()));
        }
        if let Some(hi) = hi {
            let mut a = vec![Rational::zero(); self.dim];
            a[i] = Rational::from_integer(1.into());
            self.inequalities.push((a, hi.clone()));
        }
    }

    /// Pins `x_i = value`.
    pub fn fix(&mut self, i: usize, value: Rational) {
        let mut a = vec![Rational::zero(); self.dim];
        a[i] = Rational::from_integer(1.into());
        self.equalities.push((a, value));
    }

    /// True when `x` satisfies every row.
    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.equalities.iter().all(|(a, b)| &dot(a, x) == b)
            && self.inequalities.iter().all(|(a, b)| &dot(a, x) <= b)
    }

    pub fn vertices(&self) -> Result<Vec<Vec<Rational>>> {
        enumerate_vertices_with(self, Exec::default())
    }
}

/// Exact extreme points of a bounded, nonempty polytope, sorted and
/// deduplicated.
pub fn enumerate_vertices(p: &HPolytope) -> Result<Vec<Vec<Rational>>> {
    enumerate_vertices_with(p, Exec::default())
}

pub fn enumerate_vertices_with(p: &HPolytope, exec: Exec) -> Result<Vec<Vec<Rational>>> {
    let param = AffineParam::from_equalities(p)?;
    let k = param.free_dim();
    // inequalities in the free coordinates: g . w <= h
    let reduced: Vec<(Vec<Rational>, Rational)> = p
        .inequalities
        .iter()
        .map(|(a, b)| {
            let g: Vec<Rational> = (0..k).map(|j| dot(a, &param.direction(j))).collect();
            let h = b - dot(a, &param.origin);
            (g, h)
        })
        .collect();

    let local = enumerate_reduced(&reduced, k, exec)?;
    let mut out: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for w in local {
        out.insert(param.lift(&w));
    }
    Ok(out.into_iter().collect())
}

/// Vertices of `{w in R^k : g_i . w <= h_i}`.
fn enumerate_reduced(
    rows: &[(Vec<Rational>, Rational)],
    k: usize,
    exec: Exec,
) -> Result<Vec<Vec<Rational>>> {
    if k == 0 {
        return if rows.iter().all(|(_, h)| !h.is_negative()) {
            Ok(vec![Vec::new()])
        } else {
            Err(Error::Empty)
        };
    }

    let g: Vec<Vec<Rational>> = rows.iter().map(|(g, _)| g.clone()).collect();
    let lineality = linalg::nullspace(&g, k);
    if !lineality.is_empty() {
        // Restrict to the row space of g: nonempty there iff nonempty at all,
        // and any feasible point comes with a whole line.
        let basis = linalg::rref(g.clone(), k).rows;
        let sub: Vec<(Vec<Rational>, Rational)> = rows
            .iter()
            .map(|(gi, h)| (basis.iter().map(|b| dot(gi, b)).collect(), h.clone()))
            .collect();
        return match enumerate_reduced(&sub, basis.len(), exec) {
            Ok(_) => Err(Error::Unbounded),
            Err(e) => Err(e),
        };
    }

    let mut cone: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|(g, h)| {
            let mut r = g.clone();
            r.push(-h.clone());
            primitive_integer(&r)
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut t_row = vec![BigInt::zero(); k + 1];
    t_row[k] = BigInt::from(-1);
    cone.push(t_row);

    let rays = dd::extreme_rays(&cone, k + 1, exec).expect("full column rank checked above");
    let mut vertices = Vec::new();
    let mut recession = false;
    for r in rays {
        if r[k].is_zero() {
            recession = true;
            continue;
        }
        let t = Rational::from_integer(r[k].clone());
        vertices.push(
            r[..k]
                .iter()
                .map(|x| Rational::from_integer(x.clone()) / &t)
                .collect(),
        );
    }
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    if recession {
        return Err(Error::Unbounded);
    }
    Ok(vertices)
}

/// `x = origin + sum_j w_j * direction_j` covering the solution set of the
/// equalities.
struct AffineParam {
    origin: Vec<Rational>,
    directions: Vec<Vec<Rational>>,
}

impl AffineParam {
    fn from_equalities(p: &HPolytope) -> Result<Self> {
        let n = p.dim;
        let aug: Vec<Vec<Rational>> = p
            .equalities
            .iter()
            .map(|(a, b)| {
                let mut r = a.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let red = linalg::rref(aug, n + 1);
        if red.pivots.last() == Some(&n) {
            return Err(Error::Empty);
        }
        let mut origin = vec![Rational::zero(); n];
        for (row, &piv) in red.rows.iter().zip(&red.pivots) {
            origin[piv] = row[n].clone();
        }
        let pivot_rows: Vec<Vec<Rational>> = red.rows.iter().map(|r| r[..n].to_vec()).collect();
        let directions = linalg::nullspace(&pivot_rows, n);
        Ok(Self { origin, directions })
    }

    fn free_dim(&self) -> usize {
        self.directions.len()
    }

    fn direction(&self, j: usize) -> Vec<Rational> {
        self.directions[j].clone()
    }

    fn lift(&self, w: &[Rational]) -> Vec<Rational> {
        let mut x = self.origin.clone();
        for (wj, d) in w.iter().zip(&self.directions) {
            if wj.is_zero() {
                continue;
            }
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += wj * di;
            }
        }
        x
    }
}
