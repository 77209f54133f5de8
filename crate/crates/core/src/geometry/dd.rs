//! Incremental double description: extreme rays of a pointed cone
//! `{z : M z <= 0}` over integer rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg;
use crate::par::Exec;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zero: Bits,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn normalize(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Returns `None` when the rows do not have full column rank (the cone has a
/// lineality space). Otherwise returns the primitive extreme rays.
pub(super) fn extreme_rays(
    rows: &[Vec<BigInt>],
    ncols: usize,
    exec: Exec,
) -> Option<Vec<Vec<BigInt>>> {
    let as_rat = |r: &Vec<BigInt>| -> Vec<Rational> {
        r.iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect()
    };

    // Greedy choice of ncols independent rows for the initial simplicial cone.
    let mut basis: Vec<usize> = Vec::with_capacity(ncols);
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if basis.len() == ncols {
            break;
        }
        let mut trial = echelon.clone();
        trial.push(as_rat(r));
        let red = linalg::rref(trial, ncols);
        if red.pivots.len() > echelon.len() {
            echelon = red.rows;
            basis.push(i);
        }
    }
    if basis.len() < ncols {
        return None;
    }

    let square: Vec<Vec<Rational>> = basis.iter().map(|&i| as_rat(&rows[i])).collect();
    let inv = linalg::inverse(&square).expect("independent rows are invertible");
    let nrows = rows.len();
    let mut rays: Vec<Ray> = (0..ncols)
        .map(|j| {
            let col: Vec<Rational> = (0..ncols).map(|i| -inv[i][j].clone()).collect();
            let v = crate::rational::primitive_integer(&col);
            let mut zero = Bits::new(nrows);
            for (k, &b) in basis.iter().enumerate() {
                if k != j {
                    zero.set(b);
                }
            }
            Ray { v, zero }
        })
        .collect();

    let rest: Vec<usize> = (0..nrows).filter(|i| !basis.contains(i)).collect();
    for &i in &rest {
        let row = &rows[i];
        let vals: Vec<BigInt> = exec.map(&rays, |r| dot(row, &r.v));
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        if pos.is_empty() {
            for (r, val) in rays.iter_mut().zip(&vals) {
                if val.is_zero() {
                    r.zero.set(i);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();

        let min_common = ncols.saturating_sub(2);
        let current = &rays;
        let created: Vec<Ray> = exec.flat_map(&pos, |&p| {
            let mut out = Vec::new();
            for &n in &neg {
                let common = current[p].zero.and(&current[n].zero);
                if common.count() < min_common {
                    continue;
                }
                let adjacent = current
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == n || !common.is_subset(&r.zero));
                if !adjacent {
                    continue;
                }
                let vp = &vals[p];
                let vn = -&vals[n];
                let v: Vec<BigInt> = current[n]
                    .v
                    .iter()
                    .zip(&current[p].v)
                    .map(|(a, b)| vp * a + &vn * b)
                    .collect();
                let mut zero = common;
                zero.set(i);
                out.push(Ray {
                    v: normalize(v),
                    zero,
                });
            }
            out
        });

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                next.push(r);
            } else if vals[k].is_zero() {
                r.zero.set(i);
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
    }
    Some(rays.into_iter().map(|r| r.v).collect())
}
