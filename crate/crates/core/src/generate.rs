//! Seeded benchmark instances.
//!
//! All randomness comes from ChaCha8 (`rand_chacha` 0.3) seeded with
//! `seed_from_u64(seed)`. Stream 0 draws the shared data (supplies, demands);
//! the function on arc `k` (0-based, source-major) draws from stream `k + 1`,
//! so each arc is reproducible on its own and independent of the arc count.
//! Instances match the benchmark shape (concave nondecreasing costs, piece
//! counts, breakpoint dropping), not any particular published distribution.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bivariate::{Diagonal, GridTriangulation};
use crate::io::{PwlInstance, PwlInstanceSpec};
use crate::model::{
    add_bivariate_pwl_named, add_univariate_pwl_named, Model, ObjSense, Sense, VarId, VarKind,
};
use crate::rational::int;
use crate::sos2::{Method, UnivariatePwl};
use crate::{Error, Rational, Result};

fn stream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// `n` positive integers summing to `total` (requires `total >= n`).
fn split(rng: &mut ChaCha8Rng, total: i64, n: usize) -> Vec<i64> {
    // n-1 distinct cut points in 1..total
    let mut cuts: Vec<i64> = sample(rng, (total - 1) as usize, n - 1)
        .into_iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts.into_iter().chain([total]) {
        out.push(c - prev);
        prev = c;
    }
    out
}

fn balanced(seed: u64, m: usize, n: usize) -> (Vec<i64>, Vec<i64>) {
    let mut rng = stream(seed, 0);
    let supplies: Vec<i64> = (0..m).map(|_| rng.gen_range(10..=100)).collect();
    let total: i64 = supplies.iter().sum();
    let demands = split(&mut rng, total, n);
    (supplies, demands)
}

/// Concave nondecreasing function on `[0, cap]` with `pieces` pieces,
/// `f(0) = 0`, seeded slopes strictly decreasing and positive.
fn concave_breaks(
    rng: &mut ChaCha8Rng,
    cap: &Rational,
    pieces: usize,
) -> (Vec<Rational>, Vec<Rational>) {
    let widths: Vec<i64> = (0..pieces).map(|_| rng.gen_range(1..=10)).collect();
    let total: i64 = widths.iter().sum();
    let mut slopes = vec![0i64; pieces];
    let mut s = 0;
    for k in (0..pieces).rev() {
        s += rng.gen_range(1..=5);
        slopes[k] = s;
    }
    let (mut t, mut f) = (vec![int(0)], vec![int(0)]);
    let mut acc = 0;
    for k in 0..pieces {
        acc += widths[k];
        let next = cap * Rational::new(acc.into(), total.into());
        let rise = (&next - t.last().expect("nonempty")) * int(slopes[k]);
        f.push(f.last().expect("nonempty") + rise);
        t.push(next);
    }
    (t, f)
}

/// Removes `count` randomly chosen interior breakpoints.
fn drop_interior(rng: &mut ChaCha8Rng, t: &mut Vec<Rational>, f: &mut Vec<Rational>, count: usize) {
    let interior = t.len() - 2;
    let mut gone: Vec<usize> = sample(rng, interior, count.min(interior))
        .into_iter()
        .map(|k| k + 1)
        .collect();
    gone.sort_unstable_by(|a, b| b.cmp(a));
    for k in gone {
        t.remove(k);
        f.remove(k);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportInstance {
    pub supplies: Vec<i64>,
    pub demands: Vec<i64>,
    /// Arc `(i, j)` at `i * demands.len() + j`.
    pub costs: Vec<UnivariatePwl>,
}

/// Balanced `m × n` transportation problem whose arc costs are concave
/// nondecreasing with `segments` pieces on `[0, min(s_i, d_j)]`. With `drop`,
/// `log2(segments) − 1` interior breakpoints are removed from every arc.
pub fn gen_transport_univariate(
    m: usize,
    n: usize,
    segments: usize,
    seed: u64,
    drop: bool,
) -> Result<TransportInstance> {
    if m == 0 || n == 0 {
        return Err(Error::Invalid(
            "need at least one source and one sink".into(),
        ));
    }
    if segments < 2 || !segments.is_power_of_two() {
        return Err(Error::Invalid(format!(
            "segments must be a power of two >= 2, got {segments}"
        )));
    }
    let (supplies, demands) = balanced(seed, m, n);
    let mut costs = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let mut rng = stream(seed, (i * n + j) as u64 + 1);
            let cap = int(supplies[i].min(demands[j]));
            let (mut t, mut f) = concave_breaks(&mut rng, &cap, segments);
            if drop {
                drop_interior(
                    &mut rng,
                    &mut t,
                    &mut f,
                    segments.trailing_zeros() as usize - 1,
                );
            }
            costs.push(UnivariatePwl::new(t, f)?);
        }
    }
    Ok(TransportInstance {
        supplies,
        demands,
        costs,
    })
}

fn flow_vars(
    model: &mut Model,
    prefix: &str,
    caps: impl Iterator<Item = (usize, usize, Rational)>,
) -> Result<Vec<VarId>> {
    caps.map(|(i, j, cap)| {
        model.add_var(
            format!("{prefix}{}_{}", i + 1, j + 1),
            VarKind::Continuous,
            Some(int(0)),
            Some(cap),
        )
    })
    .collect()
}

fn transport_rows(
    model: &mut Model,
    supplies: &[i64],
    demands: &[i64],
    flows: &[Vec<VarId>],
) -> Result<()> {
    let n = demands.len();
    for (i, s) in supplies.iter().enumerate() {
        let terms = flows
            .iter()
            .flat_map(|f| (0..n).map(move |j| (f[i * n + j], int(1))))
            .collect();
        model.add_constraint(format!("supply_{}", i + 1), terms, Sense::Eq, int(*s))?;
    }
    for (j, d) in demands.iter().enumerate() {
        let terms = flows
            .iter()
            .flat_map(|f| (0..supplies.len()).map(move |i| (f[i * n + j], int(1))))
            .collect();
        model.add_constraint(format!("demand_{}", j + 1), terms, Sense::Eq, int(*d))?;
    }
    Ok(())
}

impl TransportInstance {
    /// Minimize total arc cost, each cost modeled with `method`.
    pub fn to_model(&self, method: Method) -> Result<Model> {
        let n = self.demands.len();
        let mut model = Model::new();
        let caps = self
            .costs
            .iter()
            .enumerate()
            .map(|(k, f)| (k / n, k % n, f.domain().1.clone()));
        let x = flow_vars(&mut model, "x_", caps)?;
        let mut objective = Vec::with_capacity(x.len());
        for (k, f) in self.costs.iter().enumerate() {
            let prefix = format!("a{}_{}_", k / n + 1, k % n + 1);
            let z = add_univariate_pwl_named(&mut model, x[k], f, method, &prefix)?;
            objective.push((z, int(1)));
        }
        transport_rows(&mut model, &self.supplies, &self.demands, &[x])?;
        model.set_objective(ObjSense::Minimize, objective)?;
        Ok(model)
    }

    pub fn summary(&self) -> InstanceSummary {
        InstanceSummary {
            supplies: self.supplies.clone(),
            demands: self.demands.clone(),
            functions: self
                .costs
                .iter()
                .map(|f| PwlInstanceSpec::from_instance(&PwlInstance::Univariate(f.clone())))
                .collect(),
        }
    }
}

/// Serializable record of a generated bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub supplies: Vec<i64>,
    pub demands: Vec<i64>,
    pub functions: Vec<PwlInstanceSpec>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TriangulationOptions {
    /// Use this diagonal in every cell instead of drawing one.
    pub force: Option<Diagonal>,
    /// Draw concave nondecreasing separable values instead of zeros.
    pub concave_values: bool,
}

/// `d1 × d2` grid on integer breakpoints with a seeded diagonal per cell.
pub fn gen_random_triangulation(
    d1: usize,
    d2: usize,
    seed: u64,
    opts: TriangulationOptions,
) -> Result<GridTriangulation> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::Invalid(
            "grid needs at least one cell per axis".into(),
        ));
    }
    let mut rng = stream(seed, 0);
    let diag: Vec<Vec<Diagonal>> = (0..d1)
        .map(|_| {
            (0..d2)
                .map(|_| {
                    let drawn = if rng.gen_bool(0.5) {
                        Diagonal::Swne
                    } else {
                        Diagonal::Senw
                    };
                    opts.force.unwrap_or(drawn)
                })
                .collect()
        })
        .collect();
    let xb: Vec<Rational> = (0..=d1 as i64).map(int).collect();
    let yb: Vec<Rational> = (0..=d2 as i64).map(int).collect();
    let values = if opts.concave_values {
        let (_, g) = concave_breaks(&mut rng, &int(d1 as i64), d1);
        let (_, h) = concave_breaks(&mut rng, &int(d2 as i64), d2);
        g.iter()
            .map(|gi| h.iter().map(|hj| gi + hj).collect())
            .collect()
    } else {
        vec![vec![int(0); d2 + 1]; d1 + 1]
    };
    GridTriangulation::new(xb, yb, values, diag)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateTransportInstance {
    pub supplies: Vec<i64>,
    pub demands: Vec<i64>,
    /// Cost of arc `(i, j)` as a function of its (regular, express) flows.
    pub costs: Vec<GridTriangulation>,
}

/// Single-commodity `m × n` transportation problem with two shipping modes
/// per arc; the cost of each arc is a bivariate function of the two mode
/// flows on a `segments × segments` grid with seeded diagonals.
pub fn gen_transport_bivariate(
    m: usize,
    n: usize,
    segments: usize,
    seed: u64,
) -> Result<BivariateTransportInstance> {
    if m == 0 || n == 0 || segments == 0 {
        return Err(Error::Invalid(
            "need sources, sinks and at least one segment".into(),
        ));
    }
    let (supplies, demands) = balanced(seed, m, n);
    let mut costs = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let mut rng = stream(seed, (i * n + j) as u64 + 1);
            let cap = int(supplies[i].min(demands[j]));
            let (xb, g) = concave_breaks(&mut rng, &cap, segments);
            let (yb, h) = concave_breaks(&mut rng, &cap, segments);
            // express shipping costs more per unit
            let values = g
                .iter()
                .map(|gi| h.iter().map(|hj| gi + hj * int(2)).collect())
                .collect();
            let diag = (0..segments)
                .map(|_| {
                    (0..segments)
                        .map(|_| {
                            if rng.gen_bool(0.5) {
                                Diagonal::Swne
                            } else {
                                Diagonal::Senw
                            }
                        })
                        .collect()
                })
                .collect();
            costs.push(GridTriangulation::new(xb, yb, values, diag)?);
        }
    }
    Ok(BivariateTransportInstance {
        supplies,
        demands,
        costs,
    })
}

impl BivariateTransportInstance {
    pub fn to_model(&self, method_x: Method, method_y: Method) -> Result<Model> {
        let n = self.demands.len();
        let mut model = Model::new();
        let cap = |k: usize| self.costs[k].xbreaks().last().expect("nonempty").clone();
        let regular = flow_vars(
            &mut model,
            "x_",
            (0..self.costs.len()).map(|k| (k / n, k % n, cap(k))),
        )?;
        let express = flow_vars(
            &mut model,
            "w_",
            (0..self.costs.len()).map(|k| (k / n, k % n, cap(k))),
        )?;
        let mut objective = Vec::new();
        for (k, gt) in self.costs.iter().enumerate() {
            let prefix = format!("a{}_{}_", k / n + 1, k % n + 1);
            let z = add_bivariate_pwl_named(
                &mut model, regular[k], express[k], gt, method_x, method_y, &prefix,
            )?;
            objective.push((z, int(1)));
        }
        transport_rows(
            &mut model,
            &self.supplies,
            &self.demands,
            &[regular, express],
        )?;
        model.set_objective(ObjSense::Minimize, objective)?;
        Ok(model)
    }

    pub fn summary(&self) -> InstanceSummary {
        InstanceSummary {
            supplies: self.supplies.clone(),
            demands: self.demands.clone(),
            functions: self
                .costs
                .iter()
                .map(|gt| PwlInstanceSpec::from_instance(&PwlInstance::Bivariate(gt.clone())))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concave(f: &UnivariatePwl) -> bool {
        let slopes: Vec<Rational> = f.pieces().into_iter().map(|p| p.0).collect();
        slopes.iter().all(|s| *s > int(0)) && slopes.windows(2).all(|w| w[0] > w[1])
    }

    #[test]
    fn transport_shape() {
        let inst = gen_transport_univariate(10, 10, 8, 1, false).unwrap();
        assert_eq!(inst.costs.len(), 100);
        assert!(inst.costs.iter().all(|f| f.d() == 8 && concave(f)));
        assert_eq!(
            inst.supplies.iter().sum::<i64>(),
            inst.demands.iter().sum::<i64>()
        );
        assert!(inst.demands.iter().all(|&d| d > 0));
    }

    #[test]
    fn dropping_keeps_concavity() {
        let inst = gen_transport_univariate(3, 4, 8, 9, true).unwrap();
        assert!(inst.costs.iter().all(|f| f.d() == 6 && concave(f)));
        let inst = gen_transport_univariate(2, 2, 2, 9, true).unwrap();
        assert!(inst.costs.iter().all(|f| f.d() == 2));
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = gen_transport_univariate(3, 3, 4, 42, true).unwrap();
        assert_eq!(a, gen_transport_univariate(3, 3, 4, 42, true).unwrap());
        assert_ne!(a, gen_transport_univariate(3, 3, 4, 43, true).unwrap());
        let t = gen_random_triangulation(2, 2, 5, TriangulationOptions::default()).unwrap();
        assert_eq!(
            t,
            gen_random_triangulation(2, 2, 5, TriangulationOptions::default()).unwrap()
        );
    }

    #[test]
    fn forced_diagonal() {
        let opts = TriangulationOptions {
            force: Some(Diagonal::Swne),
            concave_values: true,
        };
        let t = gen_random_triangulation(3, 2, 7, opts).unwrap();
        assert!(t.diagonals().iter().flatten().all(|&d| d == Diagonal::Swne));
    }

    #[test]
    fn models_build() {
        let inst = gen_transport_univariate(2, 3, 4, 3, false).unwrap();
        let m = inst.to_model(Method::Log).unwrap();
        assert_eq!(m.count_kind(VarKind::Binary), 6 * 2);
        let inst = gen_transport_bivariate(2, 2, 2, 3).unwrap();
        let m = inst.to_model(Method::Log, Method::Log).unwrap();
        assert!(m.count_kind(VarKind::Binary) > 0);
        assert!(m.find("w_2_2").is_some());
    }
}
