//! Univariate piecewise linear functions and SOS2 formulations.
//!
//! λ-space methods (`cc`, `dlog`, `log`, `logib`, `zzb`, `zzi`) produce a
//! [`FormulationFragment`] over `(λ_1..λ_{d+1}, continuous, aux)`; the simplex
//! `λ >= 0, Σλ = 1` is implicit and added by
//! [`FormulationFragment::relaxation`]. `mc` and `inc` work directly in
//! `(x, z)` and carry no λ block.

mod classic;
mod cover;
mod embedding;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::encodings::{self, CodeMatrix};
use crate::geometry::HPolytope;
use crate::model::Sense;
use crate::rational::int;
use crate::{Error, Rational, Result};

pub use classic::{build_cc, build_dlog, build_inc, build_mc};
pub use cover::{assemble_ib, assemble_ib_indexed, build_logib_cover, sos2_family, BicliqueCover};
pub use embedding::{build_embedding_sos2, build_zzb, embedding_normals};

/// `f` given by values at strictly increasing breakpoints, linear in between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePwl {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

impl UnivariatePwl {
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: breakpoints.len(),
                found: values.len(),
            });
        }
        if breakpoints.len() < 2 {
            return Err(Error::DTooSmall {
                min: 1,
                found: breakpoints.len().saturating_sub(1),
            });
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    pub fn from_ints(breakpoints: &[i64], values: &[i64]) -> Result<Self> {
        Self::new(
            breakpoints.iter().map(|&t| int(t)).collect(),
            values.iter().map(|&f| int(f)).collect(),
        )
    }

    /// Number of pieces.
    pub fn d(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (
            &self.breakpoints[0],
            self.breakpoints.last().expect("d >= 1"),
        )
    }

    /// `(slope, intercept)` of each piece.
    pub fn pieces(&self) -> Vec<(Rational, Rational)> {
        (0..self.d())
            .map(|i| {
                let (t0, t1) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
                let (f0, f1) = (&self.values[i], &self.values[i + 1]);
                let m = (f1 - f0) / (t1 - t0);
                let c = f0 - &m * t0;
                (m, c)
            })
            .collect()
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return None;
        }
        let i = self
            .breakpoints
            .windows(2)
            .position(|w| x <= &w[1])
            .expect("inside domain");
        let (m, c) = &self.pieces()[i];
        Some(m * x + c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    Cc,
    Mc,
    Inc,
    DLog,
    Log,
    LogIb,
    Zzb,
    Zzi,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Cc,
        Method::Mc,
        Method::Inc,
        Method::DLog,
        Method::Log,
        Method::LogIb,
        Method::Zzb,
        Method::Zzi,
    ];

    pub const LAMBDA: [Method; 6] = [
        Method::Cc,
        Method::DLog,
        Method::Log,
        Method::LogIb,
        Method::Zzb,
        Method::Zzi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cc => "cc",
            Method::Mc => "mc",
            Method::Inc => "inc",
            Method::DLog => "dlog",
            Method::Log => "log",
            Method::LogIb => "logib",
            Method::Zzb => "zzb",
            Method::Zzi => "zzi",
        }
    }

    /// Whether the method is expressed over the λ weights of the breakpoints.
    pub fn is_lambda(self) -> bool {
        !matches!(self, Method::Mc | Method::Inc)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxKind {
    Binary,
    Integer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxVar {
    pub name: String,
    pub kind: AuxKind,
    pub lower: Rational,
    pub upper: Rational,
}

impl AuxVar {
    pub fn binary(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: AuxKind::Binary,
            lower: Rational::zero(),
            upper: Rational::one(),
        }
    }

    pub fn integer(name: impl Into<String>, lower: i64, upper: i64) -> Self {
        Self {
            name: name.into(),
            kind: AuxKind::Integer,
            lower: int(lower),
            upper: int(upper),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContVar {
    pub name: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

/// `Σ coef * var (sense) rhs` over fragment indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Row {
    pub fn new(terms: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) -> Self {
        let mut row = Self { terms, sense, rhs };
        row.normalize();
        row
    }

    /// Merges repeated indices, drops zeros and sorts by index.
    fn normalize(&mut self) {
        self.terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(self.terms.len());
        for (i, c) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        self.terms = merged;
    }

    pub fn dense(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (i, c) in &self.terms {
            v[*i] += c;
        }
        v
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.terms
            .iter()
            .find(|t| t.0 == i)
            .map_or_else(Rational::zero, |t| t.1.clone())
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.terms.iter().map(|(i, c)| c * &x[*i]).sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
            Sense::Ge => lhs >= self.rhs,
        }
    }
}

/// A formulation over the variable blocks `[λ | continuous | aux]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulationFragment {
    pub(crate) lambda_count: usize,
    pub(crate) cont: Vec<ContVar>,
    pub(crate) aux: Vec<AuxVar>,
    pub(crate) rows: Vec<Row>,
    /// Positions of `x` and `z` inside the continuous block, for the
    /// `(x, z)`-space methods.
    pub(crate) xz: Option<(usize, usize)>,
}

impl FormulationFragment {
    pub fn new(lambda_count: usize) -> Self {
        Self {
            lambda_count,
            cont: Vec::new(),
            aux: Vec::new(),
            rows: Vec::new(),
            xz: None,
        }
    }

    pub fn lambda_count(&self) -> usize {
        self.lambda_count
    }

    pub fn cont(&self) -> &[ContVar] {
        &self.cont
    }

    pub fn aux(&self) -> &[AuxVar] {
        &self.aux
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn xz(&self) -> Option<(usize, usize)> {
        self.xz
            .map(|(x, z)| (self.cont_offset() + x, self.cont_offset() + z))
    }

    pub fn cont_offset(&self) -> usize {
        self.lambda_count
    }

    pub fn aux_offset(&self) -> usize {
        self.lambda_count + self.cont.len()
    }

    pub fn var_count(&self) -> usize {
        self.aux_offset() + self.aux.len()
    }

    /// Index of λ_v (1-based `v`).
    pub fn lambda(&self, v: usize) -> usize {
        debug_assert!(v >= 1 && v <= self.lambda_count);
        v - 1
    }

    /// Index of aux variable `k` (1-based).
    pub fn y(&self, k: usize) -> usize {
        self.aux_offset() + k - 1
    }

    pub fn add_cont(&mut self, var: ContVar) -> usize {
        debug_assert!(self.aux.is_empty(), "continuous block precedes aux");
        self.cont.push(var);
        self.lambda_count + self.cont.len() - 1
    }

    pub fn add_aux(&mut self, var: AuxVar) -> usize {
        self.aux.push(var);
        self.var_count() - 1
    }

    pub fn push_row(&mut self, terms: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) {
        self.rows.push(Row::new(terms, sense, rhs));
    }

    /// Rows other than bounds and the simplex: the "general inequalities".
    pub fn general_row_count(&self) -> usize {
        self.rows.iter().filter(|r| r.sense != Sense::Eq).count()
    }

    pub fn var_names(&self) -> Vec<String> {
        (1..=self.lambda_count)
            .map(|v| format!("lam_{v}"))
            .chain(self.cont.iter().map(|c| c.name.clone()))
            .chain(self.aux.iter().map(|a| a.name.clone()))
            .collect()
    }

    /// LP relaxation: all rows, the λ simplex, and every variable bound.
    pub fn relaxation(&self) -> HPolytope {
        let n = self.var_count();
        let mut p = HPolytope::new(n);
        for row in &self.rows {
            let a = row.dense(n);
            let res = match row.sense {
                Sense::Le => p.add_inequality(a, row.rhs.clone()),
                Sense::Ge => {
                    p.add_inequality(a.into_iter().map(|c| -c).collect(), -row.rhs.clone())
                }
                Sense::Eq => p.add_equality(a, row.rhs.clone()),
            };
            res.expect("rows are built over the fragment's own variables");
        }
        if self.lambda_count > 0 {
            for v in 0..self.lambda_count {
                p.add_bounds(v, Some(&Rational::zero()), None);
            }
            let mut sum = vec![Rational::zero(); n];
            for c in sum.iter_mut().take(self.lambda_count) {
                *c = Rational::one();
            }
            p.add_equality(sum, Rational::one()).expect("length n");
        }
        for (k, c) in self.cont.iter().enumerate() {
            p.add_bounds(self.cont_offset() + k, c.lower.as_ref(), c.upper.as_ref());
        }
        for (k, a) in self.aux.iter().enumerate() {
            p.add_bounds(self.aux_offset() + k, Some(&a.lower), Some(&a.upper));
        }
        p
    }

    /// The relaxation with every aux variable fixed to `code`.
    pub fn face_polytope(&self, code: &[i64]) -> Result<HPolytope> {
        if code.len() != self.aux.len() {
            return Err(Error::DimensionMismatch {
                expected: self.aux.len(),
                found: code.len(),
            });
        }
        let mut p = self.relaxation();
        for (k, &y) in code.iter().enumerate() {
            p.fix(self.aux_offset() + k, int(y));
        }
        Ok(p)
    }

    /// Every integer assignment within the aux bounds.
    pub fn aux_assignments(&self) -> Vec<Vec<i64>> {
        let ranges: Vec<(i64, i64)> = self
            .aux
            .iter()
            .map(|a| {
                (
                    crate::rational::to_i64(&a.lower.ceil()).expect("small bound"),
                    crate::rational::to_i64(&a.upper.floor()).expect("small bound"),
                )
            })
            .collect();
        let mut out = vec![Vec::new()];
        for (lo, hi) in ranges {
            let mut next = Vec::new();
            for prefix in &out {
                for y in lo..=hi {
                    let mut v: Vec<i64> = prefix.clone();
                    v.push(y);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
}

/// `⌈log2 d⌉`, with `0` for `d <= 1`.
pub fn code_length(d: usize) -> usize {
    if d <= 1 {
        0
    } else {
        (usize::BITS - (d - 1).leading_zeros()) as usize
    }
}

fn log_code(d: usize) -> Result<CodeMatrix> {
    encodings::truncate(&encodings::brgc(code_length(d))?, d)
}

fn zzi_code(d: usize) -> Result<CodeMatrix> {
    encodings::truncate(&encodings::zigzag_integer(code_length(d))?, d)
}

/// Builds the SOS2 formulation of a λ-space method on `d` pieces.
pub fn build_sos2(method: Method, d: usize) -> Result<FormulationFragment> {
    if d == 0 {
        return Err(Error::DTooSmall { min: 1, found: 0 });
    }
    if d == 1 && method != Method::Cc {
        // one piece: the simplex alone is the constraint
        return Ok(FormulationFragment::new(2));
    }
    match method {
        Method::Cc => Ok(build_cc(d)),
        Method::DLog => build_dlog(d),
        Method::Log => build_embedding_sos2(d, &log_code(d)?),
        Method::LogIb => assemble_ib(&build_logib_cover(d)?, d + 1),
        Method::Zzi => build_embedding_sos2(d, &zzi_code(d)?),
        Method::Zzb => build_zzb(d),
        Method::Mc | Method::Inc => Err(Error::Unsupported(format!(
            "`{method}` is formulated in (x, z) space and needs the function values"
        ))),
    }
}

/// Builds any method for a concrete function: λ-space methods ignore the
/// values, `mc` and `inc` use them.
pub fn build_for_pwl(method: Method, pwl: &UnivariatePwl) -> Result<FormulationFragment> {
    match method {
        Method::Mc => Ok(build_mc(pwl)),
        Method::Inc => Ok(build_inc(pwl)),
        m => build_sos2(m, pwl.d()),
    }
}
