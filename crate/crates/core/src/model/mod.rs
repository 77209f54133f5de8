//! Solver-agnostic mixed-integer model and the high-level entry points that
//! add piecewise linear functions to it.

mod pwl;

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::sos2::{AuxKind, FormulationFragment};
use crate::{Error, Rational, Result};

pub use pwl::{
    add_bivariate_pwl, add_bivariate_pwl_named, add_univariate_pwl, add_univariate_pwl_named,
};

pub const MAX_NAME_LEN: usize = 255;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKind {
    Continuous,
    Binary,
    Integer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinExpr {
    pub terms: Vec<(VarId, Rational)>,
}

impl LinExpr {
    pub fn new(terms: Vec<(VarId, Rational)>) -> Self {
        let mut e = Self { terms };
        e.terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(VarId, Rational)> = Vec::with_capacity(e.terms.len());
        for (v, c) in e.terms.drain(..) {
            match merged.last_mut() {
                Some((w, acc)) if *w == v => *acc += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|t| !t.1.is_zero());
        e.terms = merged;
        e
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub expr: LinExpr,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjSense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub sense: ObjSense,
    pub expr: LinExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Objective,
    index: HashMap<String, usize>,
}

impl Default for Model {
    fn default() -> Self {
        Self::new()
    }
}

impl Model {
    pub fn new() -> Self {
        Self {
            vars: Vec::new(),
            constraints: Vec::new(),
            objective: Objective {
                sense: ObjSense::Minimize,
                expr: LinExpr::default(),
            },
            index: HashMap::new(),
        }
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn find(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied().map(VarId)
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> Result<VarId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::Invalid(format!("duplicate variable name {name:?}")));
        }
        let id = self.vars.len();
        self.index.insert(name.clone(), id);
        self.vars.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        Ok(VarId(id))
    }

    fn check_expr(&self, expr: &LinExpr) -> Result<()> {
        match expr.terms.iter().find(|(v, _)| v.0 >= self.vars.len()) {
            Some((v, _)) => Err(Error::Invalid(format!("undeclared variable index {}", v.0))),
            None => Ok(()),
        }
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, Rational)>,
        sense: Sense,
        rhs: Rational,
    ) -> Result<()> {
        let expr = LinExpr::new(terms);
        self.check_expr(&expr)?;
        self.constraints.push(Constraint {
            name: name.into(),
            expr,
            sense,
            rhs,
        });
        Ok(())
    }

    pub fn set_objective(&mut self, sense: ObjSense, terms: Vec<(VarId, Rational)>) -> Result<()> {
        let expr = LinExpr::new(terms);
        self.check_expr(&expr)?;
        self.objective = Objective { sense, expr };
        Ok(())
    }

    pub fn count_kind(&self, kind: VarKind) -> usize {
        self.vars.iter().filter(|v| v.kind == kind).count()
    }

    /// Adds a fragment. `lambda` gives the model variable of each λ; `xz`
    /// binds the fragment's own `x` and `z`. Other variables are created as
    /// `prefix + name`. Returns the model variable of every fragment index.
    pub fn add_fragment(
        &mut self,
        frag: &FormulationFragment,
        lambda: &[VarId],
        xz: Option<(VarId, VarId)>,
        prefix: &str,
    ) -> Result<Vec<VarId>> {
        if lambda.len() != frag.lambda_count() {
            return Err(Error::DimensionMismatch {
                expected: frag.lambda_count(),
                found: lambda.len(),
            });
        }
        let mut map: Vec<VarId> = lambda.to_vec();
        let bound = frag.xz().zip(xz);
        for (k, c) in frag.cont().iter().enumerate() {
            let idx = frag.cont_offset() + k;
            let id = match bound {
                Some(((fx, _), (mx, _))) if fx == idx => mx,
                Some(((_, fz), (_, mz))) if fz == idx => mz,
                _ => self.add_var(
                    format!("{prefix}{}", c.name),
                    VarKind::Continuous,
                    c.lower.clone(),
                    c.upper.clone(),
                )?,
            };
            map.push(id);
        }
        for a in frag.aux() {
            let kind = match a.kind {
                AuxKind::Binary => VarKind::Binary,
                AuxKind::Integer => VarKind::Integer,
            };
            map.push(self.add_var(
                format!("{prefix}{}", a.name),
                kind,
                Some(a.lower.clone()),
                Some(a.upper.clone()),
            )?);
        }
        for (k, row) in frag.rows().iter().enumerate() {
            let terms = row
                .terms
                .iter()
                .map(|(i, c)| (map[*i], c.clone()))
                .collect();
            self.add_constraint(
                format!("{prefix}r{}", k + 1),
                terms,
                row.sense,
                row.rhs.clone(),
            )?;
        }
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn names_are_unique() {
        let mut m = Model::new();
        m.add_var("x", VarKind::Continuous, None, None).unwrap();
        assert!(m.add_var("x", VarKind::Binary, None, None).is_err());
        assert_eq!(m.find("x"), Some(VarId(0)));
    }

    #[test]
    fn constraints_reference_declared_vars() {
        let mut m = Model::new();
        let x = m.add_var("x", VarKind::Continuous, None, None).unwrap();
        assert!(m
            .add_constraint("c", vec![(VarId(3), int(1))], Sense::Le, int(0))
            .is_err());
        m.add_constraint("c", vec![(x, int(1)), (x, int(2))], Sense::Le, int(0))
            .unwrap();
        assert_eq!(m.constraints()[0].expr.terms, vec![(x, int(3))]);
    }
}
