//! Structural certificates for formulations, all decided by exact vertex
//! enumeration.
//!
//! Every failed check carries a [`Witness`]: the fractional vertex, the
//! uncovered pair, or the mismatched face that refutes it.

mod branching;
mod cover;
mod faces;

use std::fmt;

use serde::Serialize;

use crate::geometry::enumerate_vertices_with;
use crate::par::Exec;
use crate::rational::{is_integer, pretty};
use crate::sos2::FormulationFragment;
use crate::{Error, Rational, Result};

pub use branching::{
    branching_metrics, branching_table, check_sharp_xz, Branch, BranchMetrics, BranchingTable,
};
pub use cover::{
    check_biclique_representation, check_biclique_representation_relaxed, grid_adjacent,
};
pub use faces::{
    check_disjunctive_faces, check_disjunctive_faces_with, check_redundant_embedding,
    check_sos2_validity, face_support, faces_by_code, lambda_family, validity_sample, FaceImage,
    FaceRecord, RedundancyReport, MAX_REDUNDANT_LEVELS,
};

/// Largest fragment (total variables) the enumeration-based checks accept.
pub const MAX_CHECK_VARS: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// A relaxation vertex with a fractional integer variable.
    FractionalVertex(Vec<String>),
    /// `λ = e_v` is not a vertex of the relaxation.
    MissingUnitVertex(usize),
    /// A level lists the element on both sides.
    OverlappingLevel { level: usize, element: String },
    /// A pair that must be separated by some level but is not.
    UncoveredPair(String, String),
    /// A level separates a pair that lies in a common set of the family.
    SeparatedPair {
        level: usize,
        pair: (String, String),
    },
    /// The face at `code` is not what was required.
    FaceMismatch {
        code: Vec<i64>,
        found: Option<Vec<String>>,
        expected: Option<Vec<String>>,
    },
    /// A set of the family is not the face of any code.
    UnmatchedSet(Vec<String>),
    /// The `(x, z)` projection differs from the convex hull of the graph.
    ProjectionMismatch {
        found: Vec<String>,
        expected: Vec<String>,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::FractionalVertex(v) => write!(f, "fractional vertex ({})", v.join(", ")),
            Witness::MissingUnitVertex(v) => write!(f, "no relaxation vertex with lambda = e_{v}"),
            Witness::OverlappingLevel { level, element } => {
                write!(f, "level {level} has {element} on both sides")
            }
            Witness::UncoveredPair(u, v) => {
                write!(f, "pair {{{u}, {v}}} is not separated by any level")
            }
            Witness::SeparatedPair { level, pair } => {
                write!(
                    f,
                    "level {level} separates {{{}, {}}} which share a set",
                    pair.0, pair.1
                )
            }
            Witness::FaceMismatch {
                code,
                found,
                expected,
            } => {
                let show = |s: &Option<Vec<String>>| {
                    s.as_ref()
                        .map_or("empty".into(), |v| format!("{{{}}}", v.join(", ")))
                };
                write!(
                    f,
                    "face at {code:?} is {} but expected {}",
                    show(found),
                    show(expected)
                )
            }
            Witness::UnmatchedSet(s) => {
                write!(f, "set {{{}}} is not the face of any code", s.join(", "))
            }
            Witness::ProjectionMismatch { found, expected } => {
                write!(
                    f,
                    "projection [{}] differs from hull [{}]",
                    found.join(" "),
                    expected.join(" ")
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Witness) -> Self {
        Self {
            name: name.into(),
            passed: false,
            witness: Some(witness),
        }
    }

    fn from_witness(name: &str, witness: Option<Witness>) -> Self {
        match witness {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: pass", self.name),
            Some(w) => write!(f, "{}: FAIL ({w})", self.name),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn check_scale(frag: &FormulationFragment) -> Result<()> {
    if frag.var_count() > MAX_CHECK_VARS {
        return Err(Error::ScaleLimit(format!(
            "{} variables; enumeration checks support at most {MAX_CHECK_VARS}",
            frag.var_count()
        )));
    }
    Ok(())
}

pub(crate) fn render_point(p: &[Rational]) -> Vec<String> {
    p.iter().map(pretty).collect()
}

pub(crate) fn relaxation_vertices(
    frag: &FormulationFragment,
    exec: Exec,
) -> Result<Vec<Vec<Rational>>> {
    check_scale(frag)?;
    enumerate_vertices_with(&frag.relaxation(), exec)
}

/// Passes iff every vertex of the LP relaxation has integral aux values.
pub fn check_ideal(frag: &FormulationFragment) -> Result<Check> {
    check_ideal_with(frag, Exec::default())
}

pub fn check_ideal_with(frag: &FormulationFragment, exec: Exec) -> Result<Check> {
    let verts = relaxation_vertices(frag, exec)?;
    let aux = frag.aux_offset()..frag.var_count();
    let bad = verts
        .iter()
        .find(|v| v[aux.clone()].iter().any(|y| !is_integer(y)))
        .map(|v| Witness::FractionalVertex(render_point(v)));
    Ok(Check::from_witness("ideal", bad))
}

/// Passes iff every unit vector `e_v` is the λ part of some relaxation
/// vertex ("lambda-sharp").
pub fn check_sharp_lambda(frag: &FormulationFragment) -> Result<Check> {
    check_sharp_lambda_with(frag, Exec::default())
}

pub fn check_sharp_lambda_with(frag: &FormulationFragment, exec: Exec) -> Result<Check> {
    if frag.lambda_count() == 0 {
        return Err(Error::Unsupported("fragment has no lambda block".into()));
    }
    let verts = relaxation_vertices(frag, exec)?;
    let n = frag.lambda_count();
    let supports: std::collections::BTreeSet<usize> = verts
        .iter()
        .filter_map(|v| face_support(&[v[..n].to_vec()]))
        .filter(|s| s.len() == 1)
        .flatten()
        .collect();
    let missing = (1..=n)
        .find(|v| !supports.contains(v))
        .map(Witness::MissingUnitVertex);
    Ok(Check::from_witness("lambda-sharp", missing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sense;
    use crate::rational::int;
    use crate::sos2::{build_sos2, Method};

    #[test]
    fn cc_is_sharp_not_ideal() {
        let f = build_sos2(Method::Cc, 4).unwrap();
        assert!(check_sharp_lambda(&f).unwrap().passed);
        let ideal = check_ideal(&f).unwrap();
        assert!(!ideal.passed);
        assert!(matches!(ideal.witness, Some(Witness::FractionalVertex(_))));
    }

    #[test]
    fn log_is_ideal_and_sharp() {
        let f = build_sos2(Method::Log, 4).unwrap();
        assert!(check_ideal(&f).unwrap().passed);
        assert!(check_sharp_lambda(&f).unwrap().passed);
    }

    #[test]
    fn excluded_weight_breaks_sharpness() {
        let mut f = build_sos2(Method::Log, 4).unwrap();
        f.push_row(vec![(0, int(1))], Sense::Eq, int(0));
        let c = check_sharp_lambda(&f).unwrap();
        assert_eq!(c.witness, Some(Witness::MissingUnitVertex(1)));
    }

    #[test]
    fn scale_limit() {
        let f = build_sos2(Method::Cc, 40).unwrap();
        assert!(matches!(check_ideal(&f), Err(Error::ScaleLimit(_))));
    }
}
