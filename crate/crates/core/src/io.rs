//! JSON instance files and the LP / MPS writers.
//!
//! Numbers in instance files are strings parsed exactly (`"0.1"` is `1/10`,
//! `"1/3"` is accepted too). The writers render a coefficient exactly when it
//! is a terminating decimal of at most 18 digits and round it to 17
//! significant digits otherwise, reporting each rounding as a warning.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bivariate::{Diagonal, GridTriangulation};
use crate::model::{LinExpr, Model, ObjSense, Sense, VarKind, MAX_NAME_LEN};
use crate::rational::{file_number, fraction_string, parse_rational, terminating_decimal};
use crate::sos2::UnivariatePwl;
use crate::{Error, Rational, Result};

/// On-disk description of a function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PwlInstanceSpec {
    Univariate {
        breakpoints: Vec<String>,
        values: Vec<String>,
    },
    Bivariate {
        xbreaks: Vec<String>,
        ybreaks: Vec<String>,
        /// `values[i][j]` at `(xbreaks[i], ybreaks[j])`.
        values: Vec<Vec<String>>,
        /// `diagonals[i][j]` for the cell with lower-left corner `(i, j)`.
        diagonals: Vec<Vec<Diagonal>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PwlInstance {
    Univariate(UnivariatePwl),
    Bivariate(GridTriangulation),
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

/// Exact string form: a decimal when it terminates, `p/q` otherwise.
pub fn exact_string(q: &Rational) -> String {
    terminating_decimal(q, 40).unwrap_or_else(|| fraction_string(q))
}

fn render_all(v: &[Rational]) -> Vec<String> {
    v.iter().map(exact_string).collect()
}

impl PwlInstanceSpec {
    pub fn to_instance(&self) -> Result<PwlInstance> {
        match self {
            PwlInstanceSpec::Univariate {
                breakpoints,
                values,
            } => Ok(PwlInstance::Univariate(UnivariatePwl::new(
                parse_all(breakpoints)?,
                parse_all(values)?,
            )?)),
            PwlInstanceSpec::Bivariate {
                xbreaks,
                ybreaks,
                values,
                diagonals,
            } => {
                let values = values.iter().map(|r| parse_all(r)).collect::<Result<_>>()?;
                Ok(PwlInstance::Bivariate(GridTriangulation::new(
                    parse_all(xbreaks)?,
                    parse_all(ybreaks)?,
                    values,
                    diagonals.clone(),
                )?))
            }
        }
    }

    pub fn from_instance(inst: &PwlInstance) -> Self {
        match inst {
            PwlInstance::Univariate(f) => PwlInstanceSpec::Univariate {
                breakpoints: render_all(f.breakpoints()),
                values: render_all(f.values()),
            },
            PwlInstance::Bivariate(gt) => PwlInstanceSpec::Bivariate {
                xbreaks: render_all(gt.xbreaks()),
                ybreaks: render_all(gt.ybreaks()),
                values: gt.values().iter().map(|r| render_all(r)).collect(),
                diagonals: gt.diagonals().to_vec(),
            },
        }
    }
}

pub fn parse_instance(json: &str) -> Result<PwlInstance> {
    let spec: PwlInstanceSpec =
        serde_json::from_str(json).map_err(|e| Error::Invalid(format!("instance file: {e}")))?;
    spec.to_instance()
}

pub fn instance_json(inst: &PwlInstance) -> String {
    let mut s =
        serde_json::to_string_pretty(&PwlInstanceSpec::from_instance(inst)).expect("plain data");
    s.push('\n');
    s
}

/// Writer output. `warnings` lists every coefficient that could not be
/// written exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emitted {
    pub text: String,
    pub warnings: Vec<String>,
}

struct Numbers {
    warnings: Vec<String>,
}

impl Numbers {
    fn render(&mut self, q: &Rational, context: &str) -> String {
        let (s, exact) = file_number(q);
        if !exact {
            self.warnings.push(format!(
                "WARNING: {context}: {} written as {s}",
                fraction_string(q)
            ));
        }
        s
    }
}

fn validate(model: &Model) -> Result<()> {
    if model.vars().is_empty() {
        return Err(Error::EmptyModel);
    }
    let names = model
        .vars()
        .iter()
        .map(|v| &v.name)
        .chain(model.constraints().iter().map(|c| &c.name));
    for n in names {
        if n.len() > MAX_NAME_LEN {
            return Err(Error::NameTooLong(n.clone()));
        }
    }
    Ok(())
}

const TERMS_PER_LINE: usize = 8;

fn lp_expr(model: &Model, expr: &LinExpr, nums: &mut Numbers, context: &str, out: &mut String) {
    if expr.terms.is_empty() {
        let _ = write!(out, " 0 {}", model.vars()[0].name);
        return;
    }
    for (k, (v, c)) in expr.terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        let name = &model.var(*v).name;
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        let coef = if mag.is_one() {
            String::new()
        } else {
            format!("{} ", nums.render(&mag, context))
        };
        if k == 0 && sign == "+" {
            let _ = write!(out, " {coef}{name}");
        } else {
            let _ = write!(out, " {sign} {coef}{name}");
        }
    }
}

/// CPLEX LP format with explicit bounds for every variable.
pub fn emit_lp(model: &Model) -> Result<Emitted> {
    validate(model)?;
    let mut nums = Numbers {
        warnings: Vec::new(),
    };
    let mut out = String::new();
    let obj = model.objective();
    out.push_str(match obj.sense {
        ObjSense::Minimize => "Minimize\n",
        ObjSense::Maximize => "Maximize\n",
    });
    out.push_str(" obj:");
    lp_expr(model, &obj.expr, &mut nums, "objective", &mut out);
    out.push_str("\nSubject To\n");
    for c in model.constraints() {
        let _ = write!(out, " {}:", c.name);
        lp_expr(model, &c.expr, &mut nums, &c.name, &mut out);
        let sense = match c.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        let _ = writeln!(out, " {sense} {}", nums.render(&c.rhs, &c.name));
    }
    out.push_str("Bounds\n");
    for v in model.vars() {
        if v.kind == VarKind::Binary {
            continue;
        }
        let lo = v.lower.as_ref().map(|q| nums.render(q, &v.name));
        let hi = v.upper.as_ref().map(|q| nums.render(q, &v.name));
        let line = match (lo, hi) {
            (None, None) => format!(" {} free", v.name),
            (Some(l), None) => format!(" {} >= {l}", v.name),
            (None, Some(u)) => format!(" -inf <= {} <= {u}", v.name),
            (Some(l), Some(_)) if v.lower == v.upper => format!(" {} = {l}", v.name),
            (Some(l), Some(u)) => format!(" {l} <= {} <= {u}", v.name),
        };
        out.push_str(&line);
        out.push('\n');
    }
    for (section, kind) in [
        ("Generals", VarKind::Integer),
        ("Binaries", VarKind::Binary),
    ] {
        let names: Vec<&str> = model
            .vars()
            .iter()
            .filter(|v| v.kind == kind)
            .map(|v| v.name.as_str())
            .collect();
        if !names.is_empty() {
            let _ = writeln!(out, "{section}");
            for chunk in names.chunks(TERMS_PER_LINE) {
                let _ = writeln!(out, " {}", chunk.join(" "));
            }
        }
    }
    out.push_str("End\n");
    Ok(Emitted {
        text: out,
        warnings: nums.warnings,
    })
}

/// Free-format MPS with an `OBJSENSE` section, `INTORG` markers around
/// integer columns and `BV` bounds for binaries.
pub fn emit_mps(model: &Model) -> Result<Emitted> {
    validate(model)?;
    let mut nums = Numbers {
        warnings: Vec::new(),
    };
    let mut out = String::from("NAME pwlgen\nOBJSENSE\n");
    out.push_str(match model.objective().sense {
        ObjSense::Minimize => "    MIN\n",
        ObjSense::Maximize => "    MAX\n",
    });
    out.push_str("ROWS\n N obj\n");
    for c in model.constraints() {
        let tag = match c.sense {
            Sense::Le => "L",
            Sense::Eq => "E",
            Sense::Ge => "G",
        };
        let _ = writeln!(out, " {tag} {}", c.name);
    }

    // column-major view of the constraint matrix
    let n = model.vars().len();
    let mut columns: Vec<Vec<(&str, &Rational)>> = vec![Vec::new(); n];
    for (v, c) in &model.objective().expr.terms {
        columns[v.0].push(("obj", c));
    }
    for con in model.constraints() {
        for (v, c) in &con.expr.terms {
            columns[v.0].push((con.name.as_str(), c));
        }
    }

    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut marker = 0usize;
    for (k, var) in model.vars().iter().enumerate() {
        let integral = var.kind != VarKind::Continuous;
        if integral != in_int {
            let tag = if integral { "INTORG" } else { "INTEND" };
            let _ = writeln!(out, " MARKER{marker} 'MARKER' '{tag}'");
            marker += 1;
            in_int = integral;
        }
        if columns[k].is_empty() {
            let _ = writeln!(out, " {} obj 0", var.name);
        }
        for (row, c) in &columns[k] {
            let _ = writeln!(out, " {} {row} {}", var.name, nums.render(c, row));
        }
    }
    if in_int {
        let _ = writeln!(out, " MARKER{marker} 'MARKER' 'INTEND'");
    }

    out.push_str("RHS\n");
    for c in model.constraints() {
        if !c.rhs.is_zero() {
            let _ = writeln!(out, " RHS {} {}", c.name, nums.render(&c.rhs, &c.name));
        }
    }

    out.push_str("BOUNDS\n");
    for v in model.vars() {
        let name = &v.name;
        if v.kind == VarKind::Binary {
            let _ = writeln!(out, " BV BND {name}");
            continue;
        }
        match (&v.lower, &v.upper) {
            (Some(l), Some(u)) if l == u => {
                let _ = writeln!(out, " FX BND {name} {}", nums.render(l, name));
            }
            (lo, hi) => {
                match lo {
                    Some(l) => {
                        let _ = writeln!(out, " LO BND {name} {}", nums.render(l, name));
                    }
                    None if hi.is_none() => {
                        let _ = writeln!(out, " FR BND {name}");
                    }
                    None => {
                        let _ = writeln!(out, " MI BND {name}");
                    }
                }
                match hi {
                    Some(u) => {
                        let _ = writeln!(out, " UP BND {name} {}", nums.render(u, name));
                    }
                    None if v.kind == VarKind::Integer && lo.is_some() => {
                        let _ = writeln!(out, " PL BND {name}");
                    }
                    None => {}
                }
            }
        }
    }
    out.push_str("ENDATA\n");
    Ok(Emitted {
        text: out,
        warnings: nums.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{add_univariate_pwl, VarId};
    use crate::rational::{int, rat};
    use crate::sos2::Method;

    fn half_model() -> (Model, VarId) {
        let mut m = Model::new();
        let x = m
            .add_var("x", VarKind::Continuous, Some(rat(1, 2)), None)
            .unwrap();
        m.set_objective(ObjSense::Minimize, vec![(x, int(1))])
            .unwrap();
        (m, x)
    }

    #[test]
    fn lp_lower_bound() {
        let (m, _) = half_model();
        let e = emit_lp(&m).unwrap();
        assert!(e.text.contains("x >= 0.5"), "{}", e.text);
        assert!(e.warnings.is_empty());
        assert!(e.text.starts_with("Minimize\n obj: x\n"));
    }

    #[test]
    fn rounding_warns() {
        let (mut m, x) = half_model();
        m.add_constraint("third", vec![(x, rat(1, 3))], Sense::Le, int(1))
            .unwrap();
        let e = emit_lp(&m).unwrap();
        assert!(e.text.contains("0.33333333333333333 x"), "{}", e.text);
        assert_eq!(e.warnings.len(), 1);
        let e = emit_mps(&m).unwrap();
        assert!(e.text.contains(" x third 0.33333333333333333"));
        assert_eq!(e.warnings.len(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(emit_lp(&Model::new()), Err(Error::EmptyModel));
        let mut m = Model::new();
        m.add_var("v".repeat(256), VarKind::Continuous, None, None)
            .unwrap();
        assert!(matches!(emit_mps(&m), Err(Error::NameTooLong(_))));
    }

    #[test]
    fn mps_markers_and_bounds() {
        let mut m = Model::new();
        let x = m
            .add_var("x", VarKind::Continuous, Some(int(0)), Some(int(4)))
            .unwrap();
        add_univariate_pwl(
            &mut m,
            x,
            &UnivariatePwl::from_ints(&[0, 1, 2, 3, 4], &[0, 4, 7, 9, 10]).unwrap(),
            Method::Zzi,
        )
        .unwrap();
        let e = emit_mps(&m).unwrap();
        assert!(e.text.contains("'MARKER' 'INTORG'"));
        assert!(e.text.contains(" UP BND y_1 2"));
        assert!(e.text.contains("OBJSENSE\n    MIN\n"));
        assert!(e.text.ends_with("ENDATA\n"));
        assert_eq!(e.text, emit_mps(&m.clone()).unwrap().text);
    }

    #[test]
    fn json_round_trip() {
        let json =
            r#"{"type":"univariate","breakpoints":["0","0.5","1"],"values":["0","1/3","2"]}"#;
        let inst = parse_instance(json).unwrap();
        let PwlInstance::Univariate(f) = &inst else {
            panic!()
        };
        assert_eq!(f.breakpoints()[1], rat(1, 2));
        assert_eq!(f.values()[1], rat(1, 3));
        assert_eq!(parse_instance(&instance_json(&inst)).unwrap(), inst);

        let json = r#"{"type":"bivariate","xbreaks":["0","1"],"ybreaks":["0","1"],
            "values":[["0","1"],["1","2"]],"diagonals":[["senw"]]}"#;
        let inst = parse_instance(json).unwrap();
        assert!(matches!(inst, PwlInstance::Bivariate(_)));
        assert_eq!(parse_instance(&instance_json(&inst)).unwrap(), inst);
        assert!(
            parse_instance(r#"{"type":"univariate","breakpoints":[0],"values":["0"]}"#).is_err()
        );
    }
}
