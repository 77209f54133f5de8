use num_traits::{One, Zero};

use super::{Model, Sense, VarId, VarKind};
use crate::bivariate::{build_bivariate, six_stencil_cover, GridTriangulation};
use crate::sos2::{build_for_pwl, Method, UnivariatePwl};
use crate::{Error, Rational, Result};

fn check_domain(model: &Model, x: VarId, lo: &Rational, hi: &Rational) -> Result<()> {
    let v = model.var(x);
    match (&v.lower, &v.upper) {
        (Some(l), Some(u)) if l >= lo && u <= hi => Ok(()),
        (l, u) => Err(Error::DomainMismatch(format!(
            "{} has bounds [{}, {}], function domain is [{lo}, {hi}]",
            v.name,
            l.as_ref().map_or("-inf".into(), |q| q.to_string()),
            u.as_ref().map_or("+inf".into(), |q| q.to_string()),
        ))),
    }
}

/// Adds `z = f(x)` and returns `z`. Variables are named `lam_v`, `y_k` and
/// `z`.
pub fn add_univariate_pwl(
    model: &mut Model,
    x: VarId,
    pwl: &UnivariatePwl,
    method: Method,
) -> Result<VarId> {
    add_univariate_pwl_named(model, x, pwl, method, "")
}

/// As [`add_univariate_pwl`], with every new name prefixed by `prefix`.
pub fn add_univariate_pwl_named(
    model: &mut Model,
    x: VarId,
    pwl: &UnivariatePwl,
    method: Method,
    prefix: &str,
) -> Result<VarId> {
    let (lo, hi) = pwl.domain();
    check_domain(model, x, lo, hi)?;
    let z = model.add_var(format!("{prefix}z"), VarKind::Continuous, None, None)?;

    if !method.is_lambda() && pwl.d() > 1 {
        let frag = build_for_pwl(method, pwl)?;
        model.add_fragment(&frag, &[], Some((x, z)), prefix)?;
        return Ok(z);
    }

    let lam: Vec<VarId> = (1..=pwl.d() + 1)
        .map(|v| {
            model.add_var(
                format!("{prefix}lam_{v}"),
                VarKind::Continuous,
                Some(Rational::zero()),
                None,
            )
        })
        .collect::<Result<_>>()?;
    link(model, prefix, &lam, x, pwl.breakpoints())?;
    link(model, prefix, &lam, z, pwl.values())?;
    simplex(model, prefix, &lam)?;
    if pwl.d() > 1 {
        let frag = build_for_pwl(method, pwl)?;
        model.add_fragment(&frag, &lam, None, prefix)?;
    }
    Ok(z)
}

fn link(
    model: &mut Model,
    prefix: &str,
    lam: &[VarId],
    target: VarId,
    coefs: &[Rational],
) -> Result<()> {
    let name = format!("{prefix}link_{}", model.var(target).name);
    let mut terms: Vec<(VarId, Rational)> =
        lam.iter().copied().zip(coefs.iter().cloned()).collect();
    terms.push((target, -Rational::one()));
    model.add_constraint(name, terms, Sense::Eq, Rational::zero())
}

fn simplex(model: &mut Model, prefix: &str, lam: &[VarId]) -> Result<()> {
    let terms = lam.iter().map(|&v| (v, Rational::one())).collect();
    model.add_constraint(
        format!("{prefix}simplex"),
        terms,
        Sense::Eq,
        Rational::one(),
    )
}

/// Adds `z = F(x1, x2)` over a grid triangulation using the 6-stencil for
/// triangle selection. Returns `z`.
pub fn add_bivariate_pwl(
    model: &mut Model,
    x1: VarId,
    x2: VarId,
    gt: &GridTriangulation,
    method_x: Method,
    method_y: Method,
) -> Result<VarId> {
    add_bivariate_pwl_named(model, x1, x2, gt, method_x, method_y, "")
}

pub fn add_bivariate_pwl_named(
    model: &mut Model,
    x1: VarId,
    x2: VarId,
    gt: &GridTriangulation,
    method_x: Method,
    method_y: Method,
    prefix: &str,
) -> Result<VarId> {
    let (xb, yb) = (gt.xbreaks(), gt.ybreaks());
    check_domain(model, x1, &xb[0], xb.last().expect("nonempty"))?;
    check_domain(model, x2, &yb[0], yb.last().expect("nonempty"))?;
    let cover = six_stencil_cover(gt);
    let frag = build_bivariate(gt, Some(method_x), Some(method_y), &cover)?;

    let z = model.add_var(format!("{prefix}z"), VarKind::Continuous, None, None)?;
    let points: Vec<_> = (0..gt.point_count()).map(|k| gt.point_at(k)).collect();
    let lam: Vec<VarId> = points
        .iter()
        .map(|(i, j)| {
            model.add_var(
                format!("{prefix}lam_{i}_{j}"),
                VarKind::Continuous,
                Some(Rational::zero()),
                None,
            )
        })
        .collect::<Result<_>>()?;
    let tx: Vec<Rational> = points.iter().map(|p| xb[p.0 - 1].clone()).collect();
    let ty: Vec<Rational> = points.iter().map(|p| yb[p.1 - 1].clone()).collect();
    let fz: Vec<Rational> = points.iter().map(|&p| gt.value(p).clone()).collect();
    link(model, prefix, &lam, x1, &tx)?;
    link(model, prefix, &lam, x2, &ty)?;
    link(model, prefix, &lam, z, &fz)?;
    simplex(model, prefix, &lam)?;
    model.add_fragment(&frag, &lam, None, prefix)?;
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivariate::Diagonal;
    use crate::rational::int;

    fn example() -> UnivariatePwl {
        UnivariatePwl::from_ints(&[0, 1, 2, 3, 4], &[0, 4, 7, 9, 10]).unwrap()
    }

    fn model_with_x(lo: i64, hi: i64) -> (Model, VarId) {
        let mut m = Model::new();
        let x = m
            .add_var("x", VarKind::Continuous, Some(int(lo)), Some(int(hi)))
            .unwrap();
        (m, x)
    }

    #[test]
    fn log_model_links() {
        let (mut m, x) = model_with_x(0, 4);
        let z = add_univariate_pwl(&mut m, x, &example(), Method::Log).unwrap();
        assert_eq!(m.var(z).name, "z");
        let lx = &m.constraints()[0];
        let coefs: Vec<Rational> = lx.expr.terms.iter().map(|t| t.1.clone()).collect();
        assert_eq!(coefs, vec![int(-1), int(1), int(2), int(3), int(4)]);
        assert_eq!(m.count_kind(VarKind::Binary), 2);
    }

    #[test]
    fn single_piece_has_no_integers() {
        let pwl = UnivariatePwl::from_ints(&[0, 1], &[2, 3]).unwrap();
        for method in Method::ALL {
            let (mut m, x) = model_with_x(0, 1);
            add_univariate_pwl(&mut m, x, &pwl, method).unwrap();
            assert_eq!(
                m.count_kind(VarKind::Binary) + m.count_kind(VarKind::Integer),
                0,
                "{method}"
            );
        }
    }

    #[test]
    fn domain_is_checked() {
        let (mut m, x) = model_with_x(-1, 4);
        assert!(matches!(
            add_univariate_pwl(&mut m, x, &example(), Method::Cc),
            Err(Error::DomainMismatch(_))
        ));
        let mut m = Model::new();
        let x = m.add_var("x", VarKind::Continuous, None, None).unwrap();
        assert!(add_univariate_pwl(&mut m, x, &example(), Method::Cc).is_err());
    }

    #[test]
    fn zzi_on_eight_pieces() {
        let pwl = UnivariatePwl::from_ints(
            &[0, 1, 2, 3, 4, 5, 6, 7, 8],
            &[0, 8, 15, 21, 26, 30, 33, 35, 36],
        )
        .unwrap();
        let (mut m, x) = model_with_x(0, 8);
        add_univariate_pwl(&mut m, x, &pwl, Method::Zzi).unwrap();
        let uppers: Vec<Rational> = m
            .vars()
            .iter()
            .filter(|v| v.kind == VarKind::Integer)
            .map(|v| v.upper.clone().unwrap())
            .collect();
        assert_eq!(uppers, vec![int(4), int(2), int(1)]);
    }

    #[test]
    fn mc_and_inc_bind_x_and_z() {
        for method in [Method::Mc, Method::Inc] {
            let (mut m, x) = model_with_x(0, 4);
            let z = add_univariate_pwl(&mut m, x, &example(), method).unwrap();
            assert!(m
                .constraints()
                .iter()
                .any(|c| c.expr.terms.iter().any(|t| t.0 == x)));
            assert!(m
                .constraints()
                .iter()
                .any(|c| c.expr.terms.iter().any(|t| t.0 == z)));
        }
    }

    #[test]
    fn bivariate_binaries() {
        let gt = GridTriangulation::uniform(1, 1, Diagonal::Swne).unwrap();
        let mut m = Model::new();
        let x1 = m
            .add_var("x1", VarKind::Continuous, Some(int(0)), Some(int(1)))
            .unwrap();
        let x2 = m
            .add_var("x2", VarKind::Continuous, Some(int(0)), Some(int(1)))
            .unwrap();
        add_bivariate_pwl(&mut m, x1, x2, &gt, Method::Log, Method::Log).unwrap();
        assert_eq!(m.count_kind(VarKind::Binary), 1);

        let gt = GridTriangulation::uniform(8, 8, Diagonal::Senw).unwrap();
        let mut m = Model::new();
        let x1 = m
            .add_var("x1", VarKind::Continuous, Some(int(0)), Some(int(8)))
            .unwrap();
        let x2 = m
            .add_var("x2", VarKind::Continuous, Some(int(0)), Some(int(8)))
            .unwrap();
        add_bivariate_pwl(&mut m, x1, x2, &gt, Method::Log, Method::Log).unwrap();
        assert!(m.count_kind(VarKind::Binary) <= 12);
    }
}
