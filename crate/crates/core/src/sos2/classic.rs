use num_traits::{One, Zero};

use super::{code_length, AuxVar, ContVar, FormulationFragment, UnivariatePwl};
use crate::encodings::{brgc, truncate};
use crate::model::Sense;
use crate::{Rational, Result};

fn one() -> Rational {
    Rational::one()
}

/// Convex combination: one binary per piece, each weight bounded by the
/// pieces it touches.
pub fn build_cc(d: usize) -> FormulationFragment {
    let mut f = FormulationFragment::new(d + 1);
    for i in 1..=d {
        f.add_aux(AuxVar::binary(format!("y_{i}")));
    }
    for v in 1..=d + 1 {
        let mut terms = vec![(f.lambda(v), one())];
        for seg in [v.wrapping_sub(1), v] {
            if (1..=d).contains(&seg) {
                terms.push((f.y(seg), -one()));
            }
        }
        f.push_row(terms, Sense::Le, Rational::zero());
    }
    let sum = (1..=d).map(|i| (f.y(i), one())).collect();
    f.push_row(sum, Sense::Eq, one());
    f
}

/// Disaggregated logarithmic: weights `γ_{i,v}` per piece and endpoint, with
/// one Gray-code bit per binary selecting the active piece.
pub fn build_dlog(d: usize) -> Result<FormulationFragment> {
    let r = code_length(d);
    let mut f = FormulationFragment::new(d + 1);
    // γ_{i,i} at 2(i-1), γ_{i,i+1} at 2(i-1)+1 within the continuous block
    let mut gamma = Vec::with_capacity(2 * d);
    for i in 1..=d {
        for v in [i, i + 1] {
            gamma.push(f.add_cont(ContVar {
                name: format!("gamma_{i}_{v}"),
                lower: Some(Rational::zero()),
                upper: None,
            }));
        }
    }
    for v in 1..=d + 1 {
        let mut terms = vec![(f.lambda(v), one())];
        if v <= d {
            terms.push((gamma[2 * (v - 1)], -one()));
        }
        if v >= 2 {
            terms.push((gamma[2 * (v - 2) + 1], -one()));
        }
        f.push_row(terms, Sense::Eq, Rational::zero());
    }
    f.push_row(
        gamma.iter().map(|&g| (g, one())).collect(),
        Sense::Eq,
        one(),
    );

    if r > 0 {
        let code = truncate(&brgc(r)?, d)?;
        for k in 0..r {
            let y = f.add_aux(AuxVar::binary(format!("y_{}", k + 1)));
            let piece = |i: usize| [(gamma[2 * i], one()), (gamma[2 * i + 1], one())];
            let mut up: Vec<(usize, Rational)> = (0..d)
                .filter(|&i| code.row(i)[k] == 1)
                .flat_map(piece)
                .collect();
            up.push((y, -one()));
            f.push_row(up, Sense::Le, Rational::zero());
            let mut down: Vec<(usize, Rational)> = (0..d)
                .filter(|&i| code.row(i)[k] == 0)
                .flat_map(piece)
                .collect();
            down.push((y, one()));
            f.push_row(down, Sense::Le, one());
        }
    }
    Ok(f)
}

fn free(name: &str) -> ContVar {
    ContVar {
        name: name.to_string(),
        lower: None,
        upper: None,
    }
}

/// Multiple choice in `(x, z, x^1..x^d, y)`: one copy of `x` per piece,
/// switched on by its binary.
pub fn build_mc(pwl: &UnivariatePwl) -> FormulationFragment {
    let d = pwl.d();
    let t = pwl.breakpoints();
    let mut f = FormulationFragment::new(0);
    let x = f.add_cont(free("x"));
    let z = f.add_cont(free("z"));
    f.xz = Some((0, 1));
    let xs: Vec<usize> = (1..=d)
        .map(|i| f.add_cont(free(&format!("xp_{i}"))))
        .collect();
    let ys: Vec<usize> = (1..=d)
        .map(|i| f.add_aux(AuxVar::binary(format!("y_{i}"))))
        .collect();

    let mut link = vec![(x, one())];
    link.extend(xs.iter().map(|&xi| (xi, -one())));
    f.push_row(link, Sense::Eq, Rational::zero());

    let mut value = vec![(z, one())];
    for (i, (m, c)) in pwl.pieces().into_iter().enumerate() {
        value.push((xs[i], -m));
        value.push((ys[i], -c));
    }
    f.push_row(value, Sense::Eq, Rational::zero());

    for i in 0..d {
        f.push_row(
            vec![(ys[i], t[i].clone()), (xs[i], -one())],
            Sense::Le,
            Rational::zero(),
        );
        f.push_row(
            vec![(xs[i], one()), (ys[i], -t[i + 1].clone())],
            Sense::Le,
            Rational::zero(),
        );
    }
    f.push_row(ys.iter().map(|&y| (y, one())).collect(), Sense::Eq, one());
    f
}

/// Incremental in `(x, z, δ, y)`: pieces fill left to right, `y_i` certifies
/// that piece `i` is full.
pub fn build_inc(pwl: &UnivariatePwl) -> FormulationFragment {
    let d = pwl.d();
    let (t, fv) = (pwl.breakpoints(), pwl.values());
    let mut f = FormulationFragment::new(0);
    let x = f.add_cont(free("x"));
    let z = f.add_cont(free("z"));
    f.xz = Some((0, 1));
    let delta: Vec<usize> = (1..=d)
        .map(|i| {
            f.add_cont(ContVar {
                name: format!("delta_{i}"),
                lower: Some(Rational::zero()),
                upper: Some(one()),
            })
        })
        .collect();
    let ys: Vec<usize> = (1..d)
        .map(|i| f.add_aux(AuxVar::binary(format!("y_{i}"))))
        .collect();

    let mut xrow = vec![(x, one())];
    let mut zrow = vec![(z, one())];
    for i in 0..d {
        xrow.push((delta[i], -(&t[i + 1] - &t[i])));
        zrow.push((delta[i], -(&fv[i + 1] - &fv[i])));
    }
    f.push_row(xrow, Sense::Eq, t[0].clone());
    f.push_row(zrow, Sense::Eq, fv[0].clone());
    for i in 0..d - 1 {
        f.push_row(
            vec![(delta[i + 1], one()), (ys[i], -one())],
            Sense::Le,
            Rational::zero(),
        );
        f.push_row(
            vec![(ys[i], one()), (delta[i], -one())],
            Sense::Le,
            Rational::zero(),
        );
    }
    f
}
