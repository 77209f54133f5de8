use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{code_length, AuxVar, FormulationFragment};
use crate::encodings::{truncate, zigzag_integer, zigzag_inverse_matrix, CodeMatrix};
use crate::linalg::{self, dot};
use crate::model::Sense;
use crate::rational::{int, primitive_integer};
use crate::{Error, Rational, Result};

/// Upper limit on the `(k-1)`-subsets of directions examined when
/// enumerating the hyperplane arrangement.
const MAX_SUBSETS: u128 = 2_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Primitive integer, first nonzero entry positive.
fn canonical(v: &[Rational]) -> Vec<BigInt> {
    let mut p = primitive_integer(v);
    if p.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        for x in p.iter_mut() {
            *x = -x.clone();
        }
    }
    p
}

/// Normals of the hyperplanes (within the span `L` of the consecutive code
/// differences) spanned by subsets of `dim L - 1` differences, in descending
/// lexicographic order.
pub fn embedding_normals(code: &CodeMatrix) -> Result<Vec<Vec<Rational>>> {
    let r = code.r();
    let h = code.to_rational_rows();
    let dirs: BTreeSet<Vec<BigInt>> = h
        .windows(2)
        .map(|w| {
            w[1].iter()
                .zip(&w[0])
                .map(|(a, b)| a - b)
                .collect::<Vec<Rational>>()
        })
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .map(|c| canonical(&c))
        .collect();
    let dirs: Vec<Vec<Rational>> = dirs
        .into_iter()
        .map(|d| d.into_iter().map(Rational::from_integer).collect())
        .collect();
    let span = linalg::rref(dirs.clone(), r).rows;
    let k = span.len();
    if k == 0 {
        return Err(Error::DegenerateDirections);
    }
    if binomial(dirs.len(), k - 1) > MAX_SUBSETS {
        return Err(Error::Unsupported(format!(
            "hyperplane enumeration over {} directions in dimension {k}",
            dirs.len()
        )));
    }

    // directions expressed in span coordinates: s_j = span . d
    let local: Vec<Vec<Rational>> = dirs
        .iter()
        .map(|d| span.iter().map(|b| dot(b, d)).collect())
        .collect();
    let mut normals: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for_each_subset(dirs.len(), k - 1, |s| {
        let m: Vec<Vec<Rational>> = s.iter().map(|&j| local[j].clone()).collect();
        if linalg::rank(&m, k) != k - 1 {
            return;
        }
        let alpha = &linalg::nullspace(&m, k)[0];
        let mut b = vec![Rational::zero(); r];
        for (a, row) in alpha.iter().zip(&span) {
            for (bi, x) in b.iter_mut().zip(row) {
                *bi += a * x;
            }
        }
        normals.insert(canonical(&b));
    });
    Ok(normals
        .into_iter()
        .rev()
        .map(|b| b.into_iter().map(Rational::from_integer).collect())
        .collect())
}

/// Embedding formulation of SOS2 on `d` pieces with segment codes `code`.
pub fn build_embedding_sos2(d: usize, code: &CodeMatrix) -> Result<FormulationFragment> {
    if code.d() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: code.d(),
        });
    }
    let r = code.r();
    let normals = embedding_normals(code)?;
    let h = code.to_rational_rows();

    let mut frag = FormulationFragment::new(d + 1);
    let binary = code.is_binary();
    for (i, (lo, hi)) in code.column_bounds().into_iter().enumerate() {
        let name = format!("y_{}", i + 1);
        frag.add_aux(if binary {
            AuxVar::binary(name)
        } else {
            AuxVar::integer(name, lo, hi)
        });
    }
    let y0 = frag.aux_offset();

    for b in &normals {
        let w: Vec<Rational> = h.iter().map(|row| dot(b, row)).collect();
        // λ_v sits on segments v-1 and v, clamped to 1..=d
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for v in 1..=d + 1 {
            let (a, c) = (&w[v.saturating_sub(2).min(d - 1)], &w[(v - 1).min(d - 1)]);
            lower.push((v - 1, a.min(c).clone()));
            upper.push((v - 1, -a.max(c).clone()));
        }
        let by: Vec<(usize, Rational)> = b
            .iter()
            .enumerate()
            .map(|(i, c)| (y0 + i, c.clone()))
            .collect();
        lower.extend(by.iter().map(|(i, c)| (*i, -c.clone())));
        upper.extend(by);
        frag.push_row(lower, Sense::Le, Rational::zero());
        frag.push_row(upper, Sense::Le, Rational::zero());
    }

    // pin y to the affine hull of the codes when it is not full-dimensional
    let diffs: Vec<Vec<Rational>> = h
        .iter()
        .map(|row| row.iter().zip(&h[0]).map(|(a, b)| a - b).collect())
        .collect();
    if linalg::rank(&diffs, r) < r {
        for n in linalg::nullspace(&diffs, r) {
            let n: Vec<Rational> = canonical(&n)
                .into_iter()
                .map(Rational::from_integer)
                .collect();
            let rhs = dot(&n, &h[0]);
            let terms = n
                .iter()
                .enumerate()
                .map(|(i, c)| (y0 + i, c.clone()))
                .collect();
            frag.push_row(terms, Sense::Eq, rhs);
        }
    }
    Ok(frag)
}

/// Binary zig-zag: the integer zig-zag rows with `y` replaced by `A^{-1}(y)`
/// over binary `y`.
pub fn build_zzb(d: usize) -> Result<FormulationFragment> {
    if d < 2 {
        return Err(Error::DTooSmall { min: 2, found: d });
    }
    let r = code_length(d);
    let c = truncate(&zigzag_integer(r)?, d)?;
    let inv = zigzag_inverse_matrix(r);
    let mut frag = FormulationFragment::new(d + 1);
    for i in 0..r {
        frag.add_aux(AuxVar::binary(format!("y_{}", i + 1)));
    }
    let y0 = frag.aux_offset();
    let alpha = |j: usize, i: usize| int(c.row(j.clamp(1, d) - 1)[i]);
    for i in 0..r {
        let ay: Vec<(usize, Rational)> = inv[i]
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(k, &m)| (y0 + k, int(m)))
            .collect();
        let mut lower: Vec<(usize, Rational)> =
            (1..=d + 1).map(|v| (v - 1, alpha(v - 1, i))).collect();
        lower.extend(ay.iter().map(|(k, m)| (*k, -m.clone())));
        let mut upper: Vec<(usize, Rational)> =
            (1..=d + 1).map(|v| (v - 1, -alpha(v, i))).collect();
        upper.extend(ay);
        frag.push_row(lower, Sense::Le, Rational::zero());
        frag.push_row(upper, Sense::Le, Rational::zero());
    }
    Ok(frag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::brgc;

    /// `(lambda coefficients, y coefficients)` of `lhs <= y-part <= rhs` pairs.
    fn pairs(f: &FormulationFragment) -> Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> {
        let n = f.lambda_count();
        let y0 = f.aux_offset();
        let to_i = |q: &Rational| crate::rational::to_i64(q).unwrap();
        f.rows()
            .chunks(2)
            .map(|ch| {
                let lo: Vec<i64> = (0..n).map(|v| to_i(&ch[0].coefficient(v))).collect();
                let hi: Vec<i64> = (0..n).map(|v| -to_i(&ch[1].coefficient(v))).collect();
                let y: Vec<i64> = (0..f.aux().len())
                    .map(|k| to_i(&ch[1].coefficient(y0 + k)))
                    .collect();
                (lo, y, hi)
            })
            .collect()
    }

    #[test]
    fn log_d4() {
        let f = build_embedding_sos2(4, &brgc(2).unwrap()).unwrap();
        assert_eq!(
            pairs(&f),
            vec![
                (vec![0, 0, 1, 0, 0], vec![1, 0], vec![0, 1, 1, 1, 0]),
                (vec![0, 0, 0, 1, 1], vec![0, 1], vec![0, 0, 1, 1, 1]),
            ]
        );
    }

    #[test]
    fn zzi_d4() {
        let code = truncate(&zigzag_integer(2).unwrap(), 4).unwrap();
        let f = build_embedding_sos2(4, &code).unwrap();
        assert_eq!(
            pairs(&f),
            vec![
                (vec![0, 0, 1, 1, 2], vec![1, 0], vec![0, 1, 1, 2, 2]),
                (vec![0, 0, 0, 1, 1], vec![0, 1], vec![0, 0, 1, 1, 1]),
            ]
        );
        assert_eq!(f.aux()[0].upper, int(2));
        assert_eq!(f.aux()[1].upper, int(1));
    }

    #[test]
    fn log_d3() {
        let code = truncate(&brgc(2).unwrap(), 3).unwrap();
        let f = build_embedding_sos2(3, &code).unwrap();
        assert_eq!(
            pairs(&f),
            vec![
                (vec![0, 0, 1, 1], vec![1, 0], vec![0, 1, 1, 1]),
                (vec![0, 0, 0, 1], vec![0, 1], vec![0, 0, 1, 1]),
            ]
        );
    }

    #[test]
    fn log_d8_first_bit_includes_every_touching_weight() {
        let f = build_embedding_sos2(8, &brgc(3).unwrap()).unwrap();
        let p = pairs(&f);
        assert_eq!(p[0].0, vec![0, 0, 1, 0, 0, 0, 1, 0, 0]);
        assert_eq!(p[0].2, vec![0, 1, 1, 1, 0, 1, 1, 1, 0]);
    }

    #[test]
    fn lower_dimensional_code_is_pinned() {
        let code = truncate(&brgc(2).unwrap(), 2).unwrap();
        let f = build_embedding_sos2(2, &code).unwrap();
        let eq: Vec<_> = f.rows().iter().filter(|r| r.sense == Sense::Eq).collect();
        assert_eq!(eq.len(), 1);
        assert_eq!(eq[0].terms, vec![(f.y(2), int(1))]);
        assert_eq!(eq[0].rhs, int(0));
    }

    #[test]
    fn skewed_code_normals() {
        // directions (1,0), (0,1), (1,1) in the plane: three distinct lines
        let code = CodeMatrix::user(vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 2]]).unwrap();
        let n = embedding_normals(&code).unwrap();
        assert_eq!(
            n,
            vec![
                vec![int(1), int(0)],
                vec![int(1), int(-1)],
                vec![int(0), int(1)]
            ]
        );
        let flat = CodeMatrix::user(vec![vec![1, 1]]).unwrap();
        assert_eq!(embedding_normals(&flat), Err(Error::DegenerateDirections));
    }

    #[test]
    fn zzb_sizes() {
        let f = build_zzb(8).unwrap();
        assert_eq!(f.aux().len(), 3);
        assert_eq!(f.general_row_count(), 6);
        // r = 1: identical to the integer form with a binary variable
        let b = build_zzb(2).unwrap();
        let i = build_embedding_sos2(2, &zigzag_integer(1).unwrap()).unwrap();
        assert_eq!(b.rows(), i.rows());
    }

    #[test]
    fn subsets() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[5], vec![2, 3]);
        let mut empty = 0;
        for_each_subset(3, 0, |_| empty += 1);
        assert_eq!(empty, 1);
        assert_eq!(binomial(10, 3), 120);
    }
}
