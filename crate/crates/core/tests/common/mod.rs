#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use pwlgen::bivariate::{triangles, Diagonal, GridPoint, GridTriangulation};
use pwlgen::model::Sense;
use pwlgen::rational::int;
use pwlgen::sos2::{BicliqueCover, FormulationFragment, UnivariatePwl};
use pwlgen::Rational;

pub fn example_one() -> UnivariatePwl {
    UnivariatePwl::from_ints(&[0, 1, 2, 3, 4], &[0, 4, 7, 9, 10]).unwrap()
}

pub fn eight_piece_concave() -> UnivariatePwl {
    UnivariatePwl::from_ints(
        &[0, 1, 2, 3, 4, 5, 6, 7, 8],
        &[0, 8, 15, 21, 26, 30, 33, 35, 36],
    )
    .unwrap()
}

/// The 2 × 2 grid with every cell split south-east to north-west.
pub fn small_grid() -> GridTriangulation {
    GridTriangulation::uniform(2, 2, Diagonal::Senw).unwrap()
}

/// A four-level cover of [`small_grid`]: two triangle levels, then one
/// rectangle level per axis.
pub fn four_level_cover() -> BicliqueCover<GridPoint> {
    let gt = small_grid();
    let s = |v: &[GridPoint]| v.iter().copied().collect::<BTreeSet<_>>();
    BicliqueCover::new(
        gt.ground(),
        vec![
            (s(&[(1, 3), (2, 2), (3, 1)]), s(&[(1, 1), (3, 3)])),
            (s(&[(2, 3), (3, 2)]), s(&[(1, 2), (2, 1)])),
            (s(&[(1, 3), (2, 3), (3, 3)]), s(&[(1, 1), (2, 1), (3, 1)])),
            (s(&[(3, 1), (3, 2), (3, 3)]), s(&[(1, 1), (1, 2), (1, 3)])),
        ],
    )
    .unwrap()
}

/// Codes for the eight triangles of [`small_grid`] followed by eight codes
/// whose faces are single points, paired with those points.
pub fn four_level_codes() -> (Vec<Vec<i64>>, Vec<BTreeSet<GridPoint>>) {
    let codes = vec![
        vec![0, 0, 0, 0],
        vec![1, 0, 0, 0],
        vec![1, 0, 0, 1],
        vec![1, 1, 0, 1],
        vec![1, 0, 1, 0],
        vec![1, 1, 1, 0],
        vec![1, 1, 1, 1],
        vec![0, 1, 1, 1],
        vec![0, 1, 0, 0],
        vec![0, 0, 0, 1],
        vec![1, 1, 0, 0],
        vec![1, 0, 1, 1],
        vec![0, 0, 1, 0],
        vec![0, 1, 0, 1],
        vec![0, 1, 1, 0],
        vec![0, 0, 1, 1],
    ];
    let mut family = triangles(&small_grid());
    for p in [
        (1, 1),
        (2, 1),
        (2, 2),
        (2, 2),
        (1, 2),
        (2, 3),
        (2, 3),
        (3, 3),
    ] {
        family.push(BTreeSet::from([p]));
    }
    (codes, family)
}

pub fn to_lambda(gt: &GridTriangulation, family: &[BTreeSet<GridPoint>]) -> Vec<BTreeSet<usize>> {
    family
        .iter()
        .map(|s| s.iter().map(|&p| gt.lambda_index(p) + 1).collect())
        .collect()
}

/// A `<=` row over named variables, moved onto the simplex `Σ λ = 1` so that
/// its right-hand side is zero. Equal keys mean equal rows on the simplex.
pub type RowKey = BTreeMap<String, Rational>;

fn homogenize(mut row: RowKey, rhs: Rational, lambdas: &[String]) -> RowKey {
    for l in lambdas {
        *row.entry(l.clone()).or_insert_with(|| int(0)) -= &rhs;
    }
    row.retain(|_, c| *c != int(0));
    row
}

/// Inequality rows of a fragment, in homogeneous form.
pub fn fragment_rows(frag: &FormulationFragment) -> BTreeSet<RowKey> {
    let names = frag.var_names();
    let lambdas: Vec<String> = names[..frag.lambda_count()].to_vec();
    frag.rows()
        .iter()
        .map(|r| {
            let sign = if r.sense == Sense::Ge {
                int(-1)
            } else {
                int(1)
            };
            assert_ne!(r.sense, Sense::Eq, "unexpected equality row");
            let row: RowKey = r
                .terms
                .iter()
                .map(|(i, c)| (names[*i].clone(), c * &sign))
                .collect();
            homogenize(row, &r.rhs * &sign, &lambdas)
        })
        .collect()
}

/// Parses `lo <= y <= hi` pieces written as `(lower λ terms, y, upper λ
/// terms)`, e.g. `(&[(3, 1)], 1, &[(2, 1), (3, 1), (4, 1)])` for
/// `λ3 <= y1 <= λ2 + λ3 + λ4`.
pub fn sandwich(n: usize, lower: &[(usize, i64)], y: usize, upper: &[(usize, i64)]) -> [RowKey; 2] {
    let lambdas: Vec<String> = (1..=n).map(|v| format!("lam_{v}")).collect();
    let yname = format!("y_{y}");
    let mut lo: RowKey = lower
        .iter()
        .map(|&(v, c)| (format!("lam_{v}"), int(c)))
        .collect();
    lo.insert(yname.clone(), int(-1));
    let mut hi: RowKey = upper
        .iter()
        .map(|&(v, c)| (format!("lam_{v}"), int(-c)))
        .collect();
    hi.insert(yname, int(1));
    [
        homogenize(lo, int(0), &lambdas),
        homogenize(hi, int(0), &lambdas),
    ]
}

pub fn describe(rows: &BTreeSet<RowKey>) -> String {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|(k, c)| format!("{c}*{k}"))
                .collect::<Vec<_>>()
                .join(" + ")
                + " <= 0"
        })
        .collect::<Vec<_>>()
        .join("; ")
}
