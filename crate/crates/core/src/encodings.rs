//! Code matrices: binary reflected Gray code `K^r`, integer zig-zag `C^r`,
//! binary zig-zag `Z^r`, and the unimodular map between the zig-zag codes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::geometry::ConvexHull;
use crate::rational::int;
use crate::{Error, Rational, Result};

pub const MAX_GENERATED_R: usize = 20;
pub const MAX_VALIDATED_R: usize = 6;
pub const MAX_VALIDATED_D: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeKind {
    Brgc,
    ZzInteger,
    ZzBinary,
    User,
}

/// A `d x r` integer matrix whose rows encode `d` alternatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodeMatrix {
    rows: Vec<Vec<i64>>,
    kind: CodeKind,
}

impl CodeMatrix {
    /// A user-supplied code. Rows must be nonempty, of equal length and
    /// pairwise distinct.
    pub fn user(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows
            .first()
            .map(Vec::len)
            .ok_or(Error::Invalid("code has no rows".into()))?;
        if let Some(bad) = rows.iter().find(|row| row.len() != r) {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: bad.len(),
            });
        }
        let distinct: BTreeSet<&Vec<i64>> = rows.iter().collect();
        if distinct.len() != rows.len() {
            return Err(Error::Invalid("code rows are not distinct".into()));
        }
        Ok(Self {
            rows,
            kind: CodeKind::User,
        })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> &[i64] {
        &self.rows[j]
    }

    /// Number of rows `d`.
    pub fn d(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns `r`.
    pub fn r(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn is_binary(&self) -> bool {
        self.rows.iter().flatten().all(|&x| x == 0 || x == 1)
    }

    /// Componentwise `(min, max)` per column.
    pub fn column_bounds(&self) -> Vec<(i64, i64)> {
        (0..self.r())
            .map(|i| {
                let col = self.rows.iter().map(|row| row[i]);
                (col.clone().min().unwrap_or(0), col.max().unwrap_or(0))
            })
            .collect()
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&x| int(x)).collect())
            .collect()
    }
}

fn check_r(r: usize) -> Result<()> {
    if r == 0 || r > MAX_GENERATED_R {
        return Err(Error::ROutOfRange(r));
    }
    Ok(())
}

/// `K^{r+1} = [[K^r, 0], [rev(K^r), 1]]`, `K^1 = (0; 1)`.
pub fn brgc(r: usize) -> Result<CodeMatrix> {
    check_r(r)?;
    let mut rows = vec![vec![0], vec![1]];
    for _ in 1..r {
        let mut next: Vec<Vec<i64>> = rows.iter().map(|row| extend(row, 0)).collect();
        next.extend(rows.iter().rev().map(|row| extend(row, 1)));
        rows = next;
    }
    Ok(CodeMatrix {
        rows,
        kind: CodeKind::Brgc,
    })
}

fn extend(row: &[i64], last: i64) -> Vec<i64> {
    let mut v = row.to_vec();
    v.push(last);
    v
}

/// `C^r`: entry `(k, i)` counts the value changes in column `i` of `K^r`
/// among its first `k` rows.
pub fn zigzag_integer(r: usize) -> Result<CodeMatrix> {
    check_r(r)?;
    let k = brgc(r)?;
    let mut rows = Vec::with_capacity(k.d());
    let mut acc = vec![0i64; r];
    rows.push(acc.clone());
    for w in k.rows.windows(2) {
        for (a, (x, y)) in acc.iter_mut().zip(w[0].iter().zip(&w[1])) {
            *a += (x - y).abs();
        }
        rows.push(acc.clone());
    }
    debug_assert_eq!(rows, zigzag_integer_recursive(r));
    Ok(CodeMatrix {
        rows,
        kind: CodeKind::ZzInteger,
    })
}

/// `C^{r+1} = [[C^r, 0], [C^r + 1 C^r_last, 1]]`.
fn zigzag_integer_recursive(r: usize) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![0], vec![1]];
    for _ in 1..r {
        let last = rows.last().expect("nonempty").clone();
        let mut next: Vec<Vec<i64>> = rows.iter().map(|row| extend(row, 0)).collect();
        next.extend(rows.iter().map(|row| {
            let shifted: Vec<i64> = row.iter().zip(&last).map(|(a, b)| a + b).collect();
            extend(&shifted, 1)
        }));
        rows = next;
    }
    rows
}

/// `Z^r`, the image of `C^r` under [`zigzag_transform`].
pub fn zigzag_binary(r: usize) -> Result<CodeMatrix> {
    let c = zigzag_integer(r)?;
    let rows: Vec<Vec<i64>> = c.rows.iter().map(|row| zigzag_transform(row)).collect();
    debug_assert_eq!(rows, {
        let mut z = vec![vec![0], vec![1]];
        for _ in 1..r {
            let mut next: Vec<Vec<i64>> = z.iter().map(|row| extend(row, 0)).collect();
            next.extend(z.iter().map(|row| extend(row, 1)));
            z = next;
        }
        z
    });
    Ok(CodeMatrix {
        rows,
        kind: CodeKind::ZzBinary,
    })
}

/// `A(y)_i = y_i - sum_{k > i} y_k`.
pub fn zigzag_transform(y: &[i64]) -> Vec<i64> {
    let mut out = vec![0; y.len()];
    let mut tail = 0;
    for i in (0..y.len()).rev() {
        out[i] = y[i] - tail;
        tail += y[i];
    }
    out
}

/// `A^{-1}(y)_i = y_i + sum_{k > i} 2^{k-i-1} y_k`.
pub fn zigzag_inverse(y: &[i64]) -> Vec<i64> {
    // c_i = y_i + sum_{k>i} c_k, so the tail sum doubles while walking left
    let mut out = vec![0; y.len()];
    let mut tail = 0;
    for i in (0..y.len()).rev() {
        out[i] = y[i] + tail;
        tail += out[i];
    }
    out
}

/// Rational coefficients of `A^{-1}` as a matrix: row `i` gives
/// `A^{-1}(y)_i` as a combination of `y`.
pub fn zigzag_inverse_matrix(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|k| match k.cmp(&i) {
                    std::cmp::Ordering::Less => 0,
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Greater => 1i64 << (k - i - 1),
                })
                .collect()
        })
        .collect()
}

/// The first `d` rows of `code`.
pub fn truncate(code: &CodeMatrix, d: usize) -> Result<CodeMatrix> {
    if d > code.d() {
        return Err(Error::DTooLarge {
            requested: d,
            available: code.d(),
        });
    }
    Ok(CodeMatrix {
        rows: code.rows[..d].to_vec(),
        kind: code.kind,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingReport {
    pub distinct_rows: bool,
    pub in_convex_position: bool,
    pub lattice_empty: bool,
}

impl EncodingReport {
    pub fn all(&self) -> bool {
        self.distinct_rows && self.in_convex_position && self.lattice_empty
    }
}

/// Checks that the rows are distinct, are the extreme points of their hull,
/// and are the only lattice points in it.
pub fn validate_encoding(code: &CodeMatrix) -> Result<EncodingReport> {
    let (d, r) = (code.d(), code.r());
    if r > MAX_VALIDATED_R || d > MAX_VALIDATED_D {
        return Err(Error::ScaleLimit(format!(
            "encoding validation supports r <= {MAX_VALIDATED_R} and d <= {MAX_VALIDATED_D}, got r = {r}, d = {d}"
        )));
    }
    let distinct: BTreeSet<&Vec<i64>> = code.rows.iter().collect();
    let distinct_rows = distinct.len() == d;

    let points = code.to_rational_rows();
    let hull = ConvexHull::new(&points)?;
    let extreme: BTreeSet<Vec<Rational>> = hull.extreme_points().into_iter().collect();
    let in_convex_position = distinct_rows && points.iter().all(|p| extreme.contains(p));

    let bounds = code.column_bounds();
    let mut lattice_empty = true;
    let mut cursor: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    'scan: loop {
        if !distinct.contains(&cursor) {
            let q: Vec<Rational> = cursor.iter().map(|&x| int(x)).collect();
            if hull.contains(&q)? {
                lattice_empty = false;
                break 'scan;
            }
        }
        // odometer step over the bounding box
        let mut i = 0;
        loop {
            if i == r {
                break 'scan;
            }
            if cursor[i] < bounds[i].1 {
                cursor[i] += 1;
                break;
            }
            cursor[i] = bounds[i].0;
            i += 1;
        }
    }

    Ok(EncodingReport {
        distinct_rows,
        in_convex_position,
        lattice_empty,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brgc_rows() {
        assert_eq!(brgc(1).unwrap().rows(), &[vec![0], vec![1]]);
        assert_eq!(
            brgc(2).unwrap().rows(),
            &[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]
        );
        assert_eq!(
            brgc(3).unwrap().rows(),
            &[
                vec![0, 0, 0],
                vec![1, 0, 0],
                vec![1, 1, 0],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![1, 1, 1],
                vec![1, 0, 1],
                vec![0, 0, 1]
            ]
        );
        assert_eq!(brgc(0), Err(Error::ROutOfRange(0)));
        assert_eq!(brgc(21), Err(Error::ROutOfRange(21)));
    }

    #[test]
    fn zigzag_rows() {
        assert_eq!(
            zigzag_integer(3).unwrap().rows(),
            &[
                vec![0, 0, 0],
                vec![1, 0, 0],
                vec![1, 1, 0],
                vec![2, 1, 0],
                vec![2, 1, 1],
                vec![3, 1, 1],
                vec![3, 2, 1],
                vec![4, 2, 1]
            ]
        );
        assert_eq!(
            zigzag_binary(2).unwrap().rows(),
            &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]
        );
        assert_eq!(zigzag_binary(3).unwrap().row(4), &[0, 0, 1]);
    }

    #[test]
    fn zigzag_binary_is_binary_expansion() {
        for r in 1..=8 {
            let z = zigzag_binary(r).unwrap();
            for (j, row) in z.rows().iter().enumerate() {
                let expect: Vec<i64> = (0..r).map(|b| ((j >> b) & 1) as i64).collect();
                assert_eq!(row, &expect);
            }
        }
    }

    #[test]
    fn inverse_map() {
        assert_eq!(zigzag_inverse(&[0, 0, 0]), vec![0, 0, 0]);
        assert_eq!(zigzag_inverse(&[1, 1]), vec![2, 1]);
        for r in 1..=6 {
            let c = zigzag_integer(r).unwrap();
            let z = zigzag_binary(r).unwrap();
            let m = zigzag_inverse_matrix(r);
            for (cr, zr) in c.rows().iter().zip(z.rows()) {
                assert_eq!(&zigzag_inverse(zr), cr);
                let via_matrix: Vec<i64> = m
                    .iter()
                    .map(|row| row.iter().zip(zr).map(|(a, b)| a * b).sum())
                    .collect();
                assert_eq!(&via_matrix, cr);
            }
        }
    }

    #[test]
    fn truncation() {
        let t = truncate(&brgc(2).unwrap(), 3).unwrap();
        assert_eq!(t.rows(), &[vec![0, 0], vec![1, 0], vec![1, 1]]);
        assert_eq!(t.kind(), CodeKind::Brgc);
        let k = brgc(3).unwrap();
        assert_eq!(truncate(&k, 8).unwrap(), k);
        assert_eq!(
            truncate(&k, 9),
            Err(Error::DTooLarge {
                requested: 9,
                available: 8
            })
        );
    }

    #[test]
    fn validation() {
        for code in [brgc(3), zigzag_integer(3), zigzag_binary(3)] {
            assert!(validate_encoding(&code.unwrap()).unwrap().all());
        }
        let gap = CodeMatrix::user(vec![vec![0], vec![2]]).unwrap();
        let rep = validate_encoding(&gap).unwrap();
        assert!(rep.distinct_rows && rep.in_convex_position && !rep.lattice_empty);
        let inner = CodeMatrix::user(vec![vec![0], vec![1], vec![2]]).unwrap();
        assert!(!validate_encoding(&inner).unwrap().in_convex_position);
        assert!(matches!(
            validate_encoding(&brgc(7).unwrap()),
            Err(Error::ScaleLimit(_))
        ));
    }
}
