use std::collections::BTreeSet;

use num_traits::One;

use super::{code_length, AuxVar, FormulationFragment};
use crate::encodings::brgc;
use crate::model::Sense;
use crate::{Error, Rational, Result};

/// Levels `(A^k, B^k)` over a ground set. Each level contributes one binary
/// `y_k` with `Σ_{A^k} λ <= y_k` and `Σ_{B^k} λ <= 1 - y_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicliqueCover<T: Ord> {
    ground: BTreeSet<T>,
    levels: Vec<(BTreeSet<T>, BTreeSet<T>)>,
}

impl<T: Ord + Clone + std::fmt::Debug> BicliqueCover<T> {
    pub fn new(ground: BTreeSet<T>, levels: Vec<(BTreeSet<T>, BTreeSet<T>)>) -> Result<Self> {
        for (k, (a, b)) in levels.iter().enumerate() {
            if let Some(x) = a.intersection(b).next() {
                return Err(Error::Invalid(format!(
                    "level {} has {x:?} on both sides",
                    k + 1
                )));
            }
            if !a.is_subset(&ground) || !b.is_subset(&ground) {
                return Err(Error::GroundSetMismatch);
            }
        }
        Ok(Self { ground, levels })
    }

    /// Skips the disjointness check so validators can inspect broken covers.
    pub fn new_unchecked(ground: BTreeSet<T>, levels: Vec<(BTreeSet<T>, BTreeSet<T>)>) -> Self {
        Self { ground, levels }
    }

    pub fn ground(&self) -> &BTreeSet<T> {
        &self.ground
    }

    pub fn levels(&self) -> &[(BTreeSet<T>, BTreeSet<T>)] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Concatenates the levels of two covers over the same ground set.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.ground != other.ground {
            return Err(Error::GroundSetMismatch);
        }
        let mut levels = self.levels.clone();
        levels.extend(other.levels.iter().cloned());
        Ok(Self {
            ground: self.ground.clone(),
            levels,
        })
    }

    pub fn without_level(&self, k: usize) -> Self {
        let mut levels = self.levels.clone();
        levels.remove(k);
        Self {
            ground: self.ground.clone(),
            levels,
        }
    }
}

/// The SOS2 family `{1, 2}, {2, 3}, …, {d, d+1}`.
pub fn sos2_family(d: usize) -> Vec<BTreeSet<usize>> {
    (1..=d).map(|i| BTreeSet::from([i, i + 1])).collect()
}

/// Gray-code cover for SOS2 on `d` pieces. Breakpoint `v` touches segments
/// `v - 1` and `v`; segments past `d` keep their untruncated code so the
/// last breakpoints are classified as if the code were complete.
pub fn build_logib_cover(d: usize) -> Result<BicliqueCover<usize>> {
    if d < 2 {
        return Err(Error::DTooSmall { min: 2, found: d });
    }
    let r = code_length(d);
    let codes = brgc(r)?;
    let padded = codes.d();
    let ground: BTreeSet<usize> = (1..=d + 1).collect();
    let mut levels = Vec::with_capacity(r);
    for k in 0..r {
        let mut a = BTreeSet::new();
        let mut b = BTreeSet::new();
        for v in 1..=d + 1 {
            let bits: Vec<i64> = [v.wrapping_sub(1), v]
                .into_iter()
                .filter(|&s| s >= 1 && s <= padded)
                .map(|s| codes.row(s - 1)[k])
                .collect();
            if bits.iter().all(|&x| x == 1) {
                a.insert(v);
            } else if bits.iter().all(|&x| x == 0) {
                b.insert(v);
            }
        }
        levels.push((a, b));
    }
    BicliqueCover::new(ground, levels)
}

/// Independent-branching formulation of a cover whose ground set is a subset
/// of `{1..lambda_count}`.
pub fn assemble_ib(
    cover: &BicliqueCover<usize>,
    lambda_count: usize,
) -> Result<FormulationFragment> {
    if cover.ground.iter().any(|&v| v == 0 || v > lambda_count) {
        return Err(Error::GroundSetMismatch);
    }
    assemble_ib_indexed(cover, lambda_count, |&v| Some(v - 1))
}

/// Same as [`assemble_ib`] for any ground set, given the λ index of each
/// element.
pub fn assemble_ib_indexed<T, F>(
    cover: &BicliqueCover<T>,
    lambda_count: usize,
    index: F,
) -> Result<FormulationFragment>
where
    T: Ord,
    F: Fn(&T) -> Option<usize>,
{
    let lookup = |set: &BTreeSet<T>| -> Result<Vec<usize>> {
        set.iter()
            .map(|v| {
                index(v)
                    .filter(|&i| i < lambda_count)
                    .ok_or(Error::GroundSetMismatch)
            })
            .collect()
    };
    let mut frag = FormulationFragment::new(lambda_count);
    for (k, (a, b)) in cover.levels.iter().enumerate() {
        let (ia, ib) = (lookup(a)?, lookup(b)?);
        let y = frag.add_aux(AuxVar::binary(format!("y_{}", k + 1)));
        let one = Rational::one;
        let mut terms: Vec<(usize, Rational)> = ia.into_iter().map(|i| (i, one())).collect();
        terms.push((y, -one()));
        frag.push_row(terms, Sense::Le, Rational::from_integer(0.into()));
        let mut terms: Vec<(usize, Rational)> = ib.into_iter().map(|i| (i, one())).collect();
        terms.push((y, one()));
        frag.push_row(terms, Sense::Le, one());
    }
    Ok(frag)
}
