use std::collections::BTreeSet;
use std::fmt::Debug;

use super::{Check, Witness};
use crate::bivariate::GridPoint;
use crate::sos2::BicliqueCover;

/// `‖u − v‖_∞ = 1` on grid points.
pub fn grid_adjacent(u: &GridPoint, v: &GridPoint) -> bool {
    u.0.abs_diff(v.0).max(u.1.abs_diff(v.1)) == 1
}

fn show<T: Debug>(x: &T) -> String {
    format!("{x:?}")
}

/// Checks that `cover` represents `family`: sides are disjoint, and a pair is
/// separated by some level exactly when no set of the family contains it.
pub fn check_biclique_representation<T: Ord + Clone + Debug>(
    family: &[BTreeSet<T>],
    cover: &BicliqueCover<T>,
) -> Check {
    check_biclique_representation_relaxed(family, cover, |_, _| true)
}

/// As [`check_biclique_representation`], but the coverage direction only
/// considers pairs accepted by `relevant`. Separation of pairs that share a
/// set is still checked for every pair.
pub fn check_biclique_representation_relaxed<T, F>(
    family: &[BTreeSet<T>],
    cover: &BicliqueCover<T>,
    relevant: F,
) -> Check
where
    T: Ord + Clone + Debug,
    F: Fn(&T, &T) -> bool,
{
    let name = "biclique-representation";
    for (k, (a, b)) in cover.levels().iter().enumerate() {
        if let Some(x) = a.intersection(b).next() {
            return Check::fail(
                name,
                Witness::OverlappingLevel {
                    level: k + 1,
                    element: show(x),
                },
            );
        }
    }
    let ground: Vec<&T> = cover.ground().iter().collect();
    let together = |u: &T, v: &T| family.iter().any(|s| s.contains(u) && s.contains(v));
    let separating = |u: &T, v: &T| {
        cover
            .levels()
            .iter()
            .position(|(a, b)| (a.contains(u) && b.contains(v)) || (a.contains(v) && b.contains(u)))
    };
    for (i, u) in ground.iter().enumerate() {
        for v in &ground[i + 1..] {
            match (together(u, v), separating(u, v)) {
                (true, Some(k)) => {
                    return Check::fail(
                        name,
                        Witness::SeparatedPair {
                            level: k + 1,
                            pair: (show(u), show(v)),
                        },
                    )
                }
                (false, None) if relevant(u, v) => {
                    return Check::fail(name, Witness::UncoveredPair(show(u), show(v)));
                }
                _ => {}
            }
        }
    }
    Check::pass(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sos2::{build_logib_cover, sos2_family};

    #[test]
    fn logib_covers_sos2() {
        for d in 2..=9 {
            let c = build_logib_cover(d).unwrap();
            assert!(
                check_biclique_representation(&sos2_family(d), &c).passed,
                "d={d}"
            );
        }
    }

    #[test]
    fn dropped_level_leaves_a_pair() {
        let c = build_logib_cover(4).unwrap().without_level(1);
        let check = check_biclique_representation(&sos2_family(4), &c);
        assert!(matches!(check.witness, Some(Witness::UncoveredPair(_, _))));
    }

    #[test]
    fn overlap_and_overreach() {
        let ground: BTreeSet<usize> = (1..=3).collect();
        let bad = BicliqueCover::new_unchecked(ground.clone(), vec![([1].into(), [1, 3].into())]);
        let c = check_biclique_representation(&sos2_family(2), &bad);
        assert!(matches!(
            c.witness,
            Some(Witness::OverlappingLevel { level: 1, .. })
        ));
        let bad = BicliqueCover::new(ground, vec![([1].into(), [2, 3].into())]).unwrap();
        let c = check_biclique_representation(&sos2_family(2), &bad);
        assert!(matches!(
            c.witness,
            Some(Witness::SeparatedPair { level: 1, .. })
        ));
    }
}
