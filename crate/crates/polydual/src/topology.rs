//! Homology of the fixed-perimeter-and-area polygon spaces, by two
//! independent routes that must agree: a closed-form evaluator and a
//! Mayer-Vietoris rank solver over the sub- and superlevel cell complexes.
//!
//! Every space in sight is built from even-dimensional cells, one per
//! dimension, so the long exact sequence collapses to five-term pieces
//! that determine the unknown ranks without choice. All groups are free;
//! tables carry ranks only.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stratification::RegionLabel;
use crate::Sign;

/// Multiset of cell dimensions (here: even, multiplicity one each).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplexDescriptor {
    dims: BTreeSet<usize>,
}

impl CellComplexDescriptor {
    pub fn new(dims: impl IntoIterator<Item = usize>) -> Result<Self> {
        let dims: BTreeSet<usize> = dims.into_iter().collect();
        if let Some(odd) = dims.iter().find(|d| *d % 2 != 0) {
            return Err(Error::MalformedDescriptors(format!(
                "cell dimension {odd} is odd"
            )));
        }
        Ok(Self { dims })
    }

    /// {0, 2, ..., top} for an even top.
    pub fn even_range(top: usize) -> Self {
        Self {
            dims: (0..=top).step_by(2).collect(),
        }
    }

    pub fn contains(&self, dim: usize) -> bool {
        self.dims.contains(&dim)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.dims.iter().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dims.is_subset(&other.dims)
    }

    pub fn dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.dims.iter().copied()
    }
}

/// Map degree -> rank of the free homology group in that degree.
/// Only nonzero ranks are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    #[serde(rename = "dim")]
    pub top_degree: usize,
    pub ranks: BTreeMap<usize, usize>,
}

impl HomologyTable {
    pub fn new(top_degree: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let ranks = entries.into_iter().filter(|&(_, r)| r > 0).collect();
        Self { top_degree, ranks }
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    /// Degrees listed top-down with Z / 0 entries, the layout used for
    /// hand-checking against reference tables.
    pub fn to_text(&self) -> String {
        let width = self.top_degree.to_string().len().max(1);
        let mut out = format!("{:>width$} | H_j\n", "j");
        for j in (0..=self.top_degree).rev() {
            let h = match self.rank(j) {
                0 => "0".to_string(),
                1 => "Z".to_string(),
                r => format!("Z^{r}"),
            };
            out.push_str(&format!("{j:>width$} | {h}\n"));
        }
        out
    }

    /// `j,rank` lines for every degree up to the top.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,rank\n");
        for j in 0..=self.top_degree {
            out.push_str(&format!("{j},{}\n", self.rank(j)));
        }
        out
    }
}

fn check_label(n: usize, label: &RegionLabel) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidLabel {
            n,
            reason: "need n >= 3".into(),
        });
    }
    match *label {
        RegionLabel::Outside => Err(Error::OutsideRegion),
        RegionLabel::Chamber(i) => {
            if i % 2 == 1 && (1..=2 * n - 5).contains(&i) {
                Ok(())
            } else {
                Err(Error::InvalidLabel {
                    n,
                    reason: format!("chamber label {i} must be odd in [1, {}]", 2 * n - 5),
                })
            }
        }
        RegionLabel::Curve(i) => {
            if i % 2 == 0 && i <= 2 * n - 4 {
                Ok(())
            } else {
                Err(Error::InvalidLabel {
                    n,
                    reason: format!("curve label {i} must be even in [0, {}]", 2 * n - 4),
                })
            }
        }
    }
}

/// The (sublevel, superlevel, union) descriptor triple around a fiber.
pub type SplitDescriptors = (
    CellComplexDescriptor,
    CellComplexDescriptor,
    CellComplexDescriptor,
);

/// Sub- and superlevel complexes flanking a fiber, plus their union.
///
/// For a chamber W_i the sublevel side carries one even cell in each
/// dimension 0..i-1 and the superlevel side 0..2n-5-i; on a curve D_i the
/// ranges extend to i and 2n-4-i. The union is always the full space with
/// one even cell in each dimension 0..2n-4.
pub fn ab_descriptors(n: usize, label: &RegionLabel) -> Result<SplitDescriptors> {
    check_label(n, label)?;
    let union = CellComplexDescriptor::even_range(2 * n - 4);
    let (a, b) = match *label {
        RegionLabel::Chamber(i) => (
            CellComplexDescriptor::even_range(i - 1),
            CellComplexDescriptor::even_range(2 * n - 5 - i),
        ),
        RegionLabel::Curve(i) => (
            CellComplexDescriptor::even_range(i),
            CellComplexDescriptor::even_range(2 * n - 4 - i),
        ),
        RegionLabel::Outside => unreachable!("rejected by check_label"),
    };
    Ok((a, b, union))
}

/// Solve the Mayer-Vietoris sequence for the ranks of the intersection.
///
/// For each even degree j the relevant piece is
/// `0 -> h_j -> a_j + b_j -> u_j -> h_{j-1} -> 0`,
/// and whenever the middle source is nonzero the middle map is onto
/// (every included cell carries the generator upstairs), which pins both
/// unknowns:
/// a_j + b_j >= 1, u_j = 1  =>  h_j = a_j + b_j - 1, h_{j-1} = 0;
/// a_j + b_j  = 0, u_j = 1  =>  h_j = 0,             h_{j-1} = 1;
/// u_j = 0                  =>  h_j = a_j + b_j,     h_{j-1} = 0.
pub fn mv_solve(
    a: &CellComplexDescriptor,
    b: &CellComplexDescriptor,
    union: &CellComplexDescriptor,
) -> Result<HomologyTable> {
    if !a.is_subset_of(union) || !b.is_subset_of(union) {
        return Err(Error::MalformedDescriptors(
            "union must contain both pieces".into(),
        ));
    }
    let top = union
        .max_dim()
        .ok_or_else(|| Error::MalformedDescriptors("empty union".into()))?;

    let mut ranks = BTreeMap::new();
    let mut set = |j: usize, r: usize| {
        if r > 0 {
            ranks.insert(j, r);
        }
    };
    for j in (0..=top).step_by(2) {
        let sources = usize::from(a.contains(j)) + usize::from(b.contains(j));
        let u = usize::from(union.contains(j));
        if u == 1 {
            if sources >= 1 {
                set(j, sources - 1);
            } else if j > 0 {
                set(j - 1, 1);
            }
        } else {
            set(j, sources);
        }
    }
    Ok(HomologyTable {
        top_degree: top - 1,
        ranks,
    })
}

/// Closed-form homology of the fiber over a labelled region.
///
/// Labels above n - 2 are first reduced by the reflection i -> 2n - 4 - i,
/// which preserves the fiber type. Two odd-degree range conventions are
/// possible for singular fibers and for the zero-area fiber at odd n; the
/// ones implemented here (lower bounds 2n-3-i and n-2 respectively) are the
/// ones the Mayer-Vietoris solver forces. See the report command, which
/// surfaces both readings side by side.
pub fn homology_closed_form(n: usize, label: &RegionLabel) -> Result<HomologyTable> {
    check_label(n, label)?;
    let reduced = match *label {
        RegionLabel::Chamber(i) if i > n - 2 => RegionLabel::Chamber(2 * n - 4 - i),
        RegionLabel::Curve(i) if i > n - 2 => RegionLabel::Curve(2 * n - 4 - i),
        other => other,
    };
    let top_degree = 2 * n - 5;
    let mut entries: Vec<(usize, usize)> = Vec::new();
    match reduced {
        RegionLabel::Chamber(i) => {
            // regular fiber: evens up to i, odds from 2n-4-i
            entries.extend((0..=i).step_by(2).map(|j| (j, 1)));
            let low = 2 * n - 4 - i; // odd, since i is odd
            entries.extend((low..=top_degree).step_by(2).map(|j| (j, 1)));
        }
        RegionLabel::Curve(0) => {
            entries.push((0, 1));
        }
        RegionLabel::Curve(i) => {
            // singular fiber: evens up to i, odds from 2n-3-i
            entries.extend((0..=i).step_by(2).map(|j| (j, 1)));
            let low = 2 * n - 3 - i; // odd, since i is even
            entries.extend((low..=top_degree).step_by(2).map(|j| (j, 1)));
        }
        RegionLabel::Outside => unreachable!("rejected by check_label"),
    }
    Ok(HomologyTable::new(top_degree, entries))
}

/// Alternating sum of ranks.
pub fn euler_characteristic(table: &HomologyTable) -> i64 {
    table
        .ranks
        .iter()
        .map(|(&j, &r)| if j % 2 == 0 { r as i64 } else { -(r as i64) })
        .sum()
}

/// rank(j) == rank(dim - j) for all j in [0, dim].
pub fn poincare_check(table: &HomologyTable, dim: usize) -> bool {
    (0..=dim).all(|j| table.rank(j) == table.rank(dim - j))
}

/// Betti table of the space of polygons with one fixed nonzero area:
/// one even cell in each dimension 0..2 floor((n+1)/2) - 4, for either sign.
pub fn c_a_betti(n: usize, _sign: Sign) -> Result<HomologyTable> {
    if n < 3 {
        return Err(Error::InvalidLabel {
            n,
            reason: "need n >= 3".into(),
        });
    }
    let top = 2 * ((n + 1) / 2) - 4;
    Ok(HomologyTable::new(top, (0..=top).step_by(2).map(|j| (j, 1))))
}

/// Betti table of the zero-area polygon space: a cylinder over the
/// zero-area fiber, so the fiber table applies verbatim. For even n that
/// fiber is the fold ray D_{n-2}; for odd n it is the middle chamber
/// W_{n-2}.
pub fn c_zero_area_betti(n: usize) -> Result<HomologyTable> {
    let label = if n % 2 == 0 {
        RegionLabel::Curve(n - 2)
    } else {
        RegionLabel::Chamber(n - 2)
    };
    homology_closed_form(n, &label)
}

/// Every region label of the n-gon diagram: all chambers, all curves.
/// (The zero-area fiber is among them: D_{n-2} for even n, W_{n-2} for odd.)
pub fn all_labels(n: usize) -> Vec<RegionLabel> {
    let mut labels = Vec::new();
    for i in (0..=2 * n - 4).step_by(2) {
        labels.push(RegionLabel::Curve(i));
    }
    for i in (1..=2 * n - 5).step_by(2) {
        labels.push(RegionLabel::Chamber(i));
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(top: usize, degrees: &[usize]) -> HomologyTable {
        HomologyTable::new(top, degrees.iter().map(|&j| (j, 1)))
    }

    #[test]
    fn descriptors_for_the_worked_examples() {
        let (a, b, u) = ab_descriptors(7, &RegionLabel::Chamber(3)).unwrap();
        assert_eq!(a, CellComplexDescriptor::new([0, 2]).unwrap());
        assert_eq!(b, CellComplexDescriptor::new([0, 2, 4, 6]).unwrap());
        assert_eq!(u, CellComplexDescriptor::even_range(10));

        let (a, b, _) = ab_descriptors(6, &RegionLabel::Curve(4)).unwrap();
        assert_eq!(a, CellComplexDescriptor::new([0, 2, 4]).unwrap());
        assert_eq!(b, CellComplexDescriptor::new([0, 2, 4]).unwrap());

        let (a, b, u) = ab_descriptors(3, &RegionLabel::Chamber(1)).unwrap();
        assert_eq!(a, CellComplexDescriptor::new([0]).unwrap());
        assert_eq!(b, CellComplexDescriptor::new([0]).unwrap());
        assert_eq!(u, CellComplexDescriptor::new([0, 2]).unwrap());

        assert!(matches!(
            ab_descriptors(7, &RegionLabel::Outside),
            Err(Error::OutsideRegion)
        ));
        assert!(ab_descriptors(7, &RegionLabel::Chamber(2)).is_err());
        assert!(ab_descriptors(7, &RegionLabel::Curve(12)).is_err());
    }

    #[test]
    fn union_is_always_the_full_even_complex() {
        for n in 3..=12 {
            for label in all_labels(n) {
                let (_, _, u) = ab_descriptors(n, &label).unwrap();
                assert_eq!(u, CellComplexDescriptor::even_range(2 * n - 4));
                assert_eq!(u.len(), n - 1);
            }
        }
    }

    #[test]
    fn mv_reproduces_the_two_reference_tables() {
        let (a, b, u) = ab_descriptors(7, &RegionLabel::Chamber(3)).unwrap();
        assert_eq!(mv_solve(&a, &b, &u).unwrap(), table(9, &[0, 2, 7, 9]));

        let (a, b, u) = ab_descriptors(6, &RegionLabel::Curve(4)).unwrap();
        assert_eq!(mv_solve(&a, &b, &u).unwrap(), table(7, &[0, 2, 4, 5, 7]));
    }

    #[test]
    fn mv_circle_case() {
        let a = CellComplexDescriptor::new([0]).unwrap();
        let u = CellComplexDescriptor::new([0, 2]).unwrap();
        assert_eq!(mv_solve(&a, &a.clone(), &u).unwrap(), table(1, &[0, 1]));
    }

    #[test]
    fn mv_rejects_malformed_inputs() {
        let a = CellComplexDescriptor::new([0, 2, 4]).unwrap();
        let u = CellComplexDescriptor::new([0, 2]).unwrap();
        assert!(matches!(
            mv_solve(&a, &a.clone(), &u),
            Err(Error::MalformedDescriptors(_))
        ));
        assert!(CellComplexDescriptor::new([0, 3]).is_err());
    }

    #[test]
    fn closed_form_matches_frozen_values() {
        assert_eq!(
            homology_closed_form(7, &RegionLabel::Chamber(3)).unwrap(),
            table(9, &[0, 2, 7, 9])
        );
        assert_eq!(
            homology_closed_form(6, &RegionLabel::Curve(4)).unwrap(),
            table(7, &[0, 2, 4, 5, 7])
        );
        // derived by the MV oracle: n=5 singular fiber on D_2
        assert_eq!(
            homology_closed_form(5, &RegionLabel::Curve(2)).unwrap(),
            table(5, &[0, 2, 5])
        );
        // the zero-area fiber of triangles is a circle
        assert_eq!(c_zero_area_betti(3).unwrap(), table(1, &[0, 1]));
    }

    #[test]
    fn oracle_equivalence_over_all_labels() {
        for n in 3..=12 {
            for label in all_labels(n) {
                let (a, b, u) = ab_descriptors(n, &label).unwrap();
                let mv = mv_solve(&a, &b, &u).unwrap();
                let closed = homology_closed_form(n, &label).unwrap();
                assert_eq!(mv, closed, "n={n} {label:?}");
            }
        }
    }

    #[test]
    fn reflection_symmetry_of_fiber_types() {
        for n in 3..=12 {
            for i in (1..=2 * n - 5).step_by(2) {
                let lhs = homology_closed_form(n, &RegionLabel::Chamber(i)).unwrap();
                let rhs =
                    homology_closed_form(n, &RegionLabel::Chamber(2 * n - 4 - i)).unwrap();
                assert_eq!(lhs, rhs);
            }
            for i in (0..=2 * n - 4).step_by(2) {
                let lhs = homology_closed_form(n, &RegionLabel::Curve(i)).unwrap();
                let rhs = homology_closed_form(n, &RegionLabel::Curve(2 * n - 4 - i)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn euler_characteristics() {
        for n in 3..=12 {
            for label in all_labels(n) {
                let t = homology_closed_form(n, &label).unwrap();
                let chi = euler_characteristic(&t);
                match label {
                    RegionLabel::Chamber(_) => assert_eq!(chi, 0, "n={n} {label:?}"),
                    RegionLabel::Curve(_) => assert_eq!(chi, 1, "n={n} {label:?}"),
                    RegionLabel::Outside => unreachable!(),
                }
            }
            let zero = c_zero_area_betti(n).unwrap();
            let expect = if n % 2 == 0 { 1 } else { 0 };
            assert_eq!(euler_characteristic(&zero), expect, "zero area, n={n}");
        }
        assert_eq!(
            euler_characteristic(&homology_closed_form(5, &RegionLabel::Curve(0)).unwrap()),
            1
        );
    }

    #[test]
    fn poincare_duality_on_regular_fibers_only() {
        for n in 3..=12 {
            let dim = 2 * n - 5;
            for label in all_labels(n) {
                let t = homology_closed_form(n, &label).unwrap();
                match label {
                    RegionLabel::Chamber(_) => assert!(poincare_check(&t, dim)),
                    RegionLabel::Curve(i) => {
                        // every singular fiber fails; so does the point over D_0
                        let holds = poincare_check(&t, dim);
                        assert!(!holds, "n={n} D{i} should break duality");
                    }
                    RegionLabel::Outside => unreachable!(),
                }
            }
        }
        let point = homology_closed_form(7, &RegionLabel::Curve(0)).unwrap();
        assert!(!poincare_check(&point, 9));
        assert!(poincare_check(&point, 0));
    }

    #[test]
    fn fixed_area_betti_tables() {
        assert_eq!(c_a_betti(7, Sign::Positive).unwrap(), table(4, &[0, 2, 4]));
        assert_eq!(c_a_betti(6, Sign::Positive).unwrap(), table(2, &[0, 2]));
        assert_eq!(c_a_betti(3, Sign::Negative).unwrap(), table(0, &[0]));
        for n in 3..=12 {
            assert_eq!(
                c_a_betti(n, Sign::Positive).unwrap(),
                c_a_betti(n, Sign::Negative).unwrap()
            );
        }
    }

    #[test]
    fn zero_area_tables_for_both_parities() {
        // even n: the fold ray table
        assert_eq!(c_zero_area_betti(6).unwrap(), table(7, &[0, 2, 4, 5, 7]));
        // odd n: the middle chamber
        assert_eq!(c_zero_area_betti(7).unwrap(), table(9, &[0, 2, 4, 5, 7, 9]));
        assert_eq!(
            c_zero_area_betti(7).unwrap(),
            homology_closed_form(7, &RegionLabel::Chamber(5)).unwrap()
        );
    }

    #[test]
    fn text_and_csv_rendering() {
        let t = table(3, &[0, 2, 3]);
        let text = t.to_text();
        assert!(text.contains("3 | Z"));
        assert!(text.contains("1 | 0"));
        let csv = t.to_csv();
        assert_eq!(csv, "j,rank\n0,1\n1,0\n2,1\n3,1\n");
    }

    #[test]
    fn json_shape_round_trips() {
        let t = table(9, &[0, 2, 7, 9]);
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["dim"], 9);
        assert_eq!(v["ranks"]["7"], 1);
        let back: HomologyTable = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }
}
