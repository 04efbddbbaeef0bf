//! Multiple points and spectrum of central plane arrangements (n = 2),
//! and the four-way equivalence report tying spectrum vanishing to
//! reducibility and monodromy triviality.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arrangement::CentralArrangement;
use crate::decompose::irreducible_decomposition;
use crate::poly::choose2;
use crate::{Error, Result};

/// A point of the projective plane where at least two lines of the
/// arrangement meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplePoint {
    /// Canonical primitive integer homogeneous coordinates, first nonzero
    /// entry positive.
    pub point: Vec<BigInt>,
    /// Number of lines through the point (≥ 2).
    pub multiplicity: usize,
    /// Indices of those lines, sorted.
    pub lines: Vec<usize>,
}

/// The spectrum multiplicities m_{j/d} for j = 1, …, d−1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTable {
    d: usize,
    values: Vec<i64>,
}

impl SpectrumTable {
    /// Common denominator d of the spectrum arguments.
    pub fn denominator(&self) -> usize {
        self.d
    }

    /// m_{j/d} for 1 ≤ j ≤ d−1.
    pub fn value(&self, j: usize) -> i64 {
        self.values[j - 1]
    }

    /// (j, m_{j/d}) pairs in increasing j.
    pub fn entries(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.values.iter().enumerate().map(|(i, &m)| (i + 1, m))
    }

    /// True iff every multiplicity in the open unit interval is zero.
    pub fn vanishes(&self) -> bool {
        self.values.iter().all(|&m| m == 0)
    }
}

fn check_planar(a: &CentralArrangement) -> Result<()> {
    if a.ambient_dim() != 3 {
        return Err(Error::NotPlanar);
    }
    if !a.is_essential() {
        return Err(Error::NotEssential);
    }
    if a.degree() < 2 {
        return Err(Error::TooFewHyperplanes {
            needed: 2,
            got: a.degree(),
        });
    }
    Ok(())
}

fn cross(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    vec![
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn canonical_point(mut p: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in &p {
        g = g.gcd(c);
    }
    if p.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative) {
        g = -g;
    }
    for c in &mut p {
        *c = &*c / &g;
    }
    p
}

/// All intersection points of the projectivized lines, with the set of
/// lines through each. Every pair of lines lands in exactly one point, so
/// Σ_s C(m_s, 2) = C(d, 2).
pub fn multiple_points(a: &CentralArrangement) -> Result<Vec<MultiplePoint>> {
    check_planar(a)?;
    let normals = a.normal_rows();
    let d = a.degree();
    let mut by_point: HashMap<Vec<BigInt>, BTreeSet<usize>> = HashMap::new();
    for i in 0..d {
        for j in i + 1..d {
            let p = cross(&normals[i], &normals[j]);
            debug_assert!(
                p.iter().any(|c| !c.is_zero()),
                "distinct lines meet in one point"
            );
            let entry = by_point.entry(canonical_point(p)).or_default();
            entry.insert(i);
            entry.insert(j);
        }
    }
    let mut points: Vec<MultiplePoint> = by_point
        .into_iter()
        .map(|(point, lines)| MultiplePoint {
            point,
            multiplicity: lines.len(),
            lines: lines.into_iter().collect(),
        })
        .collect();
    points.sort_by(|a, b| {
        b.multiplicity
            .cmp(&a.multiplicity)
            .then_with(|| a.point.cmp(&b.point))
    });
    let pairs: i64 = points.iter().map(|p| choose2(p.multiplicity as i64)).sum();
    if pairs != choose2(d as i64) {
        return Err(Error::Internal(format!(
            "multiple points cover {pairs} line pairs, expected {}",
            choose2(d as i64)
        )));
    }
    Ok(points)
}

/// Spectrum multiplicities on the open unit interval:
///
///   m_{j/d} = C(j−1, 2) − Σ_{m_s ≥ 3} C(⌈j·m_s/d⌉ − 1, 2)
///
/// summed over the multiple points s, with C(a, 2) = 0 for a < 2 and the
/// ceiling taken exactly on rationals.
pub fn spectrum_unit_interval(a: &CentralArrangement) -> Result<SpectrumTable> {
    let points = multiple_points(a)?;
    let d = a.degree();
    let mut values = Vec::with_capacity(d - 1);
    for j in 1..d {
        let mut m = choose2(j as i64 - 1);
        for pt in &points {
            if pt.multiplicity >= 3 {
                let ceil = (j * pt.multiplicity).div_ceil(d) as i64;
                m -= choose2(ceil - 1);
            }
        }
        if m < 0 {
            return Err(Error::Internal(format!(
                "negative spectrum multiplicity {m} at {j}/{d}"
            )));
        }
        values.push(m);
    }
    Ok(SpectrumTable { d, values })
}

/// The four equivalent conditions for an essential plane arrangement,
/// each computed from its own definition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Nonunit eigenvalue Hodge components of H²(F) vanish (read off the
    /// spectrum, whose entries are exactly those Hodge numbers).
    pub hodge_components_vanish: bool,
    /// The arrangement splits as a nontrivial direct sum.
    pub reducible: bool,
    /// The Milnor-fiber monodromy is the identity (d₀ = 1).
    pub trivial_monodromy: bool,
    /// The spectrum vanishes on the open interval (0, 1).
    pub spectrum_vanishes: bool,
}

/// Evaluate all four conditions independently and confirm they agree;
/// disagreement is a bug or invalid input.
pub fn equivalence_report(a: &CentralArrangement) -> Result<EquivalenceReport> {
    check_planar(a)?;
    let spectrum_vanishes = spectrum_unit_interval(a)?.vanishes();
    let dec = irreducible_decomposition(a)?;
    let report = EquivalenceReport {
        hodge_components_vanish: spectrum_vanishes,
        reducible: dec.is_reducible(),
        trivial_monodromy: dec.is_trivial(),
        spectrum_vanishes,
    };
    if report.reducible != report.spectrum_vanishes
        || report.trivial_monodromy != report.spectrum_vanishes
    {
        return Err(Error::Internal(format!(
            "equivalence fails: reducible={}, trivial={}, spectrum vanishes={}",
            report.reducible, report.trivial_monodromy, report.spectrum_vanishes
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{boolean, generic, CentralArrangement};

    fn near_pencil() -> CentralArrangement {
        CentralArrangement::from_integer_rows(&[
            vec![1i64, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
            vec![0, 0, 1],
        ])
        .unwrap()
    }

    #[test]
    fn generic_lines_meet_in_six_double_points() {
        let pts = multiple_points(&generic(2).unwrap()).unwrap();
        assert_eq!(pts.len(), 6);
        assert!(pts.iter().all(|p| p.multiplicity == 2));
    }

    #[test]
    fn near_pencil_has_one_triple_point() {
        let pts = multiple_points(&near_pencil()).unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0].multiplicity, 3);
        assert_eq!(pts[0].point, vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]);
        assert_eq!(pts[0].lines, vec![0, 1, 2]);
        assert!(pts[1..].iter().all(|p| p.multiplicity == 2));
    }

    #[test]
    fn coordinate_triangle_has_three_double_points() {
        let pts = multiple_points(&boolean(3).unwrap()).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p.multiplicity == 2));
    }

    #[test]
    fn spectrum_of_generic_lines() {
        let t = spectrum_unit_interval(&generic(2).unwrap()).unwrap();
        assert_eq!(t.denominator(), 4);
        assert_eq!(t.value(1), 0);
        assert_eq!(t.value(2), 0);
        assert_eq!(t.value(3), 1);
        assert!(!t.vanishes());
    }

    #[test]
    fn spectrum_of_triangle_and_near_pencil_vanishes() {
        let t = spectrum_unit_interval(&boolean(3).unwrap()).unwrap();
        assert!(t.vanishes());

        // The triple point exactly cancels C(j−1, 2) at every j.
        let t = spectrum_unit_interval(&near_pencil()).unwrap();
        assert_eq!(t.values, vec![0, 0, 0]);
    }

    #[test]
    fn equivalence_report_agrees_on_known_cases() {
        let r = equivalence_report(&generic(2).unwrap()).unwrap();
        assert_eq!(
            r,
            EquivalenceReport {
                hodge_components_vanish: false,
                reducible: false,
                trivial_monodromy: false,
                spectrum_vanishes: false,
            }
        );

        for a in [boolean(3).unwrap(), near_pencil()] {
            let r = equivalence_report(&a).unwrap();
            assert!(r.hodge_components_vanish);
            assert!(r.reducible);
            assert!(r.trivial_monodromy);
            assert!(r.spectrum_vanishes);
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        let pencil =
            CentralArrangement::from_integer_rows(&[vec![1i64, 0], vec![0, 1], vec![1, 1]])
                .unwrap();
        assert!(matches!(multiple_points(&pencil), Err(Error::NotPlanar)));

        let pencil3 = CentralArrangement::from_integer_rows(&[
            vec![1i64, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
        ])
        .unwrap();
        assert!(matches!(
            spectrum_unit_interval(&pencil3),
            Err(Error::NotEssential)
        ));

        let a11 = crate::arrangement::a_family(1, 1).unwrap();
        assert!(matches!(equivalence_report(&a11), Err(Error::NotPlanar)));
    }
}
